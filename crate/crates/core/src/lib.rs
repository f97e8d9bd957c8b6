//! Cost-constrained feature selection for random forest classification.
//!
//! Every feature carries an acquisition cost that is paid once, and a
//! selected feature set may not cost more than a budget `c_max`. The crate
//! provides:
//!
//! - [`sts`]: Shallow Tree Selection, which greedily picks shallow trees by a
//!   benefit-cost ratio and keeps the features they use,
//! - [`filters`]: AUC and permutation-importance filters with cost weighting,
//! - [`forward`]: cost-sensitive forward selection with refitted forests,
//! - [`tuning`]: grid tuning of the cost exponent ξ by refit OOB error,
//! - [`simgen`]: the Gaussian two-class data generator used for studies,
//! - [`harness`]: Monte Carlo studies, summaries and rankings,
//!
//! all built on the from-scratch CART forests in [`rf`].
//!
//! ```no_run
//! use costfs::{Budget, CostVector, Dataset, RngStream};
//! use costfs::sts::{sts_select, StsConfig};
//!
//! let data = Dataset::read_csv("train.csv")?;
//! let costs = CostVector::read_csv("costs.csv")?;
//! let (selection, _trajectory) = sts_select(
//!     &data,
//!     &costs,
//!     Budget::new(2.0)?,
//!     1.0,
//!     &StsConfig::default(),
//!     RngStream::from_seed(42),
//! )?;
//! println!("{:?}", selection.features.indices());
//! # Ok::<(), costfs::Error>(())
//! ```

pub mod cost;
pub mod data;
pub mod error;
pub mod filters;
pub mod forward;
pub mod harness;
pub mod rf;
pub mod rng;
pub mod selection;
pub mod simgen;
pub mod sts;
pub mod tuning;

pub use cost::{Budget, CostVector, FeatureSet};
pub use data::Dataset;
pub use error::{Error, Result};
pub use rng::RngStream;
pub use selection::{FinalModel, Method, SelectionResult};
