//! CART decision trees and random forests for binary classification.
//!
//! Trees split on Gini impurity over `mtry` randomly drawn candidate features
//! per node and keep their bootstrap bag and out-of-bag rows, which the
//! selection methods use for error estimation.

mod forest;
mod tree;

pub use forest::{default_mtry, fit_forest, fit_forest_on, forest_oob_error, mmce, predict_forest, Forest, ForestConfig, OobVotes};
pub use tree::{bootstrap_sample, fit_tree, fit_tree_on, Bootstrap, DecisionTree, Node};
