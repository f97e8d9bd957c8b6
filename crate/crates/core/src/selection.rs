//! Selection outcomes and the final model refitted on a selected feature set.

use serde::{Deserialize, Serialize};

use crate::cost::FeatureSet;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rf::{fit_forest_on, forest_oob_error, mmce, predict_forest, Forest, ForestConfig};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sts,
    Auc,
    Pfi,
    Fs,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Sts => "sts",
            Method::Auc => "auc",
            Method::Pfi => "pfi",
            Method::Fs => "fs",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sts" => Ok(Method::Sts),
            "auc" => Ok(Method::Auc),
            "pfi" => Ok(Method::Pfi),
            "fs" => Ok(Method::Fs),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Features picked by one method at one ξ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub method: Method,
    pub xi: f64,
    pub features: FeatureSet,
}

/// Prediction model built from a selected feature set.
#[derive(Debug, Clone, PartialEq)]
pub enum FinalModel {
    /// Used when nothing was selected.
    Constant {
        class: u8,
        train_error: f64,
    },
    Forest(Forest),
}

impl FinalModel {
    pub fn predict(&self, data: &Dataset) -> Result<Vec<u8>> {
        match self {
            FinalModel::Constant { class, .. } => Ok(vec![*class; data.n_obs()]),
            FinalModel::Forest(f) => predict_forest(f, data),
        }
    }

    /// OOB error of the forest; for the constant model, its training error
    /// (the minority-class rate).
    pub fn oob_error(&self, train: &Dataset) -> Result<f64> {
        match self {
            FinalModel::Constant { train_error, .. } => Ok(*train_error),
            FinalModel::Forest(f) => forest_oob_error(f, train),
        }
    }

    pub fn test_mmce(&self, test: &Dataset) -> Result<f64> {
        mmce(&self.predict(test)?, test.labels())
    }
}

/// Fits the final forest on `selected` only, with `mtry = ⌊√|selected|⌋`
/// unless the config pins it. An empty selection gives the majority-class
/// constant model.
pub fn refit_final(data: &Dataset, selected: &FeatureSet, config: &ForestConfig, stream: RngStream) -> Result<FinalModel> {
    if selected.is_empty() {
        let class = data.majority_class();
        let [n0, n1] = data.class_counts();
        let minority = if class == 1 { n0 } else { n1 };
        return Ok(FinalModel::Constant { class, train_error: minority as f64 / data.n_obs() as f64 });
    }
    let features = selected.to_vec();
    Ok(FinalModel::Forest(fit_forest_on(data, &features, config, stream)?))
}
