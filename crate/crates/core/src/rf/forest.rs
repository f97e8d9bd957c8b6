use rayon::prelude::*;

use super::tree::{bootstrap_sample, fit_tree_on, DecisionTree};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// `⌊√p⌋`, at least 1.
pub fn default_mtry(p: usize) -> usize {
    ((p as f64).sqrt().floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestConfig {
    pub num_trees: usize,
    /// Candidate features per split; `None` means `⌊√p⌋` of the usable features.
    pub mtry: Option<usize>,
    /// `None` grows trees until nodes are pure or too small to split.
    pub max_depth: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { num_trees: 1000, mtry: None, max_depth: None }
    }
}

impl ForestConfig {
    pub fn with_trees(num_trees: usize) -> Self {
        Self { num_trees, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<DecisionTree>,
    mtry: usize,
    max_depth: Option<usize>,
    stream: RngStream,
    features: Vec<usize>,
    n_features: usize,
}

impl Forest {
    /// Wraps already fitted trees; they are assumed to split on columns of a
    /// `n_features`-wide dataset.
    pub fn from_trees(trees: Vec<DecisionTree>, n_features: usize, stream: RngStream) -> Self {
        let max_depth = trees.first().and_then(|t| t.max_depth());
        Self { trees, mtry: default_mtry(n_features), max_depth, stream, features: (0..n_features).collect(), n_features }
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn num_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn mtry(&self) -> usize {
        self.mtry
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.max_depth
    }

    pub fn stream(&self) -> RngStream {
        self.stream
    }

    /// Features the trees were allowed to split on.
    pub fn features(&self) -> &[usize] {
        &self.features
    }

    /// Width of the data the forest was fitted on.
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Majority vote; an exact tie goes to class 0.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let ones = self.trees.iter().filter(|t| t.predict_row(row) == 1).count();
        u8::from(2 * ones > self.trees.len())
    }
}

/// Fits a forest on all features of `data`.
pub fn fit_forest(data: &Dataset, config: &ForestConfig, stream: RngStream) -> Result<Forest> {
    let all: Vec<usize> = (0..data.n_features()).collect();
    fit_forest_on(data, &all, config, stream)
}

/// Fits a forest whose trees may only split on `features`.
///
/// Tree `i` draws its bag and split candidates from `stream.child(i)`, so the
/// result does not depend on thread scheduling or on how many trees follow.
pub fn fit_forest_on(data: &Dataset, features: &[usize], config: &ForestConfig, stream: RngStream) -> Result<Forest> {
    if config.num_trees == 0 {
        return Err(Error::invalid("num_trees must be at least 1"));
    }
    if features.is_empty() {
        return Err(Error::invalid("forest needs at least one feature"));
    }
    let mtry = config.mtry.unwrap_or_else(|| default_mtry(features.len()));
    let n = data.n_obs();
    let trees = (0..config.num_trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.child(i as u64).rng();
            let boot = bootstrap_sample(n, &mut rng)?;
            fit_tree_on(data, features, boot.bag, mtry, config.max_depth, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Forest { trees, mtry, max_depth: config.max_depth, stream, features: features.to_vec(), n_features: data.n_features() })
}

pub fn predict_forest(forest: &Forest, data: &Dataset) -> Result<Vec<u8>> {
    if data.n_features() != forest.n_features {
        return Err(Error::invalid(format!("forest expects {} columns, got {}", forest.n_features, data.n_features())));
    }
    Ok((0..data.n_obs()).map(|r| forest.predict_row(data.row(r))).collect())
}

/// Mean misclassification error.
pub fn mmce(predicted: &[u8], actual: &[u8]) -> Result<f64> {
    if predicted.len() != actual.len() || predicted.is_empty() {
        return Err(Error::invalid(format!("mmce needs equal non-empty lengths, got {} and {}", predicted.len(), actual.len())));
    }
    let wrong = predicted.iter().zip(actual).filter(|(p, a)| p != a).count();
    Ok(wrong as f64 / actual.len() as f64)
}

/// Per-row class vote tallies from trees voting on their out-of-bag rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OobVotes {
    votes: Vec<[u32; 2]>,
}

impl OobVotes {
    pub fn new(n_obs: usize) -> Self {
        Self { votes: vec![[0, 0]; n_obs] }
    }

    pub fn from_forest(forest: &Forest, data: &Dataset) -> Self {
        let mut v = Self::new(data.n_obs());
        for t in forest.trees() {
            v.add(t.oob(), &t.oob_predictions(data));
        }
        v
    }

    /// Adds votes `preds[k]` for rows `rows[k]`.
    pub fn add(&mut self, rows: &[usize], preds: &[u8]) {
        for (&r, &p) in rows.iter().zip(preds) {
            self.votes[r][p as usize] += 1;
        }
    }

    pub fn remove(&mut self, rows: &[usize], preds: &[u8]) {
        for (&r, &p) in rows.iter().zip(preds) {
            self.votes[r][p as usize] -= 1;
        }
    }

    pub fn tally(&self, row: usize) -> [u32; 2] {
        self.votes[row]
    }

    /// Majority class of a row, `None` when no tree voted; ties go to 0.
    pub fn decision(&self, row: usize) -> Option<u8> {
        let [v0, v1] = self.votes[row];
        (v0 + v1 > 0).then_some(u8::from(v1 > v0))
    }

    /// Misclassified voted rows and the number of voted rows.
    pub fn voted_errors(&self, labels: &[u8]) -> (usize, usize) {
        let mut wrong = 0;
        let mut voted = 0;
        for (r, &y) in labels.iter().enumerate() {
            if let Some(c) = self.decision(r) {
                voted += 1;
                wrong += usize::from(c != y);
            }
        }
        (wrong, voted)
    }

    /// Error over voted rows only.
    pub fn error_over_voted(&self, labels: &[u8]) -> Result<f64> {
        let (wrong, voted) = self.voted_errors(labels);
        if voted == 0 {
            return Err(Error::DegenerateEstimate("no row received an out-of-bag vote".into()));
        }
        Ok(wrong as f64 / voted as f64)
    }
}

/// Out-of-bag error; rows no tree left out of its bag are excluded.
pub fn forest_oob_error(forest: &Forest, data: &Dataset) -> Result<f64> {
    if data.n_features() != forest.n_features {
        return Err(Error::invalid("forest was fitted on different data"));
    }
    OobVotes::from_forest(forest, data).error_over_voted(data.labels())
}
