//! Univariate AUC and permutation-importance filters with benefit-cost
//! weighting `score / cost^ξ` and a budget-respecting top-down fill.

use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::cost::{fits_budget, Budget, CostVector, FeatureSet};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rf::{fit_forest, Forest, ForestConfig, OobVotes};
use crate::rng::RngStream;
use crate::selection::{Method, SelectionResult};
use crate::sts::check_widths;

/// `P(X | Y=1 > X | Y=0)` with ties counted one half.
pub fn auc(column: &[f64], labels: &[u8]) -> Result<f64> {
    if column.len() != labels.len() {
        return Err(Error::invalid("column and labels differ in length"));
    }
    let n1 = labels.iter().filter(|&&y| y == 1).count();
    let n0 = labels.len() - n1;
    if n1 == 0 || n0 == 0 {
        return Err(Error::invalid("AUC needs both classes"));
    }
    let mut order: Vec<usize> = (0..column.len()).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    // midranks (1-based) summed over class 1
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut k = i;
        while k + 1 < order.len() && column[order[k + 1]] == column[order[i]] {
            k += 1;
        }
        let midrank = (i + k) as f64 / 2.0 + 1.0;
        let ones = order[i..=k].iter().filter(|&&r| labels[r] == 1).count();
        rank_sum += midrank * ones as f64;
        i = k + 1;
    }
    let (n1, n0) = (n1 as f64, n0 as f64);
    Ok((rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0))
}

/// Direction-free AUC score `2·|AUC − 0.5|`.
pub fn auc_score(column: &[f64], labels: &[u8]) -> Result<f64> {
    Ok(2.0 * (auc(column, labels)? - 0.5).abs())
}

/// `raw_score / cost^ξ`; larger is better.
pub fn bcr_filter(raw_score: f64, cost: f64, xi: f64) -> Result<f64> {
    if cost.is_nan() || cost <= 0.0 {
        return Err(Error::invalid(format!("cost {cost} must be > 0")));
    }
    Ok(raw_score / cost.powf(xi))
}

/// Mean increase in forest OOB error after permuting each feature, unclamped.
pub fn permutation_importance_raw(forest: &Forest, data: &Dataset, repeats: usize, stream: RngStream) -> Result<Vec<f64>> {
    if repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    if data.n_features() != forest.n_features() {
        return Err(Error::invalid("forest was fitted on different data"));
    }
    let labels = data.labels();
    let preds: Vec<Vec<u8>> = forest.trees().iter().map(|t| t.oob_predictions(data)).collect();
    let mut base = OobVotes::new(data.n_obs());
    for (t, p) in forest.trees().iter().zip(&preds) {
        base.add(t.oob(), p);
    }
    let base_error = base.error_over_voted(labels)?;

    (0..data.n_features())
        .into_par_iter()
        .map(|j| {
            let users: Vec<usize> = (0..forest.num_trees()).filter(|&i| forest.trees()[i].uses_feature(j)).collect();
            if users.is_empty() {
                return Ok(0.0);
            }
            let feature_stream = stream.child(j as u64);
            let mut total = 0.0;
            for rep in 0..repeats {
                let mut perm: Vec<usize> = (0..data.n_obs()).collect();
                perm.shuffle(&mut feature_stream.child(rep as u64).rng());
                let mut votes = base.clone();
                for &i in &users {
                    let tree = &forest.trees()[i];
                    votes.remove(tree.oob(), &preds[i]);
                    let permuted: Vec<u8> = tree
                        .oob()
                        .iter()
                        .map(|&r| tree.predict_with(|f| if f == j { data.value(perm[r], j) } else { data.value(r, f) }))
                        .collect();
                    votes.add(tree.oob(), &permuted);
                }
                total += votes.error_over_voted(labels)? - base_error;
            }
            Ok(total / repeats as f64)
        })
        .collect()
}

/// Permutation importance clamped below at 0.
pub fn permutation_importance(forest: &Forest, data: &Dataset, repeats: usize, stream: RngStream) -> Result<Vec<f64>> {
    Ok(permutation_importance_raw(forest, data, repeats, stream)?.into_iter().map(|v| v.max(0.0)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureScore {
    pub feature: usize,
    pub raw_score: f64,
    pub cost: f64,
    pub bcr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScoreTable {
    pub scores: Vec<FeatureScore>,
}

impl FeatureScoreTable {
    pub fn new(raw_scores: &[f64], costs: &CostVector, xi: f64) -> Result<Self> {
        if raw_scores.len() != costs.len() {
            return Err(Error::invalid("scores and costs differ in length"));
        }
        let scores = raw_scores
            .iter()
            .enumerate()
            .map(|(j, &raw)| {
                let cost = costs.get(j);
                Ok(FeatureScore { feature: j, raw_score: raw, cost, bcr: bcr_filter(raw, cost, xi)? })
            })
            .collect::<Result<_>>()?;
        Ok(Self { scores })
    }

    /// Features by decreasing BCR; ties by lower cost, then lower index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<&FeatureScore> = self.scores.iter().collect();
        order.sort_by(|a, b| b.bcr.total_cmp(&a.bcr).then(a.cost.total_cmp(&b.cost)).then(a.feature.cmp(&b.feature)));
        order.into_iter().map(|s| s.feature).collect()
    }

    /// Columns `feature,raw_score,cost,bcr,selected`.
    pub fn write_csv<W: Write>(&self, writer: W, names: &[String], selected: &FeatureSet) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["feature", "raw_score", "cost", "bcr", "selected"])?;
        for s in &self.scores {
            let name = names.get(s.feature).cloned().unwrap_or_else(|| s.feature.to_string());
            w.write_record([
                name,
                s.raw_score.to_string(),
                s.cost.to_string(),
                s.bcr.to_string(),
                u8::from(selected.contains(s.feature)).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// What the fill does with a feature that no longer fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillRule {
    /// Skip it and keep walking the ranking.
    #[default]
    SkipAndContinue,
    /// Stop at the first feature that does not fit.
    StopAtFirstMisfit,
}

/// Walks the BCR ranking, adding each feature whose addition stays within budget.
pub fn topdown_fill(scores: &FeatureScoreTable, costs: &CostVector, budget: Budget, rule: FillRule) -> Result<FeatureSet> {
    let mut set = FeatureSet::empty();
    for j in scores.ranking() {
        if fits_budget(&[j], &set, costs, budget) {
            set.extend([j], costs)?;
        } else if rule == FillRule::StopAtFirstMisfit {
            break;
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Auc,
    Pfi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    /// Forest used to measure permutation importance.
    pub pfi_forest: ForestConfig,
    pub repeats: usize,
    pub fill: FillRule,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self { pfi_forest: ForestConfig::default(), repeats: 5, fill: FillRule::SkipAndContinue }
    }
}

/// Raw per-feature scores in `[0, 1]`.
pub fn filter_scores(data: &Dataset, kind: FilterKind, config: &FilterConfig, stream: RngStream) -> Result<Vec<f64>> {
    match kind {
        FilterKind::Auc => (0..data.n_features()).map(|j| auc_score(&data.column(j), data.labels())).collect(),
        FilterKind::Pfi => {
            let forest = fit_forest(data, &config.pfi_forest, stream.child(0))?;
            permutation_importance(&forest, data, config.repeats, stream.child(1))
        }
    }
}

/// Applies BCR weighting and the top-down fill to precomputed raw scores.
pub fn select_from_scores(
    raw_scores: &[f64],
    kind: FilterKind,
    costs: &CostVector,
    budget: Budget,
    xi: f64,
    rule: FillRule,
) -> Result<SelectionResult> {
    let table = FeatureScoreTable::new(raw_scores, costs, xi)?;
    let features = topdown_fill(&table, costs, budget, rule)?;
    let method = match kind {
        FilterKind::Auc => Method::Auc,
        FilterKind::Pfi => Method::Pfi,
    };
    Ok(SelectionResult { method, xi, features })
}

pub fn filter_select(
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    xi: f64,
    kind: FilterKind,
    config: &FilterConfig,
    stream: RngStream,
) -> Result<SelectionResult> {
    check_widths(data, costs)?;
    let raw = filter_scores(data, kind, config, stream)?;
    select_from_scores(&raw, kind, costs, budget, xi, config.fill)
}
