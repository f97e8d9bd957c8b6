//! Shallow Tree Selection.
//!
//! A base ensemble of depth-limited trees is grown (one stump per feature at
//! depth 1, a bagged forest for each deeper level). Trees are then added to an
//! initially empty result ensemble one at a time, each round taking the
//! admissible candidate with the smallest benefit-cost ratio
//!
//! ```text
//! (MMCE_oob(R ∪ T) - MMCE_oob(R)) / (c(R ∪ T) - c(R))^ξ
//! ```
//!
//! where `MMCE_oob` lets every tree vote on its own out-of-bag rows, counts
//! rows without any vote as errors, and is 0.5 for the empty ensemble.
//! Candidates whose features are all paid for are dropped after every round.
//! The selected features are the union of features used by the result trees.

use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::cost::{fits_budget, marginal_cost, Budget, CostVector, FeatureSet};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rf::{bootstrap_sample, default_mtry, fit_forest, fit_tree_on, DecisionTree, ForestConfig, OobVotes};
use crate::rng::RngStream;
use crate::selection::{Method, SelectionResult};

pub use crate::selection::refit_final;

/// Error rate assigned to the empty ensemble.
pub const EMPTY_ENSEMBLE_MMCE: f64 = 0.5;

/// Largest depth level considered by the default level rule.
pub const MAX_AUTO_LEVEL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StsConfig {
    /// Deepest level of the base ensemble; `None` derives it from costs and budget.
    pub max_level: Option<usize>,
    /// Trees grown for each level `d >= 2`.
    pub trees_per_level: usize,
    /// Split candidates per node at levels `d >= 2`; `None` means `⌊√p⌋`.
    pub mtry: Option<usize>,
}

impl Default for StsConfig {
    fn default() -> Self {
        Self { max_level: None, trees_per_level: 500, mtry: None }
    }
}

/// Largest `d` in `1..=5` whose `2^d - 1` cheapest features fit the budget.
///
/// When `2^d - 1` exceeds the number of features, all features are summed.
pub fn default_max_level(costs: &CostVector, budget: Budget) -> usize {
    let mut sorted = costs.as_slice().to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut level = 1;
    for d in 2..=MAX_AUTO_LEVEL {
        let k = ((1usize << d) - 1).min(sorted.len());
        if budget.admits(sorted[..k].iter().sum()) {
            level = d;
        } else {
            break;
        }
    }
    level
}

/// One tree of the base ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub id: usize,
    pub level: usize,
    pub tree: DecisionTree,
    /// The tree's predictions on its out-of-bag rows.
    pub oob_predictions: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseEnsemble {
    candidates: Vec<Candidate>,
    depth_levels: Vec<usize>,
}

impl BaseEnsemble {
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn depth_levels(&self) -> &[usize] {
        &self.depth_levels
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Wraps externally built trees, numbering them in order.
    pub fn from_trees(trees: Vec<(usize, DecisionTree)>, data: &Dataset) -> Self {
        let mut depth_levels: Vec<usize> = trees.iter().map(|(l, _)| *l).collect();
        depth_levels.sort_unstable();
        depth_levels.dedup();
        let candidates = trees
            .into_iter()
            .enumerate()
            .map(|(id, (level, tree))| Candidate { id, level, oob_predictions: tree.oob_predictions(data), tree })
            .collect();
        Self { candidates, depth_levels }
    }
}

/// Grows the depth-stratified candidate pool.
///
/// Level 1 holds one stump per feature, each on its own bootstrap bag so it
/// has out-of-bag rows. Every level `d >= 2` is a forest of
/// `trees_per_level` trees limited to depth `d`.
pub fn build_base_ensemble(
    data: &Dataset,
    max_level: usize,
    trees_per_level: usize,
    mtry: Option<usize>,
    stream: RngStream,
) -> Result<BaseEnsemble> {
    if max_level == 0 {
        return Err(Error::invalid("max_level must be at least 1"));
    }
    if trees_per_level == 0 {
        return Err(Error::invalid("trees_per_level must be at least 1"));
    }
    let p = data.n_features();
    let stumps = stream.child(1);
    let mut trees = Vec::with_capacity(p + (max_level - 1) * trees_per_level);
    for j in 0..p {
        let mut rng = stumps.child(j as u64).rng();
        let boot = bootstrap_sample(data.n_obs(), &mut rng)?;
        trees.push((1, fit_tree_on(data, &[j], boot.bag, 1, Some(1), &mut rng)?));
    }
    let mtry = mtry.unwrap_or_else(|| default_mtry(p));
    for d in 2..=max_level {
        let cfg = ForestConfig { num_trees: trees_per_level, mtry: Some(mtry), max_depth: Some(d) };
        let forest = fit_forest(data, &cfg, stream.child(d as u64))?;
        trees.extend(forest.trees().iter().cloned().map(|t| (d, t)));
    }
    Ok(BaseEnsemble::from_trees(trees, data))
}

/// Trees chosen so far with their combined out-of-bag votes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultEnsemble {
    trees: Vec<DecisionTree>,
    implicit_features: FeatureSet,
    votes: OobVotes,
}

impl ResultEnsemble {
    pub fn new(n_obs: usize) -> Self {
        Self { trees: Vec::new(), implicit_features: FeatureSet::empty(), votes: OobVotes::new(n_obs) }
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn implicit_features(&self) -> &FeatureSet {
        &self.implicit_features
    }

    pub fn votes(&self) -> &OobVotes {
        &self.votes
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn add(&mut self, tree: DecisionTree, data: &Dataset, costs: &CostVector) -> Result<()> {
        let preds = tree.oob_predictions(data);
        self.add_with_predictions(tree, &preds, costs)
    }

    fn add_with_predictions(&mut self, tree: DecisionTree, preds: &[u8], costs: &CostVector) -> Result<()> {
        self.implicit_features.extend(tree.used_features().iter().copied(), costs)?;
        self.votes.add(tree.oob(), preds);
        self.trees.push(tree);
        Ok(())
    }

    /// Rows misclassified or without any vote.
    fn error_count(&self, labels: &[u8]) -> usize {
        (0..labels.len()).filter(|&r| row_is_error(self.votes.tally(r), labels[r])).count()
    }
}

#[inline]
fn row_is_error(tally: [u32; 2], label: u8) -> bool {
    let [v0, v1] = tally;
    v0 + v1 == 0 || u8::from(v1 > v0) != label
}

/// Ensemble OOB error with unvoted rows counted wrong; 0.5 when empty.
pub fn ensemble_oob_mmce(ensemble: &ResultEnsemble, data: &Dataset) -> f64 {
    if ensemble.is_empty() {
        return EMPTY_ENSEMBLE_MMCE;
    }
    ensemble.error_count(data.labels()) as f64 / data.n_obs() as f64
}

/// Benefit-cost ratio of adding `tree` to `ensemble`; smaller is better.
pub fn bcr_sts(tree: &DecisionTree, ensemble: &ResultEnsemble, xi: f64, data: &Dataset, costs: &CostVector) -> Result<f64> {
    let delta_cost = marginal_cost(tree.used_features(), ensemble.implicit_features(), costs);
    if delta_cost <= 0.0 {
        return Err(Error::Precondition("candidate adds no cost; cost-free trees are removed, not scored".into()));
    }
    let mut grown = ensemble.clone();
    grown.add(tree.clone(), data, costs)?;
    let gain = ensemble_oob_mmce(&grown, data) - ensemble_oob_mmce(ensemble, data);
    Ok(gain / delta_cost.powf(xi))
}

/// One round of the greedy loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StsStep {
    pub iteration: usize,
    pub tree_id: usize,
    pub bcr: f64,
    pub oob_mmce: f64,
    pub cum_cost: f64,
    pub removed_ids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StsTrajectory {
    pub steps: Vec<StsStep>,
}

impl StsTrajectory {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["iteration", "tree_id", "bcr", "oob_mmce", "cum_cost", "removed_ids"])?;
        for s in &self.steps {
            let removed: Vec<String> = s.removed_ids.iter().map(|i| i.to_string()).collect();
            w.write_record([
                s.iteration.to_string(),
                s.tree_id.to_string(),
                s.bcr.to_string(),
                s.oob_mmce.to_string(),
                s.cum_cost.to_string(),
                removed.join(";"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Full STS run: chooses the depth levels, grows the base ensemble and selects.
pub fn sts_select(
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    xi: f64,
    config: &StsConfig,
    stream: RngStream,
) -> Result<(SelectionResult, StsTrajectory)> {
    check_widths(data, costs)?;
    let max_level = config.max_level.unwrap_or_else(|| default_max_level(costs, budget));
    let base = build_base_ensemble(data, max_level, config.trees_per_level, config.mtry, stream)?;
    let (result, trajectory, _) = select_from_base(&base, data, costs, budget, xi)?;
    Ok((result, trajectory))
}

pub(crate) fn check_widths(data: &Dataset, costs: &CostVector) -> Result<()> {
    if costs.len() != data.n_features() {
        return Err(Error::invalid(format!("{} costs for {} features", costs.len(), data.n_features())));
    }
    Ok(())
}

/// Greedy tree selection over a prepared base ensemble.
///
/// Returns the final result ensemble as well, for inspection.
pub fn select_from_base(
    base: &BaseEnsemble,
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    xi: f64,
) -> Result<(SelectionResult, StsTrajectory, ResultEnsemble)> {
    check_widths(data, costs)?;
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(Error::invalid(format!("xi must be finite and >= 0, got {xi}")));
    }
    let n = data.n_obs();
    let labels = data.labels();
    let mut ensemble = ResultEnsemble::new(n);
    let mut alive = vec![true; base.len()];
    let mut errors = n; // empty tallies: every row unvoted
    let mut trajectory = StsTrajectory::default();

    loop {
        let current = ensemble.implicit_features();
        let current_mmce = if ensemble.is_empty() { EMPTY_ENSEMBLE_MMCE } else { errors as f64 / n as f64 };

        // (bcr, delta_cost, id, errors_after)
        let mut best: Option<(f64, f64, usize, usize)> = None;
        for cand in base.candidates().iter().filter(|c| alive[c.id]) {
            let used = cand.tree.used_features();
            let delta_cost = marginal_cost(used, current, costs);
            if delta_cost <= 0.0 || !fits_budget(used, current, costs, budget) {
                continue;
            }
            let mut after = errors;
            for (&r, &pred) in cand.tree.oob().iter().zip(&cand.oob_predictions) {
                let tally = ensemble.votes().tally(r);
                let was = row_is_error(tally, labels[r]);
                let mut next = tally;
                next[pred as usize] += 1;
                let now = row_is_error(next, labels[r]);
                match (was, now) {
                    (true, false) => after -= 1,
                    (false, true) => after += 1,
                    _ => {}
                }
            }
            let bcr = (after as f64 / n as f64 - current_mmce) / delta_cost.powf(xi);
            let better = match best {
                None => true,
                Some((b, dc, _, _)) => match bcr.total_cmp(&b) {
                    Ordering::Less => true,
                    Ordering::Equal => delta_cost < dc,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((bcr, delta_cost, cand.id, after));
            }
        }

        let Some((bcr, _, id, after)) = best else { break };
        let chosen = &base.candidates()[id];
        ensemble.add_with_predictions(chosen.tree.clone(), &chosen.oob_predictions, costs)?;
        errors = after;
        alive[id] = false;

        let mut removed_ids = Vec::new();
        for cand in base.candidates() {
            if alive[cand.id] && marginal_cost(cand.tree.used_features(), ensemble.implicit_features(), costs) <= 0.0 {
                alive[cand.id] = false;
                removed_ids.push(cand.id);
            }
        }
        trajectory.steps.push(StsStep {
            iteration: trajectory.steps.len() + 1,
            tree_id: id,
            bcr,
            oob_mmce: errors as f64 / n as f64,
            cum_cost: ensemble.implicit_features().total_cost(),
            removed_ids,
        });
    }

    let result = SelectionResult { method: Method::Sts, xi, features: ensemble.implicit_features().clone() };
    Ok((result, trajectory, ensemble))
}
