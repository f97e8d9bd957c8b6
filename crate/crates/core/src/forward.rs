//! Cost-sensitive sequential forward selection.
//!
//! Each round fits one forest per remaining affordable feature on `S ∪ {j}`
//! and adds the feature minimising
//! `(OOB(S ∪ {j}) − OOB(S)) / (c(S ∪ {j}) − c(S))^ξ`. There is no early
//! stopping: rounds continue until nothing else fits the budget.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{fits_budget, marginal_cost, Budget, CostVector, FeatureSet};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rf::{fit_forest_on, forest_oob_error, ForestConfig};
use crate::rng::RngStream;
use crate::selection::{Method, SelectionResult};
use crate::sts::{check_widths, EMPTY_ENSEMBLE_MMCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsConfig {
    /// Forest fitted for each candidate set.
    pub forest: ForestConfig,
}

impl Default for FsConfig {
    fn default() -> Self {
        Self { forest: ForestConfig::with_trees(500) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FsStep {
    pub iteration: usize,
    pub feature: usize,
    pub bcr: f64,
    pub oob_mmce: f64,
    pub cum_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FsState {
    pub current_set: FeatureSet,
    /// OOB error of a forest on `current_set`; 0.5 while empty.
    pub current_oob_mmce: f64,
    pub iteration: usize,
    pub trajectory: Vec<FsStep>,
}

impl FsState {
    pub fn new() -> Self {
        Self { current_oob_mmce: EMPTY_ENSEMBLE_MMCE, ..Self::default() }
    }
}

/// Counts forest fits, split into candidate and baseline fits.
#[derive(Debug, Default)]
pub struct FitCounter {
    candidate: AtomicUsize,
    baseline: AtomicUsize,
}

impl FitCounter {
    pub fn candidate_fits(&self) -> usize {
        self.candidate.load(AtomicOrdering::Relaxed)
    }

    pub fn baseline_fits(&self) -> usize {
        self.baseline.load(AtomicOrdering::Relaxed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsOutcome {
    pub result: SelectionResult,
    pub trajectory: Vec<FsStep>,
    pub candidate_fits: usize,
    pub baseline_fits: usize,
}

fn oob_of(data: &Dataset, features: &[usize], config: &FsConfig, stream: RngStream) -> Result<f64> {
    let forest = fit_forest_on(data, features, &config.forest, stream)?;
    forest_oob_error(&forest, data)
}

fn candidate_stream(stream: RngStream, iteration: usize, feature: usize) -> RngStream {
    stream.child(iteration as u64).child(feature as u64)
}

/// Forward-selection criterion for adding `candidate` to `state.current_set`.
pub fn bcr_fs(
    candidate: usize,
    state: &FsState,
    xi: f64,
    data: &Dataset,
    costs: &CostVector,
    config: &FsConfig,
    stream: RngStream,
) -> Result<f64> {
    if state.current_set.contains(candidate) {
        return Err(Error::Precondition(format!("feature {candidate} is already selected")));
    }
    let mut features = state.current_set.to_vec();
    features.push(candidate);
    features.sort_unstable();
    let oob = oob_of(data, &features, config, candidate_stream(stream, state.iteration + 1, candidate))?;
    Ok(bcr_from_parts(oob, state.current_oob_mmce, marginal_cost(&[candidate], &state.current_set, costs), xi))
}

fn bcr_from_parts(candidate_oob: f64, baseline_oob: f64, delta_cost: f64, xi: f64) -> f64 {
    (candidate_oob - baseline_oob) / delta_cost.powf(xi)
}

/// Runs forward selection; `counter` (if given) sees every forest fit.
pub fn fs_select_counted(
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    xi: f64,
    config: &FsConfig,
    stream: RngStream,
    counter: &FitCounter,
) -> Result<FsOutcome> {
    check_widths(data, costs)?;
    if xi != 0.0 && xi != 1.0 {
        return Err(Error::invalid(format!("forward selection supports xi 0 or 1, got {xi}")));
    }
    let p = data.n_features();
    let mut state = FsState::new();
    loop {
        let open: Vec<usize> =
            (0..p).filter(|&j| !state.current_set.contains(j) && fits_budget(&[j], &state.current_set, costs, budget)).collect();
        if open.is_empty() {
            break;
        }
        let iteration = state.iteration + 1;
        let base: Vec<usize> = state.current_set.to_vec();
        if !base.is_empty() {
            counter.baseline.fetch_add(1, AtomicOrdering::Relaxed);
            state.current_oob_mmce = oob_of(data, &base, config, stream.named("baseline").child(iteration as u64))?;
        }
        let scored: Vec<(usize, f64)> = open
            .par_iter()
            .map(|&j| {
                let mut features = base.clone();
                features.push(j);
                features.sort_unstable();
                counter.candidate.fetch_add(1, AtomicOrdering::Relaxed);
                Ok((j, oob_of(data, &features, config, candidate_stream(stream, iteration, j))?))
            })
            .collect::<Result<_>>()?;

        // ties: lower marginal cost, then lower index (open is ascending)
        let mut best: Option<(usize, f64, f64, f64)> = None;
        for (j, oob) in scored {
            let delta = marginal_cost(&[j], &state.current_set, costs);
            let bcr = bcr_from_parts(oob, state.current_oob_mmce, delta, xi);
            let better = match best {
                None => true,
                Some((_, b, d, _)) => bcr < b || (bcr == b && delta < d),
            };
            if better {
                best = Some((j, bcr, delta, oob));
            }
        }
        let (feature, bcr, _, oob) = best.expect("open is non-empty");
        state.current_set.extend([feature], costs)?;
        state.iteration = iteration;
        state.trajectory.push(FsStep { iteration, feature, bcr, oob_mmce: oob, cum_cost: state.current_set.total_cost() });
    }
    Ok(FsOutcome {
        result: SelectionResult { method: Method::Fs, xi, features: state.current_set },
        trajectory: state.trajectory,
        candidate_fits: counter.candidate_fits(),
        baseline_fits: counter.baseline_fits(),
    })
}

pub fn fs_select(data: &Dataset, costs: &CostVector, budget: Budget, xi: f64, config: &FsConfig, stream: RngStream) -> Result<FsOutcome> {
    fs_select_counted(data, costs, budget, xi, config, stream, &FitCounter::default())
}

/// Columns `iteration,feature,bcr,oob_mmce,cum_cost`.
pub fn write_trajectory_csv<W: Write>(steps: &[FsStep], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for s in steps {
        w.serialize(s)?;
    }
    if steps.is_empty() {
        w.write_record(["iteration", "feature", "bcr", "oob_mmce", "cum_cost"])?;
    }
    w.flush()?;
    Ok(())
}
