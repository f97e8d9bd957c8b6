//! Strategies for the cost trade-off exponent ξ.
//!
//! Every grid point runs the selection method, refits a forest on the chosen
//! features and scores it by that forest's OOB error. The tuned ξ is the grid
//! point with the lowest OOB error, ties going to the smaller ξ.

use std::io::Write;

use rayon::prelude::*;

use crate::cost::{Budget, CostVector};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::filters::{filter_scores, select_from_scores, FilterConfig, FilterKind};
use crate::rf::ForestConfig;
use crate::rng::RngStream;
use crate::selection::{refit_final, FinalModel, Method, SelectionResult};
use crate::sts::{build_base_ensemble, check_widths, default_max_level, select_from_base, BaseEnsemble, StsConfig};

/// Default grid `0, 0.25, …, 2`.
pub fn default_grid() -> Vec<f64> {
    (0..=8).map(|i| i as f64 * 0.25).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum XiStrategy {
    /// ξ = 0.
    CostAgnostic,
    /// ξ = 1.
    SimpleBcr,
    GridTuned(Vec<f64>),
}

impl XiStrategy {
    pub fn grid(&self) -> Vec<f64> {
        match self {
            XiStrategy::CostAgnostic => vec![0.0],
            XiStrategy::SimpleBcr => vec![1.0],
            XiStrategy::GridTuned(g) => g.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let XiStrategy::GridTuned(g) = self {
            validate_grid(g, true)?;
        }
        Ok(())
    }
}

/// Grid must be non-empty, finite and non-negative; a tuning grid also has to
/// contain 0 and 1.
pub fn validate_grid(grid: &[f64], require_endpoints: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("empty xi grid"));
    }
    if let Some(x) = grid.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::invalid(format!("xi grid value {x} must be finite and >= 0")));
    }
    if require_endpoints && !(grid.contains(&0.0) && grid.contains(&1.0)) {
        return Err(Error::invalid("a tuning grid must contain 0 and 1"));
    }
    Ok(())
}

/// Settings for the methods that support ξ tuning.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MethodConfig {
    pub sts: StsConfig,
    pub filter: FilterConfig,
    /// Forest refitted on each selected set.
    pub refit: ForestConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningEntry {
    pub xi: f64,
    pub selection: SelectionResult,
    /// OOB error of the forest refitted on the selection.
    pub oob_error: f64,
    pub test_mmce: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningRecord {
    pub method: Method,
    pub entries: Vec<TuningEntry>,
    /// Index into `entries` of the chosen ξ.
    pub best: usize,
}

impl TuningRecord {
    pub fn best_entry(&self) -> &TuningEntry {
        &self.entries[self.best]
    }

    pub fn best_xi(&self) -> f64 {
        self.best_entry().xi
    }

    pub fn entry_at(&self, xi: f64) -> Option<&TuningEntry> {
        self.entries.iter().find(|e| e.xi == xi)
    }

    /// Columns `method,xi,n_selected,cost,oob_error`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["method", "xi", "n_selected", "cost", "oob_error"])?;
        for e in &self.entries {
            w.write_record([
                self.method.to_string(),
                e.xi.to_string(),
                e.selection.features.len().to_string(),
                e.selection.features.total_cost().to_string(),
                e.oob_error.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

enum Prepared {
    Scores(FilterKind, Vec<f64>),
    Base(BaseEnsemble),
}

/// The ξ-independent part of a method (scores or base ensemble), computed
/// once and reused across grid points.
pub struct PreparedMethod<'a> {
    method: Method,
    data: &'a Dataset,
    costs: &'a CostVector,
    budget: Budget,
    config: MethodConfig,
    refit_stream: RngStream,
    state: Prepared,
}

impl<'a> PreparedMethod<'a> {
    pub fn new(
        method: Method,
        data: &'a Dataset,
        costs: &'a CostVector,
        budget: Budget,
        config: &MethodConfig,
        stream: RngStream,
    ) -> Result<Self> {
        check_widths(data, costs)?;
        let prep = stream.child(0);
        let state = match method {
            Method::Auc => Prepared::Scores(FilterKind::Auc, filter_scores(data, FilterKind::Auc, &config.filter, prep)?),
            Method::Pfi => Prepared::Scores(FilterKind::Pfi, filter_scores(data, FilterKind::Pfi, &config.filter, prep)?),
            Method::Sts => {
                let level = config.sts.max_level.unwrap_or_else(|| default_max_level(costs, budget));
                Prepared::Base(build_base_ensemble(data, level, config.sts.trees_per_level, config.sts.mtry, prep)?)
            }
            Method::Fs => return Err(Error::invalid("forward selection is not tuned over a xi grid")),
        };
        Ok(Self { method, data, costs, budget, config: *config, refit_stream: stream.child(1), state })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn select(&self, xi: f64) -> Result<SelectionResult> {
        match &self.state {
            Prepared::Scores(kind, raw) => select_from_scores(raw, *kind, self.costs, self.budget, xi, self.config.filter.fill),
            Prepared::Base(base) => Ok(select_from_base(base, self.data, self.costs, self.budget, xi)?.0),
        }
    }

    /// Selects at `xi`, refits, and records the refit OOB error. The refit
    /// stream is the same for every ξ, so equal selections score equally.
    pub fn evaluate(&self, xi: f64, test: Option<&Dataset>) -> Result<TuningEntry> {
        let selection = self.select(xi)?;
        let model = refit_final(self.data, &selection.features, &self.config.refit, self.refit_stream)?;
        entry_from_model(xi, selection, &model, self.data, test)
    }
}

fn entry_from_model(
    xi: f64,
    selection: SelectionResult,
    model: &FinalModel,
    train: &Dataset,
    test: Option<&Dataset>,
) -> Result<TuningEntry> {
    let oob_error = model.oob_error(train)?;
    let test_mmce = test.map(|t| model.test_mmce(t)).transpose()?;
    Ok(TuningEntry { xi, selection, oob_error, test_mmce })
}

/// Runs `method` at one ξ and scores the refitted forest.
pub fn evaluate_xi(
    method: Method,
    xi: f64,
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    config: &MethodConfig,
    stream: RngStream,
) -> Result<TuningEntry> {
    PreparedMethod::new(method, data, costs, budget, config, stream)?.evaluate(xi, None)
}

/// Index of the minimal OOB error, ties to the smaller ξ.
pub fn choose_best(entries: &[TuningEntry]) -> usize {
    let mut best = 0;
    for (i, e) in entries.iter().enumerate().skip(1) {
        let b = &entries[best];
        if e.oob_error < b.oob_error || (e.oob_error == b.oob_error && e.xi < b.xi) {
            best = i;
        }
    }
    best
}

/// Evaluates every grid point, optionally also scoring each refit on `test`.
#[allow(clippy::too_many_arguments)]
pub fn grid_tune_with_test(
    method: Method,
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    grid: &[f64],
    config: &MethodConfig,
    stream: RngStream,
    test: Option<&Dataset>,
) -> Result<TuningRecord> {
    validate_grid(grid, false)?;
    let prepared = PreparedMethod::new(method, data, costs, budget, config, stream)?;
    let entries = grid.par_iter().map(|&xi| prepared.evaluate(xi, test)).collect::<Result<Vec<_>>>()?;
    let best = choose_best(&entries);
    Ok(TuningRecord { method, entries, best })
}

/// Grid search over ξ; returns the whole record, whose `best_entry` is the answer.
pub fn grid_tune(
    method: Method,
    data: &Dataset,
    costs: &CostVector,
    budget: Budget,
    grid: &[f64],
    config: &MethodConfig,
    stream: RngStream,
) -> Result<TuningRecord> {
    grid_tune_with_test(method, data, costs, budget, grid, config, stream, None)
}
