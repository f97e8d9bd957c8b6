use std::io::{Read, Write};
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{Budget, CostVector, FeatureSet};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::forward::{fs_select, FsConfig};
use crate::rng::RngStream;
use crate::selection::{refit_final, Method};
use crate::simgen::{make_setting, uniform_costs, SimSetting};
use crate::tuning::{default_grid, grid_tune_with_test, validate_grid, MethodConfig};

/// A method as run in a study; forward selection appears once per fixed ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StudyMethod {
    Sts,
    Auc,
    Pfi,
    Fs0,
    Fs1,
}

impl StudyMethod {
    pub const ALL: [StudyMethod; 5] = [StudyMethod::Sts, StudyMethod::Auc, StudyMethod::Pfi, StudyMethod::Fs0, StudyMethod::Fs1];

    pub fn as_str(&self) -> &'static str {
        match self {
            StudyMethod::Sts => "sts",
            StudyMethod::Auc => "auc",
            StudyMethod::Pfi => "pfi",
            StudyMethod::Fs0 => "fs0",
            StudyMethod::Fs1 => "fs1",
        }
    }

    fn tunable(&self) -> Option<Method> {
        match self {
            StudyMethod::Sts => Some(Method::Sts),
            StudyMethod::Auc => Some(Method::Auc),
            StudyMethod::Pfi => Some(Method::Pfi),
            StudyMethod::Fs0 | StudyMethod::Fs1 => None,
        }
    }
}

impl std::str::FromStr for StudyMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StudyMethod::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown study method `{s}`")))
    }
}

/// How ξ was chosen for a result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    CostAgnostic,
    SimpleBcr,
    Tuned,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::CostAgnostic => "cost_agnostic",
            Strategy::SimpleBcr => "simple_bcr",
            Strategy::Tuned => "tuned",
        }
    }
}

/// One row of a result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub setting: String,
    pub budget: f64,
    pub method: String,
    pub strategy: Strategy,
    pub run: usize,
    pub xi: Option<f64>,
    pub n_selected: Option<usize>,
    pub cost: Option<f64>,
    pub oob_error: Option<f64>,
    pub test_mmce: Option<f64>,
    /// Wall time, only recorded when timing is enabled.
    pub seconds: Option<f64>,
    /// `ok`, or `error: <message>` for a failed run.
    pub status: String,
}

impl RunResult {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub methods: Vec<StudyMethod>,
    /// Must contain 0 and 1.
    pub grid: Vec<f64>,
    pub method: MethodConfig,
    pub fs: FsConfig,
    /// Record wall time per row. Off by default so result files are reproducible byte for byte.
    pub timing: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            methods: StudyMethod::ALL.to_vec(),
            grid: default_grid(),
            method: MethodConfig::default(),
            fs: FsConfig::default(),
            timing: false,
        }
    }
}

/// Identifies one selection job inside a study.
struct Job<'a> {
    setting: &'a str,
    run: usize,
    budget: f64,
    method: StudyMethod,
    stream: RngStream,
}

fn failed_rows(job: &Job<'_>, strategies: &[Strategy], err: &Error) -> Vec<RunResult> {
    strategies
        .iter()
        .map(|&strategy| RunResult {
            setting: job.setting.to_string(),
            budget: job.budget,
            method: job.method.as_str().to_string(),
            strategy,
            run: job.run,
            xi: None,
            n_selected: None,
            cost: None,
            oob_error: None,
            test_mmce: None,
            seconds: None,
            status: format!("error: {err}"),
        })
        .collect()
}

fn ok_row(job: &Job<'_>, strategy: Strategy, xi: f64, set: &FeatureSet, oob: f64, test: f64, seconds: Option<f64>) -> RunResult {
    RunResult {
        setting: job.setting.to_string(),
        budget: job.budget,
        method: job.method.as_str().to_string(),
        strategy,
        run: job.run,
        xi: Some(xi),
        n_selected: Some(set.len()),
        cost: Some(set.total_cost()),
        oob_error: Some(oob),
        test_mmce: Some(test),
        seconds,
        status: "ok".into(),
    }
}

fn run_job(job: &Job<'_>, train: &Dataset, test: &Dataset, costs: &CostVector, config: &StudyConfig) -> Vec<RunResult> {
    let start = Instant::now();
    let elapsed = |s: Instant| config.timing.then(|| s.elapsed().as_secs_f64());
    let budget = match Budget::new(job.budget) {
        Ok(b) => b,
        Err(e) => return failed_rows(job, &[Strategy::CostAgnostic], &e),
    };
    match job.method.tunable() {
        Some(method) => {
            let strategies = [Strategy::CostAgnostic, Strategy::SimpleBcr, Strategy::Tuned];
            let record = match grid_tune_with_test(method, train, costs, budget, &config.grid, &config.method, job.stream, Some(test)) {
                Ok(r) => r,
                Err(e) => return failed_rows(job, &strategies, &e),
            };
            let seconds = elapsed(start);
            strategies
                .iter()
                .map(|&s| {
                    let entry = match s {
                        Strategy::CostAgnostic => record.entry_at(0.0),
                        Strategy::SimpleBcr => record.entry_at(1.0),
                        Strategy::Tuned => Some(record.best_entry()),
                    }
                    .expect("grid contains 0 and 1");
                    ok_row(job, s, entry.xi, &entry.selection.features, entry.oob_error, entry.test_mmce.unwrap_or(f64::NAN), seconds)
                })
                .collect()
        }
        None => {
            let (xi, strategy) = if job.method == StudyMethod::Fs0 { (0.0, Strategy::CostAgnostic) } else { (1.0, Strategy::SimpleBcr) };
            let outcome = fs_select(train, costs, budget, xi, &config.fs, job.stream.child(0)).and_then(|o| {
                let model = refit_final(train, &o.result.features, &config.method.refit, job.stream.child(1))?;
                Ok((o.result.features, model.oob_error(train)?, model.test_mmce(test)?))
            });
            match outcome {
                Ok((set, oob, mmce)) => vec![ok_row(job, strategy, xi, &set, oob, mmce, elapsed(start))],
                Err(e) => failed_rows(job, &[strategy], &e),
            }
        }
    }
}

fn check_config(config: &StudyConfig) -> Result<()> {
    validate_grid(&config.grid, true)?;
    if config.methods.is_empty() {
        return Err(Error::invalid("no methods requested"));
    }
    Ok(())
}

/// Runs every method at every budget on each of the setting's training sets
/// and scores the refit forests on the shared test set.
///
/// Rows come out ordered by run, budget, method and strategy.
pub fn run_artificial_study(setting: &SimSetting, config: &StudyConfig, master_seed: u64) -> Result<Vec<RunResult>> {
    check_config(config)?;
    let plan = make_setting(setting, master_seed)?;
    let test = plan.test_set()?;
    let name = setting.label.to_string();
    let select_root = RngStream::from_seed(master_seed).named("select").named(&name);
    let rows: Vec<Vec<RunResult>> = (0..setting.n_sim)
        .into_par_iter()
        .map(|run| {
            let train = plan.training_set(run)?;
            let mut out = Vec::new();
            for (b, &budget) in setting.budgets.iter().enumerate() {
                for &method in &config.methods {
                    let job = Job {
                        setting: &name,
                        run,
                        budget,
                        method,
                        stream: select_root.child(run as u64).child(b as u64).named(method.as_str()),
                    };
                    out.extend(run_job(&job, &train, &test, &plan.costs, config));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Seeded 2/3 – 1/3 train/test partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub splits: Vec<(Vec<usize>, Vec<usize>)>,
}

impl SplitPlan {
    pub fn new(n_obs: usize, n_sim: usize, stream: RngStream) -> Result<Self> {
        let n_train = (2.0 * n_obs as f64 / 3.0).round() as usize;
        if n_train < 2 || n_obs - n_train < 1 {
            return Err(Error::invalid(format!("{n_obs} rows are too few to split")));
        }
        let splits = (0..n_sim)
            .map(|run| {
                let mut idx: Vec<usize> = (0..n_obs).collect();
                idx.shuffle(&mut stream.child(run as u64).rng());
                let test = idx.split_off(n_train);
                idx.sort_unstable();
                let mut test = test;
                test.sort_unstable();
                (idx, test)
            })
            .collect();
        Ok(Self { splits })
    }
}

/// Where real-data costs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CostSource {
    Given(CostVector),
    /// One uniform `[0.1, 1]` draw per seed; each gets its own result table section.
    Seeds(Vec<u64>),
}

/// Repeated random splits of a real dataset; selection and refit on the
/// training part, MMCE on the held-out third.
pub fn run_realworld_study(
    data: &Dataset,
    dataset_id: &str,
    costs: &CostSource,
    budgets: &[f64],
    config: &StudyConfig,
    n_sim: usize,
    master_seed: u64,
) -> Result<Vec<RunResult>> {
    check_config(config)?;
    let vectors: Vec<(String, CostVector)> = match costs {
        CostSource::Given(c) => {
            if c.len() != data.n_features() {
                return Err(Error::invalid(format!("{} costs for {} features", c.len(), data.n_features())));
            }
            vec![(dataset_id.to_string(), c.clone())]
        }
        CostSource::Seeds(seeds) => seeds
            .iter()
            .map(|&s| {
                Ok((
                    format!("{dataset_id}:cost-seed={s}"),
                    uniform_costs(data.n_features(), &mut RngStream::from_seed(s).named("costs").rng())?,
                ))
            })
            .collect::<Result<_>>()?,
    };
    let master = RngStream::from_seed(master_seed);
    let plan = SplitPlan::new(data.n_obs(), n_sim, master.named("splits"))?;
    let mut rows = Vec::new();
    for (setting, cost_vec) in &vectors {
        let select_root = master.named("select").named(setting);
        let per_run: Vec<Vec<RunResult>> = plan
            .splits
            .par_iter()
            .enumerate()
            .map(|(run, (train_idx, test_idx))| {
                let train = data.subset_rows(train_idx)?;
                let test = data.subset_rows(test_idx)?;
                let mut out = Vec::new();
                for (b, &budget) in budgets.iter().enumerate() {
                    for &method in &config.methods {
                        let job = Job {
                            setting,
                            run,
                            budget,
                            method,
                            stream: select_root.child(run as u64).child(b as u64).named(method.as_str()),
                        };
                        out.extend(run_job(&job, &train, &test, cost_vec, config));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        rows.extend(per_run.into_iter().flatten());
    }
    Ok(rows)
}

/// Columns `setting,budget,method,strategy,run,xi,n_selected,cost,oob_error,test_mmce,seconds,status`.
pub fn write_results_csv<W: Write>(rows: &[RunResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record([
            "setting",
            "budget",
            "method",
            "strategy",
            "run",
            "xi",
            "n_selected",
            "cost",
            "oob_error",
            "test_mmce",
            "seconds",
            "status",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(reader: R) -> Result<Vec<RunResult>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize().enumerate() {
        let row: RunResult = rec.map_err(|e| Error::Parse { row: i + 2, column: 0, message: e.to_string() })?;
        rows.push(row);
    }
    Ok(rows)
}
