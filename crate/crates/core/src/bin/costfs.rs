use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use costfs::filters::FillRule;
use costfs::forward::{fs_select, FsConfig};
use costfs::harness::{
    rank_methods, read_results_csv, run_artificial_study, run_realworld_study, summarize, write_ranks_csv, write_results_csv,
    write_summary_csv, CostSource, StudyConfig, StudyMethod,
};
use costfs::rf::ForestConfig;
use costfs::selection::refit_final;
use costfs::simgen::{SettingLabel, SimSetting};
use costfs::tuning::{default_grid, grid_tune, MethodConfig};
use costfs::{Budget, CostVector, Dataset, Error, Method, Result, RngStream};

#[derive(Parser)]
#[command(name = "costfs", version, about = "Cost-constrained feature selection for random forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select features on one dataset and write the result as JSON.
    Select(SelectArgs),
    /// Run an artificial simulation study.
    Simulate(SimulateArgs),
    /// Run repeated train/test splits on a real dataset.
    Realworld(RealworldArgs),
    /// Monte Carlo summaries of a result table.
    Summarize(SummarizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum XiArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Tune,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auc,
    Pfi,
    Sts,
    Fs,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auc => Method::Auc,
            MethodArg::Pfi => Method::Pfi,
            MethodArg::Sts => Method::Sts,
            MethodArg::Fs => Method::Fs,
        }
    }
}

#[derive(Args)]
struct ForestArgs {
    /// Trees in every forest (refit, pFI, forward selection).
    #[arg(long)]
    num_trees: Option<usize>,
    /// Trees per STS depth level.
    #[arg(long)]
    base_trees: Option<usize>,
    /// Stop the filter fill at the first feature that does not fit.
    #[arg(long)]
    stop_at_misfit: bool,
}

impl ForestArgs {
    fn method_config(&self) -> MethodConfig {
        let mut cfg = MethodConfig::default();
        if let Some(n) = self.num_trees {
            cfg.refit = ForestConfig::with_trees(n);
            cfg.filter.pfi_forest = ForestConfig::with_trees(n);
        }
        if let Some(n) = self.base_trees {
            cfg.sts.trees_per_level = n;
        }
        if self.stop_at_misfit {
            cfg.filter.fill = FillRule::StopAtFirstMisfit;
        }
        cfg
    }

    fn fs_config(&self) -> FsConfig {
        match self.num_trees {
            Some(n) => FsConfig { forest: ForestConfig::with_trees(n) },
            None => FsConfig::default(),
        }
    }

    fn study_config(&self, methods: Option<&[String]>, timing: bool) -> Result<StudyConfig> {
        let methods = match methods {
            Some(list) => list.iter().map(|m| m.parse()).collect::<Result<Vec<StudyMethod>>>()?,
            None => StudyMethod::ALL.to_vec(),
        };
        Ok(StudyConfig { methods, grid: default_grid(), method: self.method_config(), fs: self.fs_config(), timing })
    }
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    costs: PathBuf,
    #[arg(long)]
    budget: f64,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum)]
    xi: XiArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    forest: ForestArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_setting)]
    setting: SettingLabel,
    #[arg(long)]
    nsim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    budgets: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of sts,auc,pfi,fs0,fs1.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    p_rel: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    n_obs: Option<usize>,
    #[arg(long)]
    n_test: Option<usize>,
    /// Record wall time per row (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    forest: ForestArgs,
}

#[derive(Args)]
struct RealworldArgs {
    #[arg(long)]
    data: PathBuf,
    /// One or more seeds for uniform cost draws.
    #[arg(long, value_delimiter = ',', conflicts_with = "costs", required_unless_present = "costs")]
    cost_seed: Option<Vec<u64>>,
    #[arg(long)]
    costs: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    nsim: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    forest: ForestArgs,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write per-method mean ranks.
    #[arg(long)]
    ranks_out: Option<PathBuf>,
}

fn parse_setting(s: &str) -> std::result::Result<SettingLabel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Serialize)]
struct SelectOutput {
    method: String,
    strategy: String,
    xi: f64,
    budget: f64,
    features: Vec<usize>,
    feature_names: Vec<String>,
    n_selected: usize,
    cost: f64,
    oob_error: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn select(args: &SelectArgs) -> Result<()> {
    let data = Dataset::read_csv(&args.data)?;
    let costs = CostVector::read_csv(&args.costs)?;
    if costs.len() != data.n_features() {
        return Err(Error::InvalidInput(format!("{} costs for {} features", costs.len(), data.n_features())));
    }
    let budget = Budget::new(args.budget)?;
    let method = Method::from(args.method);
    let config = args.forest.method_config();
    let stream = RngStream::from_seed(args.seed);
    let (strategy, selection, oob_error) = match (method, args.xi) {
        (Method::Fs, XiArg::Tune) => return Err(Error::InvalidInput("forward selection supports only xi 0 or 1".into())),
        (Method::Fs, xi) => {
            let xi = if matches!(xi, XiArg::Zero) { 0.0 } else { 1.0 };
            let outcome = fs_select(&data, &costs, budget, xi, &args.forest.fs_config(), stream.child(0))?;
            let model = refit_final(&data, &outcome.result.features, &config.refit, stream.child(1))?;
            (xi_strategy(xi), outcome.result, model.oob_error(&data)?)
        }
        (_, XiArg::Tune) => {
            let record = grid_tune(method, &data, &costs, budget, &default_grid(), &config, stream)?;
            let best = record.best_entry();
            ("tuned", best.selection.clone(), best.oob_error)
        }
        (_, xi) => {
            let xi = if matches!(xi, XiArg::Zero) { 0.0 } else { 1.0 };
            let record = grid_tune(method, &data, &costs, budget, &[xi], &config, stream)?;
            let entry = record.best_entry();
            (xi_strategy(xi), entry.selection.clone(), entry.oob_error)
        }
    };
    let features = selection.features.to_vec();
    let out = SelectOutput {
        method: method.to_string(),
        strategy: strategy.to_string(),
        xi: selection.xi,
        budget: args.budget,
        feature_names: features.iter().map(|&j| data.feature_names()[j].clone()).collect(),
        n_selected: features.len(),
        features,
        cost: selection.features.total_cost(),
        oob_error,
    };
    let mut w = create(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &out)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn xi_strategy(xi: f64) -> &'static str {
    if xi == 0.0 {
        "cost_agnostic"
    } else {
        "simple_bcr"
    }
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut setting = SimSetting::standard(args.setting);
    if let Some(n) = args.nsim {
        setting.n_sim = n;
    }
    if let Some(b) = &args.budgets {
        setting.budgets = b.clone();
    }
    if let Some(p) = args.p {
        setting.p = p;
    }
    if let Some(r) = args.p_rel {
        setting.p_rel = r;
    }
    if let Some(b) = args.blocks {
        setting.blocks = b;
    }
    if let Some(n) = args.n_obs {
        setting.n_obs = n;
    }
    if let Some(n) = args.n_test {
        setting.n_test = n;
    }
    let config = args.forest.study_config(args.methods.as_deref(), args.timing)?;
    let rows = run_artificial_study(&setting, &config, args.seed)?;
    write_results_csv(&rows, create(&args.out)?)
}

fn realworld(args: &RealworldArgs) -> Result<()> {
    let data = Dataset::read_csv(&args.data)?;
    let source = match (&args.costs, &args.cost_seed) {
        (Some(path), _) => CostSource::Given(CostVector::read_csv(path)?),
        (None, Some(seeds)) => CostSource::Seeds(seeds.clone()),
        (None, None) => return Err(Error::InvalidInput("either --costs or --cost-seed is required".into())),
    };
    let id = args.data.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    let config = args.forest.study_config(args.methods.as_deref(), args.timing)?;
    let rows = run_realworld_study(&data, id, &source, &args.budgets, &config, args.nsim, args.seed)?;
    write_results_csv(&rows, create(&args.out)?)
}

fn summarize_cmd(args: &SummarizeArgs) -> Result<()> {
    let rows = read_results_csv(open(&args.input)?)?;
    let summary = summarize(&rows, args.alpha)?;
    write_summary_csv(&summary, create(&args.out)?)?;
    if let Some(path) = &args.ranks_out {
        write_ranks_csv(&rank_methods(&rows)?, create(path)?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Select(a) => select(a),
        Command::Simulate(a) => simulate(a),
        Command::Realworld(a) => realworld(a),
        Command::Summarize(a) => summarize_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
