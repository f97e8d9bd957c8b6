// Scaled-down Monte Carlo comparison of STS, AUC and pFI on a correlated
// setting (C) and an independent one (A).
//
// `cargo run --release --example desk_study -- [n_sim] [seed]`; the full
// 30-run comparison takes a few minutes on one core.

use costfs::filters::FilterConfig;
use costfs::harness::{rank_methods, run_artificial_study, summarize, RunResult, StudyConfig, StudyMethod};
use costfs::rf::ForestConfig;
use costfs::simgen::{SettingLabel, SimSetting};
use costfs::sts::StsConfig;
use costfs::tuning::{default_grid, MethodConfig};

pub const DESK_SEED: u64 = 2021;
pub const DESK_BUDGET: f64 = 5.0;

pub fn desk_setting(label: SettingLabel, n_sim: usize) -> SimSetting {
    SimSetting { label, budgets: vec![DESK_BUDGET], n_obs: 400, p: 60, p_rel: 30, blocks: 6, n_sim, n_test: 2000 }
}

/// 300 trees everywhere: refit, pFI and each STS depth level.
pub fn desk_config() -> StudyConfig {
    StudyConfig {
        methods: vec![StudyMethod::Sts, StudyMethod::Auc, StudyMethod::Pfi],
        grid: default_grid(),
        method: MethodConfig {
            sts: StsConfig { trees_per_level: 300, ..StsConfig::default() },
            filter: FilterConfig { pfi_forest: ForestConfig::with_trees(300), ..FilterConfig::default() },
            refit: ForestConfig::with_trees(300),
        },
        ..StudyConfig::default()
    }
}

pub fn run_desk_study(label: SettingLabel, n_sim: usize, seed: u64) -> costfs::Result<Vec<RunResult>> {
    run_artificial_study(&desk_setting(label, n_sim), &desk_config(), seed)
}

pub fn report(rows: &[RunResult]) -> costfs::Result<()> {
    for s in summarize(rows, 0.05)? {
        println!("  {:<4} {:<14} mean {:.4} se {:.4}", s.method, s.strategy, s.mean_mmce.unwrap_or(f64::NAN), s.mc_se.unwrap_or(f64::NAN));
    }
    for r in rank_methods(rows)? {
        println!("  rank {:<20} {:.2}", r.method, r.mean_rank);
    }
    Ok(())
}

pub fn run(n_sim: usize, seed: u64) -> costfs::Result<()> {
    for label in [SettingLabel::C, SettingLabel::A] {
        let start = std::time::Instant::now();
        let rows = run_desk_study(label, n_sim, seed)?;
        println!("setting {label}: {} rows in {:.1}s", rows.len(), start.elapsed().as_secs_f64());
        report(&rows)?;
    }
    Ok(())
}

fn main() -> costfs::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_sim = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(DESK_SEED);
    run(n_sim, seed)
}
