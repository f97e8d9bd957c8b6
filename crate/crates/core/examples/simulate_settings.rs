// Draw the four factorial settings and run a small artificial study on one.

use costfs::filters::FilterConfig;
use costfs::harness::{run_artificial_study, write_results_csv, StudyConfig, StudyMethod};
use costfs::rf::ForestConfig;
use costfs::simgen::{make_setting, Covariance, SettingLabel, SimSetting};
use costfs::sts::StsConfig;
use costfs::tuning::MethodConfig;

pub fn run_example() -> costfs::Result<()> {
    for label in [SettingLabel::A, SettingLabel::B, SettingLabel::C, SettingLabel::D] {
        let setting = SimSetting { n_obs: 100, p: 12, p_rel: 6, blocks: 3, n_sim: 2, n_test: 500, budgets: vec![1.0, 3.0], label };
        let plan = make_setting(&setting, 2024)?;
        let kind = match &plan.covariance {
            Covariance::Identity(_) => "identity",
            Covariance::Block(_) => "block",
        };
        let cost: Vec<String> = plan.costs.as_slice().iter().take(4).map(|c| format!("{c:.2}")).collect();
        println!("{label}: {kind} covariance, first costs {}", cost.join(" "));
    }

    let setting =
        SimSetting { n_obs: 100, p: 12, p_rel: 6, blocks: 3, n_sim: 2, n_test: 500, budgets: vec![1.0, 3.0], label: SettingLabel::C };
    let config = StudyConfig {
        methods: vec![StudyMethod::Sts, StudyMethod::Auc, StudyMethod::Fs1],
        method: MethodConfig {
            sts: StsConfig { trees_per_level: 30, ..StsConfig::default() },
            filter: FilterConfig { pfi_forest: ForestConfig::with_trees(50), ..FilterConfig::default() },
            refit: ForestConfig::with_trees(50),
        },
        fs: costfs::forward::FsConfig { forest: ForestConfig::with_trees(30) },
        ..StudyConfig::default()
    };
    let rows = run_artificial_study(&setting, &config, 2024)?;
    write_results_csv(&rows, std::io::stdout())
}

fn main() -> costfs::Result<()> {
    run_example()
}
