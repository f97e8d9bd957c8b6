// Repeated 2/3 - 1/3 splits of a CSV dataset with several seeded cost draws.

use costfs::harness::{run_realworld_study, summarize, write_summary_csv, CostSource, StudyConfig, StudyMethod};
use costfs::rf::ForestConfig;
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::tuning::MethodConfig;
use costfs::Dataset;

pub fn run_example() -> costfs::Result<()> {
    // stands in for a user-supplied file
    let dir = std::env::temp_dir().join(format!("costfs-realworld-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("spam_like.csv");
    let setting = SimSetting { n_obs: 150, p: 8, p_rel: 4, blocks: 2, ..SimSetting::standard(SettingLabel::A) };
    make_setting(&setting, 99)?.training_set(0)?.write_csv(std::fs::File::create(&path)?)?;

    let data = Dataset::read_csv(&path)?;
    let config = StudyConfig {
        methods: vec![StudyMethod::Auc, StudyMethod::Pfi],
        method: MethodConfig {
            filter: costfs::filters::FilterConfig { pfi_forest: ForestConfig::with_trees(50), ..Default::default() },
            refit: ForestConfig::with_trees(50),
            ..MethodConfig::default()
        },
        ..StudyConfig::default()
    };
    let rows = run_realworld_study(&data, "spam_like", &CostSource::Seeds(vec![1, 2, 3]), &[1.0, 2.0], &config, 3, 7)?;
    write_summary_csv(&summarize(&rows, 0.05)?, std::io::stdout())?;
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
