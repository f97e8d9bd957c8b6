// Cost-sensitive forward selection, counting every forest it fits.

use costfs::forward::{fs_select_counted, write_trajectory_csv, FitCounter, FsConfig};
use costfs::rf::ForestConfig;
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::{Budget, RngStream};

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 150, p: 8, p_rel: 4, blocks: 2, ..SimSetting::standard(SettingLabel::B) };
    let plan = make_setting(&setting, 4)?;
    let train = plan.training_set(0)?;
    let config = FsConfig { forest: ForestConfig::with_trees(50) };

    for xi in [0.0, 1.0] {
        let counter = FitCounter::default();
        let outcome = fs_select_counted(&train, &plan.costs, Budget::new(2.0)?, xi, &config, RngStream::from_seed(2), &counter)?;
        println!(
            "xi = {xi}: {:?} after {} candidate and {} baseline fits",
            outcome.result.features.to_vec(),
            outcome.candidate_fits,
            outcome.baseline_fits
        );
        write_trajectory_csv(&outcome.trajectory, std::io::stdout())?;
    }
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
