// Shallow Tree Selection under a budget, with its step-by-step trajectory.

use costfs::rf::ForestConfig;
use costfs::selection::refit_final;
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::sts::{sts_select, StsConfig};
use costfs::{Budget, RngStream};

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 200, p: 20, p_rel: 10, blocks: 4, n_test: 1000, ..SimSetting::standard(SettingLabel::C) };
    let plan = make_setting(&setting, 5)?;
    let train = plan.training_set(0)?;
    let test = plan.test_set()?;
    let budget = Budget::new(2.0)?;
    let config = StsConfig { trees_per_level: 100, ..StsConfig::default() };

    let stream = RngStream::from_seed(3);
    let (selection, trajectory) = sts_select(&train, &plan.costs, budget, 1.0, &config, stream.child(0))?;
    println!("selected {:?} for cost {:.3} of {}", selection.features.to_vec(), selection.features.total_cost(), budget.c_max());
    trajectory.write_csv(std::io::stdout())?;

    let model = refit_final(&train, &selection.features, &ForestConfig::with_trees(200), stream.child(1))?;
    println!("refit OOB {:.3}, test MMCE {:.3}", model.oob_error(&train)?, model.test_mmce(&test)?);
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
