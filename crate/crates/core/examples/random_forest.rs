// Fit a forest from scratch, read its OOB error and score a test set.

use costfs::rf::{fit_forest, forest_oob_error, mmce, predict_forest, ForestConfig};
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::RngStream;

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 200, p: 10, p_rel: 5, blocks: 2, n_test: 1000, ..SimSetting::standard(SettingLabel::A) };
    let plan = make_setting(&setting, 11)?;
    let train = plan.training_set(0)?;
    let test = plan.test_set()?;

    let forest = fit_forest(&train, &ForestConfig::with_trees(200), RngStream::from_seed(1))?;
    let oob = forest_oob_error(&forest, &train)?;
    let test_error = mmce(&predict_forest(&forest, &test)?, test.labels())?;
    println!("{} trees, mtry {}: OOB error {oob:.3}, test MMCE {test_error:.3}", forest.num_trees(), forest.mtry());
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
