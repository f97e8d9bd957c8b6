// Tune the cost exponent over a grid by refit OOB error, for each method.

use costfs::filters::FilterConfig;
use costfs::rf::ForestConfig;
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::sts::StsConfig;
use costfs::tuning::{default_grid, grid_tune_with_test, MethodConfig};
use costfs::{Budget, Method, RngStream};

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 200, p: 16, p_rel: 8, blocks: 4, n_test: 1000, ..SimSetting::standard(SettingLabel::D) };
    let plan = make_setting(&setting, 13)?;
    let train = plan.training_set(0)?;
    let test = plan.test_set()?;
    let config = MethodConfig {
        sts: StsConfig { trees_per_level: 60, ..StsConfig::default() },
        filter: FilterConfig { pfi_forest: ForestConfig::with_trees(100), ..FilterConfig::default() },
        refit: ForestConfig::with_trees(100),
    };
    let budget = Budget::new(2.0)?;

    for method in [Method::Sts, Method::Auc, Method::Pfi] {
        let record =
            grid_tune_with_test(method, &train, &plan.costs, budget, &default_grid(), &config, RngStream::from_seed(6), Some(&test))?;
        println!("{method}: best xi {}", record.best_xi());
        record.write_csv(std::io::stdout())?;
    }
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
