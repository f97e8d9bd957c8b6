// Permutation importance from a forest's OOB rows, used as a cost-aware filter.

use costfs::filters::{filter_select, permutation_importance, FilterConfig, FilterKind};
use costfs::rf::{fit_forest, ForestConfig};
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::{Budget, RngStream};

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 200, p: 10, p_rel: 5, blocks: 2, ..SimSetting::standard(SettingLabel::C) };
    let plan = make_setting(&setting, 21)?;
    let train = plan.training_set(0)?;
    let stream = RngStream::from_seed(9);

    let forest = fit_forest(&train, &ForestConfig::with_trees(150), stream.child(0))?;
    let importance = permutation_importance(&forest, &train, 5, stream.child(1))?;
    for (j, v) in importance.iter().enumerate() {
        println!("{:>4} beta {:+.3} cost {:.3} importance {v:.4}", train.feature_names()[j], plan.effects.beta[j], plan.costs.get(j));
    }

    let config = FilterConfig { pfi_forest: ForestConfig::with_trees(150), ..FilterConfig::default() };
    let selection = filter_select(&train, &plan.costs, Budget::new(1.0)?, 1.0, FilterKind::Pfi, &config, stream.child(2))?;
    println!("pFI selection at budget 1: {:?}", selection.features.to_vec());
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
