// Rank features by cost-weighted AUC and fill the budget top-down.

use costfs::filters::{filter_scores, topdown_fill, FeatureScoreTable, FillRule, FilterConfig, FilterKind};
use costfs::simgen::{make_setting, SettingLabel, SimSetting};
use costfs::{Budget, RngStream};

pub fn run_example() -> costfs::Result<()> {
    let setting = SimSetting { n_obs: 300, p: 12, p_rel: 6, blocks: 3, ..SimSetting::standard(SettingLabel::A) };
    let plan = make_setting(&setting, 8)?;
    let train = plan.training_set(0)?;
    let budget = Budget::new(1.5)?;

    let raw = filter_scores(&train, FilterKind::Auc, &FilterConfig::default(), RngStream::from_seed(0))?;
    for xi in [0.0, 1.0] {
        let table = FeatureScoreTable::new(&raw, &plan.costs, xi)?;
        let selected = topdown_fill(&table, &plan.costs, budget, FillRule::SkipAndContinue)?;
        println!("xi = {xi}: {:?}, cost {:.3}", selected.to_vec(), selected.total_cost());
        if xi == 1.0 {
            table.write_csv(std::io::stdout(), train.feature_names(), &selected)?;
        }
    }
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
