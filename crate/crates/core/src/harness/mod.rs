//! Study orchestration: artificial and real-data studies, Monte Carlo
//! summaries and mean-rank tables, with CSV/JSON reporting.

mod study;
mod summary;

pub use study::{
    read_results_csv, run_artificial_study, run_realworld_study, write_results_csv, CostSource, RunResult, SplitPlan, Strategy,
    StudyConfig, StudyMethod,
};
pub use summary::{
    monte_carlo_summary, normal_quantile, rank_means, rank_methods, summarize, write_ranks_csv, write_summary_csv, MeanRank,
    MonteCarloSummary, SummaryRow,
};
