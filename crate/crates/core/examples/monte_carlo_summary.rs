// Monte Carlo standard errors, confidence intervals and mean ranks.

use costfs::harness::{monte_carlo_summary, rank_means};

pub fn run_example() -> costfs::Result<()> {
    let s = monte_carlo_summary(&[0.2, 0.4], 0.05)?;
    println!("mean {:.3}, SE {:.3}, CI [{:.3}, {:.3}]", s.mean_mmce, s.mc_se, s.ci_low, s.ci_high);

    let cells = [
        ("A/1", "sts", 0.31),
        ("A/1", "auc", 0.28),
        ("A/1", "pfi", 0.30),
        ("C/1", "sts", 0.22),
        ("C/1", "auc", 0.27),
        ("C/1", "pfi", 0.27),
    ];
    let entries: Vec<(String, String, f64)> = cells.iter().map(|&(c, m, v)| (c.to_string(), m.to_string(), v)).collect();
    for r in rank_means(&entries)? {
        println!("{:<4} mean rank {:.2} over {} cells", r.method, r.mean_rank, r.cells);
    }
    Ok(())
}

fn main() -> costfs::Result<()> {
    run_example()
}
