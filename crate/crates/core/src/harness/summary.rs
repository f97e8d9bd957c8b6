use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::study::RunResult;
use crate::error::{Error, Result};

/// Standard-normal quantile.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile level {p} outside (0, 1)")));
    }
    Ok(Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub mean_mmce: f64,
    pub mc_se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub alpha: f64,
    pub n_sim: usize,
    pub q: f64,
}

/// Mean, Monte Carlo standard error `sqrt(var / n)` with the unbiased
/// variance, and the normal `1 − α` confidence interval.
pub fn monte_carlo_summary(mmces: &[f64], alpha: f64) -> Result<MonteCarloSummary> {
    if mmces.len() < 2 {
        return Err(Error::invalid("Monte Carlo summary needs at least two values"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha {alpha} outside (0, 1)")));
    }
    let n = mmces.len() as f64;
    let mean = mmces.iter().sum::<f64>() / n;
    let var = mmces.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let q = normal_quantile(1.0 - alpha / 2.0)?;
    Ok(MonteCarloSummary { mean_mmce: mean, mc_se: se, ci_low: mean - q * se, ci_high: mean + q * se, alpha, n_sim: mmces.len(), q })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub setting: String,
    pub budget: f64,
    pub method: String,
    pub strategy: String,
    pub n_ok: usize,
    pub n_failed: usize,
    pub mean_mmce: Option<f64>,
    pub mc_se: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub alpha: f64,
    /// Whether this row's interval overlaps that of the lowest-mean row in
    /// the same setting and budget.
    pub overlaps_best: Option<bool>,
}

type GroupKey = (String, u64, String, String);

/// One summary row per (setting, budget, method, strategy), sorted by that key.
pub fn summarize(rows: &[RunResult], alpha: f64) -> Result<Vec<SummaryRow>> {
    // positive budgets order like their bit patterns
    let mut groups: BTreeMap<GroupKey, (Vec<f64>, usize)> = BTreeMap::new();
    for r in rows {
        let key = (r.setting.clone(), r.budget.to_bits(), r.method.clone(), r.strategy.as_str().to_string());
        let g = groups.entry(key).or_default();
        match (r.is_ok(), r.test_mmce) {
            (true, Some(m)) => g.0.push(m),
            _ => g.1 += 1,
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((setting, budget, method, strategy), (values, n_failed)) in groups {
        let summary = if values.len() >= 2 { Some(monte_carlo_summary(&values, alpha)?) } else { None };
        let mean = summary.map(|s| s.mean_mmce).or_else(|| values.first().copied());
        out.push(SummaryRow {
            setting,
            budget: f64::from_bits(budget),
            method,
            strategy,
            n_ok: values.len(),
            n_failed,
            mean_mmce: mean,
            mc_se: summary.map(|s| s.mc_se),
            ci_low: summary.map(|s| s.ci_low),
            ci_high: summary.map(|s| s.ci_high),
            alpha,
            overlaps_best: None,
        });
    }
    let mut cells: BTreeMap<(String, u64), Vec<usize>> = BTreeMap::new();
    for (i, r) in out.iter().enumerate() {
        cells.entry((r.setting.clone(), r.budget.to_bits())).or_default().push(i);
    }
    for members in cells.values() {
        let best = members
            .iter()
            .copied()
            .filter(|&i| out[i].mean_mmce.is_some())
            .min_by(|&a, &b| out[a].mean_mmce.unwrap().total_cmp(&out[b].mean_mmce.unwrap()));
        let Some(best) = best else { continue };
        let (Some(bl), Some(bh)) = (out[best].ci_low, out[best].ci_high) else { continue };
        for &i in members {
            if let (Some(l), Some(h)) = (out[i].ci_low, out[i].ci_high) {
                out[i].overlaps_best = Some(l <= bh && bl <= h);
            }
        }
    }
    Ok(out)
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanRank {
    pub method: String,
    pub mean_rank: f64,
    pub cells: usize,
}

/// Ranks methods within each cell by mean (1 = lowest, ties share the
/// average rank) and averages the ranks per method across cells.
///
/// Entries are `(cell, method, mean)`; every cell must rate every method.
pub fn rank_means(entries: &[(String, String, f64)]) -> Result<Vec<MeanRank>> {
    let methods: BTreeSet<&str> = entries.iter().map(|e| e.1.as_str()).collect();
    let mut cells: BTreeMap<&str, BTreeMap<&str, f64>> = BTreeMap::new();
    for (cell, method, mean) in entries {
        if cells.entry(cell).or_default().insert(method, *mean).is_some() {
            return Err(Error::invalid(format!("method `{method}` appears twice in cell `{cell}`")));
        }
    }
    let mut totals: BTreeMap<&str, f64> = methods.iter().map(|m| (*m, 0.0)).collect();
    for (cell, means) in &cells {
        if means.len() != methods.len() {
            let missing: Vec<&str> = methods.iter().copied().filter(|m| !means.contains_key(m)).collect();
            return Err(Error::invalid(format!("cell `{cell}` lacks methods {missing:?}")));
        }
        for (m, v) in means {
            let below = means.values().filter(|o| **o < *v).count() as f64;
            let equal = means.values().filter(|o| **o == *v).count() as f64;
            *totals.get_mut(m).unwrap() += below + (equal + 1.0) / 2.0;
        }
    }
    let n_cells = cells.len();
    Ok(totals.into_iter().map(|(m, t)| MeanRank { method: m.to_string(), mean_rank: t / n_cells as f64, cells: n_cells }).collect())
}

/// Mean ranks of `method/strategy` combinations over (setting, budget) cells,
/// using the mean test MMCE of successful runs.
pub fn rank_methods(rows: &[RunResult]) -> Result<Vec<MeanRank>> {
    let mut sums: BTreeMap<(String, String), (f64, usize)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.is_ok()) {
        let Some(m) = r.test_mmce else { continue };
        let cell = format!("{}|{}", r.setting, r.budget);
        let label = format!("{}/{}", r.method, r.strategy.as_str());
        let e = sums.entry((cell, label)).or_default();
        e.0 += m;
        e.1 += 1;
    }
    let entries: Vec<(String, String, f64)> = sums.into_iter().map(|((c, m), (s, n))| (c, m, s / n as f64)).collect();
    rank_means(&entries)
}

pub fn write_ranks_csv<W: Write>(ranks: &[MeanRank], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in ranks {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance() {
        let s = monte_carlo_summary(&[0.3; 5], 0.05).unwrap();
        assert!((s.mean_mmce - 0.3).abs() < 1e-15);
        assert_eq!(s.mc_se, 0.0);
        assert_eq!(s.ci_low, s.ci_high);
    }

    #[test]
    fn two_values() {
        let s = monte_carlo_summary(&[0.2, 0.4], 0.05).unwrap();
        assert!((s.mean_mmce - 0.3).abs() < 1e-12);
        assert!((s.mc_se - 0.1).abs() < 1e-12);
        assert!((s.q - 1.959963984540054).abs() < 1e-9);
        assert!((s.ci_low - (0.3 - 0.1959963984540054)).abs() < 1e-12);
        assert!((s.ci_high - (0.3 + 0.1959963984540054)).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert!(monte_carlo_summary(&[0.1], 0.05).is_err());
        assert!(monte_carlo_summary(&[0.1, 0.2], 0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }

    fn e(cell: &str, m: &str, v: f64) -> (String, String, f64) {
        (cell.into(), m.into(), v)
    }

    #[test]
    fn ranks() {
        let r = rank_means(&[e("c", "a", 0.2), e("c", "b", 0.3), e("c", "z", 0.4)]).unwrap();
        assert_eq!(r.iter().map(|x| x.mean_rank).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
        let tie = rank_means(&[e("c", "a", 0.3), e("c", "b", 0.3)]).unwrap();
        assert_eq!(tie.iter().map(|x| x.mean_rank).collect::<Vec<_>>(), vec![1.5, 1.5]);
        let flip = rank_means(&[e("c1", "a", 0.1), e("c1", "b", 0.2), e("c2", "a", 0.3), e("c2", "b", 0.2)]).unwrap();
        assert_eq!(flip.iter().map(|x| x.mean_rank).collect::<Vec<_>>(), vec![1.5, 1.5]);
        assert!(rank_means(&[e("c1", "a", 0.1), e("c1", "b", 0.2), e("c2", "a", 0.3)]).is_err());
    }
}
