//! Feature acquisition costs with pay-once semantics and budget checks.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly positive per-feature costs, in dataset feature order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::invalid("empty cost vector"));
        }
        if let Some((j, c)) = costs.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::invalid(format!("cost of feature {j} is {c}, must be > 0")));
        }
        Ok(Self(costs))
    }

    pub fn uniform(p: usize, cost: f64) -> Result<Self> {
        Self::new(vec![cost; p])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, feature: usize) -> f64 {
        self.0[feature]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Every cost multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|c| c * factor).collect())
    }

    /// Reads a one-column CSV with header `cost`.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 1 || &headers[0] != "cost" {
            return Err(Error::invalid("cost CSV must have a single `cost` column"));
        }
        let mut costs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = rec.get(0).unwrap_or("");
            let c: f64 =
                field.parse().map_err(|_| Error::Parse { row: i + 2, column: 1, message: format!("`{field}` is not a number") })?;
            costs.push(c);
        }
        Self::new(costs)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["cost"])?;
        for c in &self.0 {
            w.write_record([c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Global cost limit `c_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget(f64);

impl Budget {
    pub fn new(c_max: f64) -> Result<Self> {
        if !(c_max.is_finite() && c_max > 0.0) {
            return Err(Error::invalid(format!("budget {c_max} must be > 0")));
        }
        Ok(Self(c_max))
    }

    pub fn c_max(&self) -> f64 {
        self.0
    }

    /// Inclusive check `cost <= c_max`.
    pub fn admits(&self, cost: f64) -> bool {
        cost <= self.0
    }
}

/// A set of distinct feature indices and what they cost together.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureSet {
    indices: BTreeSet<usize>,
    total_cost: f64,
}

impl FeatureSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>, costs: &CostVector) -> Result<Self> {
        let mut s = Self::empty();
        s.extend(indices, costs)?;
        Ok(s)
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.indices.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, feature: usize) -> bool {
        self.indices.contains(&feature)
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// Adds features, paying only for ones not already present.
    pub fn extend(&mut self, indices: impl IntoIterator<Item = usize>, costs: &CostVector) -> Result<()> {
        for j in indices {
            check_index(j, costs)?;
            self.indices.insert(j);
        }
        // summed in index order so the total matches `feature_set_cost` bit for bit
        self.total_cost = self.indices.iter().map(|&j| costs.get(j)).sum();
        Ok(())
    }
}

fn check_index(j: usize, costs: &CostVector) -> Result<()> {
    if j >= costs.len() {
        return Err(Error::invalid(format!("feature index {j} out of range for {} costs", costs.len())));
    }
    Ok(())
}

/// Cost of the distinct features in `indices`.
pub fn feature_set_cost(indices: &[usize], costs: &CostVector) -> Result<f64> {
    let mut distinct = BTreeSet::new();
    for &j in indices {
        check_index(j, costs)?;
        distinct.insert(j);
    }
    Ok(distinct.iter().map(|&j| costs.get(j)).sum())
}

/// What adding `candidate` to `current` would cost on top of what is already paid.
///
/// Out-of-range candidate indices are ignored; callers validate indices when
/// building feature sets.
pub fn marginal_cost(candidate: &[usize], current: &FeatureSet, costs: &CostVector) -> f64 {
    let mut fresh: Vec<usize> = candidate.iter().copied().filter(|j| *j < costs.len() && !current.contains(*j)).collect();
    fresh.sort_unstable();
    fresh.dedup();
    fresh.iter().map(|&j| costs.get(j)).sum()
}

/// Cost of `current ∪ candidate`, summed in index order.
pub fn union_cost(candidate: &[usize], current: &FeatureSet, costs: &CostVector) -> f64 {
    let mut fresh: Vec<usize> = candidate.iter().copied().filter(|j| *j < costs.len() && !current.contains(*j)).collect();
    if fresh.is_empty() {
        return current.total_cost();
    }
    fresh.sort_unstable();
    fresh.dedup();
    // merge with the already-paid indices so the summation order is ascending
    let mut total = 0.0;
    let mut paid = current.indices().iter().peekable();
    for j in fresh {
        while let Some(&&k) = paid.peek() {
            if k > j {
                break;
            }
            total += costs.get(k);
            paid.next();
        }
        total += costs.get(j);
    }
    for &k in paid {
        total += costs.get(k);
    }
    total
}

/// Whether `current ∪ candidate` stays within the budget.
///
/// Evaluated as the union's cost rather than `total + marginal` so that the
/// verdict agrees exactly with recomputing the cost of the final set.
pub fn fits_budget(candidate: &[usize], current: &FeatureSet, costs: &CostVector, budget: Budget) -> bool {
    budget.admits(union_cost(candidate, current, costs))
}
