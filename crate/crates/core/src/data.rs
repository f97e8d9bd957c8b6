//! Binary-labelled numeric datasets and their CSV form.
//!
//! The CSV layout is a header row, numeric feature columns, and exactly one
//! column named `label`. Labels are either `0`/`1` or two distinct strings,
//! in which case the lexicographically smaller one maps to class 0.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    n_obs: usize,
    p: usize,
}

impl Dataset {
    /// Builds a dataset from row-major values.
    pub fn new(values: Vec<f64>, labels: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        let p = feature_names.len();
        let n_obs = labels.len();
        if p == 0 {
            return Err(Error::invalid("dataset needs at least one feature"));
        }
        if n_obs < 2 {
            return Err(Error::invalid("dataset needs at least two observations"));
        }
        if values.len() != n_obs * p {
            return Err(Error::invalid(format!("expected {} values for {n_obs}x{p}, got {}", n_obs * p, values.len())));
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::invalid(format!("label {l} is not 0 or 1")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at row {}, feature {}", i / p, i % p)));
        }
        Ok(Self { values, labels, feature_names, n_obs, p })
    }

    /// Builds a dataset from rows, naming features `x1..xp`.
    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<u8>) -> Result<Self> {
        let p = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::invalid("ragged rows"));
        }
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        Self::new(rows.concat(), labels, names)
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn n_features(&self) -> usize {
        self.p
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, row: usize) -> u8 {
        self.labels[row]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    #[inline]
    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.values[row * self.p + feature]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.p..(row + 1) * self.p]
    }

    pub fn column(&self, feature: usize) -> Vec<f64> {
        (0..self.n_obs).map(|r| self.value(r, feature)).collect()
    }

    /// Class counts `[n0, n1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.n_obs - ones, ones]
    }

    /// Majority class, ties to 0.
    pub fn majority_class(&self) -> u8 {
        let [n0, n1] = self.class_counts();
        u8::from(n1 > n0)
    }

    /// New dataset holding the given rows, in order.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * self.p);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            if r >= self.n_obs {
                return Err(Error::invalid(format!("row {r} out of range")));
            }
            values.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        Self::new(values, labels, self.feature_names.clone())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let label_col = headers.iter().position(|h| h == "label").ok_or_else(|| Error::invalid("no `label` column in header"))?;
        let feature_names: Vec<String> = headers.iter().enumerate().filter(|&(i, _)| i != label_col).map(|(_, h)| h.to_string()).collect();

        let mut values = Vec::new();
        let mut raw_labels = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            // header is line 1
            let line = i + 2;
            let rec = rec?;
            if rec.len() != headers.len() {
                return Err(Error::Parse {
                    row: line,
                    column: rec.len().min(headers.len()) + 1,
                    message: format!("expected {} fields, found {}", headers.len(), rec.len()),
                });
            }
            for (c, field) in rec.iter().enumerate() {
                if c == label_col {
                    raw_labels.push(field.to_string());
                    continue;
                }
                let v: f64 =
                    field.parse().map_err(|_| Error::Parse { row: line, column: c + 1, message: format!("`{field}` is not a number") })?;
                if !v.is_finite() {
                    return Err(Error::Parse { row: line, column: c + 1, message: "non-finite value".into() });
                }
                values.push(v);
            }
        }
        let labels = coerce_labels(&raw_labels)?;
        Self::new(values, labels, feature_names)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        header.push("label");
        w.write_record(&header)?;
        for r in 0..self.n_obs {
            let mut rec: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            rec.push(self.labels[r].to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn coerce_labels(raw: &[String]) -> Result<Vec<u8>> {
    let mut distinct: Vec<&str> = raw.iter().map(String::as_str).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() > 2 {
        return Err(Error::invalid(format!("label column has {} distinct values, expected 2", distinct.len())));
    }
    let numeric = distinct.iter().all(|s| *s == "0" || *s == "1");
    Ok(raw.iter().map(|s| if numeric { u8::from(s == "1") } else { u8::from(s.as_str() != distinct[0]) }).collect())
}
