use std::cmp::Ordering;

use rand::seq::index;
use rand::Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Bootstrap bag and its out-of-bag complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bootstrap {
    /// `n` indices drawn with replacement, in draw order.
    pub bag: Vec<usize>,
    /// Sorted indices never drawn.
    pub oob: Vec<usize>,
}

/// Draws `n` row indices uniformly with replacement.
pub fn bootstrap_sample(n: usize, rng: &mut SimRng) -> Result<Bootstrap> {
    if n == 0 {
        return Err(Error::invalid("bootstrap of zero rows"));
    }
    let bag: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut drawn = vec![false; n];
    for &i in &bag {
        drawn[i] = true;
    }
    let oob = (0..n).filter(|&i| !drawn[i]).collect();
    Ok(Bootstrap { bag, oob })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Leaf {
        class: u8,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A fitted classification tree with its bootstrap bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    bag: Vec<usize>,
    oob: Vec<usize>,
    used_features: Vec<usize>,
    max_depth: Option<usize>,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn bag(&self) -> &[usize] {
        &self.bag
    }

    pub fn oob(&self) -> &[usize] {
        &self.oob
    }

    /// Sorted distinct features referenced by split nodes.
    pub fn used_features(&self) -> &[usize] {
        &self.used_features
    }

    pub fn uses_feature(&self, feature: usize) -> bool {
        self.used_features.binary_search(&feature).is_ok()
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.max_depth
    }

    /// Length in edges of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Prediction where feature values are supplied by `value(feature)`.
    #[inline]
    pub fn predict_with(&self, value: impl Fn(usize) -> f64) -> u8 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    i = if value(feature) <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        self.predict_with(|f| row[f])
    }

    /// Predictions for the tree's own out-of-bag rows, aligned with [`Self::oob`].
    pub fn oob_predictions(&self, data: &Dataset) -> Vec<u8> {
        self.oob.iter().map(|&r| self.predict_row(data.row(r))).collect()
    }

    /// Assembles a tree from parts; used by tests and fixtures.
    pub fn from_parts(nodes: Vec<Node>, bag: Vec<usize>, oob: Vec<usize>, max_depth: Option<usize>) -> Self {
        let mut used_features: Vec<usize> = nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf { .. } => None,
            })
            .collect();
        used_features.sort_unstable();
        used_features.dedup();
        Self { nodes, bag, oob, used_features, max_depth }
    }
}

/// Grows a tree on `bag` considering all features.
pub fn fit_tree(data: &Dataset, bag: Vec<usize>, mtry: usize, max_depth: Option<usize>, rng: &mut SimRng) -> Result<DecisionTree> {
    let all: Vec<usize> = (0..data.n_features()).collect();
    fit_tree_on(data, &all, bag, mtry, max_depth, rng)
}

/// Grows a tree on `bag` whose splits may only use `features`.
pub fn fit_tree_on(
    data: &Dataset,
    features: &[usize],
    bag: Vec<usize>,
    mtry: usize,
    max_depth: Option<usize>,
    rng: &mut SimRng,
) -> Result<DecisionTree> {
    if bag.is_empty() {
        return Err(Error::invalid("empty bag"));
    }
    if mtry == 0 || mtry > features.len() {
        return Err(Error::invalid(format!("mtry {mtry} outside 1..={}", features.len())));
    }
    if let Some(&f) = features.iter().find(|&&f| f >= data.n_features()) {
        return Err(Error::invalid(format!("feature {f} out of range")));
    }
    if max_depth == Some(0) {
        return Err(Error::invalid("max_depth must be positive"));
    }
    let n = data.n_obs();
    let mut in_bag = vec![false; n];
    for &r in &bag {
        if r >= n {
            return Err(Error::invalid(format!("bag row {r} out of range")));
        }
        in_bag[r] = true;
    }
    let oob = (0..n).filter(|&r| !in_bag[r]).collect();

    let mut grower = Grower { data, features, mtry, max_depth, rng, nodes: Vec::new(), scratch: Vec::new() };
    let mut rows = bag.clone();
    grower.grow(&mut rows, 0);
    let nodes = grower.nodes;
    Ok(DecisionTree::from_parts(nodes, bag, oob, max_depth))
}

struct Grower<'a> {
    data: &'a Dataset,
    features: &'a [usize],
    mtry: usize,
    max_depth: Option<usize>,
    rng: &'a mut SimRng,
    nodes: Vec<Node>,
    scratch: Vec<(f64, u8)>,
}

struct BestSplit {
    score: f64,
    feature: usize,
    threshold: f64,
}

/// Weighted Gini impurity `n * gini` of a node with class counts `(a, b)`.
#[inline]
fn weighted_gini(a: f64, b: f64) -> f64 {
    let n = a + b;
    if n == 0.0 {
        0.0
    } else {
        n - (a * a + b * b) / n
    }
}

impl Grower<'_> {
    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { class: 0 });

        let ones = rows.iter().filter(|&&r| self.data.label(r) == 1).count();
        let zeros = rows.len() - ones;
        let majority = u8::from(ones > zeros);
        let depth_reached = self.max_depth.is_some_and(|d| depth >= d);
        if ones == 0 || zeros == 0 || depth_reached || rows.len() < 2 {
            self.nodes[id] = Node::Leaf { class: majority };
            return id;
        }

        let Some(best) = self.best_split(rows, zeros, ones) else {
            self.nodes[id] = Node::Leaf { class: majority };
            return id;
        };

        // partition in place: left block first
        let mut mid = 0;
        for i in 0..rows.len() {
            if self.data.value(rows[i], best.feature) <= best.threshold {
                rows.swap(i, mid);
                mid += 1;
            }
        }
        let (l, r) = rows.split_at_mut(mid);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split { feature: best.feature, threshold: best.threshold, left, right };
        id
    }

    fn best_split(&mut self, rows: &[usize], zeros: usize, ones: usize) -> Option<BestSplit> {
        let k = self.mtry.min(self.features.len());
        let mut candidates: Vec<usize> = index::sample(self.rng, self.features.len(), k).into_iter().map(|i| self.features[i]).collect();
        candidates.sort_unstable();

        let (tz, to) = (zeros as f64, ones as f64);
        let mut best: Option<BestSplit> = None;
        for &f in &candidates {
            self.scratch.clear();
            self.scratch.extend(rows.iter().map(|&r| (self.data.value(r, f), self.data.label(r))));
            self.scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            if self.scratch[0].0 == self.scratch[self.scratch.len() - 1].0 {
                continue;
            }
            let (mut lz, mut lo) = (0.0, 0.0);
            for i in 0..self.scratch.len() - 1 {
                let (v, y) = self.scratch[i];
                if y == 1 {
                    lo += 1.0;
                } else {
                    lz += 1.0;
                }
                let next = self.scratch[i + 1].0;
                if v == next {
                    continue;
                }
                let score = weighted_gini(lz, lo) + weighted_gini(tz - lz, to - lo);
                let better = match &best {
                    None => true,
                    Some(b) => score.partial_cmp(&b.score) == Some(Ordering::Less),
                };
                if better {
                    let mut threshold = 0.5 * (v + next);
                    if threshold >= next {
                        threshold = v;
                    }
                    best = Some(BestSplit { score, feature: f, threshold });
                }
            }
        }
        best
    }
}
