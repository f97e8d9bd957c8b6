#![allow(dead_code)]

use costfs::rf::{DecisionTree, Node};
use costfs::rng::SimRng;
use costfs::{CostVector, Dataset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Balanced labels, standard-normal-ish noise plus a shift on the first
/// `signal` columns for class 1.
pub fn random_dataset(n: usize, p: usize, signal: usize, rng: &mut SimRng) -> Dataset {
    let mut labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    labels.shuffle(rng);
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&y| {
            (0..p)
                .map(|j| {
                    let shift = if j < signal && y == 1 { 1.0 } else { 0.0 };
                    rng.random_range(-1.5..1.5) + shift
                })
                .collect()
        })
        .collect();
    Dataset::from_rows(&rows, labels).expect("valid fixture")
}

pub fn random_costs(p: usize, rng: &mut SimRng) -> CostVector {
    // decimal-looking values make floating-point boundary cases likely
    const GRID: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.7, 0.9];
    let costs =
        (0..p).map(|_| if rng.random_bool(0.5) { GRID[rng.random_range(0..GRID.len())] } else { rng.random_range(0.1..=1.0) }).collect();
    CostVector::new(costs).expect("positive costs")
}

/// A tree of depth at most two with random splits and leaves.
pub fn random_tree(n: usize, p: usize, rng: &mut SimRng) -> DecisionTree {
    let leaf = |rng: &mut SimRng| Node::Leaf { class: rng.random_range(0..2) };
    let nodes = match rng.random_range(0..3) {
        0 => vec![leaf(rng)],
        1 => vec![
            Node::Split { feature: rng.random_range(0..p), threshold: rng.random_range(-1.0..1.0), left: 1, right: 2 },
            leaf(rng),
            leaf(rng),
        ],
        _ => vec![
            Node::Split { feature: rng.random_range(0..p), threshold: rng.random_range(-1.0..1.0), left: 1, right: 2 },
            Node::Split { feature: rng.random_range(0..p), threshold: rng.random_range(-1.0..1.0), left: 3, right: 4 },
            leaf(rng),
            leaf(rng),
            leaf(rng),
        ],
    };
    let oob: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.4)).collect();
    let bag: Vec<usize> = (0..n).filter(|r| !oob.contains(r)).collect();
    DecisionTree::from_parts(nodes, bag, oob, Some(2))
}

/// Per-row vote tally over `trees`: unvoted rows and ties toward the wrong
/// class count as errors, ties predict 0; denominator is `n`.
pub fn tally_mmce(trees: &[DecisionTree], data: &Dataset) -> f64 {
    if trees.is_empty() {
        return 0.5;
    }
    let mut errors = 0;
    for r in 0..data.n_obs() {
        let mut ones = 0;
        let mut zeros = 0;
        for t in trees {
            if t.oob().contains(&r) {
                if t.predict_row(data.row(r)) == 1 {
                    ones += 1;
                } else {
                    zeros += 1;
                }
            }
        }
        let pred = if ones > zeros { 1 } else { 0 };
        if ones + zeros == 0 || pred != data.label(r) {
            errors += 1;
        }
    }
    errors as f64 / data.n_obs() as f64
}

/// Sum of costs of the distinct indices, in ascending order.
pub fn recomputed_cost(indices: &[usize], costs: &CostVector) -> f64 {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let mut total = 0.0;
    for j in idx {
        total += costs.get(j);
    }
    total
}

/// Distinct split features found by walking the tree from the root.
pub fn walked_features(tree: &DecisionTree) -> (Vec<usize>, usize) {
    fn walk(nodes: &[Node], i: usize, depth: usize, out: &mut Vec<usize>) -> usize {
        match nodes[i] {
            Node::Leaf { .. } => depth,
            Node::Split { feature, left, right, .. } => {
                out.push(feature);
                walk(nodes, left, depth + 1, out).max(walk(nodes, right, depth + 1, out))
            }
        }
    }
    let mut out = Vec::new();
    let depth = walk(tree.nodes(), 0, 0, &mut out);
    out.sort_unstable();
    out.dedup();
    (out, depth)
}
