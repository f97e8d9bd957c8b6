//! Artificial two-class data with Gaussian features.
//!
//! Labels are Bernoulli(0.5); class 1 rows are drawn from `N(μ, Σ)` and
//! class 0 rows from `N(0, Σ)`. `μ` has `p_rel` leading effects drawn from a
//! normal with SD 0.5 truncated to `[-1, 1]`, the rest zero. `Σ` is either
//! the identity or block diagonal with equicorrelated blocks whose feature
//! order is randomly permuted. Costs are uniform on `[0.1, 1]` or tied to the
//! effect size via `min(1, max(0.1, |β_j| + ε_j))`.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{RngStream, SimRng};

pub const EFFECT_SD: f64 = 0.5;
pub const COST_NOISE_SD: f64 = 0.2;
pub const COST_MIN: f64 = 0.1;
pub const COST_MAX: f64 = 1.0;
/// Upper clamp for block correlations; ρ = 1 would make a block singular.
pub const MAX_RHO: f64 = 0.999;
/// Diagonal jitter added before Cholesky factorisation.
pub const JITTER: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectVector {
    pub beta: Vec<f64>,
    pub p_rel: usize,
}

/// Normal(0, 0.5) truncated to `[-1, 1]` by rejection.
pub fn truncated_normal(rng: &mut SimRng) -> f64 {
    let dist = Normal::new(0.0, EFFECT_SD).expect("valid sd");
    loop {
        let x: f64 = dist.sample(rng);
        if (-1.0..=1.0).contains(&x) {
            return x;
        }
    }
}

pub fn gen_effects(p: usize, p_rel: usize, rng: &mut SimRng) -> Result<EffectVector> {
    if p_rel > p {
        return Err(Error::invalid(format!("p_rel {p_rel} exceeds p {p}")));
    }
    let mut beta = vec![0.0; p];
    for b in beta.iter_mut().take(p_rel) {
        *b = truncated_normal(rng);
    }
    Ok(EffectVector { beta, p_rel })
}

/// Block-diagonal equicorrelation matrix with a joint row/column permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockCovariance {
    pub p: usize,
    pub block_rhos: Vec<f64>,
    /// Entry `i` of the permuted matrix is entry `permutation[i]` of the
    /// unpermuted one, i.e. `Σ' = P Σ Pᵀ` with `P[i][permutation[i]] = 1`.
    pub permutation: Vec<usize>,
}

impl BlockCovariance {
    pub fn new(p: usize, block_rhos: Vec<f64>, permutation: Vec<usize>) -> Result<Self> {
        let blocks = block_rhos.len();
        if blocks == 0 || !p.is_multiple_of(blocks) {
            return Err(Error::invalid(format!("{blocks} blocks do not divide {p} features")));
        }
        let mut seen = permutation.clone();
        seen.sort_unstable();
        if seen != (0..p).collect::<Vec<_>>() {
            return Err(Error::invalid("permutation is not a permutation of 0..p"));
        }
        if block_rhos.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::invalid("block correlations must lie in [0, 1]"));
        }
        Ok(Self { p, block_rhos, permutation })
    }

    pub fn block_count(&self) -> usize {
        self.block_rhos.len()
    }

    pub fn block_size(&self) -> usize {
        self.p / self.block_rhos.len()
    }

    /// Entry of the unpermuted block matrix.
    pub fn unpermuted(&self, i: usize, k: usize) -> f64 {
        let size = self.block_size();
        if i == k {
            1.0
        } else if i / size == k / size {
            self.block_rhos[i / size]
        } else {
            0.0
        }
    }

    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.unpermuted(self.permutation[i], self.permutation[k])
    }

    pub fn dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.p, self.p, |i, k| self.entry(i, k))
    }

    /// Block of the feature at permuted position `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.permutation[i] / self.block_size()
    }
}

/// `blocks` equal blocks with `ρ_i ~ U[0, 1]` (clamped to 0.999) and a uniform permutation.
pub fn gen_block_sigma(p: usize, blocks: usize, rng: &mut SimRng) -> Result<BlockCovariance> {
    if blocks == 0 || !p.is_multiple_of(blocks) {
        return Err(Error::invalid(format!("{blocks} blocks do not divide {p} features")));
    }
    let rhos = (0..blocks).map(|_| rng.random::<f64>().min(MAX_RHO)).collect();
    let mut permutation: Vec<usize> = (0..p).collect();
    permutation.shuffle(rng);
    BlockCovariance::new(p, rhos, permutation)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Covariance {
    Identity(usize),
    Block(BlockCovariance),
}

impl Covariance {
    pub fn dim(&self) -> usize {
        match self {
            Covariance::Identity(p) => *p,
            Covariance::Block(b) => b.p,
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        match self {
            Covariance::Identity(p) => DMatrix::identity(*p, *p),
            Covariance::Block(b) => b.dense(),
        }
    }

    /// Lower Cholesky factor of `Σ + jitter·I`.
    pub fn cholesky_factor(&self) -> Result<DMatrix<f64>> {
        let mut m = self.dense();
        for i in 0..m.nrows() {
            m[(i, i)] += JITTER;
        }
        m.cholesky().map(|c| c.l()).ok_or_else(|| Error::Numeric("covariance is not positive definite".into()))
    }
}

/// Draws `n` labelled rows.
pub fn gen_dataset(mu: &EffectVector, sigma: &Covariance, n: usize, rng: &mut SimRng) -> Result<Dataset> {
    let p = mu.beta.len();
    if sigma.dim() != p {
        return Err(Error::invalid(format!("mean has {p} entries, covariance is {0}x{0}", sigma.dim())));
    }
    let factor = match sigma {
        Covariance::Identity(_) => None,
        Covariance::Block(_) => Some(sigma.cholesky_factor()?),
    };
    let mut values = Vec::with_capacity(n * p);
    let mut labels = Vec::with_capacity(n);
    let mut z = vec![0.0; p];
    for _ in 0..n {
        let y = u8::from(rng.random_bool(0.5));
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(rng);
        }
        for i in 0..p {
            let noise = match &factor {
                None => z[i],
                Some(l) => (0..=i).map(|k| l[(i, k)] * z[k]).sum(),
            };
            values.push(noise + if y == 1 { mu.beta[i] } else { 0.0 });
        }
        labels.push(y);
    }
    let names = (1..=p).map(|j| format!("x{j}")).collect();
    Dataset::new(values, labels, names)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    Independent,
    Correlated,
}

/// Effect-linked cost `min(1, max(0.1, |β| + ε))`.
pub fn correlated_cost(beta: f64, eps: f64) -> f64 {
    (beta.abs() + eps).clamp(COST_MIN, COST_MAX)
}

pub fn gen_costs(mode: CostMode, effects: &EffectVector, rng: &mut SimRng) -> Result<CostVector> {
    let costs = match mode {
        CostMode::Independent => effects.beta.iter().map(|_| rng.random_range(COST_MIN..=COST_MAX)).collect(),
        CostMode::Correlated => {
            let noise = Normal::new(0.0, COST_NOISE_SD).expect("valid sd");
            effects.beta.iter().map(|&b| correlated_cost(b, noise.sample(rng))).collect()
        }
    };
    CostVector::new(costs)
}

/// Uniform `[0.1, 1]` costs for `p` features, as used for real data.
pub fn uniform_costs(p: usize, rng: &mut SimRng) -> Result<CostVector> {
    CostVector::new((0..p).map(|_| rng.random_range(COST_MIN..=COST_MAX)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SettingLabel {
    A,
    B,
    C,
    D,
}

impl SettingLabel {
    pub fn correlated_data(self) -> bool {
        matches!(self, SettingLabel::C | SettingLabel::D)
    }

    pub fn cost_mode(self) -> CostMode {
        match self {
            SettingLabel::A | SettingLabel::C => CostMode::Independent,
            SettingLabel::B | SettingLabel::D => CostMode::Correlated,
        }
    }
}

impl std::str::FromStr for SettingLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SettingLabel::A),
            "B" | "b" => Ok(SettingLabel::B),
            "C" | "c" => Ok(SettingLabel::C),
            "D" | "d" => Ok(SettingLabel::D),
            other => Err(Error::invalid(format!("unknown setting `{other}`"))),
        }
    }
}

impl std::fmt::Display for SettingLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One cell of the factorial design plus its study sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSetting {
    pub label: SettingLabel,
    pub budgets: Vec<f64>,
    pub n_obs: usize,
    pub p: usize,
    pub p_rel: usize,
    pub blocks: usize,
    pub n_sim: usize,
    pub n_test: usize,
}

impl SimSetting {
    /// Full-size setting: 500 × 200, 100 relevant, 20 blocks, 100 runs, 5000 test rows.
    pub fn standard(label: SettingLabel) -> Self {
        Self { label, budgets: vec![1.0, 2.0, 5.0, 10.0, 30.0], n_obs: 500, p: 200, p_rel: 100, blocks: 20, n_sim: 100, n_test: 5000 }
    }

    pub fn covariance_kind(&self) -> &'static str {
        if self.label.correlated_data() {
            "correlated"
        } else {
            "independent"
        }
    }
}

/// Shared draws for a setting: `μ` (common to A–D), `Σ` (common to C and D)
/// and the cost vector of the setting's cost mode.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyPlan {
    pub setting: SimSetting,
    pub effects: EffectVector,
    pub covariance: Covariance,
    pub costs: CostVector,
    master: RngStream,
}

pub fn make_setting(setting: &SimSetting, master_seed: u64) -> Result<StudyPlan> {
    let master = RngStream::from_seed(master_seed);
    let effects = gen_effects(setting.p, setting.p_rel, &mut master.named("mu").rng())?;
    let block = gen_block_sigma(setting.p, setting.blocks, &mut master.named("sigma").rng())?;
    let covariance = if setting.label.correlated_data() { Covariance::Block(block) } else { Covariance::Identity(setting.p) };
    let costs = match setting.label.cost_mode() {
        CostMode::Independent => gen_costs(CostMode::Independent, &effects, &mut master.named("costs-independent").rng())?,
        CostMode::Correlated => gen_costs(CostMode::Correlated, &effects, &mut master.named("costs-correlated").rng())?,
    };
    Ok(StudyPlan { setting: setting.clone(), effects, covariance, costs, master })
}

impl StudyPlan {
    fn data_stream(&self) -> RngStream {
        self.master.named(self.setting.covariance_kind())
    }

    /// Training set `run`; settings with the same covariance share it.
    pub fn training_set(&self, run: usize) -> Result<Dataset> {
        gen_dataset(&self.effects, &self.covariance, self.setting.n_obs, &mut self.data_stream().child(run as u64).rng())
    }

    pub fn test_set(&self) -> Result<Dataset> {
        gen_dataset(&self.effects, &self.covariance, self.setting.n_test, &mut self.data_stream().named("test").rng())
    }
}
