//! Level-p QAOA: ansatz execution, exact cost expectation, multi-start
//! angle optimisation, landscape sweeps, and decoding-quality metrics.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use crate::channel::task_rng;
use crate::code::{ml_optimal_labels, LinearCode};
use crate::cost::CostHamiltonian;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::nelder_mead::{self, NelderMeadConfig};
use crate::statevector::StateVector;

/// Largest level the optimiser accepts.
pub const MAX_LEVEL: usize = 8;

/// Layer angles `(gamma_i, beta_i)`, applied in order `i = 1..p`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSchedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl AngleSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidInput("level must be at least 1".into()));
        }
        if gammas.len() != betas.len() {
            return Err(Error::DimensionMismatch {
                expected: gammas.len(),
                actual: betas.len(),
            });
        }
        Ok(Self { gammas, betas })
    }

    pub fn single(gamma: f64, beta: f64) -> Self {
        Self {
            gammas: vec![gamma],
            betas: vec![beta],
        }
    }

    /// All-zero schedule of level `p`.
    pub fn zeros(p: usize) -> Self {
        assert!(p >= 1);
        Self {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        }
    }

    /// Splits `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn from_params(params: &[f64]) -> Result<Self> {
        if params.is_empty() || !params.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "expected an even, non-zero number of angles, got {}",
                params.len()
            )));
        }
        let p = params.len() / 2;
        Self::new(params[..p].to_vec(), params[p..].to_vec())
    }

    pub fn to_params(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn level(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Appends an identity layer `(0, 0)`.
    pub fn with_zero_layer(&self) -> Self {
        let mut next = self.clone();
        next.gammas.push(0.0);
        next.betas.push(0.0);
        next
    }

    /// Reduces every gamma into `[0, 2pi)` and every beta into `[0, pi)`.
    /// Integer cost eigenvalues make `F_p` periodic under both shifts.
    pub fn canonical(&self) -> Self {
        Self {
            gammas: self.gammas.iter().map(|g| wrap(*g, TAU)).collect(),
            betas: self.betas.iter().map(|b| wrap(*b, PI)).collect(),
        }
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Runs the ansatz for the Hamiltonian of `(code, y)`.
pub fn run_ansatz(code: &LinearCode, y: &BitVector, angles: &AngleSchedule) -> Result<StateVector> {
    let h = CostHamiltonian::build(code, y)?;
    run_ansatz_with(&h, angles)
}

/// `|+>^k`, then for each layer the cost phase followed by the mixer.
pub fn run_ansatz_with(h: &CostHamiltonian, angles: &AngleSchedule) -> Result<StateVector> {
    let mut state = StateVector::init_plus(h.k())?;
    for (&gamma, &beta) in angles.gammas.iter().zip(&angles.betas) {
        state.apply_cost_phase(h, gamma)?;
        state.apply_mixer(beta);
    }
    Ok(state)
}

/// Exact `F_p(gamma, beta)`.
pub fn fp_expectation(code: &LinearCode, y: &BitVector, angles: &AngleSchedule) -> Result<f64> {
    let h = CostHamiltonian::build(code, y)?;
    fp_expectation_with(&h, angles)
}

pub fn fp_expectation_with(h: &CostHamiltonian, angles: &AngleSchedule) -> Result<f64> {
    run_ansatz_with(h, angles)?.expectation(h)
}

/// Multi-start settings for [`optimize_angles`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub nelder_mead: NelderMeadConfig,
    /// Level-1 starts on a `grid_gamma x grid_beta` cell-centred grid.
    pub grid_gamma: usize,
    pub grid_beta: usize,
    /// Uniform random starts for each level above 1, in addition to the
    /// warm start.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadConfig::default(),
            grid_gamma: 16,
            grid_beta: 8,
            random_starts: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// Canonicalised maximiser.
    pub best_angles: AngleSchedule,
    /// `F_p` at `best_angles`.
    pub f_star: f64,
    /// Objective evaluations over all starts.
    pub evaluations: usize,
    pub starts: usize,
    /// True when the winning start stopped on its evaluation budget.
    pub budget_exhausted: bool,
}

/// Maximises `F_p` for level `p`, optimising levels `1..p` in turn so each
/// level can warm-start from the previous optimum.
pub fn optimize_angles(
    code: &LinearCode,
    y: &BitVector,
    p: usize,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    let h = CostHamiltonian::build(code, y)?;
    Ok(optimize_levels(&h, p, config)?
        .pop()
        .expect("at least one level"))
}

/// Results for every level `1..=p_max`.
pub fn optimize_levels(
    h: &CostHamiltonian,
    p_max: usize,
    config: &OptimizerConfig,
) -> Result<Vec<OptimizationResult>> {
    if !(1..=MAX_LEVEL).contains(&p_max) {
        return Err(Error::InvalidInput(format!(
            "level {p_max} outside 1..={MAX_LEVEL}"
        )));
    }
    let mut results: Vec<OptimizationResult> = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let starts = match results.last() {
            None => level_one_starts(config),
            Some(prev) => {
                let mut starts = vec![prev.best_angles.with_zero_layer().to_params()];
                let mut rng = task_rng(config.seed, p as u64);
                starts.extend((0..config.random_starts).map(|_| random_params(p, &mut rng)));
                starts
            }
        };
        results.push(multistart(h, &starts, &config.nelder_mead)?);
    }
    Ok(results)
}

fn level_one_starts(config: &OptimizerConfig) -> Vec<Vec<f64>> {
    let mut starts = Vec::with_capacity(config.grid_gamma * config.grid_beta);
    for i in 0..config.grid_gamma {
        for j in 0..config.grid_beta {
            let gamma = (i as f64 + 0.5) * TAU / config.grid_gamma as f64;
            let beta = (j as f64 + 0.5) * PI / config.grid_beta as f64;
            starts.push(vec![gamma, beta]);
        }
    }
    starts
}

fn random_params<R: Rng>(p: usize, rng: &mut R) -> Vec<f64> {
    let gammas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..TAU)).collect();
    let betas: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..PI)).collect();
    gammas.into_iter().chain(betas).collect()
}

/// Tolerance under which two start results count as the same optimum.
const TIE_TOLERANCE: f64 = 1e-9;

fn multistart(
    h: &CostHamiltonian,
    starts: &[Vec<f64>],
    nm: &NelderMeadConfig,
) -> Result<OptimizationResult> {
    let objective = |x: &[f64]| {
        let angles = AngleSchedule::from_params(x).expect("even parameter count");
        -fp_expectation_with(h, &angles).expect("dimensions fixed by h")
    };
    let minima: Vec<nelder_mead::Minimum> = starts
        .par_iter()
        .map(|s| nelder_mead::minimize(objective, s, nm))
        .collect();

    let evaluations = minima.iter().map(|m| m.evaluations).sum();
    let best_f = minima.iter().map(|m| m.f).fold(f64::INFINITY, f64::min);
    let (angles, winner) = minima
        .iter()
        .filter(|m| m.f <= best_f + TIE_TOLERANCE)
        .map(|m| {
            let a = AngleSchedule::from_params(&m.x).expect("even").canonical();
            (a, m)
        })
        .min_by(|(a, _), (b, _)| {
            a.to_params()
                .iter()
                .zip(b.to_params().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("at least one start");
    let f_star = fp_expectation_with(h, &angles)?;
    Ok(OptimizationResult {
        best_angles: angles,
        f_star,
        evaluations,
        starts: starts.len(),
        budget_exhausted: !winner.converged,
    })
}

/// `n` evenly spaced points from `lo`; `endpoint` decides whether `hi` is
/// the last point or excluded.
pub fn linspace(lo: f64, hi: f64, n: usize, endpoint: bool) -> Vec<f64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let steps = if endpoint { n - 1 } else { n } as f64;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / steps).collect()
}

/// `F_1` sampled on a rectangular grid; `values[i][j]` is at
/// `(gammas[i], betas[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSurface {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl ExpectationSurface {
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn grid_sweep(
    code: &LinearCode,
    y: &BitVector,
    gammas: &[f64],
    betas: &[f64],
) -> Result<ExpectationSurface> {
    let h = CostHamiltonian::build(code, y)?;
    grid_sweep_with(&h, gammas, betas)
}

pub fn grid_sweep_with(
    h: &CostHamiltonian,
    gammas: &[f64],
    betas: &[f64],
) -> Result<ExpectationSurface> {
    let values = gammas
        .par_iter()
        .map(|&g| {
            betas
                .iter()
                .map(|&b| fp_expectation_with(h, &AngleSchedule::single(g, b)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpectationSurface {
        gammas: gammas.to_vec(),
        betas: betas.to_vec(),
        values,
    })
}

/// Probability that one measurement returns an ML-optimal information word
/// (all tied maximisers count).
pub fn success_probability(state: &StateVector, code: &LinearCode, y: &BitVector) -> Result<f64> {
    let (labels, _) = ml_optimal_labels(y, code)?;
    Ok(ml_mass(state, &labels))
}

fn ml_mass(state: &StateVector, labels: &[u64]) -> f64 {
    labels.iter().map(|&z| state.probability(z)).sum()
}

/// Cross-entropy of the measurement distribution against the one-hot ML
/// target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossEntropy {
    /// `-ln` of the probability mass on the ML word(s).
    pub value: f64,
    /// Number of tied ML words; above 1 the value is taken on their
    /// combined mass.
    pub tie_count: usize,
}

pub fn cross_entropy(
    state: &StateVector,
    code: &LinearCode,
    y: &BitVector,
) -> Result<CrossEntropy> {
    let (labels, _) = ml_optimal_labels(y, code)?;
    let mass = ml_mass(state, &labels);
    Ok(CrossEntropy {
        value: -mass.ln(),
        tie_count: labels.len(),
    })
}

/// Probability that at least one of `shots` independent measurements hits
/// the ML set.
pub fn accumulated_success(q: f64, shots: u64) -> f64 {
    1.0 - (1.0 - q).powf(shots as f64)
}
