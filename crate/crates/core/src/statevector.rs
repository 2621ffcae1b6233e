//! Exact statevector simulation of the three circuit layers a QAOA decoder
//! needs: uniform superposition, diagonal cost phase, and the X-rotation
//! mixer.
//!
//! Basis label `z` has qubit `i` in state `|1>` iff bit `i` of `z` is set.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::cost::CostHamiltonian;
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    k: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(k: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "qubit count {k} outside 1..={MAX_QUBITS}"
        )))
    }
}

impl StateVector {
    /// `|+>^k`.
    pub fn init_plus(k: usize) -> Result<Self> {
        check_qubits(k)?;
        let dim = 1usize << k;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            k,
            amps: vec![amp; dim],
        })
    }

    /// Computational basis state `|z>`.
    pub fn basis(k: usize, z: u64) -> Result<Self> {
        check_qubits(k)?;
        let dim = 1usize << k;
        if z as usize >= dim {
            return Err(Error::InvalidInput(format!("basis label {z} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[z as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { k, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let k = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidInput("length is not a power of two".into()));
        }
        check_qubits(k)?;
        Ok(Self { k, amps })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn probability(&self, z: u64) -> f64 {
        self.amps[z as usize].norm_sqr()
    }

    fn check_hamiltonian(&self, h: &CostHamiltonian) -> Result<()> {
        if h.k() == self.k {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.k,
                actual: h.k(),
            })
        }
    }

    /// `exp(-i gamma C)`, one phase per amplitude from the tabulated diagonal.
    pub fn apply_cost_phase(&mut self, h: &CostHamiltonian, gamma: f64) -> Result<()> {
        self.check_hamiltonian(h)?;
        for (amp, &c) in self.amps.iter_mut().zip(h.diagonal()) {
            *amp *= Complex64::from_polar(1.0, -gamma * c);
        }
        Ok(())
    }

    /// `prod_i exp(-i beta X_i)`.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (cos, sin) = (beta.cos(), beta.sin());
        let diag = Complex64::new(cos, 0.0);
        let off = Complex64::new(0.0, -sin);
        for q in 0..self.k {
            let stride = 1usize << q;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = diag * x0 + off * x1;
                    *a1 = off * x0 + diag * x1;
                }
            }
        }
    }

    /// `<psi| C |psi>` computed from the exact probabilities.
    pub fn expectation(&self, h: &CostHamiltonian) -> Result<f64> {
        self.check_hamiltonian(h)?;
        Ok(self
            .amps
            .iter()
            .zip(h.diagonal())
            .map(|(a, c)| a.norm_sqr() * c)
            .sum())
    }

    /// Variance of `C` under the measurement distribution.
    pub fn variance(&self, h: &CostHamiltonian) -> Result<f64> {
        let mean = self.expectation(h)?;
        Ok(self
            .amps
            .iter()
            .zip(h.diagonal())
            .map(|(a, c)| a.norm_sqr() * (c - mean) * (c - mean))
            .sum())
    }

    /// A reusable inverse-CDF sampler over the measurement distribution.
    pub fn sampler(&self) -> Sampler {
        Sampler::new(&self.probabilities())
    }

    /// Measures `shots` times in the computational basis.
    pub fn sample<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<BTreeMap<u64, u64>> {
        if shots == 0 {
            return Err(Error::InvalidInput("shots must be at least 1".into()));
        }
        let sampler = self.sampler();
        let mut hist = BTreeMap::new();
        for _ in 0..shots {
            *hist.entry(sampler.draw(rng)).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

/// Cumulative distribution over basis labels.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cumulative.last().expect("non-empty");
        let u = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        // rounding can push u past the last bucket; fall back to the last
        // bucket with nonzero mass
        if idx < self.cumulative.len() {
            idx as u64
        } else {
            let mut i = self.cumulative.len() - 1;
            while i > 0 && self.cumulative[i] == self.cumulative[i - 1] {
                i -= 1;
            }
            i as u64
        }
    }
}
