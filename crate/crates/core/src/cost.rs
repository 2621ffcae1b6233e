//! The decoding cost Hamiltonian: one signed Z-product clause per code bit.
//!
//! Clause `v` is `(1 - 2 y_v) * prod_{i in support_v} Z_i`, where the support
//! is the set of rows holding a one in column `v` of the generator. On a
//! basis state `z` its eigenvalue is the clause sign times the parity
//! factor `(-1)^{|z & support|}`, so the full diagonal equals the
//! correlation between `y` and the codeword `z G`.

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostClause {
    /// `+1` if the received bit is 0, `-1` otherwise.
    pub sign: i8,
    /// Sorted 0-based qubit indices.
    pub support: Vec<usize>,
    /// `support` as a bitmask over basis labels.
    pub mask: u64,
}

impl CostClause {
    pub fn degree(&self) -> usize {
        self.support.len()
    }

    /// Eigenvalue on basis state `z`.
    pub fn eval_label(&self, z: u64) -> i64 {
        let parity = (z & self.mask).count_ones() & 1;
        self.sign as i64 * if parity == 0 { 1 } else { -1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostHamiltonian {
    k: usize,
    clauses: Vec<CostClause>,
    diagonal: Vec<f64>,
}

impl CostHamiltonian {
    /// Builds the Hamiltonian for received word `y` and tabulates its
    /// diagonal over all `2^k` basis states.
    pub fn build(code: &LinearCode, y: &BitVector) -> Result<Self> {
        if y.len() != code.n() {
            return Err(Error::DimensionMismatch {
                expected: code.n(),
                actual: y.len(),
            });
        }
        let g = code.generator();
        let clauses = (0..code.n())
            .map(|v| {
                let mask = g.column_mask(v);
                if mask == 0 {
                    return Err(Error::ZeroColumn(v));
                }
                let support = (0..code.k()).filter(|&i| (mask >> i) & 1 == 1).collect();
                Ok(CostClause {
                    sign: if y.get(v) { -1 } else { 1 },
                    support,
                    mask,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_clauses(code.k(), clauses))
    }

    pub fn from_clauses(k: usize, clauses: Vec<CostClause>) -> Self {
        assert!((1..=crate::code::MAX_ENUMERABLE_K).contains(&k));
        let diagonal = (0..1u64 << k)
            .map(|z| clauses.iter().map(|c| c.eval_label(z)).sum::<i64>() as f64)
            .collect();
        Self {
            k,
            clauses,
            diagonal,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clauses(&self) -> &[CostClause] {
        &self.clauses
    }

    /// `diag[z] = C(z)` indexed by little-endian basis label.
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn eval(&self, z: &BitVector) -> Result<i64> {
        if z.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                actual: z.len(),
            });
        }
        Ok(self.eval_label(z.to_mask()))
    }

    pub fn eval_label(&self, z: u64) -> i64 {
        self.clauses.iter().map(|c| c.eval_label(z)).sum()
    }

    /// Basis labels attaining the maximal eigenvalue, ascending.
    pub fn argmax_labels(&self) -> Vec<u64> {
        let best = self
            .diagonal
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.diagonal.len() as u64)
            .filter(|&z| self.diagonal[z as usize] == best)
            .collect()
    }
}
