//! Binary linear codes: encoding, weight spectra, the correlation metric,
//! and an exhaustive maximum-likelihood decoder used as ground truth.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest information length the exhaustive routines will enumerate.
pub const MAX_ENUMERABLE_K: usize = 20;

/// An `(n, k)` binary linear code given by a full-rank `k x n` generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Result<Self> {
        let k = generator.rows();
        let rank = generator.rank();
        if rank != k {
            return Err(Error::RankDeficient { rank, k });
        }
        if k > MAX_ENUMERABLE_K {
            return Err(Error::EnumerationBound {
                what: "k",
                size: k,
                limit: MAX_ENUMERABLE_K,
            });
        }
        Ok(Self { generator })
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Information length.
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn mean_column_degree(&self) -> f64 {
        self.generator.column_degrees().mean
    }

    /// The same codebook generated by `transform * G`.
    pub fn transformed(&self, transform: &BitMatrix) -> Result<Self> {
        Self::new(transform.matmul(&self.generator)?)
    }

    /// `x = u G`.
    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        self.generator.vec_mul(u)
    }

    /// Codeword mask for the information word with integer label `u`.
    pub fn encode_label(&self, u: u64) -> u64 {
        self.generator.combine_rows(u)
    }

    pub fn weight_spectrum(&self) -> WeightSpectrum {
        let mut counts = BTreeMap::new();
        for u in 0..1u64 << self.k() {
            *counts
                .entry(self.encode_label(u).count_ones() as usize)
                .or_insert(0u64) += 1;
        }
        WeightSpectrum { counts }
    }
}

/// Histogram of codeword Hamming weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpectrum {
    pub counts: BTreeMap<usize, u64>,
}

impl WeightSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight.
    pub fn min_distance(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }
}

/// `sum_v (1 - 2 y_v)(1 - 2 x_v)`, i.e. `n - 2 d_H(y, x)`.
pub fn correlation(y: &BitVector, x: &BitVector) -> Result<i64> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            actual: x.len(),
        });
    }
    Ok(y.iter()
        .zip(x.iter())
        .map(|(a, b)| (1 - 2 * a as i64) * (1 - 2 * b as i64))
        .sum())
}

/// Outcome of exhaustive maximum-likelihood decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlDecision {
    /// Lowest-labelled maximiser.
    pub info: BitVector,
    pub correlation: i64,
    /// Number of information words attaining the maximum.
    pub tie_count: usize,
}

/// Brute-force ML decoding over all `2^k` information words.
pub fn ml_decode_bruteforce(y: &BitVector, code: &LinearCode) -> Result<MlDecision> {
    let best = ml_optimal_labels(y, code)?;
    let (labels, corr) = best;
    Ok(MlDecision {
        info: BitVector::from_mask(labels[0], code.k()),
        correlation: corr,
        tie_count: labels.len(),
    })
}

/// All maximisers of the correlation metric, as ascending integer labels,
/// together with the maximal correlation.
pub fn ml_optimal_labels(y: &BitVector, code: &LinearCode) -> Result<(Vec<u64>, i64)> {
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            actual: y.len(),
        });
    }
    let n = code.n() as i64;
    let y_mask = y.to_mask();
    let mut best = i64::MIN;
    let mut labels = Vec::new();
    for u in 0..1u64 << code.k() {
        let corr = n - 2 * (code.encode_label(u) ^ y_mask).count_ones() as i64;
        if corr > best {
            best = corr;
            labels.clear();
        }
        if corr == best {
            labels.push(u);
        }
    }
    Ok((labels, best))
}

/// Named generator matrices available from the command line.
pub mod registry {
    use super::*;

    /// Systematic (7, 4) Hamming generator.
    pub const HAMMING74: [[u8; 7]; 4] = [
        [1, 0, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ];

    /// Systematic form of the first-order Reed-Muller code RM(1,4),
    /// a (16, 5, 8) code with 40 ones (mean column degree 2.50).
    ///
    /// Obtained from the evaluation-form generator (all-ones row plus the
    /// four coordinate rows) by reducing on information set
    /// {0, 1, 2, 4, 8} and moving those columns to the front.
    pub const RM16X5: [[u8; 16]; 5] = [
        [1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1],
        [0, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1],
        [0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1],
    ];

    /// A basis-transformed Hamming generator `P G`.
    #[derive(Debug, Clone, Copy)]
    pub struct HammingVariant {
        pub name: &'static str,
        /// Mean column degree of `P G`, two decimals.
        pub mean_degree: f64,
        pub transform: [[u8; 4]; 4],
    }

    /// The eight degree variants, ordered by mean column degree.
    pub const HAMMING_VARIANTS: [HammingVariant; 8] = [
        HammingVariant {
            name: "hamming74-d1.71",
            mean_degree: 1.71,
            transform: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d1.86",
            mean_degree: 1.86,
            transform: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.00",
            mean_degree: 2.00,
            transform: [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.14",
            mean_degree: 2.14,
            transform: [[1, 1, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.29",
            mean_degree: 2.29,
            transform: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.43",
            mean_degree: 2.43,
            transform: [[1, 1, 1, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.57",
            mean_degree: 2.57,
            transform: [[1, 1, 1, 1], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        HammingVariant {
            name: "hamming74-d2.71",
            mean_degree: 2.71,
            transform: [[1, 1, 1, 1], [0, 1, 1, 1], [1, 0, 1, 0], [0, 0, 0, 1]],
        },
    ];

    impl HammingVariant {
        pub fn transform_matrix(&self) -> BitMatrix {
            BitMatrix::from_rows(&self.transform).expect("static transform")
        }

        pub fn code(&self) -> LinearCode {
            hamming74()
                .transformed(&self.transform_matrix())
                .expect("static transforms are full rank")
        }
    }

    pub fn hamming74() -> LinearCode {
        LinearCode::new(BitMatrix::from_rows(&HAMMING74).unwrap()).unwrap()
    }

    pub fn rm16x5() -> LinearCode {
        LinearCode::new(BitMatrix::from_rows(&RM16X5).unwrap()).unwrap()
    }

    pub fn variant(name: &str) -> Option<&'static HammingVariant> {
        HAMMING_VARIANTS.iter().find(|v| v.name == name)
    }

    /// Every name `by_name` accepts.
    pub fn names() -> Vec<&'static str> {
        let mut names = vec!["hamming74"];
        names.extend(HAMMING_VARIANTS.iter().map(|v| v.name));
        names.push("rm16x5");
        names
    }

    pub fn by_name(name: &str) -> Result<LinearCode> {
        match name {
            "hamming74" => Ok(hamming74()),
            "rm16x5" => Ok(rm16x5()),
            other => variant(other)
                .map(HammingVariant::code)
                .ok_or_else(|| Error::UnknownCode(other.to_string())),
        }
    }
}
