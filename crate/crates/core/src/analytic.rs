//! Exact closed form of the level-1 cost expectation `F_1(gamma, beta)` for
//! an arbitrary generator matrix and received word.
//!
//! The result is a polynomial in `s = sin 2gamma`, `c = cos 2gamma`,
//! `s' = sin 2beta` and `c' = cos 2beta` with integer coefficients. It is
//! assembled clause by clause:
//!
//! 1. Conjugating a clause `Z_I` by the mixer gives `prod_{i in I} (c' Z_i +
//!    s' Y_i)`. Each *branch* `b` (a subset of `I`, `Y` where `b_i = 1`)
//!    carries `s'^w c'^{d - w}` with `w = |b|`.
//! 2. Conjugating a branch by the cost unitary only involves clauses that
//!    anticommute with it, i.e. columns whose overlap with `b` is odd. With
//!    `rho` such columns the unitary contributes `prod (c I + j s sigma Z_col)`.
//! 3. Expanding that product over all assignments `a` in `F_2^rho`, a term
//!    survives the `|+>` expectation only if the Z-string it builds equals
//!    the clause support, turning `Z` into `I` and `Y` into `-j X`. A
//!    surviving term is `(j s)^omega c^{rho - omega} (-j s')^w c'^{d - w}`
//!    times the product of the chosen clause signs.
//!
//! Every surviving phase `j^omega (-j)^w` is real because `omega` and `w`
//! always share parity; the derivation checks that the imaginary part
//! cancels exactly.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use rayon::prelude::*;

use crate::code::LinearCode;
use crate::cost::{CostClause, CostHamiltonian};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::nelder_mead::{self, NelderMeadConfig};

/// Largest number of anticommuting columns enumerated per branch.
pub const MAX_RHO: usize = 24;

/// Exponents of `(s, c, s', c')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents {
    pub sin_gamma: u32,
    pub cos_gamma: u32,
    pub sin_beta: u32,
    pub cos_beta: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigMonomial {
    pub coeff: i64,
    pub exponents: Exponents,
}

impl TrigMonomial {
    pub fn evaluate(&self, s: f64, c: f64, sp: f64, cp: f64) -> f64 {
        let e = self.exponents;
        self.coeff as f64
            * s.powi(e.sin_gamma as i32)
            * c.powi(e.cos_gamma as i32)
            * sp.powi(e.sin_beta as i32)
            * cp.powi(e.cos_beta as i32)
    }
}

impl fmt::Display for TrigMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponents;
        write!(
            f,
            "{:+} * s^{} c^{} s'^{} c'^{}",
            self.coeff, e.sin_gamma, e.cos_gamma, e.sin_beta, e.cos_beta
        )
    }
}

/// A sum of monomials with like terms merged and zero terms dropped.
/// Terms are sorted by exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPolynomial {
    terms: Vec<TrigMonomial>,
}

impl TrigPolynomial {
    pub fn from_terms<I: IntoIterator<Item = TrigMonomial>>(terms: I) -> Self {
        let mut merged: BTreeMap<Exponents, i64> = BTreeMap::new();
        for t in terms {
            *merged.entry(t.exponents).or_insert(0) += t.coeff;
        }
        Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(exponents, coeff)| TrigMonomial { coeff, exponents })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[TrigMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `(gamma, beta)`.
    pub fn evaluate(&self, gamma: f64, beta: f64) -> f64 {
        let (s, c) = (2.0 * gamma).sin_cos();
        let (sp, cp) = (2.0 * beta).sin_cos();
        self.terms.iter().map(|t| t.evaluate(s, c, sp, cp)).sum()
    }
}

impl fmt::Display for TrigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// One term of the mixer-conjugated clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixerBranch {
    /// `b_i = 1` selects `Y_i`, `b_i = 0` on the support selects `Z_i`.
    pub b: BitVector,
    /// Number of `Y` factors.
    pub weight: usize,
}

/// The `2^d` branches of a degree-`d` clause, ordered by the subset mask.
pub fn mixer_branches(clause: &CostClause, k: usize) -> Vec<MixerBranch> {
    let support = &clause.support;
    (0..1u64 << support.len())
        .map(|sel| {
            let mask = support
                .iter()
                .enumerate()
                .filter(|(t, _)| (sel >> t) & 1 == 1)
                .fold(0u64, |acc, (_, &q)| acc | (1 << q));
            MixerBranch {
                b: BitVector::from_mask(mask, k),
                weight: mask.count_ones() as usize,
            }
        })
        .collect()
}

/// Columns that anticommute with a branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCommuting {
    /// `|support(col) & b|` for every column.
    pub overlaps: Vec<usize>,
    /// Columns with odd overlap, ascending.
    pub columns: Vec<usize>,
    /// Count of such columns.
    pub rho: usize,
}

pub fn noncommuting_submatrix(g: &BitMatrix, b: &BitVector) -> NonCommuting {
    let b = b.to_mask();
    let overlaps: Vec<usize> = (0..g.cols())
        .map(|j| (g.column_mask(j) & b).count_ones() as usize)
        .collect();
    let columns: Vec<usize> = overlaps
        .iter()
        .enumerate()
        .filter(|(_, &w)| w % 2 == 1)
        .map(|(j, _)| j)
        .collect();
    NonCommuting {
        rho: columns.len(),
        overlaps,
        columns,
    }
}

/// `prod_t (c I or j s sigma_t Z_{col_t})` for one assignment `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignmentProduct {
    /// Bit `t` chooses the `j s Z` factor of the `t`-th column.
    pub a: u64,
    /// Number of `j s Z` factors.
    pub omega: usize,
    /// Z-string left after multiplying the chosen factors (qubit mask).
    pub residual: u64,
    /// Product of the chosen clause signs.
    pub sign: i64,
}

impl AssignmentProduct {
    /// Real scalar `j^omega * sign`, or `None` for odd `omega`.
    pub fn real_scalar(&self) -> Option<i64> {
        match self.omega % 4 {
            0 => Some(self.sign),
            2 => Some(-self.sign),
            _ => None,
        }
    }
}

/// Multiplies out the factors chosen by `a` over `columns` of `g`.
/// `signs[col]` is the clause sign of each generator column.
pub fn assignment_product(
    g: &BitMatrix,
    columns: &[usize],
    signs: &[i8],
    a: u64,
) -> AssignmentProduct {
    let mut residual = 0u64;
    let mut sign = 1i64;
    for (t, &col) in columns.iter().enumerate() {
        if (a >> t) & 1 == 1 {
            residual ^= g.column_mask(col);
            sign *= signs[col] as i64;
        }
    }
    AssignmentProduct {
        a,
        omega: a.count_ones() as usize,
        residual,
        sign,
    }
}

/// Every assignment over the anticommuting columns whose product leaves
/// exactly `target` (the analysed clause's support).
pub fn matching_assignments(
    g: &BitMatrix,
    nc: &NonCommuting,
    signs: &[i8],
    target: u64,
) -> Result<Vec<AssignmentProduct>> {
    if nc.rho > MAX_RHO {
        return Err(Error::EnumerationBound {
            what: "rho",
            size: nc.rho,
            limit: MAX_RHO,
        });
    }
    let cols: Vec<u64> = nc.columns.iter().map(|&j| g.column_mask(j)).collect();
    let col_signs: Vec<i64> = nc.columns.iter().map(|&j| signs[j] as i64).collect();
    let mut out = Vec::new();
    // Gray-code walk: one column toggles per step
    let mut residual = 0u64;
    let mut a = 0u64;
    let total = 1u64 << nc.rho;
    for step in 0..total {
        if step > 0 {
            let t = step.trailing_zeros() as usize;
            a ^= 1 << t;
            residual ^= cols[t];
        }
        if residual == target {
            let sign = (0..nc.rho)
                .filter(|t| (a >> t) & 1 == 1)
                .map(|t| col_signs[t])
                .product();
            out.push(AssignmentProduct {
                a,
                omega: a.count_ones() as usize,
                residual,
                sign,
            });
        }
    }
    out.sort_by_key(|p| p.a);
    Ok(out)
}

/// One matched `(b, a)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTrace {
    pub a: BitVector,
    pub omega: usize,
    /// Signed contribution, including the clause sign.
    pub coeff: i64,
}

/// Aggregated contribution of all pairs sharing `omega` within a branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicity {
    pub omega: usize,
    /// Number of matching pairs.
    pub pairs: usize,
    /// Sum of their signed coefficients.
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTrace {
    pub b: BitVector,
    pub weight: usize,
    pub columns: Vec<usize>,
    pub rho: usize,
    pub matches: Vec<MatchTrace>,
    pub multiplicities: Vec<Multiplicity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseTrace {
    pub clause: usize,
    pub sign: i8,
    pub degree: usize,
    pub branches: Vec<BranchTrace>,
    pub polynomial: TrigPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub clauses: Vec<ClauseTrace>,
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(
                f,
                "clause {} (sign {:+}, degree {}):",
                c.clause + 1,
                c.sign,
                c.degree
            )?;
            for br in c.branches.iter().filter(|br| !br.matches.is_empty()) {
                let cols: Vec<String> = br.columns.iter().map(|j| (j + 1).to_string()).collect();
                writeln!(
                    f,
                    "  b={} w={} rho={} columns={{{}}}",
                    br.b,
                    br.weight,
                    br.rho,
                    cols.join(",")
                )?;
                for m in &br.matches {
                    writeln!(f, "    a={} omega={} coeff={:+}", m.a, m.omega, m.coeff)?;
                }
            }
        }
        Ok(())
    }
}

/// Symbolic `F_1` together with the derivation record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level1Derivation {
    pub polynomial: TrigPolynomial,
    pub trace: DerivationTrace,
}

pub fn derive_level1(code: &LinearCode, y: &BitVector) -> Result<Level1Derivation> {
    let h = CostHamiltonian::build(code, y)?;
    let g = code.generator();
    let signs: Vec<i8> = h.clauses().iter().map(|c| c.sign).collect();

    let per_clause = h
        .clauses()
        .par_iter()
        .enumerate()
        .map(|(v, clause)| derive_clause(g, &signs, v, clause))
        .collect::<Result<Vec<_>>>()?;

    let mut real_terms = Vec::new();
    let mut imaginary_terms = Vec::new();
    let mut clauses = Vec::with_capacity(per_clause.len());
    for (trace, real, imaginary) in per_clause {
        real_terms.extend(real);
        imaginary_terms.extend(imaginary);
        clauses.push(trace);
    }
    let imaginary = TrigPolynomial::from_terms(imaginary_terms);
    if !imaginary.is_zero() {
        return Err(Error::Derivation(format!(
            "imaginary terms do not cancel:\n{imaginary}"
        )));
    }
    let polynomial = TrigPolynomial::from_terms(real_terms);
    Ok(Level1Derivation {
        polynomial,
        trace: DerivationTrace { clauses },
    })
}

type ClauseOutput = (ClauseTrace, Vec<TrigMonomial>, Vec<TrigMonomial>);

fn derive_clause(
    g: &BitMatrix,
    signs: &[i8],
    v: usize,
    clause: &CostClause,
) -> Result<ClauseOutput> {
    let degree = clause.degree();
    let mut real = Vec::new();
    let mut imaginary = Vec::new();
    let mut branches = Vec::new();
    for branch in mixer_branches(clause, g.rows()) {
        let nc = noncommuting_submatrix(g, &branch.b);
        let matches = matching_assignments(g, &nc, signs, clause.mask)?;
        let w = branch.weight;
        let mut traced = Vec::with_capacity(matches.len());
        let mut by_omega: BTreeMap<usize, Multiplicity> = BTreeMap::new();
        for m in &matches {
            debug_assert_eq!(
                m.residual, clause.mask,
                "matched assignment must rebuild the clause support"
            );
            // (j)^omega (-j)^w = j^(omega + 3w)
            let phase = (m.omega + 3 * w) % 4;
            let coeff = clause.sign as i64 * m.sign * if phase >= 2 { -1 } else { 1 };
            let term = TrigMonomial {
                coeff,
                exponents: Exponents {
                    sin_gamma: m.omega as u32,
                    cos_gamma: (nc.rho - m.omega) as u32,
                    sin_beta: w as u32,
                    cos_beta: (degree - w) as u32,
                },
            };
            if phase % 2 == 0 {
                real.push(term);
            } else {
                imaginary.push(term);
            }
            let entry = by_omega.entry(m.omega).or_insert(Multiplicity {
                omega: m.omega,
                pairs: 0,
                coeff: 0,
            });
            entry.pairs += 1;
            entry.coeff += coeff;
            traced.push(MatchTrace {
                a: if nc.rho > 0 {
                    BitVector::from_mask(m.a, nc.rho)
                } else {
                    unreachable!("a non-empty support cannot be matched by the empty product")
                },
                omega: m.omega,
                coeff,
            });
        }
        branches.push(BranchTrace {
            b: branch.b,
            weight: w,
            columns: nc.columns,
            rho: nc.rho,
            matches: traced,
            multiplicities: by_omega.into_values().collect(),
        });
    }
    let trace = ClauseTrace {
        clause: v,
        sign: clause.sign,
        degree,
        branches,
        polynomial: TrigPolynomial::from_terms(real.iter().copied()),
    };
    Ok((trace, real, imaginary))
}

/// Maximum of `F_1` over `[0, 2pi) x [0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level1Optimum {
    pub f_star: f64,
    pub gamma: f64,
    pub beta: f64,
}

const SCAN_POINTS: usize = 256;
const REFINED_SEEDS: usize = 8;

/// 256 x 256 grid scan followed by Nelder-Mead refinement from the best 8
/// grid points. Ties between symmetric optima go to the lexicographically
/// smallest canonical `(gamma, beta)`.
pub fn maximize(expr: &TrigPolynomial) -> Level1Optimum {
    let gamma_step = TAU / SCAN_POINTS as f64;
    let beta_step = PI / SCAN_POINTS as f64;
    let mut scored: Vec<(f64, f64, f64)> = (0..SCAN_POINTS)
        .flat_map(|i| (0..SCAN_POINTS).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (g, b) = (i as f64 * gamma_step, j as f64 * beta_step);
            (expr.evaluate(g, b), g, b)
        })
        .collect();
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));

    let config = NelderMeadConfig {
        f_tolerance: 1e-15,
        max_evaluations: 4000,
        initial_step: gamma_step.min(beta_step),
        ..Default::default()
    };
    let candidates: Vec<Level1Optimum> = scored
        .iter()
        .take(REFINED_SEEDS)
        .map(|&(_, g, b)| {
            let m = nelder_mead::minimize(|x| -expr.evaluate(x[0], x[1]), &[g, b], &config);
            let gamma = m.x[0].rem_euclid(TAU);
            let beta = m.x[1].rem_euclid(PI);
            Level1Optimum {
                f_star: expr.evaluate(gamma, beta),
                gamma: if gamma >= TAU { 0.0 } else { gamma },
                beta: if beta >= PI { 0.0 } else { beta },
            }
        })
        .collect();
    let best = candidates
        .iter()
        .map(|c| c.f_star)
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .into_iter()
        .filter(|c| c.f_star >= best - 1e-9)
        .min_by(|x, y| fuzzy_cmp(x.gamma, y.gamma).then(fuzzy_cmp(x.beta, y.beta)))
        .expect("non-empty candidate list")
}

/// Coordinates within this distance are the same optimum.
const ANGLE_TOLERANCE: f64 = 1e-6;

fn fuzzy_cmp(a: f64, b: f64) -> std::cmp::Ordering {
    if (a - b).abs() < ANGLE_TOLERANCE {
        std::cmp::Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::registry::{self, hamming74};
    use crate::qaoa::{fp_expectation, AngleSchedule};

    fn zero7() -> BitVector {
        BitVector::zeros(7)
    }

    fn clause5() -> CostClause {
        CostHamiltonian::build(&hamming74(), &zero7())
            .unwrap()
            .clauses()[4]
            .clone()
    }

    #[test]
    fn branches_of_a_degree_three_clause() {
        let branches = mixer_branches(&clause5(), 4);
        assert_eq!(branches.len(), 8);
        assert!(branches
            .iter()
            .any(|b| b.b.to_string() == "0000" && b.weight == 0));
        assert!(branches
            .iter()
            .any(|b| b.b.to_string() == "1101" && b.weight == 3));
        // binomial counts per weight
        for (w, expected) in [(0, 1), (1, 3), (2, 3), (3, 1)] {
            assert_eq!(branches.iter().filter(|b| b.weight == w).count(), expected);
        }
    }

    #[test]
    fn branches_of_a_degree_one_clause() {
        let clause = CostHamiltonian::build(&hamming74(), &zero7())
            .unwrap()
            .clauses()[0]
            .clone();
        assert_eq!(mixer_branches(&clause, 4).len(), 2);
    }

    #[test]
    fn noncommuting_columns_of_worked_example() {
        let g = hamming74().generator().clone();
        let nc = noncommuting_submatrix(&g, &"1101".parse().unwrap());
        assert_eq!(nc.overlaps, vec![1, 1, 0, 1, 3, 2, 2]);
        assert_eq!(nc.columns, vec![0, 1, 3, 4]);
        assert_eq!(nc.rho, 4);

        let nc = noncommuting_submatrix(&g, &BitVector::zeros(4));
        assert!(nc.columns.is_empty());
        assert_eq!(nc.rho, 0);

        for (k, &degree) in g.row_degrees().iter().enumerate() {
            let nc = noncommuting_submatrix(&g, &BitVector::from_mask(1 << k, 4));
            let expected: Vec<usize> = (0..7).filter(|&j| g.get(k, j)).collect();
            assert_eq!(nc.columns, expected);
            assert_eq!(nc.rho, degree);
        }
    }

    #[test]
    fn assignment_products() {
        let g = hamming_g();
        let signs = [1i8; 7];
        // (cI)(cI)(js Z1Z2Z4)(js Z1Z3Z4) = -s^2 c^2 Z2Z3: columns 1, 2, 5, 6
        let p = assignment_product(&g, &[0, 1, 4, 5], &signs, 0b1100);
        assert_eq!(p.omega, 2);
        assert_eq!(p.residual, 0b0110);
        assert_eq!(p.real_scalar(), Some(-1));
        // over columns {1, 2, 4, 5} the same assignment leaves Z1Z2
        let p = assignment_product(&g, &[0, 1, 3, 4], &signs, 0b1100);
        assert_eq!(p.residual, 0b0011);
        assert_eq!(p.real_scalar(), Some(-1));
        // sign of a flipped clause enters the product
        let mut flipped = signs;
        flipped[4] = -1;
        assert_eq!(
            assignment_product(&g, &[0, 1, 4, 5], &flipped, 0b1100).real_scalar(),
            Some(1)
        );
    }

    fn hamming_g() -> BitMatrix {
        hamming74().generator().clone()
    }

    #[test]
    fn matching_assignments_rebuild_target() {
        let g = hamming_g();
        let signs = [1i8; 7];
        for b in 1..16u64 {
            let nc = noncommuting_submatrix(&g, &BitVector::from_mask(b, 4));
            for v in 0..7 {
                let target = g.column_mask(v);
                for m in matching_assignments(&g, &nc, &signs, target).unwrap() {
                    let rebuilt = assignment_product(&g, &nc.columns, &signs, m.a);
                    assert_eq!(rebuilt.residual, target);
                    assert_eq!(rebuilt.omega, m.omega);
                    // equivalently G^b a equals the clause column
                    let sub = g.select_columns(&nc.columns);
                    let a = BitVector::from_mask(m.a, nc.rho);
                    assert_eq!(sub.mul_vec(&a).unwrap(), g.column(v));
                }
            }
        }
    }

    #[test]
    fn empty_assignment_matches_only_empty_target() {
        let g = hamming_g();
        let nc = noncommuting_submatrix(&g, &BitVector::zeros(4));
        let m = matching_assignments(&g, &nc, &[1; 7], 0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].a, 0);
        assert!(matching_assignments(&g, &nc, &[1; 7], 0b1011)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn enumeration_bound_enforced() {
        let g = hamming_g();
        let nc = NonCommuting {
            overlaps: vec![],
            columns: (0..25).map(|i| i % 7).collect(),
            rho: 25,
        };
        assert!(matches!(
            matching_assignments(&g, &nc, &[1; 7], 1),
            Err(Error::EnumerationBound { size: 25, .. })
        ));
    }

    #[test]
    fn single_qubit_closed_form() {
        let code = LinearCode::new(BitMatrix::from_rows(&[[1]]).unwrap()).unwrap();
        let d = derive_level1(&code, &BitVector::zeros(1)).unwrap();
        let expected = TrigPolynomial::from_terms([TrigMonomial {
            coeff: 1,
            exponents: Exponents {
                sin_gamma: 1,
                cos_gamma: 0,
                sin_beta: 1,
                cos_beta: 0,
            },
        }]);
        assert_eq!(d.polynomial, expected);
        // a flipped bit negates both the clause and the effective angle
        let y: BitVector = "1".parse().unwrap();
        let flipped = derive_level1(&code, &y).unwrap();
        assert_eq!(flipped.polynomial, d.polynomial);
        let sim = fp_expectation(&code, &y, &AngleSchedule::single(0.3, 0.4)).unwrap();
        assert!((sim - 0.6f64.sin() * 0.8f64.sin()).abs() < 1e-12);
    }

    fn table_186(s: f64, c: f64, sp: f64, cp: f64) -> f64 {
        -2.0 * s * c * (c * c - s * s) * sp * (1.0 - 3.0 * cp * cp)
            + 3.0 * s * c * c * sp * (1.0 + 2.0 * cp * cp)
    }

    fn table_171(s: f64, c: f64, sp: f64, cp: f64) -> f64 {
        3.0 * s * c * c * sp * (1.0 + cp).powi(2)
            - s * c * c * sp.powi(3) * (c * c - 3.0 * s * s) * (c * c - s * s)
    }

    #[test]
    fn printed_hamming_forms() {
        for (name, form) in [
            (
                "hamming74-d1.86",
                table_186 as fn(f64, f64, f64, f64) -> f64,
            ),
            ("hamming74-d1.71", table_171),
        ] {
            let code = registry::variant(name).unwrap().code();
            let poly = derive_level1(&code, &zero7()).unwrap().polynomial;
            for i in 0..20 {
                let (g, b) = (0.31 * i as f64, 0.17 * i as f64);
                let (s, c) = (2.0 * g).sin_cos();
                let (sp, cp) = (2.0 * b).sin_cos();
                assert!(
                    (poly.evaluate(g, b) - form(s, c, sp, cp)).abs() < 1e-9,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn zero_lines_hold_symbolically() {
        for v in registry::HAMMING_VARIANTS {
            let poly = derive_level1(&v.code(), &zero7()).unwrap().polynomial;
            assert!(!poly.is_zero());
            for t in poly.terms() {
                assert!(
                    t.exponents.sin_gamma >= 1 && t.exponents.sin_beta >= 1,
                    "{}",
                    v.name
                );
            }
            assert_eq!(poly.evaluate(0.0, 0.7), 0.0);
            assert_eq!(poly.evaluate(1.1, 0.0), 0.0);
        }
    }

    #[test]
    fn matches_simulator_with_received_errors() {
        let code = registry::variant("hamming74-d2.14").unwrap().code();
        for y in [0b0000001u64, 0b0010000, 0b1000100, 0b1111111] {
            let y = BitVector::from_mask(y, 7);
            let poly = derive_level1(&code, &y).unwrap().polynomial;
            for i in 0..9 {
                for j in 0..9 {
                    let (g, b) = (0.7 * i as f64, 0.35 * j as f64);
                    let sim = fp_expectation(&code, &y, &AngleSchedule::single(g, b)).unwrap();
                    assert!((poly.evaluate(g, b) - sim).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn trace_records_worked_example() {
        let d = derive_level1(&hamming74(), &zero7()).unwrap();
        let c5 = &d.trace.clauses[4];
        assert_eq!(c5.degree, 3);
        assert_eq!(c5.branches.len(), 8);
        let full = c5
            .branches
            .iter()
            .find(|b| b.b.to_string() == "1101")
            .unwrap();
        assert_eq!(full.columns, vec![0, 1, 3, 4]);
        assert_eq!(full.rho, 4);
        for m in &full.matches {
            let sub = hamming_g().select_columns(&full.columns);
            assert_eq!(sub.mul_vec(&m.a).unwrap(), hamming_g().column(4));
        }
        let pairs: usize = full.multiplicities.iter().map(|m| m.pairs).sum();
        assert_eq!(pairs, full.matches.len());
        // clause polynomials add up to the total
        let total = TrigPolynomial::from_terms(
            d.trace
                .clauses
                .iter()
                .flat_map(|c| c.polynomial.terms().iter().copied()),
        );
        assert_eq!(total, d.polynomial);
    }

    #[test]
    fn maximize_reference_rows() {
        for (name, expected) in [("hamming74-d1.71", 2.409), ("hamming74-d2.71", 1.671)] {
            let poly = derive_level1(&registry::variant(name).unwrap().code(), &zero7())
                .unwrap()
                .polynomial;
            let opt = maximize(&poly);
            assert!(
                (opt.f_star - expected).abs() < 0.005,
                "{name}: {}",
                opt.f_star
            );
            assert!((0.0..TAU).contains(&opt.gamma) && (0.0..PI).contains(&opt.beta));
        }
        let poly = derive_level1(
            &registry::variant("hamming74-d2.29").unwrap().code(),
            &zero7(),
        )
        .unwrap()
        .polynomial;
        let opt = maximize(&poly);
        assert!((poly.evaluate(0.512, 0.310) - opt.f_star).abs() < 0.01);
    }

    #[test]
    fn display_lists_monomials() {
        let code = LinearCode::new(BitMatrix::from_rows(&[[1]]).unwrap()).unwrap();
        let d = derive_level1(&code, &BitVector::zeros(1)).unwrap();
        assert_eq!(d.polynomial.to_string(), "+1 * s^1 c^0 s'^1 c'^0\n");
        assert!(d.trace.to_string().contains("a=1 omega=1 coeff=+1"));
    }
}
