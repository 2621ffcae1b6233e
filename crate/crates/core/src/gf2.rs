//! Dense linear algebra over GF(2).
//!
//! Matrices are stored row-major with each row packed into a `u64`
//! (bit `j` of row `i` is entry `(i, j)`), which covers every code this
//! crate deals with (`n <= 64`, `k <= 20`).
//!
//! Vectors use little-endian labels throughout: the integer label of a
//! vector `z` is `sum_i z_i * 2^i`, so element 0 is the least significant
//! bit. Qubit `i` of the simulator carries element `i`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Widest row a [`BitMatrix`] can hold.
pub const MAX_COLS: usize = 64;

/// A vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    /// Builds a vector from 0/1 entries. Rejects empty input and entries
    /// other than 0 or 1.
    pub fn new(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidInput("bit vector must be non-empty".into()));
        }
        let bits = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidInput(format!("non-binary entry {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit vector must be non-empty");
        Self {
            bits: vec![false; len],
        }
    }

    /// Unpacks the low `len` bits of `mask` (little-endian).
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len > 0 && len <= 64);
        Self {
            bits: (0..len).map(|i| (mask >> i) & 1 == 1).collect(),
        }
    }

    /// Packs into a little-endian integer label.
    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Element-wise sum over GF(2).
    pub fn xor(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            bits: self.iter().zip(other.iter()).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        Ok(self.xor(other)?.weight())
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string such as `"1000110"`; element 0 is the first character.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::InvalidInput(format!(
                    "unexpected character `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&bits)
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Per-column weights of a matrix and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDegrees {
    pub degrees: Vec<usize>,
    pub mean: f64,
}

/// A dense `rows x cols` matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        Self {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.data[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from nested 0/1 rows. Ragged or empty input is rejected.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidInput("matrix has no rows".into()))?;
        let cols = first.as_ref().len();
        if cols == 0 {
            return Err(Error::InvalidInput("matrix has no columns".into()));
        }
        if cols > MAX_COLS {
            return Err(Error::InvalidInput(format!(
                "{cols} columns exceeds the supported {MAX_COLS}"
            )));
        }
        let mut data = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref();
            check_len(cols, row.len())?;
            let mut packed = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => packed |= 1 << j,
                    other => return Err(Error::InvalidInput(format!("non-binary entry {other}"))),
                }
            }
            data.push(packed);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from packed row masks (bit `j` = column `j`).
    pub fn from_row_masks(row_masks: Vec<u64>, cols: usize) -> Self {
        assert!(!row_masks.is_empty() && cols > 0 && cols <= MAX_COLS);
        let valid = if cols == 64 {
            u64::MAX
        } else {
            (1u64 << cols) - 1
        };
        assert!(row_masks.iter().all(|r| r & !valid == 0));
        Self {
            rows: row_masks.len(),
            cols,
            data: row_masks,
        }
    }

    /// Parses the plain-text format: one row per line of `0`/`1`
    /// characters, spaces allowed, `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut row = Vec::new();
            for ch in content.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    c if c.is_whitespace() => {}
                    c => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
            if row.is_empty() {
                continue;
            }
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("row has {} entries, expected {w}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "no matrix rows found".into(),
            });
        }
        Self::from_rows(&rows)
    }

    /// Renders the matrix in the same text format `parse_text` reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<&str> = (0..self.cols)
                .map(|j| if self.get(i, j) { "1" } else { "0" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.data[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    /// Packed row `i`.
    pub fn row_mask(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.data
    }

    /// Packed column `j`: bit `i` is entry `(i, j)`.
    pub fn column_mask(&self, j: usize) -> u64 {
        assert!(j < self.cols);
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (((r >> j) & 1) << i))
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_mask(self.column_mask(j), self.rows)
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_mask(self.data[i], self.cols)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    /// Adds row `src` into row `dst`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        self.data[dst] ^= self.data[src];
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).map(|j| self.column_mask(j)).collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix keeping only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        assert!(!columns.is_empty());
        let data = self
            .data
            .iter()
            .map(|r| {
                columns
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (t, &j)| acc | (((r >> j) & 1) << t))
            })
            .collect();
        Self {
            rows: self.rows,
            cols: columns.len(),
            data,
        }
    }

    /// Row-vector product `u * self`, as a packed mask of length `cols`.
    pub fn combine_rows(&self, u_mask: u64) -> u64 {
        self.data
            .iter()
            .enumerate()
            .filter(|(i, _)| (u_mask >> i) & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r)
    }

    /// `u * self` for a length-`rows` vector `u`.
    pub fn vec_mul(&self, u: &BitVector) -> Result<BitVector> {
        check_len(self.rows, u.len())?;
        Ok(BitVector::from_mask(
            self.combine_rows(u.to_mask()),
            self.cols,
        ))
    }

    /// `self * v` for a length-`cols` column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.cols, v.len())?;
        let v = v.to_mask();
        let bits: Vec<u8> = self
            .data
            .iter()
            .map(|r| ((r & v).count_ones() & 1) as u8)
            .collect();
        BitVector::new(&bits)
    }

    /// Product over GF(2).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        let data = self.data.iter().map(|&r| other.combine_rows(r)).collect();
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1u64 << col;
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn is_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn column_degrees(&self) -> ColumnDegrees {
        let degrees: Vec<usize> = (0..self.cols)
            .map(|j| self.column_mask(j).count_ones() as usize)
            .collect();
        let mean = degrees.iter().sum::<usize>() as f64 / self.cols as f64;
        ColumnDegrees { degrees, mean }
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.data.iter().map(|r| r.count_ones() as usize).collect()
    }

    /// Every combination of rows, sorted. Only sensible for small `rows`.
    pub fn row_space(&self) -> Vec<u64> {
        assert!(self.rows <= 24, "row space too large to enumerate");
        let mut words: Vec<u64> = (0..1u64 << self.rows)
            .map(|u| self.combine_rows(u))
            .collect();
        words.sort_unstable();
        words
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Draws a uniformly random full-rank `k x k` matrix by rejection sampling.
pub fn random_fullrank<R: Rng + ?Sized>(k: usize, rng: &mut R) -> BitMatrix {
    assert!((1..=MAX_COLS).contains(&k));
    let valid = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & valid).collect();
        let m = BitMatrix::from_row_masks(rows, k);
        if m.rank() == k {
            return m;
        }
    }
}
