//! Quasi-maximum-likelihood decoding of binary linear codes with the
//! Quantum Approximate Optimization Algorithm, simulated exactly.
//!
//! The decoder maps a received word `y` and generator matrix `G` to a
//! diagonal cost Hamiltonian over the `k` information qubits whose
//! eigenvalue at `z` is the correlation between `y` and the codeword `zG`.
//! Maximising it is maximum-likelihood decoding over a binary symmetric
//! channel.
//!
//! - [`gf2`]: GF(2) matrices and vectors.
//! - [`code`]: linear codes, brute-force ML decoding, built-in generators.
//! - [`channel`]: binary symmetric channel.
//! - [`cost`]: the cost Hamiltonian.
//! - [`statevector`]: exact k-qubit simulation.
//! - [`qaoa`]: ansatz, expectation, angle optimisation, decoding metrics.
//! - [`analytic`]: closed-form level-1 expectation as a trig polynomial.
//! - [`experiments`]: end-to-end studies producing CSV tables.

pub mod analytic;
pub mod channel;
pub mod code;
pub mod cost;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod nelder_mead;
pub mod qaoa;
pub mod statevector;

pub use error::{Error, Result};
