//! Exact evaluation of the exponential sums appearing in Whittaker
//! coefficients of metaplectic parabolic Eisenstein series.
//!
//! The crate is organized around five layers:
//!
//! - [`cyclotomic`]: exact arithmetic in `Z[zeta_M][1/p]`, the value ring of
//!   every sum computed here.
//! - [`charsums`]: power residue symbols, additive characters and the Gauss
//!   sums `g_j(m,l)`, `g(k)`, `h(k)`.
//! - [`root_system`]: root data, reduced words, and the parabolic
//!   combinatorics (orderings, pairings, commutation pairs) that shape the
//!   sums.
//! - [`expsum`]: brute-force and closed-form evaluation of the sums
//!   `S_{l,m}` and `H(d;t)`, support predicates, twisted multiplicativity
//!   and cancellation checks.
//! - [`crystal`]: Lusztig data, transition maps, string data, highest-weight
//!   polytopes, BZL patterns and the standard contribution `G(P)`.

pub mod charsums;
pub mod crystal;
pub mod cyclotomic;
pub mod expsum;
pub mod root_system;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, Clone, ThisError)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("cover degree {n} invalid for p = {p}: need 2n | p - 1")]
    BadCoverDegree { p: u64, n: u32 },
    #[error("argument {0} is divisible by p = {1}")]
    NotAUnit(u64, u64),
    #[error("unsupported Cartan type/rank: {0}")]
    UnsupportedType(String),
    #[error("node {0} is out of range for rank {1}")]
    BadNode(usize, usize),
    #[error("node {0} is not braidless; no parabolic data can be built")]
    NotBraidless(usize),
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("pair ({0}, {1}) is not a commutation pair for simple root {2}")]
    NotACommutationPair(usize, usize, usize),
    #[error(
        "ill-defined sum: pair ({k}, {kp}) for root {j} has denominator exponent {e} > 0 while l_{k} = 0"
    )]
    IllDefinedSum { k: usize, kp: usize, j: usize, e: i64 },
    #[error("prime {0} not among the declared contexts")]
    UnsupportedPrime(u64),
    #[error("braid move not applicable at position {0}")]
    BadBraidMove(usize),
    #[error("transition maps for non-simply-laced letters are not supported")]
    NonSimplyLaced,
    #[error("word is not a valid type-A word for string extraction")]
    NotTypeA,
    #[error("{0}")]
    Invalid(String),
}
