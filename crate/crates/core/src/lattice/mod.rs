//! Discrete pipeline for `u_{n+1} + u_{n-1} - (2 + V_n) u_n = 0` on finite
//! integer windows: three-term recurrences, Wronskians, Green matrices,
//! reconstruction of the solution basis and the potential from the Green
//! diagonal, comparison bounds with decay distances, and the factorization of
//! `-Δ + V` into first-order difference operators.

mod agmon;
mod bohl;
mod darboux;
mod green;
mod solve;
mod types;

pub use agmon::{
    agmon_bound_report, agmon_constant, agmon_distance, AgmonBoundRecord, AgmonDistance,
    AgmonReport, AgmonVariant,
};
pub use bohl::{
    bohl_reconstruct, green_product_residual, gtov_residual, potential_from_diagonal, s_factor,
    BohlBasisDiscrete, SFactorSequence,
};
pub use darboux::{darboux_discrete_apply, darboux_discrete_q, DiscreteDarbouxApply};
pub use green::{build_green_matrix, diagonal_sequence, DiagonalSequence, GreenMatrix};
pub use solve::{
    positive_basis, solve_three_term, symmetry_map, wronskian_discrete, PositiveBasis,
    RECESSIVE_TRIM,
};
pub use types::{LatticePotential, LatticeSolution, LatticeWindow};

/// Errors raised by the lattice operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("window [{lo}, {hi}] too short: need at least {min} points, got {len}")]
    WindowTooShort { lo: i64, hi: i64, len: usize, min: usize },
    #[error("window mismatch: [{lo_a}, {hi_a}] vs [{lo_b}, {hi_b}]")]
    WindowMismatch { lo_a: i64, hi_a: i64, lo_b: i64, hi_b: i64 },
    #[error("index {index} outside window [{lo}, {hi}]")]
    IndexOutOfWindow { index: i64, lo: i64, hi: i64 },
    #[error(
        "Wronskian varies across the window (spread {spread:.3e} exceeds {tol:.3e}); \
         the inputs do not solve one equation"
    )]
    NonConstantWronskian { spread: f64, tol: f64 },
    #[error("solutions are linearly dependent (|W| = {magnitude:.3e} below {floor:.3e})")]
    DependentSolutions { magnitude: f64, floor: f64 },
    #[error("Green diagonal vanishes at index {index}; the transformation is invalid there")]
    DegenerateDiagonal { index: i64 },
    #[error(
        "Green diagonal at index {index} is not strictly positive (value {re:.6e} + {im:.6e}i); \
         the positive branch rejects it"
    )]
    NonPositiveDiagonal { index: i64, re: f64, im: f64 },
    #[error("computed solution changes sign at index {index}; positivity fails on this window")]
    PositivityFailure { index: i64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("overflow while recurring near index {index}; window too long for the growth rate")]
    Overflow { index: i64 },
}

pub type Result<T> = std::result::Result<T, LatticeError>;
