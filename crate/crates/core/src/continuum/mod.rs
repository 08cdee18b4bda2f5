//! Continuum pipeline for `-u'' + V(x) u = 0` on a uniform grid: solution
//! bases with carried derivatives, non-vanishing complex combinations, the
//! diagonal function `Z = (u1 u2)^(1/2)` with its nonlinear residual, the
//! basis `φ± = Z exp(±∫ 1/(2Z²))`, the Green function it generates,
//! oscillation classification, and first-order factorizations of the
//! operator.

mod combine;
mod darboux;
mod diagonal;
mod grid;
mod integrate;
mod oscillation;
mod potential;
mod rab;
mod stencil;

pub use combine::{
    nonvanishing_combination, special_alpha, AlphaBranch, NonvanishingCombination, SpecialAlpha,
};
pub use darboux::{
    bump_function, darboux_apply, darboux_factorization_residual, DarbouxSign,
    FactorizationResidual, PADDING_MARGIN,
};
pub use diagonal::{
    bohl_basis, conjugate_scaled, diagonal_equation_residual, diagonal_function, green_function,
    BohlBasisContinuum, DiagonalFunction, GreenFunction,
};
pub use grid::Grid;
pub use integrate::{
    integrate_sle, integrate_sle_backward, sle_residual, wronskian_grid, GridSolution,
};
pub use oscillation::{oscillation_classify, OscillationClass, OscillationReport};
pub use potential::ContinuumPotential;
pub use rab::{rab_residual, RabReport};
pub use stencil::{first_derivative, second_difference};

/// Errors raised by the continuum operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ContinuumError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids differ: [{a1}, {b1}] with {n1} points vs [{a2}, {b2}] with {n2} points")]
    GridMismatch { a1: f64, b1: f64, n1: usize, a2: f64, b2: f64, n2: usize },
    #[error("point {x} outside the open interval ({a}, {b})")]
    PointOutsideGrid { x: f64, a: f64, b: f64 },
    #[error(
        "Wronskian varies across the grid (spread {spread:.3e} exceeds {tol:.3e}); \
         the inputs do not solve one equation"
    )]
    NonConstantWronskian { spread: f64, tol: f64 },
    #[error("Wronskian is {re:.6e} + {im:.6e}i instead of 1; normalize the basis first")]
    WronskianNotNormalized { re: f64, im: f64 },
    #[error("solution product falls below {floor:.1e} near x = {x}; the diagonal degenerates")]
    DegenerateDiagonal { x: f64, floor: f64 },
    #[error(
        "combination is degenerate at x0 = {requested}; retry at x0 = {suggested} \
         where both basis members are away from zero"
    )]
    RetryAt { requested: f64, suggested: f64 },
    #[error("solution is real up to a global phase; it is dependent on its conjugate")]
    ConjugateDependent,
    #[error("diagonal residual {residual:.3e} exceeds {threshold:.3e}; refusing to build on it")]
    ResidualTooLarge { residual: f64, threshold: f64 },
    #[error("test function must vanish on the outer {margin} points of each edge")]
    InsufficientPadding { margin: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, ContinuumError>;
