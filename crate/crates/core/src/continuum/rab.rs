use num_complex::Complex;

use super::{stencil, ContinuumError, ContinuumPotential, Grid, Result};
use crate::{cast, Scalar};

/// Residual report for the nonlinear equation `-w'' + V w = -1/(4w³)`.
#[derive(Debug, Clone, Copy)]
pub struct RabReport<T> {
    /// Max-norm of `-w'' + V w + 1/(4w³)` over the interior.
    pub residual: T,
    /// Trapezoid value of `∫ w²`: a square-integrability indicator on this
    /// window, not a verdict.
    pub l2_mass: T,
}

/// Checks a candidate amplitude `w > 0` against the nonlinear equation whose
/// square-integrable solutions correspond to square-integrable oscillatory
/// solutions of the linear equation.
pub fn rab_residual<T: Scalar>(
    w: &[T],
    potential: &ContinuumPotential<T>,
    grid: &Grid<T>,
) -> Result<RabReport<T>> {
    if w.len() != grid.len() {
        return Err(ContinuumError::InvalidInput(format!(
            "amplitude length {} does not match the grid ({} points)",
            w.len(),
            grid.len()
        )));
    }
    if let Some(i) = w.iter().position(|v| !(*v > T::zero())) {
        return Err(ContinuumError::InvalidInput(format!(
            "amplitude must be strictly positive; offending value {} at x = {}",
            w[i],
            grid.x(i)
        )));
    }

    let complex: Vec<Complex<T>> = w.iter().map(|v| Complex::new(*v, T::zero())).collect();
    let d2 = stencil::second_difference(&complex, grid.step());
    let four = cast::<T>(4.0);
    let mut residual = T::zero();
    for (k, d2w) in d2.iter().enumerate() {
        let i = k + 1;
        let v = potential.eval(grid.x(i));
        let r = -d2w.re + v * w[i] + (four * w[i] * w[i] * w[i]).recip();
        residual = residual.max(r.abs());
    }

    let h = grid.step();
    let mut l2 = T::zero();
    for i in 1..grid.len() {
        l2 = l2 + cast::<T>(0.5) * (w[i] * w[i] + w[i - 1] * w[i - 1]) * h;
    }

    Ok(RabReport {
        residual,
        l2_mass: l2,
    })
}
