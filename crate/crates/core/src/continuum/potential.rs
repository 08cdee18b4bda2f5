use super::{ContinuumError, Grid, Result};
use crate::{cast, Scalar};

/// Real continuous potential on an interval.
///
/// The built-in families cover the cases the front end accepts; sampled
/// tables interpolate linearly and clamp at the edges.
#[derive(Debug, Clone)]
pub enum ContinuumPotential<T> {
    Constant(T),
    Affine { slope: T, intercept: T },
    Power { scale: T, exponent: T },
    Samples { grid: Grid<T>, values: Vec<T> },
}

impl<T: Scalar> ContinuumPotential<T> {
    pub fn samples(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(ContinuumError::InvalidInput(format!(
                "sample count {} does not match grid point count {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ContinuumError::InvalidInput(
                "sampled potential entries must be finite".into(),
            ));
        }
        Ok(ContinuumPotential::Samples { grid, values })
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            ContinuumPotential::Constant(c) => *c,
            ContinuumPotential::Affine { slope, intercept } => *slope * x + *intercept,
            ContinuumPotential::Power { scale, exponent } => *scale * x.powf(*exponent),
            ContinuumPotential::Samples { grid, values } => {
                let clamped = x.max(grid.a()).min(grid.b());
                let (i, t) = grid.locate(clamped).expect("clamped point is inside");
                values[i] + (values[i + 1] - values[i]) * t
            }
        }
    }

    /// Checks that the potential is finite on every point of `grid`.
    pub fn validate_on(&self, grid: &Grid<T>) -> Result<()> {
        for x in grid.points() {
            if !self.eval(x).is_finite() {
                return Err(ContinuumError::InvalidInput(format!(
                    "potential is not finite at x = {x}"
                )));
            }
        }
        Ok(())
    }

    /// Smallest value over the points of `grid`.
    pub fn min_on(&self, grid: &Grid<T>) -> T {
        grid.points()
            .map(|x| self.eval(x))
            .fold(T::infinity(), T::min)
    }

    /// Left-sided second-order difference quotient of the potential at `x`.
    pub fn derivative_at(&self, x: T, step: T) -> T {
        match self {
            ContinuumPotential::Constant(_) => T::zero(),
            ContinuumPotential::Affine { slope, .. } => *slope,
            _ => {
                let three = cast::<T>(3.0);
                let four = cast::<T>(4.0);
                let two = cast::<T>(2.0);
                (three * self.eval(x) - four * self.eval(x - step)
                    + self.eval(x - two * step))
                    / (two * step)
            }
        }
    }
}

impl<T: Scalar> ContinuumPotential<T> {
    /// `V(x) = scale * x^exponent` helper with validation deferred to
    /// [`ContinuumPotential::validate_on`].
    pub fn power(scale: f64, exponent: f64) -> Self {
        ContinuumPotential::Power {
            scale: cast(scale),
            exponent: cast(exponent),
        }
    }
}
