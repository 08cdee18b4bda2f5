use super::{ContinuumError, Result};
use crate::{cast, Scalar};

/// Uniform grid of `n >= 9` points on `[a, b]`.
///
/// Nine points is the smallest grid on which the centered second-difference
/// stencils used by the residual checks have any interior room.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    a: T,
    b: T,
    n: usize,
}

impl<T: Scalar> Grid<T> {
    pub const MIN_POINTS: usize = 9;

    pub fn new(a: T, b: T, n: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !(b > a) {
            return Err(ContinuumError::InvalidGrid(format!(
                "need finite endpoints with b > a, got [{a}, {b}]"
            )));
        }
        if n < Self::MIN_POINTS {
            return Err(ContinuumError::InvalidGrid(format!(
                "need at least {} points, got {n}",
                Self::MIN_POINTS
            )));
        }
        Ok(Grid { a, b, n })
    }

    /// Grid over `[a, b]` with the point count chosen from a requested step.
    pub fn from_step(a: T, b: T, h: T) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(ContinuumError::InvalidGrid(format!(
                "step must be positive and finite, got {h}"
            )));
        }
        let count = ((b - a) / h).round();
        let count = count
            .to_f64()
            .filter(|c| c.is_finite() && *c >= 1.0 && *c < 1e9)
            .ok_or_else(|| {
                ContinuumError::InvalidGrid(format!("step {h} invalid for interval [{a}, {b}]"))
            })? as usize;
        Grid::new(a, b, count + 1)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        (self.b - self.a) / cast::<T>((self.n - 1) as f64)
    }

    pub fn x(&self, i: usize) -> T {
        debug_assert!(i < self.n);
        if i == self.n - 1 {
            self.b
        } else {
            self.a + self.step() * cast::<T>(i as f64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the grid point nearest to `x`; `x` must lie strictly inside
    /// the interval.
    pub fn nearest_interior_index(&self, x: T) -> Result<usize> {
        if !(x > self.a) || !(x < self.b) {
            return Err(ContinuumError::PointOutsideGrid {
                x: x.to_f64().unwrap_or(f64::NAN),
                a: self.a.to_f64().unwrap_or(f64::NAN),
                b: self.b.to_f64().unwrap_or(f64::NAN),
            });
        }
        let i = ((x - self.a) / self.step())
            .round()
            .to_f64()
            .expect("index fits in f64") as usize;
        Ok(i.clamp(1, self.n - 2))
    }

    /// Clamped linear-interpolation coordinates for an arbitrary `x` in
    /// `[a, b]`: the left index and the fractional offset.
    pub fn locate(&self, x: T) -> Result<(usize, T)> {
        if !(x >= self.a) || !(x <= self.b) {
            return Err(ContinuumError::PointOutsideGrid {
                x: x.to_f64().unwrap_or(f64::NAN),
                a: self.a.to_f64().unwrap_or(f64::NAN),
                b: self.b.to_f64().unwrap_or(f64::NAN),
            });
        }
        let t = (x - self.a) / self.step();
        let i = t
            .floor()
            .to_f64()
            .expect("index fits in f64")
            .max(0.0) as usize;
        let i = i.min(self.n - 2);
        Ok((i, t - cast::<T>(i as f64)))
    }

    pub fn same_as(&self, other: &Grid<T>) -> Result<()> {
        if self != other {
            return Err(ContinuumError::GridMismatch {
                a1: self.a.to_f64().unwrap_or(f64::NAN),
                b1: self.b.to_f64().unwrap_or(f64::NAN),
                n1: self.n,
                a2: other.a.to_f64().unwrap_or(f64::NAN),
                b2: other.b.to_f64().unwrap_or(f64::NAN),
                n2: other.n,
            });
        }
        Ok(())
    }
}
