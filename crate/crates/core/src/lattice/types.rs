use num_complex::Complex;

use super::{LatticeError, Result};
use crate::Scalar;

/// Inclusive index window `[n_lo, n_hi]` on the integer lattice.
///
/// A window always holds at least three points so that every sequence on it
/// has an interior index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeWindow {
    lo: i64,
    hi: i64,
}

impl LatticeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo + 2 {
            return Err(LatticeError::WindowTooShort {
                lo,
                hi,
                len: if hi >= lo { (hi - lo + 1) as usize } else { 0 },
                min: 3,
            });
        }
        Ok(LatticeWindow { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of lattice points in the window.
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi
    }

    /// Zero-based storage offset of lattice index `n`.
    pub fn offset(&self, n: i64) -> usize {
        debug_assert!(self.contains(n), "index {n} outside window");
        (n - self.lo) as usize
    }

    /// Lattice index stored at `offset`.
    pub fn index(&self, offset: usize) -> i64 {
        self.lo + offset as i64
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Interior indices `n_lo + 1 ..= n_hi - 1`.
    pub fn interior(&self) -> impl Iterator<Item = i64> {
        (self.lo + 1)..=(self.hi - 1)
    }

    /// Shrinks the window by `left`/`right` points from each side.
    pub fn shrink(&self, left: usize, right: usize) -> Result<Self> {
        LatticeWindow::new(self.lo + left as i64, self.hi - right as i64)
    }

    pub fn same_as(&self, other: &LatticeWindow) -> Result<()> {
        if self != other {
            return Err(LatticeError::WindowMismatch {
                lo_a: self.lo,
                hi_a: self.hi,
                lo_b: other.lo,
                hi_b: other.hi,
            });
        }
        Ok(())
    }
}

/// Real potential `V_n` on a lattice window.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePotential<T> {
    window: LatticeWindow,
    values: Vec<T>,
}

impl<T: Scalar> LatticePotential<T> {
    pub fn new(window: LatticeWindow, values: Vec<T>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(LatticeError::InvalidInput(format!(
                "potential length {} does not match window [{}, {}] ({} points)",
                values.len(),
                window.lo(),
                window.hi(),
                window.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LatticeError::InvalidInput(
                "potential entries must be finite".into(),
            ));
        }
        Ok(LatticePotential { window, values })
    }

    pub fn constant(window: LatticeWindow, value: T) -> Result<Self> {
        LatticePotential::new(window, vec![value; window.len()])
    }

    pub fn from_fn(window: LatticeWindow, f: impl Fn(i64) -> T) -> Result<Self> {
        LatticePotential::new(window, window.iter().map(f).collect())
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, n: i64) -> T {
        self.values[self.window.offset(n)]
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// Restriction of the potential to a sub-window.
    pub fn restrict(&self, window: LatticeWindow) -> Result<Self> {
        if !self.window.contains(window.lo()) || !self.window.contains(window.hi()) {
            return Err(LatticeError::WindowMismatch {
                lo_a: self.window.lo(),
                hi_a: self.window.hi(),
                lo_b: window.lo(),
                hi_b: window.hi(),
            });
        }
        let a = self.window.offset(window.lo());
        let b = self.window.offset(window.hi());
        LatticePotential::new(window, self.values[a..=b].to_vec())
    }
}

/// Complex-valued sequence on a lattice window, meant to solve a three-term
/// recurrence there.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution<T> {
    window: LatticeWindow,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> LatticeSolution<T> {
    pub fn new(window: LatticeWindow, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(LatticeError::InvalidInput(format!(
                "solution length {} does not match window [{}, {}] ({} points)",
                values.len(),
                window.lo(),
                window.hi(),
                window.len()
            )));
        }
        Ok(LatticeSolution { window, values })
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn value(&self, n: i64) -> Complex<T> {
        self.values[self.window.offset(n)]
    }

    /// True when every entry has negligible imaginary part and positive real
    /// part.
    pub fn is_strictly_positive(&self, imag_tol: T) -> bool {
        self.values
            .iter()
            .all(|v| v.re > T::zero() && v.im.abs() <= imag_tol * v.norm())
    }

    pub fn restrict(&self, window: LatticeWindow) -> Result<Self> {
        if !self.window.contains(window.lo()) || !self.window.contains(window.hi()) {
            return Err(LatticeError::WindowMismatch {
                lo_a: self.window.lo(),
                hi_a: self.window.hi(),
                lo_b: window.lo(),
                hi_b: window.hi(),
            });
        }
        let a = self.window.offset(window.lo());
        let b = self.window.offset(window.hi());
        LatticeSolution::new(window, self.values[a..=b].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_rejects_fewer_than_three_points() {
        assert!(LatticeWindow::new(0, 1).is_err());
        assert!(LatticeWindow::new(5, 5).is_err());
        let w = LatticeWindow::new(-2, 4).unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.offset(-2), 0);
        assert_eq!(w.index(6), 4);
        assert_eq!(w.interior().collect::<Vec<_>>(), vec![-1, 0, 1, 2, 3]);
    }

    #[test]
    fn potential_checks_length_and_finiteness() {
        let w = LatticeWindow::new(0, 4).unwrap();
        assert!(LatticePotential::new(w, vec![1.0_f64; 4]).is_err());
        assert!(LatticePotential::new(w, vec![f64::NAN; 5]).is_err());
        let v = LatticePotential::from_fn(w, |n| n as f64).unwrap();
        assert_eq!(v.value(3), 3.0);
        assert_eq!(v.min_value(), 0.0);
    }

    #[test]
    fn restrict_slices_the_right_range() {
        let w = LatticeWindow::new(0, 9).unwrap();
        let v = LatticePotential::from_fn(w, |n| n as f64).unwrap();
        let sub = v.restrict(LatticeWindow::new(2, 6).unwrap()).unwrap();
        assert_eq!(sub.values(), &[2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(v.restrict(LatticeWindow::new(5, 12).unwrap()).is_err());
    }
}
