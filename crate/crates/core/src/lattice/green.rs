use num_complex::Complex;

use super::{
    wronskian_discrete, LatticeError, LatticeSolution, LatticeWindow, Result,
};
use crate::{Scalar, Tolerances};

/// Symmetric Green matrix on a lattice window.
///
/// Entries are stored densely; the factorized constructor guarantees
/// `G_{mn} = u1_{max(m,n)} u2_{min(m,n)} / W[u1, u2]`.
#[derive(Debug, Clone)]
pub struct GreenMatrix<T> {
    window: LatticeWindow,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> GreenMatrix<T> {
    /// Wraps a dense symmetric matrix, checking shape and symmetry.
    pub fn from_entries(window: LatticeWindow, entries: Vec<Complex<T>>) -> Result<Self> {
        let len = window.len();
        if entries.len() != len * len {
            return Err(LatticeError::InvalidInput(format!(
                "Green matrix needs {} entries for window [{}, {}], got {}",
                len * len,
                window.lo(),
                window.hi(),
                entries.len()
            )));
        }
        let scale = entries
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), T::max)
            .max(T::one());
        let tol = Tolerances::<T>::standard().algebraic * scale;
        for m in 0..len {
            for n in 0..m {
                if (entries[m * len + n] - entries[n * len + m]).norm() > tol {
                    return Err(LatticeError::InvalidInput(format!(
                        "Green matrix not symmetric at offsets ({m}, {n})"
                    )));
                }
            }
        }
        Ok(GreenMatrix { window, entries })
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn entry(&self, m: i64, n: i64) -> Complex<T> {
        let len = self.window.len();
        self.entries[self.window.offset(m) * len + self.window.offset(n)]
    }

    pub fn diagonal_entry(&self, n: i64) -> Complex<T> {
        self.entry(n, n)
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        self.window.iter().map(|n| self.diagonal_entry(n)).collect()
    }
}

/// Particular Green matrix `G_{mn} = u1_{max(m,n)} u2_{min(m,n)} / W[u1, u2]`
/// built from an independent solution pair.
pub fn build_green_matrix<T: Scalar>(
    u1: &LatticeSolution<T>,
    u2: &LatticeSolution<T>,
) -> Result<GreenMatrix<T>> {
    let w = wronskian_discrete(u1, u2)?;
    let scale = u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| a.norm() * b.norm())
        .fold(T::zero(), T::max)
        .max(T::one());
    let floor = T::epsilon().sqrt() * scale;
    if w.norm() <= floor {
        return Err(LatticeError::DependentSolutions {
            magnitude: w.norm().to_f64().unwrap_or(f64::NAN),
            floor: floor.to_f64().unwrap_or(f64::NAN),
        });
    }

    let window = u1.window();
    let len = window.len();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); len * len];
    for m in 0..len {
        for n in 0..=m {
            let g = u1.values()[m] * u2.values()[n] / w;
            entries[m * len + n] = g;
            entries[n * len + m] = g;
        }
    }
    Ok(GreenMatrix { window, entries })
}

/// Square roots of the Green diagonal with a recorded branch choice.
#[derive(Debug, Clone)]
pub struct DiagonalSequence<T> {
    window: LatticeWindow,
    values: Vec<Complex<T>>,
    positive: bool,
}

impl<T: Scalar> DiagonalSequence<T> {
    /// Wraps raw diagonal roots; the positivity flag is derived from the
    /// entries.
    pub fn from_values(window: LatticeWindow, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(LatticeError::InvalidInput(format!(
                "diagonal length {} does not match window [{}, {}]",
                values.len(),
                window.lo(),
                window.hi()
            )));
        }
        let imag_tol = Tolerances::<T>::standard().algebraic;
        let positive = values
            .iter()
            .all(|z| z.re > T::zero() && z.im.abs() <= imag_tol * z.norm());
        Ok(DiagonalSequence {
            window,
            values,
            positive,
        })
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

    /// True when the positive square-root branch applies on the whole window.
    pub fn is_positive(&self) -> bool {
        self.positive
    }
}

/// Takes `z_n = sqrt(G_nn)` on the positive branch.
///
/// The diagonal must be strictly positive: vanishing entries invalidate the
/// transformation and non-positive ones would need a phase convention the
/// positive branch does not define, so both are rejected.
pub fn diagonal_sequence<T: Scalar>(green: &GreenMatrix<T>) -> Result<DiagonalSequence<T>> {
    let window = green.window();
    let diag = green.diagonal();
    let scale = diag.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let imag_tol = Tolerances::<T>::standard().algebraic;

    let mut values = Vec::with_capacity(diag.len());
    for (k, g) in diag.iter().enumerate() {
        let n = window.index(k);
        if g.norm() <= T::epsilon() * scale {
            return Err(LatticeError::DegenerateDiagonal { index: n });
        }
        if g.re <= T::zero() || g.im.abs() > imag_tol * g.norm() {
            return Err(LatticeError::NonPositiveDiagonal {
                index: n,
                re: g.re.to_f64().unwrap_or(f64::NAN),
                im: g.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        values.push(Complex::new(g.re.sqrt(), T::zero()));
    }
    Ok(DiagonalSequence {
        window,
        values,
        positive: true,
    })
}
