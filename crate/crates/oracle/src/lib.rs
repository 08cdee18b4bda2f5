//! Independent ground truth for the reconstruction pipelines: direct
//! tridiagonal inversion for Green matrices, raw recurrence and stencil
//! residuals, and nothing else.
//!
//! Everything here is deliberately brute force. The point is that these
//! routines share no code path with the factorized constructions they are
//! used to check, so agreement between the two is evidence, not tautology.
//! They are meant for tests and verification reports; the core pipelines
//! never call them.

use num_complex::Complex;

use bohl_core::lattice::{GreenMatrix, LatticePotential, LatticeSolution, LatticeWindow};
use bohl_core::{cast, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("tridiagonal pivot {value:.3e} too small at index {index}; system is singular there")]
    SingularPivot { index: i64, value: f64 },
    #[error("window mismatch between potential and sequence")]
    WindowMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Dirichlet-padded tridiagonal realization of `-Δ + V` on a window: main
/// diagonal `2 + V_n`, off-diagonals `-1`, zero boundary values outside.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem<T> {
    window: LatticeWindow,
    diagonal: Vec<T>,
}

impl<T: Scalar> TridiagonalSystem<T> {
    pub fn from_potential(potential: &LatticePotential<T>) -> Self {
        let two = cast::<T>(2.0);
        TridiagonalSystem {
            window: potential.window(),
            diagonal: potential.values().iter().map(|v| two + *v).collect(),
        }
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    /// Applies the matrix to a vector, with Dirichlet padding at both ends.
    pub fn apply(&self, values: &[T]) -> Result<Vec<T>> {
        let n = self.diagonal.len();
        if values.len() != n {
            return Err(OracleError::InvalidInput(format!(
                "vector length {} does not match system size {n}",
                values.len()
            )));
        }
        Ok((0..n)
            .map(|i| {
                let left = if i > 0 { values[i - 1] } else { T::zero() };
                let right = if i + 1 < n { values[i + 1] } else { T::zero() };
                self.diagonal[i] * values[i] - left - right
            })
            .collect())
    }

    /// Thomas-algorithm solve of `A x = rhs`.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.diagonal.len();
        if rhs.len() != n {
            return Err(OracleError::InvalidInput(format!(
                "rhs length {} does not match system size {n}",
                rhs.len()
            )));
        }
        let scale = self
            .diagonal
            .iter()
            .fold(T::one(), |acc, d| acc.max(d.abs()));
        let floor = T::epsilon() * cast::<T>(64.0) * scale;

        let mut upper = vec![T::zero(); n];
        let mut work = vec![T::zero(); n];
        let mut pivot = self.diagonal[0];
        if pivot.abs() <= floor {
            return Err(OracleError::SingularPivot {
                index: self.window.index(0),
                value: pivot.to_f64().unwrap_or(f64::NAN),
            });
        }
        upper[0] = -T::one() / pivot;
        work[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diagonal[i] + upper[i - 1];
            if pivot.abs() <= floor {
                return Err(OracleError::SingularPivot {
                    index: self.window.index(i),
                    value: pivot.to_f64().unwrap_or(f64::NAN),
                });
            }
            upper[i] = -T::one() / pivot;
            work[i] = (rhs[i] + work[i - 1]) / pivot;
        }
        let mut x = vec![T::zero(); n];
        x[n - 1] = work[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = work[i] - upper[i] * x[i + 1];
        }
        Ok(x)
    }
}

/// Green matrix by direct inversion: one tridiagonal solve per unit vector.
pub fn green_by_inversion<T: Scalar>(potential: &LatticePotential<T>) -> Result<GreenMatrix<T>> {
    let system = TridiagonalSystem::from_potential(potential);
    let window = potential.window();
    let n = window.len();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
    let mut rhs = vec![T::zero(); n];
    for j in 0..n {
        rhs[j] = T::one();
        let column = system.solve(&rhs)?;
        rhs[j] = T::zero();
        for (i, value) in column.iter().enumerate() {
            entries[i * n + j] = Complex::new(*value, T::zero());
        }
    }
    GreenMatrix::from_entries(window, entries)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))
}

/// Raw recurrence residual
/// `max_n |u_{n+1} + u_{n-1} - (2 + V_n) u_n| / max(1, |u_n|)` over interior
/// indices.
pub fn recurrence_residual<T: Scalar>(
    potential: &LatticePotential<T>,
    solution: &LatticeSolution<T>,
) -> Result<T> {
    if potential.window() != solution.window() {
        return Err(OracleError::WindowMismatch);
    }
    let two = Complex::new(cast::<T>(2.0), T::zero());
    let mut worst = T::zero();
    for n in potential.window().interior() {
        let coeff = two + Complex::new(potential.value(n), T::zero());
        let res = (solution.value(n + 1) + solution.value(n - 1) - coeff * solution.value(n))
            .norm();
        worst = worst.max(res / solution.value(n).norm().max(T::one()));
    }
    Ok(worst)
}

/// Centered second derivative `(f_{k+1} - 2 f_k + f_{k-1}) / h²`; the output
/// is aligned with offsets `1 ..= n - 2` of the input, endpoints excluded.
pub fn fd_second_derivative<T: Scalar>(f: &[Complex<T>], step: T) -> Result<Vec<Complex<T>>> {
    if f.len() < 3 {
        return Err(OracleError::InvalidInput(
            "need at least three samples for a centered stencil".into(),
        ));
    }
    if !(step > T::zero()) {
        return Err(OracleError::InvalidInput(format!(
            "step must be positive, got {step}"
        )));
    }
    let h2 = Complex::new(step * step, T::zero());
    let two = Complex::new(cast::<T>(2.0), T::zero());
    Ok((1..f.len() - 1)
        .map(|i| (f[i + 1] - two * f[i] + f[i - 1]) / h2)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn free_three_point_inverse_matches_the_hand_computation() {
        let w = LatticeWindow::new(1, 3).unwrap();
        let v = LatticePotential::constant(w, 0.0_f64).unwrap();
        let g = green_by_inversion(&v).unwrap();
        // min(m,n) (N + 1 - max(m,n)) / (N + 1) with N = 3.
        assert!((g.entry(1, 1).re - 0.75).abs() < 1e-14);
        assert!((g.entry(1, 3).re - 0.25).abs() < 1e-14);
        assert!((g.entry(2, 2).re - 1.0).abs() < 1e-14);
        for m in 1..=3 {
            for n in 1..=3 {
                let expected = (m.min(n) as f64) * (4 - m.max(n)) as f64 / 4.0;
                assert!((g.entry(m, n).re - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constant_two_interior_diagonal_matches_the_closed_form() {
        let w = LatticeWindow::new(0, 49).unwrap();
        let v = LatticePotential::constant(w, 2.0_f64).unwrap();
        let g = green_by_inversion(&v).unwrap();
        for n in 20..30 {
            assert!((g.entry(n, n).re - 0.2886751).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_times_matrix_is_the_identity() {
        let w = LatticeWindow::new(0, 30).unwrap();
        let v = LatticePotential::from_fn(w, |n| 0.5 + 0.1 * ((n * n) % 7) as f64).unwrap();
        let system = TridiagonalSystem::from_potential(&v);
        let g = green_by_inversion(&v).unwrap();
        for j in 0..=30 {
            let column: Vec<f64> = (0..=30).map(|i| g.entry(i, j).re).collect();
            let image = system.apply(&column).unwrap();
            for (i, value) in image.iter().enumerate() {
                let expected = if i as i64 == j { 1.0 } else { 0.0 };
                assert!((value - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_system_names_the_pivot() {
        let w = LatticeWindow::new(0, 2).unwrap();
        let v = LatticePotential::constant(w, -2.0_f64).unwrap();
        assert!(matches!(
            green_by_inversion(&v),
            Err(OracleError::SingularPivot { index: 0, .. })
        ));
    }

    #[test]
    fn recurrence_residual_flags_corruption() {
        let w = LatticeWindow::new(0, 10).unwrap();
        let v = LatticePotential::constant(w, 0.0_f64).unwrap();
        let linear = LatticeSolution::new(w, (0..=10).map(|n| c(n as f64)).collect()).unwrap();
        assert_eq!(recurrence_residual(&v, &linear).unwrap(), 0.0);

        let r = (2.0 + 2.0 + (2.0_f64 * 6.0).sqrt()) / 2.0;
        let v2 = LatticePotential::constant(w, 2.0_f64).unwrap();
        let geometric = LatticeSolution::new(w, (0..=10).map(|n| c(r.powi(n))).collect()).unwrap();
        assert!(recurrence_residual(&v2, &geometric).unwrap() < 1e-12);

        let mut corrupted: Vec<_> = (0..=10).map(|n| c(n as f64)).collect();
        corrupted[5] = c(5.0 + 1e-3);
        let bad = LatticeSolution::new(w, corrupted).unwrap();
        assert!(recurrence_residual(&v, &bad).unwrap() >= 1e-4);
    }

    #[test]
    fn second_derivative_stencil_reference_values() {
        let h = 1e-3_f64;
        let xs: Vec<f64> = (-500..=500).map(|i| i as f64 * h).collect();

        let quadratic: Vec<_> = xs.iter().map(|x| c(x * x)).collect();
        for d in fd_second_derivative(&quadratic, h).unwrap() {
            assert!((d.re - 2.0).abs() < 1e-8);
        }

        let exponential: Vec<_> = xs.iter().map(|x| c(x.exp())).collect();
        let d = fd_second_derivative(&exponential, h).unwrap();
        assert!((d[499].re - 1.0).abs() < 1e-6);

        let constant = vec![c(7.0); 100];
        for d in fd_second_derivative(&constant, h).unwrap() {
            assert_eq!(d.re, 0.0);
        }
    }
}
