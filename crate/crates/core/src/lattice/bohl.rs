use num_complex::Complex;

use super::{
    wronskian_discrete, DiagonalSequence, GreenMatrix, LatticeError, LatticePotential,
    LatticeSolution, LatticeWindow, Result,
};
use crate::{cast, Scalar, Tolerances};

/// Per-step growth factors `S_n`, defined for `n_lo + 1 <= n <= n_hi`.
#[derive(Debug, Clone)]
pub struct SFactorSequence<T> {
    window: LatticeWindow,
    values: Vec<Complex<T>>,
    positive: bool,
    max_identity_residual: T,
}

impl<T: Scalar> SFactorSequence<T> {
    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    /// `S_n`; defined for `n_lo + 1 <= n <= n_hi`.
    pub fn value(&self, n: i64) -> Complex<T> {
        debug_assert!(n > self.window.lo() && n <= self.window.hi());
        self.values[(n - self.window.lo() - 1) as usize]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Largest residual of `S_n - 1/S_n - 1/(z_n z_{n-1})` over the window.
    pub fn max_identity_residual(&self) -> T {
        self.max_identity_residual
    }
}

/// Larger root of `S - 1/S = 1/(z_n z_{n-1})`:
/// `S_n = (1 + sqrt(1 + 4 z_n² z_{n-1}²)) / (2 z_n z_{n-1})`.
pub fn s_factor<T: Scalar>(z: &DiagonalSequence<T>) -> Result<SFactorSequence<T>> {
    let window = z.window();
    let one = Complex::new(T::one(), T::zero());
    let four = Complex::new(cast::<T>(4.0), T::zero());
    let two = Complex::new(cast::<T>(2.0), T::zero());

    let mut values = Vec::with_capacity(window.len() - 1);
    let mut max_residual = T::zero();
    for k in 1..window.len() {
        let x = z.values()[k] * z.values()[k - 1];
        if x.norm() <= T::zero() {
            return Err(LatticeError::DegenerateDiagonal {
                index: window.index(k),
            });
        }
        let s = (one + (one + four * x * x).sqrt()) / (two * x);
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(LatticeError::Overflow {
                index: window.index(k),
            });
        }
        let residual = (s - one / s - one / x).norm() / s.norm().max(T::one());
        max_residual = max_residual.max(residual);
        values.push(s);
    }

    let positive = z.is_positive();
    debug_assert!(
        max_residual <= Tolerances::<T>::standard().algebraic,
        "quadratic-root identity violated: {max_residual:?}"
    );
    Ok(SFactorSequence {
        window,
        values,
        positive,
        max_identity_residual: max_residual,
    })
}

/// Solution pair rebuilt from the Green diagonal, anchored at index `m`.
#[derive(Debug, Clone)]
pub struct BohlBasisDiscrete<T> {
    pub anchor: i64,
    pub plus: LatticeSolution<T>,
    pub minus: LatticeSolution<T>,
}

/// Rebuilds the solution basis from the diagonal roots:
/// `φ±_n = z_n (∏_{ℓ=m+1}^n S_ℓ)^{±1}` with the empty product equal to 1 at
/// the anchor (and the inverted product left of it).
///
/// Both members solve the recurrence for the potential recovered by
/// [`potential_from_diagonal`], `W[φ⁻, φ⁺] = 1`, and `φ⁺_n φ⁻_n = z_n²`.
pub fn bohl_reconstruct<T: Scalar>(
    z: &DiagonalSequence<T>,
    anchor: i64,
) -> Result<BohlBasisDiscrete<T>> {
    let window = z.window();
    if !window.contains(anchor) {
        return Err(LatticeError::IndexOutOfWindow {
            index: anchor,
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    let s = s_factor(z)?;
    let len = window.len();
    let anchor_k = window.offset(anchor);

    let one = Complex::new(T::one(), T::zero());
    let mut cumulative = vec![one; len];
    for k in anchor_k + 1..len {
        cumulative[k] = cumulative[k - 1] * s.values()[k - 1];
    }
    for k in (0..anchor_k).rev() {
        cumulative[k] = cumulative[k + 1] / s.values()[k];
    }

    let mut plus = Vec::with_capacity(len);
    let mut minus = Vec::with_capacity(len);
    for k in 0..len {
        let p = z.values()[k] * cumulative[k];
        let m = z.values()[k] / cumulative[k];
        if !(p.re.is_finite() && p.im.is_finite() && m.re.is_finite() && m.im.is_finite()) {
            return Err(LatticeError::Overflow {
                index: window.index(k),
            });
        }
        plus.push(p);
        minus.push(m);
    }

    let basis = BohlBasisDiscrete {
        anchor,
        plus: LatticeSolution::new(window, plus)?,
        minus: LatticeSolution::new(window, minus)?,
    };
    let w = wronskian_discrete(&basis.minus, &basis.plus)?;
    let tol = Tolerances::<T>::standard().recurrence;
    if (w - one).norm() > tol {
        return Err(LatticeError::InvalidInput(format!(
            "reconstructed pair has W[φ⁻, φ⁺] = {w} instead of 1"
        )));
    }
    Ok(basis)
}

/// Recovers the potential from the diagonal roots on the interior of the
/// window:
/// `V_n + 2 = (sqrt(1 + 4 z_n² z_{n+1}²) + sqrt(1 + 4 z_n² z_{n-1}²)) / (2 z_n²)`.
pub fn potential_from_diagonal<T: Scalar>(z: &DiagonalSequence<T>) -> Result<LatticePotential<T>> {
    if !z.is_positive() {
        return Err(LatticeError::HypothesisNotMet(
            "potential recovery is defined on the positive branch only".into(),
        ));
    }
    let window = z.window();
    if window.len() < 5 {
        return Err(LatticeError::WindowTooShort {
            lo: window.lo(),
            hi: window.hi(),
            len: window.len(),
            min: 5,
        });
    }
    let interior = window.shrink(1, 1)?;
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    let one = T::one();

    let mut values = Vec::with_capacity(interior.len());
    for k in 1..window.len() - 1 {
        let z0 = z.values()[k].re;
        let zp = z.values()[k + 1].re;
        let zm = z.values()[k - 1].re;
        let sum = (one + four * z0 * z0 * zp * zp).sqrt()
            + (one + four * z0 * z0 * zm * zm).sqrt();
        values.push(sum / (two * z0 * z0) - two);
    }
    LatticePotential::new(interior, values)
}

/// Residual of the nonlinear difference equation tying the Green diagonal to
/// the potential:
/// `r_n = (sqrt(1 + 4 G_nn G_{n+1,n+1}) + sqrt(1 + 4 G_nn G_{n-1,n-1})) / 2 - (V_n + 2) G_nn`,
/// aligned with the interior indices of the shared window.
pub fn gtov_residual<T: Scalar>(
    green: &GreenMatrix<T>,
    potential: &LatticePotential<T>,
) -> Result<Vec<T>> {
    green.window().same_as(&potential.window())?;
    let z = super::diagonal_sequence(green)?;
    let window = green.window();
    let one = T::one();
    let two = cast::<T>(2.0);
    let four = cast::<T>(4.0);

    let mut residuals = Vec::with_capacity(window.len() - 2);
    for k in 1..window.len() - 1 {
        let g0 = z.values()[k].re * z.values()[k].re;
        let gp = z.values()[k + 1].re * z.values()[k + 1].re;
        let gm = z.values()[k - 1].re * z.values()[k - 1].re;
        let lhs = ((one + four * g0 * gp).sqrt() + (one + four * g0 * gm).sqrt()) / two;
        let rhs = (potential.values()[k] + two) * g0;
        residuals.push(lhs - rhs);
    }
    Ok(residuals)
}

/// Largest deviation of the Green entries from the product form
/// `G_{nm} = z_n z_m ∏_{ℓ=m+1}^n 1/S_ℓ` over all pairs `m < n`.
pub fn green_product_residual<T: Scalar>(
    green: &GreenMatrix<T>,
    z: &DiagonalSequence<T>,
) -> Result<T> {
    green.window().same_as(&z.window())?;
    let window = green.window();
    let s = s_factor(z)?;
    let len = window.len();

    let one = Complex::new(T::one(), T::zero());
    let mut cumulative = vec![one; len];
    for k in 1..len {
        cumulative[k] = cumulative[k - 1] * s.values()[k - 1];
    }

    let mut max_dev = T::zero();
    for m in 0..len {
        for n in m + 1..len {
            let product = cumulative[m] / cumulative[n];
            let expected = z.values()[n] * z.values()[m] * product;
            let actual = green.entry(window.index(n), window.index(m));
            max_dev = max_dev.max((expected - actual).norm());
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_green_matrix, diagonal_sequence};

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn growth_ratio(c: f64) -> f64 {
        (2.0 + c + (c * (c + 4.0)).sqrt()) / 2.0
    }

    fn constant_diagonal(c_val: f64, hi: i64) -> (GreenMatrix<f64>, DiagonalSequence<f64>) {
        // Sampled closed forms; the decaying branch is unstable to recur
        // forward.
        let r = growth_ratio(c_val);
        let w = LatticeWindow::new(0, hi).unwrap();
        let u1 =
            LatticeSolution::new(w, (0..=hi).map(|n| c(r.powi(-(n as i32)))).collect()).unwrap();
        let u2 = LatticeSolution::new(w, (0..=hi).map(|n| c(r.powi(n as i32))).collect()).unwrap();
        let g = build_green_matrix(&u1, &u2).unwrap();
        let z = diagonal_sequence(&g).unwrap();
        (g, z)
    }

    #[test]
    fn s_factor_equals_the_growth_ratio_for_constant_potential() {
        let (_, z) = constant_diagonal(2.0, 10);
        let s = s_factor(&z).unwrap();
        for n in 1..=10 {
            assert!((s.value(n).re - 3.7320508).abs() < 1e-7);
            assert!((s.value(n).re - growth_ratio(2.0)).abs() < 1e-12);
        }
        assert!(s.max_identity_residual() < 1e-12);
    }

    #[test]
    fn s_factor_at_large_diagonal_values() {
        let w = LatticeWindow::new(0, 2).unwrap();
        let z = DiagonalSequence::from_values(w, vec![c(10.0); 3]).unwrap();
        let s = s_factor(&z).unwrap();
        let expected = (1.0 + 40001.0_f64.sqrt()) / 200.0;
        assert!((s.value(1).re - expected).abs() < 1e-12);
        assert!((s.value(1).re - 1.0050125).abs() < 1e-7);
    }

    #[test]
    fn quadratic_root_identity_holds_for_arbitrary_positive_diagonals() {
        let w = LatticeWindow::new(0, 6).unwrap();
        let values = [0.3, 1.7, 0.9, 2.4, 0.05, 11.0, 0.6];
        let z = DiagonalSequence::from_values(w, values.iter().map(|x| c(*x)).collect()).unwrap();
        let s = s_factor(&z).unwrap();
        for n in 1..=6 {
            let x = z.value(n) * z.value(n - 1);
            let res = (s.value(n) - c(1.0) / s.value(n) - c(1.0) / x).norm();
            assert!(res < 1e-12 * s.value(n).norm().max(1.0));
        }
    }

    #[test]
    fn reconstruction_matches_the_constant_coefficient_closed_form() {
        let (_, z) = constant_diagonal(2.0, 10);
        let r = growth_ratio(2.0);
        let basis = bohl_reconstruct(&z, 0).unwrap();
        assert_eq!(basis.plus.value(0), z.value(0));
        assert_eq!(basis.minus.value(0), z.value(0));
        for n in 1..=10 {
            let plus_ratio = basis.plus.value(n).re / basis.plus.value(n - 1).re;
            let minus_ratio = basis.minus.value(n).re / basis.minus.value(n - 1).re;
            assert!((plus_ratio - 3.7320508).abs() < 1e-7);
            assert!((minus_ratio - 1.0 / r).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstructed_pair_solves_the_original_recurrence() {
        let (_, z) = constant_diagonal(2.0, 10);
        let basis = bohl_reconstruct(&z, 5).unwrap();
        assert_eq!(basis.plus.value(5), z.value(5));
        for u in [&basis.plus, &basis.minus] {
            for n in 1..10 {
                let res = (u.value(n + 1) + u.value(n - 1) - c(4.0) * u.value(n)).norm();
                assert!(res / u.value(n).norm().max(1.0) < 1e-12);
            }
        }
        // The product recovers the squared diagonal exactly.
        for n in 0..=10 {
            let res = (basis.plus.value(n) * basis.minus.value(n) - z.value(n) * z.value(n)).norm();
            assert!(res < 1e-14);
        }
    }

    #[test]
    fn potential_recovery_round_trips_constants() {
        for (c_val, z2_expected) in [(2.0, 0.2886751), (1.0, 0.4472136)] {
            let (_, z) = constant_diagonal(c_val, 12);
            assert!((z.value(6).re * z.value(6).re - z2_expected).abs() < 1e-7);
            let v = potential_from_diagonal(&z).unwrap();
            for n in v.window().iter() {
                assert!((v.value(n) - c_val).abs() < 1e-12, "V = {}", v.value(n));
            }
        }
    }

    #[test]
    fn gtov_residual_vanishes_on_constant_diagonals() {
        for c_val in [1.0, 2.0] {
            let w = LatticeWindow::new(0, 12).unwrap();
            let (g, _) = constant_diagonal(c_val, 12);
            let v = LatticePotential::constant(w, c_val).unwrap();
            for r in gtov_residual(&g, &v).unwrap() {
                assert!(r.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn green_entries_match_the_inverse_product_form() {
        let (g, z) = constant_diagonal(2.0, 12);
        assert!(green_product_residual(&g, &z).unwrap() < 1e-12);
    }

    #[test]
    fn anchor_outside_the_window_is_rejected() {
        let (_, z) = constant_diagonal(2.0, 10);
        assert!(matches!(
            bohl_reconstruct(&z, 11),
            Err(LatticeError::IndexOutOfWindow { .. })
        ));
    }
}
