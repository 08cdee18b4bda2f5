use num_complex::Complex;

use super::{wronskian_grid, ContinuumError, GridSolution, Result};
use crate::{cast, Scalar, Tolerances};

/// Complex combination `u = u1 + i β u2` that cannot vanish, together with
/// the quantities the construction is certified by.
#[derive(Debug, Clone)]
pub struct NonvanishingCombination<T> {
    pub solution: GridSolution<T>,
    pub beta: T,
    /// Grid point the logarithmic derivative was taken at.
    pub anchor: T,
    /// `α = u'(x0) / u(x0)`.
    pub alpha: Complex<T>,
    /// Smallest `|u|` over the grid.
    pub min_abs: T,
    /// `W[Im u, Re u]`, constant across the grid.
    pub wronskian_im_re: Complex<T>,
    /// `|W[Im u, Re u] + Im α · |u(x0)|²|`: the certificate that the real and
    /// imaginary parts are independent.
    pub identity_residual: T,
}

/// Builds `u = u1 + i u2` from two independent real solutions and certifies
/// that it never vanishes.
///
/// At the anchor both `Re u` and `Im u` must be away from zero; when the
/// requested `x0` fails that, the error names a nearby grid point where it
/// holds.
pub fn nonvanishing_combination<T: Scalar>(
    u1: &GridSolution<T>,
    u2: &GridSolution<T>,
    x0: T,
) -> Result<NonvanishingCombination<T>> {
    u1.grid().same_as(&u2.grid())?;
    let grid = u1.grid();
    let real_tol = cast::<T>(1e4) * Tolerances::<T>::standard().algebraic;
    if !u1.is_real(real_tol) || !u2.is_real(real_tol) {
        return Err(ContinuumError::InvalidInput(
            "combination expects two real solutions".into(),
        ));
    }

    let i0 = grid.nearest_interior_index(x0)?;
    let scale1 = u1.amplitude();
    let scale2 = u2.amplitude();
    // A basis member within one grid step of a zero crossing counts as
    // vanishing at the anchor.
    let floor = grid.step().max(cast::<T>(1e-9));
    let usable = |i: usize| {
        u1.value(i).norm() > floor * scale1 && u2.value(i).norm() > floor * scale2
    };
    if !usable(i0) {
        // Walk outward for the closest anchor where both members are nonzero.
        let suggested = (1..grid.len())
            .flat_map(|d| [i0.checked_sub(d), i0.checked_add(d)])
            .flatten()
            .filter(|i| *i >= 1 && *i + 1 < grid.len())
            .find(|i| usable(*i));
        return match suggested {
            Some(i) => Err(ContinuumError::RetryAt {
                requested: x0.to_f64().unwrap_or(f64::NAN),
                suggested: grid.x(i).to_f64().unwrap_or(f64::NAN),
            }),
            None => Err(ContinuumError::InvalidInput(
                "no grid point has both basis members away from zero".into(),
            )),
        };
    }

    let beta = T::one();
    let i_beta = Complex::new(T::zero(), beta);
    let values: Vec<Complex<T>> = u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| *a + i_beta * *b)
        .collect();
    let derivatives: Vec<Complex<T>> = u1
        .derivatives()
        .iter()
        .zip(u2.derivatives())
        .map(|(a, b)| *a + i_beta * *b)
        .collect();

    let min_abs = values.iter().map(|v| v.norm()).fold(T::infinity(), T::min);
    if !(min_abs > T::zero()) {
        return Err(ContinuumError::DegenerateDiagonal {
            x: grid.x(i0).to_f64().unwrap_or(f64::NAN),
            floor: 0.0,
        });
    }

    let solution = GridSolution::from_parts(grid, values, derivatives)?;
    let alpha = solution.derivative(i0) / solution.value(i0);

    // W[Im u, Re u] from the carried derivatives; constant by construction.
    let im_part = GridSolution::from_parts(
        grid,
        solution.values().iter().map(|v| Complex::new(v.im, T::zero())).collect(),
        solution.derivatives().iter().map(|v| Complex::new(v.im, T::zero())).collect(),
    )?;
    let re_part = GridSolution::from_parts(
        grid,
        solution.values().iter().map(|v| Complex::new(v.re, T::zero())).collect(),
        solution.derivatives().iter().map(|v| Complex::new(v.re, T::zero())).collect(),
    )?;
    let wronskian_im_re = wronskian_grid(&im_part, &re_part)?;

    let modulus_sq = solution.value(i0).norm_sqr();
    let identity_residual = (wronskian_im_re
        + Complex::new(alpha.im * modulus_sq, T::zero()))
    .norm();

    Ok(NonvanishingCombination {
        solution,
        beta,
        anchor: grid.x(i0),
        alpha,
        min_abs,
        wronskian_im_re,
        identity_residual,
    })
}

/// Which of the two genuinely distinct phase classes the normalizing constant
/// belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaBranch {
    /// `arg α` is a multiple of `π/2`: the diagonal can be rotated onto the
    /// positive axis and the basis does not change sign.
    Disconjugate,
    /// `arg α` is an odd multiple of `π/4`: the oscillatory-capable class.
    Oscillatory,
}

/// Normalizing constant for the conjugate pairing `{u, α² conj(u)}`.
#[derive(Debug, Clone, Copy)]
pub struct SpecialAlpha<T> {
    pub alpha: Complex<T>,
    pub branch: AlphaBranch,
    /// `W[u, conj(u)]`, purely imaginary for genuinely complex `u`.
    pub conjugate_wronskian: Complex<T>,
}

/// Finds `α` with `W[u, α² conj(u)] = 1`, so that the basis `{u, α² conj(u)}`
/// has diagonal `Z = α |u|`.
///
/// `arg α` always lands on a multiple of `π/4`; a solution that is real up to
/// a global phase is dependent on its conjugate and is rejected.
pub fn special_alpha<T: Scalar>(u: &GridSolution<T>) -> Result<SpecialAlpha<T>> {
    let grid = u.grid();
    let re_part = GridSolution::from_parts(
        grid,
        u.values().iter().map(|v| Complex::new(v.re, T::zero())).collect(),
        u.derivatives().iter().map(|v| Complex::new(v.re, T::zero())).collect(),
    )?;
    let im_part = GridSolution::from_parts(
        grid,
        u.values().iter().map(|v| Complex::new(v.im, T::zero())).collect(),
        u.derivatives().iter().map(|v| Complex::new(v.im, T::zero())).collect(),
    )?;
    let w_re_im = wronskian_grid(&re_part, &im_part)?;

    let scale = u.amplitude() * u
        .derivatives()
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), T::max);
    if w_re_im.norm() <= T::epsilon().sqrt() * scale.max(T::one()) {
        return Err(ContinuumError::ConjugateDependent);
    }

    // W[u, conj(u)] = -2i W[Re u, Im u].
    let conjugate_wronskian = Complex::new(T::zero(), -cast::<T>(2.0)) * w_re_im;
    let alpha_sq = Complex::new(T::one(), T::zero()) / conjugate_wronskian;
    let alpha = alpha_sq.sqrt();

    let quarter = T::FRAC_PI_4();
    let steps = (alpha.arg() / quarter).round();
    let misfit = (alpha.arg() - steps * quarter).abs();
    if misfit > cast::<T>(1e-8) {
        return Err(ContinuumError::InvalidInput(format!(
            "normalizing constant landed off the π/4 lattice by {misfit}"
        )));
    }
    let k = steps.to_f64().unwrap_or(0.0) as i64;
    let branch = if k.rem_euclid(2) == 0 {
        AlphaBranch::Disconjugate
    } else {
        AlphaBranch::Oscillatory
    };
    Ok(SpecialAlpha {
        alpha,
        branch,
        conjugate_wronskian,
    })
}
