use num_complex::Complex;

use super::{stencil, ContinuumError, ContinuumPotential, DiagonalFunction, Result};
use crate::{cast, Scalar};

/// Sign choice in the first-order factor `D±[Z] = d/dx - Z'/Z ∓ 1/(2Z²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DarbouxSign {
    Plus,
    Minus,
}

impl DarbouxSign {
    fn signum<T: Scalar>(&self) -> T {
        match self {
            DarbouxSign::Plus => T::one(),
            DarbouxSign::Minus => -T::one(),
        }
    }
}

/// Applies `D±[Z] f = f' - (Z'/Z) f ∓ f/(2Z²)` with centered stencils
/// (second-order one-sided at the two edge points).
///
/// `D±[Z]` annihilates the matching member of the basis generated by `Z`.
pub fn darboux_apply<T: Scalar>(
    z: &DiagonalFunction<T>,
    sign: DarbouxSign,
    f: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    let grid = z.grid();
    if f.len() != grid.len() {
        return Err(ContinuumError::InvalidInput(format!(
            "function length {} does not match the grid ({} points)",
            f.len(),
            grid.len()
        )));
    }
    let h = grid.step();
    let df = stencil::first_derivative(f, h);
    let dz = stencil::first_derivative(z.values(), h);
    let s = Complex::new(sign.signum::<T>(), T::zero());
    let two = Complex::new(cast::<T>(2.0), T::zero());

    Ok((0..grid.len())
        .map(|i| {
            let zi = z.value(i);
            df[i] - (dz[i] / zi) * f[i] - s * f[i] / (two * zi * zi)
        })
        .collect())
}

/// Max-norm residuals of the two factorizations
/// `(D± - 2 d/dx) D± = -d²/dx² + V` applied to a padded test function.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationResidual<T> {
    pub plus: T,
    pub minus: T,
}

impl<T: Scalar> FactorizationResidual<T> {
    pub fn worst(&self) -> T {
        self.plus.max(self.minus)
    }
}

/// Margin of edge points on which the test function must vanish: two stencil
/// widths, so the doubled differencing never reaches the boundary values.
pub const PADDING_MARGIN: usize = 2;

/// Compares `(D±[Z] - 2 d/dx) D±[Z] f` against `-f'' + V f` on the interior.
///
/// Requires the diagonal residual of `Z` to be small (the identity only holds
/// on solutions of the diagonal equation) and `f` to vanish on the outer
/// [`PADDING_MARGIN`] points of each edge.
pub fn darboux_factorization_residual<T: Scalar>(
    z: &DiagonalFunction<T>,
    potential: &ContinuumPotential<T>,
    f: &[Complex<T>],
) -> Result<FactorizationResidual<T>> {
    let grid = z.grid();
    if f.len() != grid.len() {
        return Err(ContinuumError::InvalidInput(format!(
            "function length {} does not match the grid ({} points)",
            f.len(),
            grid.len()
        )));
    }
    let j_residual = super::diagonal_equation_residual(z, potential);
    let j_threshold = cast::<T>(1e-3);
    if j_residual > j_threshold {
        return Err(ContinuumError::ResidualTooLarge {
            residual: j_residual.to_f64().unwrap_or(f64::NAN),
            threshold: j_threshold.to_f64().unwrap_or(f64::NAN),
        });
    }

    let scale = f.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let floor = T::epsilon() * scale;
    let n = grid.len();
    for i in (0..PADDING_MARGIN).chain(n - PADDING_MARGIN..n) {
        if f[i].norm() > floor {
            return Err(ContinuumError::InsufficientPadding {
                margin: PADDING_MARGIN,
            });
        }
    }

    let h = grid.step();
    // Reference side built from the same first-derivative stencil applied
    // twice, so the comparison isolates the operator identity instead of the
    // width mismatch between composed and plain second differences.
    let df = stencil::first_derivative(f, h);
    let ddf = stencil::first_derivative(&df, h);
    let dz = stencil::first_derivative(z.values(), h);
    let two = Complex::new(cast::<T>(2.0), T::zero());

    let mut worst = FactorizationResidual {
        plus: T::zero(),
        minus: T::zero(),
    };
    for sign in [DarbouxSign::Plus, DarbouxSign::Minus] {
        let g = darboux_apply(z, sign, f)?;
        let dg = stencil::first_derivative(&g, h);
        let s = Complex::new(sign.signum::<T>(), T::zero());
        let mut max_dev = T::zero();
        for i in PADDING_MARGIN..n - PADDING_MARGIN {
            let zi = z.value(i);
            let lhs = -dg[i] - (dz[i] / zi) * g[i] - s * g[i] / (two * zi * zi);
            let v = Complex::new(potential.eval(grid.x(i)), T::zero());
            let rhs = -ddf[i] + v * f[i];
            max_dev = max_dev.max((lhs - rhs).norm());
        }
        match sign {
            DarbouxSign::Plus => worst.plus = max_dev,
            DarbouxSign::Minus => worst.minus = max_dev,
        }
    }
    Ok(worst)
}

/// Smooth bump supported on `(center - width, center + width)`, exactly zero
/// outside it.
pub fn bump_function<T: Scalar>(x: T, center: T, width: T) -> T {
    let t = (x - center) / width;
    let t2 = t * t;
    if t2 >= T::one() {
        T::zero()
    } else {
        (-(T::one() / (T::one() - t2))).exp()
    }
}
