use num_complex::Complex;

use super::{
    stencil, wronskian_grid, ContinuumError, ContinuumPotential, Grid, GridSolution, Result,
};
use crate::{cast, Scalar};

/// Diagonal function `Z = (u1 u2)^(1/2)` with a continuously chosen
/// square-root phase, together with its square.
#[derive(Debug, Clone)]
pub struct DiagonalFunction<T> {
    grid: Grid<T>,
    z: Vec<Complex<T>>,
    z_squared: Vec<Complex<T>>,
}

impl<T: Scalar> DiagonalFunction<T> {
    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.z
    }

    pub fn squared(&self) -> &[Complex<T>] {
        &self.z_squared
    }

    pub fn value(&self, i: usize) -> Complex<T> {
        self.z[i]
    }

    /// Largest relative disagreement between the unwrapped root squared and
    /// the stored product.
    pub fn unwrap_consistency(&self) -> T {
        let scale = self
            .z_squared
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), T::max)
            .max(T::one());
        self.z
            .iter()
            .zip(&self.z_squared)
            .map(|(z, p)| (*z * *z - *p).norm())
            .fold(T::zero(), T::max)
            / scale
    }
}

/// Builds the diagonal function of a Wronskian-normalized basis.
///
/// The product `u1 u2` must stay away from zero (threshold `1e-12` in
/// absolute value); the square root keeps the branch continuous from the left
/// endpoint, starting on the principal branch.
pub fn diagonal_function<T: Scalar>(
    u1: &GridSolution<T>,
    u2: &GridSolution<T>,
) -> Result<DiagonalFunction<T>> {
    u1.grid().same_as(&u2.grid())?;
    let grid = u1.grid();

    let w = wronskian_grid(u1, u2)?;
    let one = Complex::new(T::one(), T::zero());
    if (w - one).norm() > cast::<T>(1e-6) {
        return Err(ContinuumError::WronskianNotNormalized {
            re: w.re.to_f64().unwrap_or(f64::NAN),
            im: w.im.to_f64().unwrap_or(f64::NAN),
        });
    }

    let floor = cast::<T>(1e-12);
    let mut z = Vec::with_capacity(grid.len());
    let mut z_squared = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let p = u1.value(i) * u2.value(i);
        if p.norm() < floor {
            return Err(ContinuumError::DegenerateDiagonal {
                x: grid.x(i).to_f64().unwrap_or(f64::NAN),
                floor: 1e-12,
            });
        }
        let root = p.sqrt();
        let chosen = if let Some(prev) = z.last() {
            let prev: &Complex<T> = prev;
            if (root - *prev).norm() <= (-root - *prev).norm() {
                root
            } else {
                -root
            }
        } else {
            root
        };
        z.push(chosen);
        z_squared.push(p);
    }
    Ok(DiagonalFunction { grid, z, z_squared })
}

/// Scaled max-norm residual of the diagonal equation
/// `-Z'' + V Z - 1/(4Z³) = 0` by centered differences:
/// `max |J_i| / ((1 + |V_i|) max(1, |Z_i|))` over the interior.
pub fn diagonal_equation_residual<T: Scalar>(
    z: &DiagonalFunction<T>,
    potential: &ContinuumPotential<T>,
) -> T {
    let grid = z.grid();
    let d2 = stencil::second_difference(z.values(), grid.step());
    let quarter = Complex::new(cast::<T>(4.0), T::zero());
    let mut worst = T::zero();
    for (k, d2z) in d2.iter().enumerate() {
        let i = k + 1;
        let v = potential.eval(grid.x(i));
        let zi = z.value(i);
        let j = -*d2z + Complex::new(v, T::zero()) * zi
            - Complex::new(T::one(), T::zero()) / (quarter * zi * zi * zi);
        let scale = (T::one() + v.abs()) * zi.norm().max(T::one());
        worst = worst.max(j.norm() / scale);
    }
    worst
}

/// Second basis member `α² conj(u)` of the conjugate pairing.
pub fn conjugate_scaled<T: Scalar>(u: &GridSolution<T>, alpha: Complex<T>) -> GridSolution<T> {
    let alpha_sq = alpha * alpha;
    GridSolution::from_parts(
        u.grid(),
        u.values().iter().map(|v| alpha_sq * v.conj()).collect(),
        u.derivatives().iter().map(|v| alpha_sq * v.conj()).collect(),
    )
    .expect("lengths preserved")
}

/// Basis `φ± = Z exp(±∫_{x0}^x 1/(2Z²))` generated by a diagonal function.
#[derive(Debug, Clone)]
pub struct BohlBasisContinuum<T> {
    /// Anchor the quadrature starts from (snapped to the grid).
    pub anchor: T,
    pub plus: GridSolution<T>,
    pub minus: GridSolution<T>,
    /// `W[φ⁻, φ⁺]`, equal to 1 by construction.
    pub wronskian: Complex<T>,
}

/// Rebuilds a solution basis from the diagonal function alone.
///
/// The quadrature is the trapezoid rule; derivatives are carried analytically
/// as `φ±' = (Z' ± 1/(2Z)) exp(±∫)` with `Z'` from centered stencils, which
/// makes `W[φ⁻, φ⁺] = 1` an algebraic identity. The products `φ⁺ φ⁻`
/// reproduce `Z²` exactly because the quadrature factors cancel.
pub fn bohl_basis<T: Scalar>(
    z: &DiagonalFunction<T>,
    potential: &ContinuumPotential<T>,
    x0: T,
) -> Result<BohlBasisContinuum<T>> {
    let grid = z.grid();
    let j_residual = diagonal_equation_residual(z, potential);
    let j_threshold = cast::<T>(1e-3);
    if j_residual > j_threshold {
        return Err(ContinuumError::ResidualTooLarge {
            residual: j_residual.to_f64().unwrap_or(f64::NAN),
            threshold: j_threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    let i0 = grid.nearest_interior_index(x0)?;

    let integral = cumulative_inverse_quadrature(z);
    let offset = integral[i0];

    let dz = stencil::first_derivative(z.values(), grid.step());
    let two = Complex::new(cast::<T>(2.0), T::zero());
    let mut plus_values = Vec::with_capacity(grid.len());
    let mut plus_derivs = Vec::with_capacity(grid.len());
    let mut minus_values = Vec::with_capacity(grid.len());
    let mut minus_derivs = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let phase = integral[i] - offset;
        let growth = phase.exp();
        let zi = z.value(i);
        plus_values.push(zi * growth);
        minus_values.push(zi / growth);
        let slope = Complex::new(T::one(), T::zero()) / (two * zi);
        plus_derivs.push((dz[i] + slope) * growth);
        minus_derivs.push((dz[i] - slope) / growth);
    }

    let plus = GridSolution::from_parts(grid, plus_values, plus_derivs)?;
    let minus = GridSolution::from_parts(grid, minus_values, minus_derivs)?;

    let sle_threshold = cast::<T>(1e-5).max(cast::<T>(100.0) * grid.step() * grid.step());
    for member in [&plus, &minus] {
        let residual = super::sle_residual(member, potential);
        if residual > sle_threshold {
            return Err(ContinuumError::ResidualTooLarge {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                threshold: sle_threshold.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let wronskian = wronskian_grid(&minus, &plus)?;
    Ok(BohlBasisContinuum {
        anchor: grid.x(i0),
        plus,
        minus,
        wronskian,
    })
}

/// Trapezoid cumulative of `1/(2Z²)` from the left endpoint.
fn cumulative_inverse_quadrature<T: Scalar>(z: &DiagonalFunction<T>) -> Vec<Complex<T>> {
    let grid = z.grid();
    let two = Complex::new(cast::<T>(2.0), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let rate: Vec<Complex<T>> = z.squared().iter().map(|p| one / (two * *p)).collect();
    let half_h = Complex::new(grid.step() / cast::<T>(2.0), T::zero());
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = Complex::new(T::zero(), T::zero());
    out.push(acc);
    for i in 1..grid.len() {
        acc = acc + half_h * (rate[i] + rate[i - 1]);
        out.push(acc);
    }
    out
}

/// Green function `G(x, y) = Z(x) Z(y) exp(-∫_{min}^{max} 1/(2Z²))` built
/// once from a diagonal function and evaluated anywhere on the grid range by
/// linear interpolation.
#[derive(Debug, Clone)]
pub struct GreenFunction<T> {
    grid: Grid<T>,
    z: Vec<Complex<T>>,
    cumulative: Vec<Complex<T>>,
}

impl<T: Scalar> GreenFunction<T> {
    pub fn new(z: &DiagonalFunction<T>) -> Self {
        GreenFunction {
            grid: z.grid(),
            z: z.values().to_vec(),
            cumulative: cumulative_inverse_quadrature(z),
        }
    }

    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    fn z_at(&self, x: T) -> Result<Complex<T>> {
        let (i, t) = self.grid.locate(x)?;
        let t = Complex::new(t, T::zero());
        Ok(self.z[i] + (self.z[i + 1] - self.z[i]) * t)
    }

    fn cumulative_at(&self, x: T) -> Result<Complex<T>> {
        let (i, t) = self.grid.locate(x)?;
        let t = Complex::new(t, T::zero());
        Ok(self.cumulative[i] + (self.cumulative[i + 1] - self.cumulative[i]) * t)
    }

    /// `G(x, y)`; symmetric in its arguments and continuous across `x = y`.
    pub fn eval(&self, x: T, y: T) -> Result<Complex<T>> {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let phase = self.cumulative_at(hi)? - self.cumulative_at(lo)?;
        Ok(self.z_at(x)? * self.z_at(y)? * (-phase).exp())
    }

    /// One-sided difference of the `x`-derivative jump across `x = y`,
    /// expected to equal -1 up to `O(h)`.
    pub fn derivative_jump(&self, y: T) -> Result<Complex<T>> {
        let h = self.grid.step();
        let right = (self.eval(y + h, y)? - self.eval(y, y)?) / Complex::new(h, T::zero());
        let left = (self.eval(y, y)? - self.eval(y - h, y)?) / Complex::new(h, T::zero());
        Ok(right - left)
    }
}

/// One-off evaluation of the Green function at `(x, y)`.
pub fn green_function<T: Scalar>(z: &DiagonalFunction<T>, x: T, y: T) -> Result<Complex<T>> {
    GreenFunction::new(z).eval(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::integrate_sle;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn exp_basis(grid: &Grid<f64>) -> (GridSolution<f64>, GridSolution<f64>) {
        let v = ContinuumPotential::Constant(1.0);
        let u1 = integrate_sle(&v, grid, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let u2 = integrate_sle(&v, grid, c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        (u1, u2)
    }

    #[test]
    fn unit_potential_diagonal_is_constant() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let z = diagonal_function(&u1, &u2).unwrap();
        let expected = 1.0 / 2.0_f64.sqrt();
        for zi in z.values().iter().step_by(100) {
            assert!((zi.re - expected).abs() < 1e-10);
            assert!((zi.re - 0.7071068).abs() < 1e-7);
        }
        let v = ContinuumPotential::Constant(1.0);
        assert!(diagonal_equation_residual(&z, &v) < 1e-8);
        assert!(z.unwrap_consistency() < 1e-12);
    }

    #[test]
    fn oscillatory_pairing_keeps_a_constant_quarter_phase() {
        // u1 = e^{ix}, u2 = (i/2) e^{-ix}: W = 1 and Z² = i/2.
        let grid = Grid::from_step(0.0_f64, 3.0, 1e-3).unwrap();
        let u1 = GridSolution::from_parts(
            grid,
            grid.points().map(|x| c(x.cos(), x.sin())).collect(),
            grid.points().map(|x| c(-x.sin(), x.cos())).collect(),
        )
        .unwrap();
        let u2 = GridSolution::from_parts(
            grid,
            grid.points().map(|x| c(0.5 * x.sin(), 0.5 * x.cos())).collect(),
            grid.points().map(|x| c(0.5 * x.cos(), -0.5 * x.sin())).collect(),
        )
        .unwrap();
        let z = diagonal_function(&u1, &u2).unwrap();
        for (p, zi) in z.squared().iter().zip(z.values()).step_by(500) {
            assert!((p - c(0.0, 0.5)).norm() < 1e-12);
            assert!((zi.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
        }
        let v = ContinuumPotential::Constant(-1.0);
        assert!(diagonal_equation_residual(&z, &v) < 1e-8);
    }

    #[test]
    fn vanishing_products_are_rejected() {
        let grid = Grid::from_step(0.0_f64, 3.0, 1e-3).unwrap();
        let v = ContinuumPotential::Constant(-1.0);
        let sin = integrate_sle(&v, &grid, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let minus_cos = integrate_sle(&v, &grid, c(-1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(
            diagonal_function(&sin, &minus_cos),
            Err(ContinuumError::DegenerateDiagonal { .. })
        ));
    }

    #[test]
    fn unnormalized_bases_are_rejected() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let doubled = GridSolution::from_parts(
            grid,
            u2.values().iter().map(|x| x * c(2.0, 0.0)).collect(),
            u2.derivatives().iter().map(|x| x * c(2.0, 0.0)).collect(),
        )
        .unwrap();
        assert!(matches!(
            diagonal_function(&u1, &doubled),
            Err(ContinuumError::WronskianNotNormalized { .. })
        ));
    }

    #[test]
    fn basis_rebuild_matches_the_exponentials() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let z = diagonal_function(&u1, &u2).unwrap();
        let v = ContinuumPotential::Constant(1.0);
        let basis = bohl_basis(&z, &v, 1e-9).unwrap();
        // Anchor snaps to the first interior point, so compare against
        // exp(x - x0) / sqrt(2).
        let x0 = basis.anchor;
        let expected = (1.0 - x0).exp() / 2.0_f64.sqrt();
        let got = basis.plus.value(grid.len() - 1).re;
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        assert!((basis.wronskian - c(1.0, 0.0)).norm() < 1e-10);

        // The quadrature cancels in the product pointwise.
        for i in (0..grid.len()).step_by(100) {
            let product = basis.plus.value(i) * basis.minus.value(i);
            assert!((product - z.squared()[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn anchored_growth_hits_the_literal_value() {
        // With the anchor at x0 = 0 the growing member reaches e/sqrt(2).
        let grid = Grid::from_step(-0.5_f64, 1.0, 1e-3).unwrap();
        let v = ContinuumPotential::Constant(1.0);
        let u1 = integrate_sle(&v, &grid, c((0.5_f64).exp(), 0.0), c(-(0.5_f64).exp(), 0.0)).unwrap();
        let u2 = integrate_sle(&v, &grid, c(0.5 * (-0.5_f64).exp(), 0.0), c(0.5 * (-0.5_f64).exp(), 0.0))
            .unwrap();
        let z = diagonal_function(&u1, &u2).unwrap();
        let basis = bohl_basis(&z, &v, 0.0).unwrap();
        assert!((basis.anchor - 0.0).abs() < 1e-12);
        let end = basis.plus.value(grid.len() - 1).re;
        assert!((end - 1.0_f64.exp() / 2.0_f64.sqrt()).abs() < 1e-9);
        assert!((end - 1.9221155).abs() < 1e-7);
    }

    #[test]
    fn oscillatory_basis_has_constant_modulus() {
        let grid = Grid::from_step(0.0_f64, 3.0, 1e-3).unwrap();
        let u1 = GridSolution::from_parts(
            grid,
            grid.points().map(|x| c(x.cos(), x.sin())).collect(),
            grid.points().map(|x| c(-x.sin(), x.cos())).collect(),
        )
        .unwrap();
        let u2 = GridSolution::from_parts(
            grid,
            grid.points().map(|x| c(0.5 * x.sin(), 0.5 * x.cos())).collect(),
            grid.points().map(|x| c(0.5 * x.cos(), -0.5 * x.sin())).collect(),
        )
        .unwrap();
        let z = diagonal_function(&u1, &u2).unwrap();
        let v = ContinuumPotential::Constant(-1.0);
        let basis = bohl_basis(&z, &v, 1.5).unwrap();
        let expected = 2.0_f64.sqrt().recip();
        for i in (0..grid.len()).step_by(300) {
            assert!((basis.plus.value(i).norm() - expected).abs() < 1e-9);
            assert!((basis.minus.value(i).norm() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn green_function_matches_the_free_decay_kernel() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let z = diagonal_function(&u1, &u2).unwrap();
        let green = GreenFunction::new(&z);
        assert!((green.eval(0.3, 0.3).unwrap().re - 0.5).abs() < 1e-9);
        let g = green.eval(0.0, 1.0).unwrap();
        assert!((g.re - 0.5 * (-1.0_f64).exp()).abs() < 1e-9);
        assert!((g.re - 0.1839397).abs() < 1e-7);
        // Symmetry is exact by construction.
        let a = green.eval(0.2, 0.9).unwrap();
        let b = green.eval(0.9, 0.2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn derivative_jump_is_minus_one() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let z = diagonal_function(&u1, &u2).unwrap();
        let green = GreenFunction::new(&z);
        let jump = green.derivative_jump(0.5).unwrap();
        assert!((jump.re + 1.0).abs() < 5.0 * grid.step());
        assert!(jump.im.abs() < 1e-9);
    }

    #[test]
    fn diagonal_squared_equals_the_green_diagonal() {
        let grid = Grid::from_step(0.0_f64, 1.0, 1e-3).unwrap();
        let (u1, u2) = exp_basis(&grid);
        let z = diagonal_function(&u1, &u2).unwrap();
        let green = GreenFunction::new(&z);
        for i in (0..grid.len()).step_by(97) {
            let x = grid.x(i);
            let g = green.eval(x, x).unwrap();
            assert!((g - z.squared()[i]).norm() < 1e-12);
        }
    }
}
