use num_complex::Complex;

use super::{stencil, ContinuumError, ContinuumPotential, Grid, Result};
use crate::{cast, Scalar, Tolerances};

/// Solution of `-u'' + V u = 0` sampled on a grid, with the derivative
/// carried alongside the values.
#[derive(Debug, Clone)]
pub struct GridSolution<T> {
    grid: Grid<T>,
    values: Vec<Complex<T>>,
    derivatives: Vec<Complex<T>>,
}

impl<T: Scalar> GridSolution<T> {
    pub fn from_parts(
        grid: Grid<T>,
        values: Vec<Complex<T>>,
        derivatives: Vec<Complex<T>>,
    ) -> Result<Self> {
        if values.len() != grid.len() || derivatives.len() != grid.len() {
            return Err(ContinuumError::InvalidInput(format!(
                "value/derivative lengths {}/{} do not match the grid ({} points)",
                values.len(),
                derivatives.len(),
                grid.len()
            )));
        }
        Ok(GridSolution {
            grid,
            values,
            derivatives,
        })
    }

    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn derivatives(&self) -> &[Complex<T>] {
        &self.derivatives
    }

    pub fn value(&self, i: usize) -> Complex<T> {
        self.values[i]
    }

    pub fn derivative(&self, i: usize) -> Complex<T> {
        self.derivatives[i]
    }

    /// Largest entry magnitude, used to scale relative checks.
    pub fn amplitude(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), T::max)
    }

    /// True when every imaginary part is negligible against the amplitude.
    pub fn is_real(&self, tol: T) -> bool {
        let scale = self.amplitude().max(T::one());
        self.values.iter().all(|v| v.im.abs() <= tol * scale)
    }
}

fn rhs<T: Scalar>(
    potential: &ContinuumPotential<T>,
    x: T,
    u: Complex<T>,
    du: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    (du, Complex::new(potential.eval(x), T::zero()) * u)
}

fn rk4_sweep<T: Scalar>(
    potential: &ContinuumPotential<T>,
    grid: &Grid<T>,
    start_index: usize,
    u0: Complex<T>,
    du0: Complex<T>,
    forward: bool,
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    potential.validate_on(grid)?;
    let n = grid.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut values = vec![zero; n];
    let mut derivatives = vec![zero; n];
    values[start_index] = u0;
    derivatives[start_index] = du0;

    let h = if forward { grid.step() } else { -grid.step() };
    let half = Complex::new(h / cast::<T>(2.0), T::zero());
    let sixth = Complex::new(h / cast::<T>(6.0), T::zero());
    let two = Complex::new(cast::<T>(2.0), T::zero());
    let hc = Complex::new(h, T::zero());

    let steps: Vec<usize> = if forward {
        (start_index..n - 1).collect()
    } else {
        (1..=start_index).rev().collect()
    };
    for i in steps {
        let target = if forward { i + 1 } else { i - 1 };
        let x = grid.x(i);
        let x_mid = x + h / cast::<T>(2.0);
        let x_next = grid.x(target);
        let (u, du) = (values[i], derivatives[i]);

        let (k1u, k1v) = rhs(potential, x, u, du);
        let (k2u, k2v) = rhs(potential, x_mid, u + half * k1u, du + half * k1v);
        let (k3u, k3v) = rhs(potential, x_mid, u + half * k2u, du + half * k2v);
        let (k4u, k4v) = rhs(potential, x_next, u + hc * k3u, du + hc * k3v);

        let next_u = u + sixth * (k1u + two * k2u + two * k3u + k4u);
        let next_du = du + sixth * (k1v + two * k2v + two * k3v + k4v);
        if !(next_u.re.is_finite()
            && next_u.im.is_finite()
            && next_du.re.is_finite()
            && next_du.im.is_finite())
        {
            return Err(ContinuumError::InvalidInput(format!(
                "integration overflowed near x = {x_next}"
            )));
        }
        values[target] = next_u;
        derivatives[target] = next_du;
    }
    Ok((values, derivatives))
}

/// Fourth-order one-step integration of `(u, u')' = (u', V u)` from the left
/// endpoint.
pub fn integrate_sle<T: Scalar>(
    potential: &ContinuumPotential<T>,
    grid: &Grid<T>,
    u_at_a: Complex<T>,
    du_at_a: Complex<T>,
) -> Result<GridSolution<T>> {
    let (values, derivatives) = rk4_sweep(potential, grid, 0, u_at_a, du_at_a, true)?;
    GridSolution::from_parts(*grid, values, derivatives)
}

/// Same integration run leftward from the right endpoint.
pub fn integrate_sle_backward<T: Scalar>(
    potential: &ContinuumPotential<T>,
    grid: &Grid<T>,
    u_at_b: Complex<T>,
    du_at_b: Complex<T>,
) -> Result<GridSolution<T>> {
    let last = grid.len() - 1;
    let (values, derivatives) = rk4_sweep(potential, grid, last, u_at_b, du_at_b, false)?;
    GridSolution::from_parts(*grid, values, derivatives)
}

/// Wronskian `W = u1 u2' - u2 u1'` from the carried derivatives.
///
/// Constancy across the grid is asserted at `1e-8` relative; a larger spread
/// means the inputs do not solve one equation.
pub fn wronskian_grid<T: Scalar>(
    u1: &GridSolution<T>,
    u2: &GridSolution<T>,
) -> Result<Complex<T>> {
    u1.grid().same_as(&u2.grid())?;
    let n = u1.grid().len();
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut locals = Vec::with_capacity(n);
    let mut max_w = T::zero();
    let mut max_product = T::zero();
    let mut best = 0;
    let mut best_product = T::infinity();
    for i in 0..n {
        let t1 = u1.value(i) * u2.derivative(i);
        let t2 = u2.value(i) * u1.derivative(i);
        let w = t1 - t2;
        max_w = max_w.max(w.norm());
        let product = t1.norm().max(t2.norm());
        max_product = max_product.max(product);
        // Smallest products suffer the least cancellation.
        if product < best_product {
            best_product = product;
            best = i;
        }
        sum = sum + w;
        locals.push(w);
    }
    let mean = sum / Complex::new(cast::<T>(n as f64), T::zero());
    let tol = cast::<T>(1e4) * Tolerances::<T>::standard().algebraic;
    let spread = locals
        .iter()
        .map(|w| (*w - mean).norm())
        .fold(T::zero(), T::max);
    // Forgive pure rounding spread when the products dwarf the Wronskian.
    let allowed = (tol * max_w).max(cast::<T>(64.0) * T::epsilon() * max_product);
    if spread > allowed {
        return Err(ContinuumError::NonConstantWronskian {
            spread: spread.to_f64().unwrap_or(f64::NAN),
            tol: allowed.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(locals[best])
}

/// Scaled residual of `-u'' + V u = 0` by centered differences:
/// `max |(-δ² u + V u)_i| / ((1 + |V_i|) max(1, |u_i|))` over the interior.
pub fn sle_residual<T: Scalar>(
    u: &GridSolution<T>,
    potential: &ContinuumPotential<T>,
) -> T {
    let grid = u.grid();
    let d2 = stencil::second_difference(u.values(), grid.step());
    let mut worst = T::zero();
    for (k, d2u) in d2.iter().enumerate() {
        let i = k + 1;
        let x = grid.x(i);
        let v = potential.eval(x);
        let res = (-*d2u + Complex::new(v, T::zero()) * u.value(i)).norm();
        let scale = (T::one() + v.abs()) * u.value(i).norm().max(T::one());
        worst = worst.max(res / scale);
    }
    worst
}
