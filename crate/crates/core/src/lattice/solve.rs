use num_complex::Complex;

use super::{LatticeError, LatticePotential, LatticeSolution, LatticeWindow, Result};
use crate::{cast, Scalar, Tolerances};

/// Number of indices trimmed from the right end of a backward-recurred
/// solution before it is trusted as the recessive direction.
pub const RECESSIVE_TRIM: usize = 20;

/// Integrates `u_{n+1} = (2 + V_n) u_n - u_{n-1}` forward from the two
/// left-edge values.
pub fn solve_three_term<T: Scalar>(
    potential: &LatticePotential<T>,
    u_at_lo: Complex<T>,
    u_at_lo_plus_1: Complex<T>,
) -> Result<LatticeSolution<T>> {
    let window = potential.window();
    let len = window.len();
    if len < 3 {
        return Err(LatticeError::WindowTooShort {
            lo: window.lo(),
            hi: window.hi(),
            len,
            min: 3,
        });
    }
    let two = Complex::new(cast::<T>(2.0), T::zero());
    let mut values = Vec::with_capacity(len);
    values.push(u_at_lo);
    values.push(u_at_lo_plus_1);
    for k in 1..len - 1 {
        let coeff = two + Complex::new(potential.values()[k], T::zero());
        let next = coeff * values[k] - values[k - 1];
        if !next.re.is_finite() || !next.im.is_finite() {
            return Err(LatticeError::Overflow {
                index: window.index(k + 1),
            });
        }
        values.push(next);
    }
    LatticeSolution::new(window, values)
}

/// Wronskian `W[u1, u2] = u1_n u2_{n+1} - u1_{n+1} u2_n` of two sequences.
///
/// The value is constant when both sequences solve the same recurrence; the
/// spread across the window is checked against that and a consistency error
/// is raised when it is too large.
pub fn wronskian_discrete<T: Scalar>(
    u1: &LatticeSolution<T>,
    u2: &LatticeSolution<T>,
) -> Result<Complex<T>> {
    u1.window().same_as(&u2.window())?;
    let a = u1.values();
    let b = u2.values();
    let count = a.len() - 1;

    let mut sum = Complex::new(T::zero(), T::zero());
    let mut max_w = T::zero();
    let mut max_product = T::zero();
    let mut locals = Vec::with_capacity(count);
    let mut best = 0;
    let mut best_product = T::infinity();
    for n in 0..count {
        let t1 = a[n] * b[n + 1];
        let t2 = a[n + 1] * b[n];
        let w = t1 - t2;
        max_w = max_w.max(w.norm());
        let product = t1.norm().max(t2.norm());
        max_product = max_product.max(product);
        // The cancellation error scales with the products, so the smallest
        // ones give the most trustworthy value.
        if product < best_product {
            best_product = product;
            best = n;
        }
        sum = sum + w;
        locals.push(w);
    }
    let mean = sum / Complex::new(cast::<T>(count as f64), T::zero());

    let tol = Tolerances::<T>::standard().recurrence;
    let spread = locals
        .iter()
        .map(|w| (*w - mean).norm())
        .fold(T::zero(), T::max);
    // Forgive pure rounding spread when the products dwarf the Wronskian.
    let allowed = (tol * max_w).max(cast::<T>(64.0) * T::epsilon() * max_product);
    if spread > allowed {
        return Err(LatticeError::NonConstantWronskian {
            spread: spread.to_f64().unwrap_or(f64::NAN),
            tol: allowed.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(locals[best])
}

/// Two strictly positive solutions for a positive potential, scaled so that
/// `W[ψ⁻, ψ⁺] = 1`.
#[derive(Debug, Clone)]
pub struct PositiveBasis<T> {
    /// Growing solution, recurred forward from the left edge.
    pub plus: LatticeSolution<T>,
    /// Decaying solution, recurred backward from the right edge and trimmed
    /// by [`RECESSIVE_TRIM`] indices.
    pub minus: LatticeSolution<T>,
}

impl<T: Scalar> PositiveBasis<T> {
    /// Window shared by both solutions after the right-edge trim.
    pub fn window(&self) -> LatticeWindow {
        self.plus.window()
    }
}

/// Builds a positive solution pair for `V > 0` on the window.
///
/// The growing member is seeded as if the sequence vanished just left of the
/// window, the decaying member as if it vanished just right of it; both stay
/// strictly positive when `V > 0`. Indices within [`RECESSIVE_TRIM`] of the
/// right edge are untrusted as approximations of the half-line recessive
/// solution and are trimmed from the returned pair.
pub fn positive_basis<T: Scalar>(potential: &LatticePotential<T>) -> Result<PositiveBasis<T>> {
    let window = potential.window();
    let len = window.len();
    let min_len = RECESSIVE_TRIM + 5;
    if len < min_len {
        return Err(LatticeError::WindowTooShort {
            lo: window.lo(),
            hi: window.hi(),
            len,
            min: min_len,
        });
    }
    if potential.min_value() <= T::zero() {
        return Err(LatticeError::HypothesisNotMet(format!(
            "positive basis requires V > 0 on the window; min V = {}",
            potential.min_value()
        )));
    }

    let v = potential.values();
    let two = cast::<T>(2.0);

    // Forward sweep, Dirichlet-matched at lo - 1.
    let mut plus = vec![T::zero(); len];
    plus[0] = T::one();
    plus[1] = two + v[0];
    for k in 1..len - 1 {
        plus[k + 1] = (two + v[k]) * plus[k] - plus[k - 1];
        if !plus[k + 1].is_finite() {
            return Err(LatticeError::Overflow {
                index: window.index(k + 1),
            });
        }
    }

    // Backward sweep, Dirichlet-matched at hi + 1.
    let mut minus = vec![T::zero(); len];
    minus[len - 1] = T::one();
    minus[len - 2] = two + v[len - 1];
    for k in (1..len - 1).rev() {
        minus[k - 1] = (two + v[k]) * minus[k] - minus[k + 1];
        if !minus[k - 1].is_finite() {
            return Err(LatticeError::Overflow {
                index: window.index(k - 1),
            });
        }
    }

    for sweep in [&plus, &minus] {
        for (k, value) in sweep.iter().enumerate() {
            if *value <= T::zero() {
                return Err(LatticeError::PositivityFailure {
                    index: window.index(k),
                });
            }
        }
    }

    // W[minus, plus] is constant and positive; rescale minus so it equals 1.
    let w = minus[0] * plus[1] - minus[1] * plus[0];
    if !(w > T::zero()) || !w.is_finite() {
        return Err(LatticeError::PositivityFailure { index: window.lo() });
    }
    for value in &mut minus {
        *value = *value / w;
    }

    let trimmed = window.shrink(0, RECESSIVE_TRIM)?;
    let keep = trimmed.len();
    let to_solution = |data: &[T]| {
        LatticeSolution::new(
            trimmed,
            data[..keep]
                .iter()
                .map(|x| Complex::new(*x, T::zero()))
                .collect(),
        )
    };
    Ok(PositiveBasis {
        plus: to_solution(&plus)?,
        minus: to_solution(&minus)?,
    })
}

/// Applies the sign-flip invariance `V -> -4 - V`, `u_n -> (-1)^n u_n`.
///
/// The image solves the recurrence for the image potential whenever the input
/// does; applying the map twice is the identity.
pub fn symmetry_map<T: Scalar>(
    potential: &LatticePotential<T>,
    solution: &LatticeSolution<T>,
) -> Result<(LatticePotential<T>, LatticeSolution<T>)> {
    potential.window().same_as(&solution.window())?;
    let window = potential.window();
    let four = cast::<T>(4.0);
    let mapped_v = LatticePotential::new(
        window,
        potential.values().iter().map(|v| -four - *v).collect(),
    )?;
    let mapped_u = LatticeSolution::new(
        window,
        window
            .iter()
            .map(|n| {
                let sign = if n.rem_euclid(2) == 0 { T::one() } else { -T::one() };
                solution.value(n) * Complex::new(sign, T::zero())
            })
            .collect(),
    )?;
    Ok((mapped_v, mapped_u))
}
