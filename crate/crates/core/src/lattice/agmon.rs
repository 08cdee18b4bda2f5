use super::{
    s_factor, GreenMatrix, LatticeError, LatticePotential, Result,
};
use crate::{cast, Scalar};

/// Comparison constant `K_A = sqrt(1 + (2/(C(C+2)))²) + 2/(C(C+2))` for a
/// cutoff `C` with `V > C > 0`.
///
/// Always satisfies `1 < K_A < sqrt(1 + 4/C²)`.
pub fn agmon_constant<T: Scalar>(cutoff: T) -> Result<T> {
    if !(cutoff > T::zero()) || !cutoff.is_finite() {
        return Err(LatticeError::InvalidInput(format!(
            "cutoff must be positive and finite, got {cutoff}"
        )));
    }
    let two = cast::<T>(2.0);
    let t = two / (cutoff * (cutoff + two));
    let k = (T::one() + t * t).sqrt() + t;
    let coarse = (T::one() + cast::<T>(4.0) / (cutoff * cutoff)).sqrt();
    if !(k < coarse) {
        return Err(LatticeError::InvalidInput(format!(
            "comparison constant {k} not below its coarse bound {coarse}"
        )));
    }
    Ok(k)
}

/// Per-index record of the two-sided Green-diagonal and growth-factor bounds.
#[derive(Debug, Clone, Copy)]
pub struct AgmonBoundRecord<T> {
    pub index: i64,
    pub green_value: T,
    pub green_lower: T,
    pub green_upper: T,
    pub green_pass: bool,
    pub s_value: T,
    pub s_lower: T,
    pub s_upper: T,
    pub s_pass: bool,
}

/// Bound check `1/(V_n + 2) <= G_nn <= K_A/(V_n + 2)` together with the
/// induced two-sided bound on `S_n`, over the interior of the window.
#[derive(Debug, Clone)]
pub struct AgmonReport<T> {
    pub cutoff: T,
    pub constant: T,
    pub records: Vec<AgmonBoundRecord<T>>,
    pub all_pass: bool,
}

impl<T: Scalar> AgmonReport<T> {
    /// Largest bound violation across all records; zero when everything
    /// passes.
    pub fn max_violation(&self) -> T {
        let mut worst = T::zero();
        for r in &self.records {
            worst = worst
                .max(r.green_lower - r.green_value)
                .max(r.green_value - r.green_upper)
                .max(r.s_lower - r.s_value)
                .max(r.s_value - r.s_upper);
        }
        worst.max(T::zero())
    }
}

pub fn agmon_bound_report<T: Scalar>(
    potential: &LatticePotential<T>,
    green: &GreenMatrix<T>,
    cutoff: T,
) -> Result<AgmonReport<T>> {
    potential.window().same_as(&green.window())?;
    if !(potential.min_value() > cutoff) {
        return Err(LatticeError::HypothesisNotMet(format!(
            "bounds need min V > C; min V = {}, C = {}",
            potential.min_value(),
            cutoff
        )));
    }
    let constant = agmon_constant(cutoff)?;
    let z = super::diagonal_sequence(green)?;
    let s = s_factor(&z)?;

    let window = potential.window();
    let two = cast::<T>(2.0);
    let four = cast::<T>(4.0);
    let mut records = Vec::with_capacity(window.len().saturating_sub(2));
    let mut all_pass = true;
    for n in window.interior() {
        let vp2 = potential.value(n) + two;
        let vp2_prev = potential.value(n - 1) + two;
        let green_value = green.diagonal_entry(n).re;
        let green_lower = T::one() / vp2;
        let green_upper = constant / vp2;
        let green_pass = green_lower <= green_value && green_value <= green_upper;

        let base = (vp2 * vp2_prev).sqrt() + (four + vp2 * vp2_prev).sqrt();
        let s_value = s.value(n).re;
        let s_lower = base / (two * constant);
        let s_upper = base / two;
        let s_pass = s_lower <= s_value && s_value <= s_upper;

        all_pass &= green_pass && s_pass;
        records.push(AgmonBoundRecord {
            index: n,
            green_value,
            green_lower,
            green_upper,
            green_pass,
            s_value,
            s_lower,
            s_upper,
            s_pass,
        });
    }
    Ok(AgmonReport {
        cutoff,
        constant,
        records,
        all_pass,
    })
}

/// Which decay-distance sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgmonVariant {
    /// `Σ (ln(V_ℓ + 2) - ln K_A)`: valid whenever `V > C > 0`.
    A,
    /// `Σ ln((V_ℓ + 2 + sqrt(V_ℓ(V_ℓ + 4)))/2)`: sharper, additionally wants
    /// `n (V_{n+1} - V_n)` summable.
    B,
}

/// Decay distance between two lattice indices, summed per step.
#[derive(Debug, Clone, Copy)]
pub struct AgmonDistance<T> {
    pub value: T,
    /// Set when the summability proxy for the sharper variant looks
    /// divergent on this window.
    pub summability_warning: bool,
}

/// Distance `d_A(m, n) = Σ_{ℓ=m+1}^{n}` of per-step logarithms; the triangle
/// inequality is an equality on the integer lattice, so any metric takes this
/// form. `m = n` gives the empty sum.
pub fn agmon_distance<T: Scalar>(
    potential: &LatticePotential<T>,
    from: i64,
    to: i64,
    variant: AgmonVariant,
    cutoff: T,
) -> Result<AgmonDistance<T>> {
    let window = potential.window();
    for idx in [from, to] {
        if !window.contains(idx) {
            return Err(LatticeError::IndexOutOfWindow {
                index: idx,
                lo: window.lo(),
                hi: window.hi(),
            });
        }
    }
    if to < from {
        return Err(LatticeError::InvalidInput(format!(
            "distance endpoints must satisfy n >= m, got m = {from}, n = {to}"
        )));
    }
    if !(potential.min_value() > cutoff) || cutoff <= T::zero() {
        return Err(LatticeError::HypothesisNotMet(format!(
            "distance needs V > C > 0; min V = {}, C = {}",
            potential.min_value(),
            cutoff
        )));
    }

    let two = cast::<T>(2.0);
    let four = cast::<T>(4.0);
    let mut value = T::zero();
    match variant {
        AgmonVariant::A => {
            let ln_k = agmon_constant(cutoff)?.ln();
            for n in from + 1..=to {
                value = value + (potential.value(n) + two).ln() - ln_k;
            }
        }
        AgmonVariant::B => {
            for n in from + 1..=to {
                let v = potential.value(n);
                value = value + ((v + two + (v * (v + four)).sqrt()) / two).ln();
            }
        }
    }

    let summability_warning = match variant {
        AgmonVariant::A => false,
        AgmonVariant::B => summability_divergent(potential),
    };
    Ok(AgmonDistance {
        value,
        summability_warning,
    })
}

/// Proxy for divergence of `Σ |n| |V_{n+1} - V_n|`: warn when the last
/// quarter of the window still carries more than 5% of the partial sums.
fn summability_divergent<T: Scalar>(potential: &LatticePotential<T>) -> bool {
    let window = potential.window();
    let v = potential.values();
    let mut partial = Vec::with_capacity(v.len() - 1);
    let mut sum = T::zero();
    for k in 0..v.len() - 1 {
        let weight = cast::<T>(window.index(k).abs() as f64);
        sum = sum + weight * (v[k + 1] - v[k]).abs();
        partial.push(sum);
    }
    let total = *partial.last().expect("window has at least two points");
    let scale = v.iter().fold(T::one(), |acc, x| acc.max(x.abs()));
    if total <= cast::<T>(1e-12) * scale {
        return false;
    }
    let quarter_start = partial.len() - partial.len() / 4 - 1;
    let tail = total - partial[quarter_start];
    tail > cast::<T>(0.05) * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        build_green_matrix, LatticeSolution, LatticeWindow,
    };
    use num_complex::Complex;

    fn growth_ratio(c: f64) -> f64 {
        (2.0 + c + (c * (c + 4.0)).sqrt()) / 2.0
    }

    #[test]
    fn constant_values_match_direct_evaluation() {
        let eval = |c: f64| (1.0 + (2.0 / (c * (c + 2.0))).powi(2)).sqrt() + 2.0 / (c * (c + 2.0));
        for (c, expected) in [(2.0, 1.2807764), (1.0, 1.8685171), (100.0, 1.0001961)] {
            let k = agmon_constant::<f64>(c).unwrap();
            assert!((k - expected).abs() < 1e-7);
            assert!((k - eval(c)).abs() < 1e-14);
            assert!(k < (1.0 + 4.0 / (c * c)).sqrt());
        }
        assert!(agmon_constant::<f64>(0.0).is_err());
        assert!(agmon_constant::<f64>(-1.0).is_err());
    }

    fn constant_green(c_val: f64, hi: i64) -> (LatticePotential<f64>, GreenMatrix<f64>) {
        let r = growth_ratio(c_val);
        let w = LatticeWindow::new(0, hi).unwrap();
        let v = LatticePotential::constant(w, c_val).unwrap();
        let c = |x: f64| Complex::new(x, 0.0);
        let u1 =
            LatticeSolution::new(w, (0..=hi).map(|n| c(r.powi(-(n as i32)))).collect()).unwrap();
        let u2 = LatticeSolution::new(w, (0..=hi).map(|n| c(r.powi(n as i32))).collect()).unwrap();
        let g = build_green_matrix(&u1, &u2).unwrap();
        (v, g)
    }

    #[test]
    fn bounds_hold_for_constant_two_with_unit_cutoff() {
        let (v, g) = constant_green(2.0, 20);
        let report = agmon_bound_report(&v, &g, 1.0).unwrap();
        assert!(report.all_pass);
        assert!(report.max_violation() == 0.0);
        for r in &report.records {
            assert!((r.green_value - 0.2886751).abs() < 1e-7);
            assert!((r.green_lower - 0.25).abs() < 1e-12);
            assert!((r.green_upper - 0.4671293).abs() < 1e-7);
            assert!((r.s_upper - 4.2360680).abs() < 1e-7);
            assert!((r.s_lower - 2.2670748).abs() < 1e-7);
            assert!((r.s_value - 3.7320508).abs() < 1e-7);
        }
    }

    #[test]
    fn lower_green_bound_is_strict() {
        // Each square root in the diagonal identity exceeds 1, so the lower
        // bound can never be attained on a finite window.
        let (v, g) = constant_green(2.0, 20);
        let report = agmon_bound_report(&v, &g, 1.0).unwrap();
        for r in &report.records {
            assert!(r.green_value > r.green_lower);
        }
    }

    #[test]
    fn cutoff_above_the_minimum_is_rejected() {
        let (v, g) = constant_green(2.0, 20);
        assert!(matches!(
            agmon_bound_report(&v, &g, 3.0),
            Err(LatticeError::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn distance_variant_a_telescopes_the_constant_case() {
        let w = LatticeWindow::new(0, 20).unwrap();
        let v = LatticePotential::constant(w, 2.0).unwrap();
        let d = agmon_distance(&v, 3, 8, AgmonVariant::A, 1.0).unwrap();
        let k = agmon_constant::<f64>(1.0).unwrap();
        assert!((d.value - 5.0 * (4.0 / k).ln()).abs() < 1e-12);
        assert!((d.value - 3.8057462).abs() < 1e-7);
        assert!(!d.summability_warning);
    }

    #[test]
    fn distance_variant_b_matches_the_true_decay_rate() {
        let w = LatticeWindow::new(0, 20).unwrap();
        for c in [1.0, 2.0, 5.0] {
            let v = LatticePotential::constant(w, c).unwrap();
            let d = agmon_distance(&v, 4, 5, AgmonVariant::B, c / 2.0).unwrap();
            assert!((d.value - growth_ratio(c).ln()).abs() < 1e-12);
            assert!(!d.summability_warning);
        }
        let v = LatticePotential::constant(w, 2.0).unwrap();
        let d = agmon_distance(&v, 4, 5, AgmonVariant::B, 1.0).unwrap();
        assert!((d.value - 1.3169579_f64).abs() < 1e-7);
    }

    #[test]
    fn coincident_endpoints_give_zero_distance() {
        let w = LatticeWindow::new(0, 20).unwrap();
        let v = LatticePotential::constant(w, 2.0).unwrap();
        for variant in [AgmonVariant::A, AgmonVariant::B] {
            let d = agmon_distance(&v, 7, 7, variant, 1.0).unwrap();
            assert_eq!(d.value, 0.0);
        }
    }

    #[test]
    fn growing_differences_trigger_the_summability_warning() {
        let w = LatticeWindow::new(1, 40).unwrap();
        let growing = LatticePotential::from_fn(w, |n| 1.0 + n as f64).unwrap();
        let d = agmon_distance(&growing, 1, 40, AgmonVariant::B, 0.5).unwrap();
        assert!(d.summability_warning);

        let settling = LatticePotential::from_fn(w, |n| 1.0 + (n as f64).powi(-3)).unwrap();
        let d = agmon_distance(&settling, 1, 40, AgmonVariant::B, 0.5).unwrap();
        assert!(!d.summability_warning);
    }
}
