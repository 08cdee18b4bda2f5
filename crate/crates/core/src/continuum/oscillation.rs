
use super::{ContinuumError, DiagonalFunction, Grid, Result};
use crate::{cast, Scalar};

/// Outcome of the oscillation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillationClass {
    /// The Green function generated by the diagonal is real: the basis does
    /// not oscillate.
    RealNonoscillatory,
    /// The phase `∫ 1/(2|Z|²)` converges over expanding tails: finitely many
    /// oscillations.
    FinitePhase,
    /// The phase keeps accumulating at a rate bounded away from zero.
    InfinitePhase,
    /// The tail behaviour is not decisive on this window; never a silent
    /// guess.
    Indeterminate,
}

impl OscillationClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OscillationClass::RealNonoscillatory => "real-nonoscillatory",
            OscillationClass::FinitePhase => "finite-phase",
            OscillationClass::InfinitePhase => "infinite-phase",
            OscillationClass::Indeterminate => "indeterminate",
        }
    }
}

/// Classification together with the evidence it was based on.
#[derive(Debug, Clone)]
pub struct OscillationReport<T> {
    pub class: OscillationClass,
    /// `∫ 1/(2|Z|²)` over the full grid of the diagonal.
    pub total_phase: T,
    /// Phase increments over the doubling tail windows, left to right.
    pub tail_increments: Vec<T>,
    /// `max |Im Z²| / max |Z²|`, the realness measure of the Green function.
    pub imag_fraction: T,
}

const TAIL_WINDOWS: usize = 6;
/// An increment below this is treated as outright convergence.
const INCREMENT_CUTOFF: f64 = 1e-6;
/// Geometric decay of increments over doubling windows accepted as a
/// convergent tail.
const DECAY_RATIO: f64 = 0.75;

/// Classifies oscillation from the diagonal function.
///
/// The Green function is real exactly when `Z²` is real, which settles the
/// non-oscillatory case directly. Otherwise the phase rate `1/(2|Z|²)` is
/// integrated over `tail` and examined over windows that double in length
/// toward the right end: increments that die below `1e-6`, or decay
/// geometrically, certify a convergent phase; increments that grow with the
/// window length certify divergence; anything else is reported as
/// indeterminate.
pub fn oscillation_classify<T: Scalar>(
    z: &DiagonalFunction<T>,
    tail: &Grid<T>,
) -> Result<OscillationReport<T>> {
    let grid = z.grid();
    if tail.a() < grid.a() || tail.b() > grid.b() {
        return Err(ContinuumError::InvalidInput(format!(
            "tail grid [{}, {}] must lie inside the diagonal grid [{}, {}]",
            tail.a(),
            tail.b(),
            grid.a(),
            grid.b()
        )));
    }

    let max_sq = z
        .squared()
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), T::max);
    let max_imag = z
        .squared()
        .iter()
        .map(|p| p.im.abs())
        .fold(T::zero(), T::max);
    let imag_fraction = if max_sq > T::zero() {
        max_imag / max_sq
    } else {
        T::zero()
    };

    let total_phase = phase_between(z, grid.a(), grid.b());

    if imag_fraction <= cast::<T>(1e-9) {
        return Ok(OscillationReport {
            class: OscillationClass::RealNonoscillatory,
            total_phase,
            tail_increments: Vec::new(),
            imag_fraction,
        });
    }

    // Checkpoints a + L·2^{k-K}: the windows between them double in length.
    let length = tail.b() - tail.a();
    let mut checkpoints = vec![tail.a()];
    for k in 0..=TAIL_WINDOWS {
        let fraction = cast::<T>(2.0_f64.powi(k as i32 - TAIL_WINDOWS as i32));
        checkpoints.push(tail.a() + length * fraction);
    }
    let increments: Vec<T> = checkpoints
        .windows(2)
        .map(|pair| phase_between(z, pair[0], pair[1]))
        .collect();
    // Drop the bootstrap window before the first checkpoint.
    let tail_increments = increments[1..].to_vec();

    let cutoff = cast::<T>(INCREMENT_CUTOFF);
    let last = *tail_increments.last().expect("at least one window");
    let prev = tail_increments[tail_increments.len() - 2];
    let first = tail_increments[0];
    let decreasing_tail = tail_increments
        .windows(2)
        .rev()
        .take(3)
        .all(|pair| pair[1] < pair[0]);
    let nondecreasing_tail = tail_increments
        .windows(2)
        .rev()
        .take(3)
        .all(|pair| pair[1] >= pair[0]);

    let converged = last <= cutoff || (decreasing_tail && last <= cast::<T>(DECAY_RATIO) * prev);
    let class = if converged {
        OscillationClass::FinitePhase
    } else if nondecreasing_tail && last >= cast::<T>(4.0) * first {
        OscillationClass::InfinitePhase
    } else {
        OscillationClass::Indeterminate
    };

    Ok(OscillationReport {
        class,
        total_phase,
        tail_increments,
        imag_fraction,
    })
}

/// Trapezoid integral of `1/(2|Z|²)` between two points of the diagonal's
/// grid, with linear interpolation at the cut points.
fn phase_between<T: Scalar>(z: &DiagonalFunction<T>, from: T, to: T) -> T {
    let grid = z.grid();
    let rate = |i: usize| (cast::<T>(2.0) * z.squared()[i].norm()).recip();
    let rate_at = |x: T| {
        let (i, t) = grid.locate(x).expect("cut point inside the grid");
        rate(i) + (rate(i + 1) - rate(i)) * t
    };

    let (i_from, t_from) = grid.locate(from).expect("inside");
    let (i_to, t_to) = grid.locate(to).expect("inside");
    let h = grid.step();
    let half = cast::<T>(0.5);

    if i_from == i_to {
        return half * (rate_at(from) + rate_at(to)) * (to - from);
    }

    let mut total = T::zero();
    // Partial cell on the left.
    let left_edge = i_from + 1;
    total = total + half * (rate_at(from) + rate(left_edge)) * (h * (T::one() - t_from));
    // Whole cells.
    for i in left_edge..i_to {
        total = total + half * (rate(i) + rate(i + 1)) * h;
    }
    // Partial cell on the right.
    total = total + half * (rate(i_to) + rate_at(to)) * (h * t_to);
    total
}
