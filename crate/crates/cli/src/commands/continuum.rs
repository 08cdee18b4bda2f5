use num_complex::Complex64;

use bohl_core::continuum::{
    bohl_basis, bump_function, conjugate_scaled, darboux_factorization_residual,
    diagonal_equation_residual, diagonal_function, integrate_sle, integrate_sle_backward,
    nonvanishing_combination, oscillation_classify, sle_residual, special_alpha, wronskian_grid,
    AlphaBranch, ContinuumError, ContinuumPotential, DiagonalFunction, Grid, GreenFunction,
    GridSolution, OscillationClass,
};

use crate::commands::write_dump;
use crate::report::{fmt9, Report, ReportBuilder};
use crate::spec::PotentialSpec;
use crate::{InvalidInput, Options};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scaled(u: &GridSolution<f64>, factor: Complex64) -> GridSolution<f64> {
    GridSolution::from_parts(
        u.grid(),
        u.values().iter().map(|v| v * factor).collect(),
        u.derivatives().iter().map(|v| v * factor).collect(),
    )
    .expect("lengths preserved")
}

/// Standard-seed basis used by `analyze`: u1(a) = 1, u2'(a) = 1.
fn standard_basis(
    potential: &ContinuumPotential<f64>,
    grid: &Grid<f64>,
) -> Result<(GridSolution<f64>, GridSolution<f64>), InvalidInput> {
    let u1 = integrate_sle(potential, grid, c(1.0, 0.0), c(0.0, 0.0))?;
    let u2 = integrate_sle(potential, grid, c(0.0, 0.0), c(1.0, 0.0))?;
    Ok((u1, u2))
}

/// Disconjugate route for strictly positive potentials: decaying × growing,
/// normalized to a unit Wronskian, giving a real positive diagonal.
fn positive_diagonal(
    potential: &ContinuumPotential<f64>,
    grid: &Grid<f64>,
) -> Result<DiagonalFunction<f64>, InvalidInput> {
    let kappa_b = potential.eval(grid.b()).max(0.0).sqrt();
    let kappa_a = potential.eval(grid.a()).max(0.0).sqrt();
    let minus = integrate_sle_backward(potential, grid, c(1.0, 0.0), c(-kappa_b, 0.0))?;
    let plus = integrate_sle(potential, grid, c(1.0, 0.0), c(kappa_a, 0.0))?;
    let w = wronskian_grid(&minus, &plus)?;
    let normalized = scaled(&plus, c(1.0, 0.0) / w);
    Ok(diagonal_function(&minus, &normalized)?)
}

/// Oscillatory-capable route: backward integration from the right endpoint
/// seeded with amplitude-phase data `u = |V|^(-1/4)`,
/// `u'/u = -|V|'/(4|V|) + i sqrt(|V|)`, then the conjugate pairing.
fn outgoing_diagonal(
    potential: &ContinuumPotential<f64>,
    grid: &Grid<f64>,
) -> Result<(DiagonalFunction<f64>, Complex64), InvalidInput> {
    let b = grid.b();
    let magnitude = potential.eval(b).abs().max(1e-8);
    let kappa = magnitude.sqrt();
    let v_slope = potential.derivative_at(b, grid.step());
    let magnitude_slope = if potential.eval(b) < 0.0 { -v_slope } else { v_slope };
    let log_derivative = c(-magnitude_slope / (4.0 * magnitude), kappa);
    let amplitude = magnitude.powf(-0.25);
    let u = integrate_sle_backward(
        potential,
        grid,
        c(amplitude, 0.0),
        log_derivative * c(amplitude, 0.0),
    )?;
    let special = special_alpha(&u)?;
    let pair = conjugate_scaled(&u, special.alpha);
    let z = diagonal_function(&u, &pair)?;
    Ok((z, special.alpha))
}

/// Route selection shared by `classify` and `darboux`: strictly positive
/// potentials take the real disconjugate construction, everything else the
/// complex one.
fn route_diagonal(
    potential: &ContinuumPotential<f64>,
    grid: &Grid<f64>,
) -> Result<(DiagonalFunction<f64>, &'static str), InvalidInput> {
    if potential.min_on(grid) > 0.0 {
        Ok((positive_diagonal(potential, grid)?, "positive-basis"))
    } else {
        let (z, _) = outgoing_diagonal(potential, grid)?;
        Ok((z, "complex-combination"))
    }
}

pub fn analyze(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let (potential, grid) = spec.continuum_potential()?;
    let mut report = ReportBuilder::new("continuum analyze", spec.echo(), options.tolerance);
    let stencil_tol = 1e-5_f64.max(100.0 * grid.step() * grid.step());

    let (u1, u2) = standard_basis(&potential, &grid)?;
    let w12 = wronskian_grid(&u1, &u2)?;
    report.check("basis-wronskian", (w12 - c(1.0, 0.0)).norm(), 1e-10);

    let x0 = 0.5 * (grid.a() + grid.b());
    let combo = match nonvanishing_combination(&u1, &u2, x0) {
        Ok(combo) => combo,
        Err(ContinuumError::RetryAt { suggested, .. }) => {
            nonvanishing_combination(&u1, &u2, suggested)?
        }
        Err(other) => return Err(other.into()),
    };
    report.check_flag("combination-nonvanishing", combo.min_abs > 0.0);
    report.check("independence-identity", combo.identity_residual, 1e-8);

    let special = special_alpha(&combo.solution)?;
    let pair = conjugate_scaled(&combo.solution, special.alpha);
    let z = diagonal_function(&combo.solution, &pair)?;
    report.check("diagonal-residual", diagonal_equation_residual(&z, &potential), stencil_tol);
    report.check("unwrap-consistency", z.unwrap_consistency(), 1e-12);

    let basis = bohl_basis(&z, &potential, combo.anchor)?;
    report.check("bohl-wronskian", (basis.wronskian - c(1.0, 0.0)).norm(), 1e-8);
    let mut product = 0.0_f64;
    for i in 0..grid.len() {
        let dev = (basis.plus.value(i) * basis.minus.value(i) - z.squared()[i]).norm();
        product = product.max(dev / z.squared()[i].norm().max(1.0));
    }
    report.check("bohl-product", product, 1e-12);
    let sle = sle_residual(&basis.plus, &potential).max(sle_residual(&basis.minus, &potential));
    report.check("bohl-sle-residual", sle, stencil_tol);

    let green = GreenFunction::new(&z);
    // The one-sided jump carries an O(h) error with constant ~ |V G|, so the
    // residual is scaled by the local Green magnitude.
    let mut jump = 0.0_f64;
    let span = grid.b() - grid.a();
    for frac in [0.25, 0.5, 0.75] {
        let y = grid.a() + span * frac;
        let scale = (potential.eval(y).abs() * green.eval(y, y)?.norm()).max(1.0);
        jump = jump.max((green.derivative_jump(y)? + c(1.0, 0.0)).norm() / scale);
    }
    report.check("green-derivative-jump", jump, 5.0 * grid.step());
    let mut diag = 0.0_f64;
    for i in (0..grid.len()).step_by((grid.len() / 16).max(1)) {
        let x = grid.x(i);
        let dev = (green.eval(x, x)? - z.squared()[i]).norm();
        diag = diag.max(dev / z.squared()[i].norm().max(1.0));
    }
    report.check("green-diagonal-consistency", diag, 1e-12);

    report.derived("anchor", fmt9(combo.anchor));
    report.derived(
        "alpha",
        format!("{} + {}i", fmt9(special.alpha.re), fmt9(special.alpha.im)),
    );
    report.derived(
        "alpha-branch",
        match special.branch {
            AlphaBranch::Disconjugate => "disconjugate".to_string(),
            AlphaBranch::Oscillatory => "oscillatory".to_string(),
        },
    );
    report.derived_number("min-combination-modulus", combo.min_abs);

    if let Some(path) = &options.dump {
        let rows = (0..grid.len()).map(|i| {
            format!(
                "{} {} {}",
                fmt9(grid.x(i)),
                fmt9(z.value(i).re),
                fmt9(z.value(i).im)
            )
        });
        write_dump(path, "x Re_Z Im_Z", rows)?;
    }
    Ok(report.finish())
}

pub fn classify(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let (potential, grid) = spec.continuum_potential()?;
    let mut report = ReportBuilder::new("continuum classify", spec.echo(), options.tolerance);

    let (z, route) = route_diagonal(&potential, &grid)?;
    let oscillation = oscillation_classify(&z, &grid)?;

    report.check_flag(
        "classification-determinate",
        oscillation.class != OscillationClass::Indeterminate,
    );
    report.derived("classification", oscillation.class.as_str().to_string());
    report.derived("construction", route.to_string());
    report.derived_number("total-phase", oscillation.total_phase);
    report.derived_number("diagonal-imag-fraction", oscillation.imag_fraction);
    for (k, increment) in oscillation.tail_increments.iter().enumerate() {
        report.derived(&format!("tail-increment-{k}"), fmt9(*increment));
    }

    if let Some(path) = &options.dump {
        // Cumulative phase ∫ 1/(2|Z|²) from the left endpoint.
        let mut rows = Vec::with_capacity(grid.len());
        let mut phase = 0.0_f64;
        let rate = |i: usize| 0.5 / z.squared()[i].norm();
        rows.push(format!("{} {}", fmt9(grid.x(0)), fmt9(0.0)));
        for i in 1..grid.len() {
            phase += 0.5 * (rate(i) + rate(i - 1)) * grid.step();
            rows.push(format!("{} {}", fmt9(grid.x(i)), fmt9(phase)));
        }
        write_dump(path, "x cumulative_phase", rows)?;
    }
    Ok(report.finish())
}

pub fn darboux(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let (potential, grid) = spec.continuum_potential()?;
    let mut report = ReportBuilder::new("continuum darboux", spec.echo(), options.tolerance);
    let stencil_tol = 1e-5_f64.max(100.0 * grid.step() * grid.step());

    let (z, route) = route_diagonal(&potential, &grid)?;
    report.check("diagonal-residual", diagonal_equation_residual(&z, &potential), stencil_tol);

    let center = 0.5 * (grid.a() + grid.b());
    let width = 0.25 * (grid.b() - grid.a());
    let f: Vec<Complex64> = grid
        .points()
        .map(|x| c(bump_function(x, center, width), 0.0))
        .collect();
    let residual = darboux_factorization_residual(&z, &potential, &f)?;
    report.check("factorization-plus", residual.plus, 1e-3);
    report.check("factorization-minus", residual.minus, 1e-3);

    report.derived("construction", route.to_string());
    report.derived_number("bump-center", center);
    report.derived_number("bump-width", width);

    if let Some(path) = &options.dump {
        let rows = (0..grid.len()).map(|i| format!("{} {}", fmt9(grid.x(i)), fmt9(f[i].re)));
        write_dump(path, "x test_function", rows)?;
    }
    Ok(report.finish())
}
