use num_complex::Complex64;

use bohl_core::lattice::{
    agmon_bound_report, agmon_distance, bohl_reconstruct, build_green_matrix,
    darboux_discrete_apply, darboux_discrete_q, diagonal_sequence, green_product_residual,
    gtov_residual, positive_basis, potential_from_diagonal, AgmonVariant, DiagonalSequence,
    GreenMatrix, LatticePotential, PositiveBasis,
};
use bohl_oracle::{green_by_inversion, recurrence_residual};

use crate::commands::write_dump;
use crate::report::{fmt9, Report, ReportBuilder};
use crate::spec::PotentialSpec;
use crate::{InvalidInput, Options};

struct Pipeline {
    full: LatticePotential<f64>,
    trimmed: LatticePotential<f64>,
    basis: PositiveBasis<f64>,
    green: GreenMatrix<f64>,
    z: DiagonalSequence<f64>,
}

fn build(spec: &PotentialSpec) -> Result<Pipeline, InvalidInput> {
    let full = spec.lattice_potential()?;
    if full.min_value() <= 0.0 {
        return Err(InvalidInput(format!(
            "hypothesis not met: the discrete pipeline needs V > 0 on the window; min V = {}",
            full.min_value()
        )));
    }
    let basis = positive_basis(&full)?;
    let trimmed = full.restrict(basis.window())?;
    let green = build_green_matrix(&basis.minus, &basis.plus)?;
    let z = diagonal_sequence(&green)?;
    Ok(Pipeline {
        full,
        trimmed,
        basis,
        green,
        z,
    })
}

fn oracle_agreement(pipeline: &Pipeline) -> Result<f64, InvalidInput> {
    let oracle = green_by_inversion(&pipeline.full)?;
    let mut worst = 0.0_f64;
    for m in pipeline.basis.window().iter() {
        for n in pipeline.basis.window().iter() {
            worst = worst.max((pipeline.green.entry(m, n) - oracle.entry(m, n)).norm());
        }
    }
    Ok(worst)
}

fn cutoff_for(pipeline: &Pipeline, options: &Options) -> Result<f64, InvalidInput> {
    let min_v = pipeline.trimmed.min_value();
    let cutoff = options.cutoff.unwrap_or(min_v / 2.0);
    if !(cutoff > 0.0) || cutoff >= min_v {
        return Err(InvalidInput(format!(
            "cutoff must satisfy 0 < C < min V = {min_v}, got {cutoff}"
        )));
    }
    Ok(cutoff)
}

pub fn reconstruct(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let pipeline = build(spec)?;
    let mut report = ReportBuilder::new("discrete reconstruct", spec.echo(), options.tolerance);

    let basis_residual = recurrence_residual(&pipeline.trimmed, &pipeline.basis.plus)?
        .max(recurrence_residual(&pipeline.trimmed, &pipeline.basis.minus)?);
    report.check("basis-recurrence", basis_residual, 1e-10);

    let anchor = pipeline.z.window().lo() + pipeline.z.window().len() as i64 / 2;
    let rebuilt = bohl_reconstruct(&pipeline.z, anchor)?;
    let rebuilt_residual = recurrence_residual(&pipeline.trimmed, &rebuilt.plus)?
        .max(recurrence_residual(&pipeline.trimmed, &rebuilt.minus)?);
    report.check("bohl-recurrence", rebuilt_residual, 1e-9);

    let mut product = 0.0_f64;
    for n in pipeline.z.window().iter() {
        let z2 = pipeline.z.value(n) * pipeline.z.value(n);
        let dev = (rebuilt.plus.value(n) * rebuilt.minus.value(n) - z2).norm();
        product = product.max(dev / z2.norm().max(1.0));
    }
    report.check("bohl-product", product, 1e-12);

    report.check(
        "green-product-identity",
        green_product_residual(&pipeline.green, &pipeline.z)?,
        1e-9,
    );

    let recovered = potential_from_diagonal(&pipeline.z)?;
    let truth = pipeline.trimmed.restrict(recovered.window())?;
    let mut roundtrip = 0.0_f64;
    for n in truth.window().iter() {
        roundtrip = roundtrip.max((truth.value(n) - recovered.value(n)).abs());
    }
    report.check("potential-roundtrip", roundtrip, 1e-8);

    report.check("oracle-agreement", oracle_agreement(&pipeline)?, 1e-8);

    report.derived(
        "window",
        format!("[{}, {}]", pipeline.full.window().lo(), pipeline.full.window().hi()),
    );
    report.derived(
        "trusted-window",
        format!("[{}, {}]", pipeline.z.window().lo(), pipeline.z.window().hi()),
    );
    report.derived("anchor", anchor.to_string());
    report.derived_number("min-potential", pipeline.full.min_value());

    if let Some(path) = &options.dump {
        let rows = recovered.window().iter().map(|n| {
            format!(
                "{n} {} {} {}",
                fmt9(truth.value(n)),
                fmt9(recovered.value(n)),
                fmt9(pipeline.z.value(n).re)
            )
        });
        write_dump(path, "n V V_reconstructed z", rows)?;
    }
    Ok(report.finish())
}

pub fn verify(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let pipeline = build(spec)?;
    let mut report = ReportBuilder::new("discrete verify", spec.echo(), options.tolerance);

    let gtov = gtov_residual(&pipeline.green, &pipeline.trimmed)?;
    let gtov_worst = gtov.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
    report.check("gtov-residual", gtov_worst, 1e-8);

    report.check("oracle-agreement", oracle_agreement(&pipeline)?, 1e-8);

    // Factored operator against the direct one, on every unit sequence.
    let window = pipeline.z.window();
    let mut units = 0.0_f64;
    for k in 0..window.len() {
        let mut e = vec![Complex64::new(0.0, 0.0); window.len()];
        e[k] = Complex64::new(1.0, 0.0);
        let out = darboux_discrete_apply(&pipeline.z, &pipeline.trimmed, &e)?;
        units = units.max(out.max_deviation);
    }
    report.check("darboux-unit-sequences", units, 1e-9);

    let q = darboux_discrete_q(&pipeline.z)?;
    let anchor = window.lo() + window.len() as i64 / 2;
    let rebuilt = bohl_reconstruct(&pipeline.z, anchor)?;
    let phi = rebuilt.plus.values();
    let mut annihilation = 0.0_f64;
    for k in 0..q.len() {
        let res = (phi[k + 1] - phi[k] + q[k] * phi[k]).norm();
        annihilation = annihilation.max(res / phi[k].norm().max(1.0));
    }
    report.check("darboux-annihilation", annihilation, 1e-10);

    let cutoff = cutoff_for(&pipeline, options)?;
    let bounds = agmon_bound_report(&pipeline.trimmed, &pipeline.green, cutoff)?;
    report.check("agmon-bounds", bounds.max_violation(), 0.0);

    report.derived_number("cutoff", cutoff);
    report.derived_number("agmon-constant", bounds.constant);
    report.derived(
        "trusted-window",
        format!("[{}, {}]", window.lo(), window.hi()),
    );

    if let Some(path) = &options.dump {
        let rows = gtov.iter().enumerate().map(|(k, r)| {
            format!("{} {}", window.lo() + 1 + k as i64, fmt9(*r))
        });
        write_dump(path, "n gtov_residual", rows)?;
    }
    Ok(report.finish())
}

pub fn agmon(spec: &PotentialSpec, options: &Options) -> Result<Report, InvalidInput> {
    let pipeline = build(spec)?;
    let mut report = ReportBuilder::new("discrete agmon", spec.echo(), options.tolerance);

    let cutoff = cutoff_for(&pipeline, options)?;
    let bounds = agmon_bound_report(&pipeline.trimmed, &pipeline.green, cutoff)?;
    report.check("agmon-bounds", bounds.max_violation(), 0.0);
    report.check_flag(
        "agmon-constant-below-coarse-bound",
        bounds.constant < (1.0 + 4.0 / (cutoff * cutoff)).sqrt(),
    );

    let window = pipeline.trimmed.window();
    let (lo, hi) = (window.lo(), window.hi());
    let d_a = agmon_distance(&pipeline.trimmed, lo, hi, AgmonVariant::A, cutoff)?;
    let d_b = agmon_distance(&pipeline.trimmed, lo, hi, AgmonVariant::B, cutoff)?;

    report.derived_number("cutoff", cutoff);
    report.derived_number("agmon-constant", bounds.constant);
    report.derived_number("distance-a", d_a.value);
    report.derived_number("distance-b", d_b.value);
    report.derived(
        "summability-warning",
        if d_b.summability_warning { "yes" } else { "no" }.to_string(),
    );

    if let Some(path) = &options.dump {
        let mut rows = Vec::new();
        for n in window.iter().skip(1) {
            let da = agmon_distance(&pipeline.trimmed, lo, n, AgmonVariant::A, cutoff)?;
            let db = agmon_distance(&pipeline.trimmed, lo, n, AgmonVariant::B, cutoff)?;
            rows.push(format!("{n} {} {}", fmt9(da.value), fmt9(db.value)));
        }
        write_dump(path, "n distance_a distance_b", rows)?;
    }
    Ok(report.finish())
}
