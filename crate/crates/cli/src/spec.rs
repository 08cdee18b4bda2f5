use std::path::Path;

use serde::Deserialize;

use bohl_core::continuum::{ContinuumPotential, Grid};
use bohl_core::lattice::{LatticePotential, LatticeWindow};

use crate::report::fmt9;
use crate::InvalidInput;

/// Raw JSON shape of a potential spec; validation happens in
/// [`PotentialSpec::validate`].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    value: Option<f64>,
    slope: Option<f64>,
    intercept: Option<f64>,
    scale: Option<f64>,
    exponent: Option<f64>,
    values: Option<Vec<f64>>,
    path: Option<String>,
    window: Option<[i64; 2]>,
    interval: Option<[f64; 2]>,
    h: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum PotentialKind {
    Constant { value: f64 },
    Affine { slope: f64, intercept: f64 },
    Power { scale: f64, exponent: f64 },
    Samples { values: Vec<f64> },
}

/// Validated potential spec: a kind plus at least one domain.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub window: Option<(i64, i64)>,
    pub interval: Option<(f64, f64, f64)>,
}

fn require(field: &'static str, value: Option<f64>) -> Result<f64, InvalidInput> {
    value.ok_or(InvalidInput(format!("spec field `{field}`: missing")))
}

impl PotentialSpec {
    pub fn load(path: &Path) -> Result<Self, InvalidInput> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InvalidInput(format!("spec file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, InvalidInput> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| InvalidInput(format!("spec parse: {e}")))?;
        Self::validate(raw)
    }

    fn validate(raw: RawSpec) -> Result<Self, InvalidInput> {
        let kind = match raw.kind.as_str() {
            "constant" => PotentialKind::Constant {
                value: require("value", raw.value)?,
            },
            "affine" => PotentialKind::Affine {
                slope: require("slope", raw.slope)?,
                intercept: require("intercept", raw.intercept)?,
            },
            "power" => PotentialKind::Power {
                scale: require("scale", raw.scale)?,
                exponent: require("exponent", raw.exponent)?,
            },
            "samples" => {
                let values = match (raw.values, &raw.path) {
                    (Some(values), None) => values,
                    (None, Some(path)) => read_sample_file(path)?,
                    (Some(_), Some(_)) => {
                        return Err(InvalidInput(
                            "spec fields `values`/`path`: give one, not both".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(InvalidInput(
                            "spec field `values`: missing (or give `path`)".into(),
                        ))
                    }
                };
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(InvalidInput("spec field `values`: non-finite entry".into()));
                }
                PotentialKind::Samples { values }
            }
            other => {
                return Err(InvalidInput(format!(
                    "spec field `kind`: unknown kind \"{other}\""
                )))
            }
        };

        let window = match raw.window {
            Some([lo, hi]) => {
                if hi < lo + 2 {
                    return Err(InvalidInput(format!(
                        "spec field `window`: [{lo}, {hi}] holds fewer than 3 points"
                    )));
                }
                Some((lo, hi))
            }
            None => None,
        };
        let interval = match (raw.interval, raw.h) {
            (Some([a, b]), Some(h)) => {
                if !(b > a) || !a.is_finite() || !b.is_finite() {
                    return Err(InvalidInput(format!(
                        "spec field `interval`: need finite b > a, got [{a}, {b}]"
                    )));
                }
                if !(h > 0.0) || !h.is_finite() {
                    return Err(InvalidInput(format!(
                        "spec field `h`: need a positive step, got {h}"
                    )));
                }
                Some((a, b, h))
            }
            (Some(_), None) => {
                return Err(InvalidInput("spec field `h`: required with `interval`".into()))
            }
            (None, Some(_)) => {
                return Err(InvalidInput(
                    "spec field `interval`: required with `h`".into(),
                ))
            }
            (None, None) => None,
        };
        if window.is_none() && interval.is_none() {
            return Err(InvalidInput(
                "spec: give a lattice `window` or a continuum `interval` + `h`".into(),
            ));
        }

        // Sampled arrays must match whichever domain they are declared on.
        if let PotentialKind::Samples { values } = &kind {
            if let Some((lo, hi)) = window {
                let expected = (hi - lo + 1) as usize;
                if values.len() != expected {
                    return Err(InvalidInput(format!(
                        "spec field `values`: length {} does not match window [{lo}, {hi}] \
                         ({expected} points)",
                        values.len()
                    )));
                }
            }
            if let Some((a, b, h)) = interval {
                let grid = Grid::from_step(a, b, h).map_err(|e| InvalidInput(e.to_string()))?;
                if values.len() != grid.len() {
                    return Err(InvalidInput(format!(
                        "spec field `values`: length {} does not match interval grid \
                         ({} points)",
                        values.len(),
                        grid.len()
                    )));
                }
            }
        }

        Ok(PotentialSpec {
            kind,
            window,
            interval,
        })
    }

    pub fn lattice_potential(&self) -> Result<LatticePotential<f64>, InvalidInput> {
        let (lo, hi) = self
            .window
            .ok_or(InvalidInput("spec: this command needs a lattice `window`".into()))?;
        let window = LatticeWindow::new(lo, hi).map_err(|e| InvalidInput(e.to_string()))?;
        let potential = match &self.kind {
            PotentialKind::Constant { value } => LatticePotential::constant(window, *value),
            PotentialKind::Affine { slope, intercept } => {
                LatticePotential::from_fn(window, |n| slope * n as f64 + intercept)
            }
            PotentialKind::Power { scale, exponent } => {
                LatticePotential::from_fn(window, |n| scale * (n as f64).powf(*exponent))
            }
            PotentialKind::Samples { values } => LatticePotential::new(window, values.clone()),
        };
        potential.map_err(|e| InvalidInput(e.to_string()))
    }

    pub fn continuum_potential(&self) -> Result<(ContinuumPotential<f64>, Grid<f64>), InvalidInput> {
        let (a, b, h) = self.interval.ok_or(InvalidInput(
            "spec: this command needs a continuum `interval` + `h`".into(),
        ))?;
        let grid = Grid::from_step(a, b, h).map_err(|e| InvalidInput(e.to_string()))?;
        let potential = match &self.kind {
            PotentialKind::Constant { value } => ContinuumPotential::Constant(*value),
            PotentialKind::Affine { slope, intercept } => ContinuumPotential::Affine {
                slope: *slope,
                intercept: *intercept,
            },
            PotentialKind::Power { scale, exponent } => ContinuumPotential::Power {
                scale: *scale,
                exponent: *exponent,
            },
            PotentialKind::Samples { values } => {
                ContinuumPotential::samples(grid, values.clone())
                    .map_err(|e| InvalidInput(e.to_string()))?
            }
        };
        potential
            .validate_on(&grid)
            .map_err(|e| InvalidInput(e.to_string()))?;
        Ok((potential, grid))
    }

    /// Canonical one-line echo used in reports.
    pub fn echo(&self) -> String {
        let mut out = match &self.kind {
            PotentialKind::Constant { value } => format!("constant value={}", fmt9(*value)),
            PotentialKind::Affine { slope, intercept } => {
                format!("affine slope={} intercept={}", fmt9(*slope), fmt9(*intercept))
            }
            PotentialKind::Power { scale, exponent } => {
                format!("power scale={} exponent={}", fmt9(*scale), fmt9(*exponent))
            }
            PotentialKind::Samples { values } => format!("samples count={}", values.len()),
        };
        if let Some((lo, hi)) = self.window {
            out.push_str(&format!(" window=[{lo}, {hi}]"));
        }
        if let Some((a, b, h)) = self.interval {
            out.push_str(&format!(
                " interval=[{}, {}] h={}",
                fmt9(a),
                fmt9(b),
                fmt9(h)
            ));
        }
        out
    }
}

fn read_sample_file(path: &str) -> Result<Vec<f64>, InvalidInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InvalidInput(format!("spec field `path`: {path}: {e}")))?;
    text.split_whitespace()
        .map(|token| {
            token
                .parse::<f64>()
                .map_err(|e| InvalidInput(format!("spec field `path`: bad value {token:?}: {e}")))
        })
        .collect()
}
