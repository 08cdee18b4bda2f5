use serde::Serialize;

/// One verification record: `pass` iff `residual <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: String,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivedValue {
    pub name: String,
    pub value: String,
}

/// Machine-readable command report with a fixed field order.
///
/// All numerals go through the same 9-significant-digit formatter, so the
/// rendered output is byte-for-byte deterministic for identical inputs.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub spec: String,
    pub checks: Vec<CheckRecord>,
    pub derived: Vec<DerivedValue>,
    pub status: String,
}

/// Fixed 9-significant-digit scientific format.
pub fn fmt9(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.8e}")
}

pub struct ReportBuilder {
    command: String,
    spec: String,
    checks: Vec<CheckRecord>,
    derived: Vec<DerivedValue>,
    tolerance_override: Option<f64>,
}

impl ReportBuilder {
    pub fn new(command: &str, spec_echo: String, tolerance_override: Option<f64>) -> Self {
        ReportBuilder {
            command: command.to_string(),
            spec: spec_echo,
            checks: Vec::new(),
            derived: Vec::new(),
            tolerance_override,
        }
    }

    /// Records a residual check against its default tolerance (or the
    /// command-line override).
    pub fn check(&mut self, name: &str, residual: f64, default_tolerance: f64) {
        let tolerance = self.tolerance_override.unwrap_or(default_tolerance);
        let passed = residual.is_finite() && residual.abs() <= tolerance;
        self.checks.push(CheckRecord {
            name: name.to_string(),
            status: if passed { "pass" } else { "fail" }.to_string(),
            residual,
            tolerance,
        });
    }

    /// Records a yes/no condition as a 0-or-1 residual against tolerance 0.
    pub fn check_flag(&mut self, name: &str, ok: bool) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            status: if ok { "pass" } else { "fail" }.to_string(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
        });
    }

    pub fn derived(&mut self, name: &str, value: String) {
        self.derived.push(DerivedValue {
            name: name.to_string(),
            value,
        });
    }

    pub fn derived_number(&mut self, name: &str, value: f64) {
        self.derived(name, fmt9(value));
    }

    pub fn finish(self) -> Report {
        let all = self.checks.iter().all(|c| c.status == "pass");
        Report {
            command: self.command,
            spec: self.spec,
            checks: self.checks,
            derived: self.derived,
            status: if all { "pass" } else { "fail" }.to_string(),
        }
    }
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("spec: {}\n", self.spec));
        for check in &self.checks {
            out.push_str(&format!(
                "check: {} {} residual={} tolerance={}\n",
                check.name,
                check.status,
                fmt9(check.residual),
                fmt9(check.tolerance)
            ));
        }
        for derived in &self.derived {
            out.push_str(&format!("derived: {} = {}\n", derived.name, derived.value));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_stable_and_nine_digits() {
        assert_eq!(fmt9(0.0), "0.00000000e0");
        assert_eq!(fmt9(-0.0), "0.00000000e0");
        assert_eq!(fmt9(1.0 / 3.0), "3.33333333e-1");
        assert_eq!(fmt9(-12345.6789), "-1.23456789e4");
    }

    #[test]
    fn report_status_follows_the_checks() {
        let mut b = ReportBuilder::new("discrete reconstruct", "echo".into(), None);
        b.check("tight", 1e-12, 1e-8);
        assert!(b.finish().all_pass());

        let mut b = ReportBuilder::new("discrete reconstruct", "echo".into(), None);
        b.check("loose", 1e-3, 1e-8);
        let report = b.finish();
        assert!(!report.all_pass());
        assert!(report.to_text().contains("check: loose fail"));
    }

    #[test]
    fn tolerance_override_applies_to_every_check() {
        let mut b = ReportBuilder::new("x", "echo".into(), Some(1e-2));
        b.check("a", 1e-3, 1e-8);
        let report = b.finish();
        assert!(report.all_pass());
        assert_eq!(report.checks[0].tolerance, 1e-2);
    }
}
