//! End-to-end checks of the binary: exit-code contract, report determinism,
//! JSON output, dumps, and spec validation.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let unique = COUNTER.fetch_add(1, Ordering::Relaxed);
    let path = std::env::temp_dir().join(format!(
        "bohl-cli-test-{}-{unique}-{name}",
        std::process::id()
    ));
    std::fs::write(&path, contents).unwrap();
    path
}

fn bohl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn reconstruct_passes_on_a_constant_potential() {
    let spec = scratch_file("const.json", r#"{"kind":"constant","value":2.0,"window":[0,60]}"#);
    let out = bohl(&["discrete", "reconstruct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("check: potential-roundtrip pass"));
    assert!(text.contains("status: pass"));
    // Timing is on stderr, never in the report.
    assert!(!text.contains("elapsed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("elapsed-ms"));
}

#[test]
fn reports_are_byte_for_byte_deterministic() {
    let spec = scratch_file("det.json", r#"{"kind":"constant","value":2.0,"window":[0,60]}"#);
    let first = bohl(&["discrete", "verify", "--spec", spec.to_str().unwrap()]);
    let second = bohl(&["discrete", "verify", "--spec", spec.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(0));
}

#[test]
fn json_reports_parse_and_mirror_the_status() {
    let spec = scratch_file("json.json", r#"{"kind":"constant","value":2.0,"window":[0,60]}"#);
    let out = bohl(&["discrete", "agmon", "--spec", spec.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["command"], "discrete agmon");
    assert_eq!(parsed["status"], "pass");
    assert!(parsed["checks"].as_array().unwrap().len() >= 2);
    assert!(parsed["derived"]
        .as_array()
        .unwrap()
        .iter()
        .any(|d| d["name"] == "agmon-constant"));
}

#[test]
fn tolerance_override_can_force_failures() {
    let spec = scratch_file("tol.json", r#"{"kind":"constant","value":2.0,"window":[0,60]}"#);
    let out = bohl(&[
        "discrete",
        "reconstruct",
        "--spec",
        spec.to_str().unwrap(),
        "--tolerance",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("status: fail"));
}

#[test]
fn hypothesis_violations_exit_two() {
    let spec = scratch_file("neg.json", r#"{"kind":"constant","value":-1.0,"window":[0,59]}"#);
    let out = bohl(&["discrete", "verify", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn sample_length_mismatch_exits_two() {
    let values: Vec<String> = (0..49).map(|_| "1.0".to_string()).collect();
    let spec = scratch_file(
        "short.json",
        &format!(r#"{{"kind":"samples","values":[{}],"window":[0,49]}}"#, values.join(",")),
    );
    let out = bohl(&["discrete", "reconstruct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length 49"));
}

#[test]
fn unknown_kind_exits_two() {
    let spec = scratch_file("kind.json", r#"{"kind":"quartic","window":[0,30]}"#);
    let out = bohl(&["discrete", "reconstruct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_reports_the_finite_phase_tail() {
    let spec = scratch_file(
        "power.json",
        r#"{"kind":"power","scale":-1.0,"exponent":-4,"interval":[1.0,50.0],"h":0.001}"#,
    );
    let out = bohl(&["continuum", "classify", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("derived: classification = finite-phase"), "{text}");
    let phase_line = text
        .lines()
        .find(|l| l.starts_with("derived: total-phase"))
        .unwrap();
    let phase: f64 = phase_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((phase - 0.98).abs() < 0.01, "phase {phase}");
}

#[test]
fn classify_separates_the_constant_sign_cases() {
    let positive = scratch_file(
        "vpos.json",
        r#"{"kind":"constant","value":1.0,"interval":[0.0,1.0],"h":0.001}"#,
    );
    let out = bohl(&["continuum", "classify", "--spec", positive.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("derived: classification = real-nonoscillatory"));

    let negative = scratch_file(
        "vneg.json",
        r#"{"kind":"constant","value":-1.0,"interval":[0.0,20.0],"h":0.001}"#,
    );
    let out = bohl(&["continuum", "classify", "--spec", negative.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("derived: classification = infinite-phase"));
}

#[test]
fn analyze_and_darboux_pass_on_the_linear_potential() {
    let spec = scratch_file(
        "linear.json",
        r#"{"kind":"affine","slope":1.0,"intercept":0.0,"interval":[1.0,5.0],"h":0.001}"#,
    );
    let analyze = bohl(&["continuum", "analyze", "--spec", spec.to_str().unwrap()]);
    assert_eq!(analyze.status.code(), Some(0), "{}", stdout_of(&analyze));
    let darboux = bohl(&["continuum", "darboux", "--spec", spec.to_str().unwrap()]);
    assert_eq!(darboux.status.code(), Some(0));
    assert!(stdout_of(&darboux).contains("check: factorization-plus pass"));
}

#[test]
fn dump_writes_the_requested_columns() {
    let spec = scratch_file("dump.json", r#"{"kind":"constant","value":2.0,"window":[0,60]}"#);
    let dump = std::env::temp_dir().join(format!("bohl-dump-{}.txt", std::process::id()));
    let out = bohl(&[
        "discrete",
        "reconstruct",
        "--spec",
        spec.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# n V V_reconstructed z"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("1 2.00000000e0 "), "{first}");
    // Interior of the trusted window [0, 40].
    assert_eq!(text.lines().count(), 40);
    std::fs::remove_file(dump).ok();
}

#[test]
fn sample_files_load_through_the_path_field() {
    let values: Vec<String> = (0..=59).map(|_| "2.0".to_string()).collect();
    let data = scratch_file("values.txt", &values.join("\n"));
    let spec = scratch_file(
        "path.json",
        &format!(
            r#"{{"kind":"samples","path":"{}","window":[0,59]}}"#,
            data.to_str().unwrap()
        ),
    );
    let out = bohl(&["discrete", "reconstruct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors_exit_two() {
    let out = bohl(&["discrete", "unknown-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bohl(&["discrete", "reconstruct"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sampled_potentials_run_through_the_lattice_pipeline() {
    let values: Vec<String> = (0..=59)
        .map(|n| format!("{:.6}", 2.0 + 0.5 * ((n as f64) * 0.3).sin()))
        .collect();
    let spec = scratch_file(
        "samples.json",
        &format!(r#"{{"kind":"samples","values":[{}],"window":[0,59]}}"#, values.join(",")),
    );
    let out = bohl(&["discrete", "reconstruct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
}
