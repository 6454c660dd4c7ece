//! Runs the twelve acceptance criteria and prints one line per criterion.
//! Criterion 12 also runs the `fhawkes validate --smoke` binary twice and
//! compares the two reports with wall times removed.

use std::process::{Command, ExitCode};

use fhawkes_core::harness::{run_validation, ValidationConfig, ValidationReport};

fn binary_report(dir: &std::path::Path, name: &str) -> Result<ValidationReport, String> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_fhawkes"))
        .args(["validate", "--smoke", "--out"])
        .arg(&out)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !matches!(status.code(), Some(0) | Some(3)) {
        return Err(format!("validate exited with {status}"));
    }
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let report = run_validation(&ValidationConfig::default());
    let dir = tempfile::tempdir().expect("temporary directory");
    let repeat = binary_report(dir.path(), "a.json").and_then(|a| {
        let b = binary_report(dir.path(), "b.json")?;
        Ok(a.without_timings() == b.without_timings())
    });
    let mut all = true;
    for c in &report.criteria {
        let mut pass = c.pass;
        let mut note = String::new();
        if c.id == 12 {
            match &repeat {
                Ok(same) => {
                    pass &= *same;
                    note = format!("; repeated CLI reports identical: {same}");
                }
                Err(e) => {
                    pass = false;
                    note = format!("; CLI run failed: {e}");
                }
            }
        }
        all &= pass;
        let measured = c.measured.map_or("n/a".into(), |m| format!("{m:.4e}"));
        println!(
            "criterion {:>2} {}: {} (measured {measured}, bound {:e}, {:.2}s of {}s){note}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            c.bound,
            c.wall_time_s,
            c.runtime_limit_s
        );
        for d in c.details.iter().filter(|d| !d.pass) {
            println!("    failed check: {} = {:?} (bound {} {})", d.name, d.measured, d.relation, d.bound);
        }
        if let Some(e) = &c.error {
            println!("    error: {e}");
        }
    }
    if all {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
