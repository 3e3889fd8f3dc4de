//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Randomized criteria run at least 100 exact-rational cases each; set
//! `ACCEPTANCE_SEED` to draw a different sample.

use std::process::{Command, ExitCode};

use serde_json::{json, Value};
use tangent_verify::{Check, Config};

fn seed() -> u64 {
    std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20)
}

struct Line {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn property(id: usize, name: &'static str, check: Check, cases: usize) -> Line {
    let config = Config {
        seed: seed(),
        cases,
        max_order: None,
    };
    let outcome = check.run(&config);
    let detail = match &outcome.first_failure {
        None => format!("{}/{} cases, order ≤ {}", outcome.cases, outcome.cases, check.default_order()),
        Some(first) => format!("{} of {} cases failed; {first}", outcome.failures, outcome.cases),
    };
    Line {
        id,
        name,
        passed: outcome.passed(),
        detail,
    }
}

fn tangent(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tangent"))
        .args(args)
        .env_remove("TANGENT_RING")
        .output()
        .map_err(|e| format!("could not run tangent: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`tangent {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("bad json from `tangent {}`: {e}", args.join(" ")))
}

fn spot_values() -> Line {
    let checks: Vec<(&str, Vec<&str>, Value)> = vec![
        (
            "divdiff x^2 at (3, 1, 1, 0)",
            vec!["divdiff", "--expr", "x^2", "--v0", "3", "--v1", "1", "--t", "1", "--s", "0"],
            json!({"w0": "9", "w1": "7"}),
        ),
        (
            "anchor t=1,1 s=0,0",
            vec!["anchor", "--t", "1,1", "--s", "0,0"],
            json!({"dim": 2, "entries": [
                ["1", "0", "0", "0"],
                ["1", "1", "0", "0"],
                ["1", "0", "1", "0"],
                ["1", "1", "1", "1"],
            ]}),
        ),
        (
            "anchor inverse t=1,1 s=0,0",
            vec!["anchor", "--t", "1,1", "--s", "0,0", "--inverse"],
            json!({"dim": 2, "entries": [
                ["1", "0", "0", "0"],
                ["-1", "1", "0", "0"],
                ["-1", "0", "1", "0"],
                ["1", "-1", "-1", "1"],
            ]}),
        ),
        (
            "derive x^3 at 2",
            vec!["derive", "--expr", "x^3", "--var", "x", "--at", "x=2"],
            json!({"value": "12"}),
        ),
    ];
    let mut failures = Vec::new();
    for (what, args, expected) in &checks {
        match tangent(args) {
            Ok(got) if &got == expected => {}
            Ok(got) => failures.push(format!("{what}: got {got}, expected {expected}")),
            Err(e) => failures.push(format!("{what}: {e}")),
        }
    }
    Line {
        id: 11,
        name: "concrete spot values",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{}/{} values", checks.len(), checks.len())
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    println!("acceptance suite, seed {}", seed());
    let lines = vec![
        property(1, "anchor round trip", Check::AnchorRoundTrip, 120),
        property(2, "anchor morphism", Check::AnchorMorphism, 100),
        property(3, "multiplication oracle", Check::MulOracle, 100),
        property(4, "kronecker closed forms", Check::KronClosedForms, 100),
        property(5, "adjugate identity", Check::AdjugateIdentity, 100),
        property(6, "slope path agreement", Check::SlopePaths, 120),
        // 50 labels each of regular, singular and mixed type.
        property(7, "chain rule", Check::ChainRule, 150),
        property(8, "derivative correctness", Check::Derivatives, 100),
        property(9, "first-order structure", Check::Structure, 200),
        property(10, "coefficient-weight sanity", Check::SlopeWeights, 100),
        spot_values(),
    ];
    let mut all = true;
    for line in &lines {
        let status = if line.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {} — {}", line.id, line.name, line.detail);
        all &= line.passed;
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("acceptance: {passed}/{} criteria passed", lines.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
