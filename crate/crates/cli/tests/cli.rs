use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use ortho_diffeq_core::diffop::coefficients::coeff_jacobi_c;
use ortho_diffeq_core::diffop::pencils::sobolev_alpha0_coefficient;
use ortho_diffeq_core::scalar::int;
use ortho_diffeq_core::{BlockKey, Poly};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ortho-diffeq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stdout));
    })
}

fn item<'a>(doc: &'a Value, name: &str, block: Option<&str>) -> &'a Value {
    doc["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|it| it["name"] == name && block.is_none_or(|b| it["block"] == b))
        .unwrap_or_else(|| panic!("no item {name} {block:?}"))
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "laguerre-point-mass", "--alpha", "0", "--n", "0..20"][..],
        &["verify", "sobolev-laguerre-alpha0", "--n", "0..20"],
        &["verify", "jacobi-symmetric-mass", "--alpha", "1/2", "--n", "0..15"],
        &["verify", "jacobi-parity", "--alpha", "2"],
        &["verify", "laguerre-annihilator", "--alpha", "1/2"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let doc = json(&o);
        assert_eq!(doc["status"], "pass");
        assert_eq!(doc["command"], "verify");
        assert!(doc["failures"].as_array().unwrap().is_empty());
        assert!(doc["items"].as_array().unwrap().iter().all(|it| it["residual"] == "0"));
    }
}

#[test]
fn verify_failure_lists_residuals() {
    let o = run(&["verify", "laguerre-annihilator", "--alpha", "0", "--n", "0..2"]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    assert_eq!(doc["status"], "fail");
    assert_eq!(doc["failures"], serde_json::json!(["residual n=0 [1]", "residual n=0 [M]"]));
}

#[test]
fn laguerre_search_recovers_closed_form() {
    let o = run(&["search", "laguerre-m", "--alpha", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&o);
    assert_eq!(item(&doc, "nullspace-dim", None)["actual"], "0");
    assert_eq!(item(&doc, "holdout", None)["actual"], "pass");
    for (i, want) in [(1, "-x"), (2, "3*x - 1/2*x^2"), (3, "-2*x + x^2"), (4, "-1/2*x^2")] {
        assert_eq!(item(&doc, &format!("c_{i}"), Some("M"))["actual"], want);
    }
}

#[test]
fn jacobi_search_reaches_formal_order() {
    let o = run(&["search", "jacobi-symmetric", "--alpha", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let doc = json(&o);
    assert_eq!(item(&doc, "nullspace-dim", None)["actual"], "0");
    let c8 = Poly::parse(item(&doc, "c_8", Some("M"))["actual"].as_str().unwrap()).unwrap();
    assert_eq!(c8, coeff_jacobi_c(&int(2), 8, 0));
    assert!(!c8.is_zero());
}

#[test]
fn sobolev_search_contains_printed_operator() {
    let o = run(&["search", "sobolev", "--alpha", "0"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(item(&doc, "nullspace-dim", None)["actual"], "0");
    for (key, label, top) in [(BlockKey::M, "M", 4), (BlockKey::N, "N", 8), (BlockKey::MN, "M*N", 10)] {
        for i in 1..=top {
            let got = item(&doc, &format!("c_{i}"), Some(label))["actual"].as_str().unwrap();
            assert_eq!(Poly::parse(got).unwrap(), sobolev_alpha0_coefficient(key, i, 0));
        }
    }
}

#[test]
fn search_statuses_are_distinguished() {
    let o = run(&["search", "laguerre-m", "--alpha", "0", "--order", "3", "--n-holdout", "none"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["status"], "inconsistent");

    let o = run(&[
        "search",
        "jacobi-symmetric",
        "--alpha",
        "0",
        "--order",
        "4",
        "--structure",
        "monomial",
        "--normalize",
        "false",
        "--n-train",
        "0..4",
    ]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    assert_eq!(doc["status"], "under-determined");
    assert_ne!(item(&doc, "nullspace-dim", None)["actual"], "0");
}

#[test]
fn identities_exact_and_numeric() {
    let o = run(&["identities", "laguerre-a-sum", "--alpha", "3"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(item(&doc, "sum", None)["actual"], "0");
    assert_eq!(item(&doc, "weighted-sum", None)["actual"], "x");

    let o = run(&["identities", "gauss-unit", "--alpha", "1/2", "--imax", "30"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["items"].as_array().unwrap().len(), 60);

    let o = run(&["identities", "jacobi-cstar-sum", "--alpha", "1/2", "--sign", "-1"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn slow_series_reported_as_non_convergent() {
    // 200 terms of a series converging like 1/N cannot reach 1e-8; this must
    // come back as non-convergence (exit 3), not as a mismatch.
    let o = run(&["identities", "laguerre-a-sum", "--alpha", "1/2", "--x", "1", "--terms", "200", "--tol", "1e-8"]);
    assert_eq!(code(&o), 3);
    let doc = json(&o);
    assert_eq!(doc["status"], "non-convergent");
    assert_eq!(doc["params"]["tol"], "1e-8");
}

#[test]
fn emit_latex_matches_printed_mass_block() {
    let o = run(&["emit", "laguerre-a", "--alpha", "0", "--imax", "4", "--format", "latex"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for i in 1..=4 {
        let line = format!("a_{{{i}}}(x) &= {}", sobolev_alpha0_coefficient(BlockKey::M, i, 0).to_latex());
        assert!(text.contains(&line), "missing {line:?} in\n{text}");
    }
    assert!(text.starts_with("\\begin{aligned}"));
}

#[test]
fn emit_json_round_trips() {
    let o = run(&["emit", "jacobi-c", "--alpha", "0", "--imax", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["c_1"], "0");
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["c_1", "c_2", "c_3", "c_4"]);
    for i in 1..=4 {
        let p = Poly::parse(doc[format!("c_{i}")].as_str().unwrap()).unwrap();
        assert_eq!(p, coeff_jacobi_c(&int(0), i, 0));
    }
}

#[test]
fn emit_to_unwritable_path_fails() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().to_str().unwrap();
    let o = run(&["emit", "jacobi-c", "--imax", "4", "--output", target]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("writing"));
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&["search", "laguerre-m", "--alpha", "1", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_replaces_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "command = \"verify\"\ntarget = \"laguerre-point-mass\"\nalpha = \"1/2\"\nn = \"0..6\"\n",
    );
    let from_file = run(&["--config", &cfg]);
    let from_flags = run(&["verify", "laguerre-point-mass", "--alpha", "1/2", "--n", "0..6"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);

    let overridden = run(&["--config", &cfg, "--n", "0..2"]);
    assert_eq!(json(&overridden)["params"]["n"], "0..2");
}

#[test]
fn custom_search_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "search.toml",
        r#"
command = "search"
target = "custom"

[problem]
fixed = "classical-laguerre"
n-train = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
n-holdout = [11, 12]

[problem.family]
kind = "laguerre-m"
alpha = "1"
beta = "0"

[[problem.unknowns]]
key = { m = 1, n = 0 }
max-order = 6
structure = "monomial"
order-zero = "per-n"
"#,
    );
    let o = run(&["--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(item(&json(&o), "nullspace-dim", None)["actual"], "0");
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "laguerre-point-mass", "--alpha", "0.5"])), 2);
    assert_eq!(code(&run(&["verify", "no-such-target"])), 2);
    assert_eq!(code(&run(&["verify", "laguerre-point-mass", "--alpha", "-1"])), 2);
    assert_eq!(code(&run(&["verify", "laguerre-point-mass", "--n", "5..1"])), 2);
    assert_eq!(code(&run(&["identities", "jacobi-cstar-sum", "--tol", "0"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "command = \"verify\"\nalpah = \"1\"\n");
    assert_eq!(code(&run(&["--config", &cfg])), 2);
}
