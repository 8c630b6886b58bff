use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn herzlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_herzlab"))
        .current_dir(dir)
        .env_remove("HERZLAB_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = herzlab(dir, args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    herzlab(dir, args).status.code().expect("exit code")
}

fn workdir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("single.jsonl"), "{\"dim\":1}\n{\"v\":0,\"m\":[1],\"val\":1.0}\n").unwrap();
    dir
}

fn sample(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["sample", "--grid", name];
    args.extend_from_slice(extra);
    ok_json(dir, &args);
}

#[test]
fn single_entry_sequence_norm() {
    let dir = workdir();
    let rep = ok_json(dir.path(), &["norm", "--space", "seq", "--alpha", "0.5", "--p", "2", "--q", "3", "--s", "7", "--input", "single.jsonl"]);
    assert_eq!(rep["schema"], "herzlab-report/1");
    assert_eq!(rep["config"]["seed"], 0);
    let x = rep["result"]["norm"].as_f64().unwrap();
    assert!((x - 2f64.sqrt()).abs() < 1e-12, "{x}");
    assert_eq!(rep["window"]["v_max"], 0);
}

#[test]
fn decimal_parameters_are_echoed_verbatim() {
    let dir = workdir();
    let rep = ok_json(dir.path(), &["norm", "--space", "seq", "--alpha", "0.50", "--p", "2.0", "--q", "3e0", "--input", "single.jsonl"]);
    let echo = &rep["config"]["command"]["norm"];
    assert_eq!(echo["alpha"], "0.50");
    assert_eq!(echo["p"], "2.0");
    assert_eq!(echo["q"], "3e0");
}

#[test]
fn indicator_herz_norm_is_its_integral() {
    let dir = workdir();
    sample(dir.path(), "ind.grid", &["--shape", "indicator", "--level", "8", "--half-extent", "2"]);
    let rep = ok_json(dir.path(), &["norm", "--space", "herz", "--alpha", "0", "--p", "1", "--q", "1", "--input", "ind.grid"]);
    let x = rep["result"]["norm"].as_f64().unwrap();
    assert!((x - 1.0).abs() < 1e-12, "{x}");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = workdir();
    std::fs::write(dir.path().join("bad.jsonl"), "{\"dim\":1}\n{\"v\":0,\"m\":[1,2],\"val\":1.0}\n").unwrap();
    std::fs::write(dir.path().join("junk.jsonl"), "not json\n").unwrap();
    let base = ["norm", "--space", "seq", "--alpha", "0", "--p", "2", "--q", "2", "--input"];
    for file in ["bad.jsonl", "junk.jsonl", "missing.jsonl"] {
        let mut args = base.to_vec();
        args.push(file);
        assert_eq!(code(dir.path(), &args), 2, "{file}");
    }
    assert_eq!(code(dir.path(), &["norm", "--space", "seq", "--alpha", "x", "--p", "2", "--q", "2", "--input", "single.jsonl"]), 2);
    assert_eq!(code(dir.path(), &["norm", "--space", "seq"]), 2);
}

#[test]
fn parameter_errors_exit_with_three() {
    let dir = workdir();
    let seq = |alpha: &str, p: &str| {
        code(dir.path(), &["norm", "--space", "seq", "--alpha", alpha, "--p", p, "--q", "2", "--input", "single.jsonl"])
    };
    assert_eq!(seq("-1", "2"), 3);
    assert_eq!(seq("0", "0"), 3);
    assert_eq!(
        code(dir.path(), &["norm", "--space", "seq", "--alpha", "0", "--p", "2", "--q", "2", "--v-max", "500", "--input", "single.jsonl"]),
        3
    );
}

#[test]
fn validate_reports_outer_exponent_failure() {
    let dir = workdir();
    let rep = ok_json(
        dir.path(),
        &["embed", "validate", "--alpha1", "0", "--p", "1", "--s", "2", "--s1", "0", "--alpha2", "0", "--r", "2", "--q", "2"],
    );
    assert_eq!(rep["result"]["verdict"], "inadmissible");
    assert_eq!(rep["result"]["reasons"], serde_json::json!(["outer exponents"]));
    assert_eq!(rep["result"]["s2_from_balance"], true);
    assert_eq!(rep["case"]["raw"]["r"], 2.0);
}

#[test]
fn presets_are_all_admissible() {
    let dir = workdir();
    let rep = ok_json(dir.path(), &["embed", "presets"]);
    let list = rep["result"]["presets"].as_array().unwrap();
    assert!(list.len() >= 7);
    for p in list {
        assert_eq!(p["case"]["verdict"]["status"], "admissible", "{}", p["regime"]);
    }
    let idx = (list.len() - 1).to_string();
    let v = ok_json(dir.path(), &["embed", "validate", "--preset", &idx]);
    assert_eq!(v["result"]["verdict"], "admissible");
    assert_eq!(code(dir.path(), &["embed", "validate", "--preset", "999"]), 2);
}

#[test]
fn counterexample_table() {
    let dir = workdir();
    let out = herzlab(dir.path(), &["embed", "counterexample", "--N-list", "4,8,16,32", "--preset", "0", "-o", "ce.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("ce.csv")).unwrap();
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let head: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(head, ["N", "target_norm^p", "source_norm^r", "ratio"]);
    let rows: Vec<Vec<f64>> =
        rd.records().map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    // α₁ = 0 for this preset, so the target norm to the power p is N itself
    for r in &rows {
        assert!((r[1] / r[0] - 1.0).abs() < 1e-9, "{r:?}");
    }
    assert_eq!(code(dir.path(), &["replay", "--report", "ce.csv"]), 0);
}

#[test]
fn search_gate_and_replay() {
    let dir = workdir();
    let bad = ["embed", "search", "--alpha1", "0", "--p", "1", "--s", "2", "--s1", "0", "--alpha2", "0", "--r", "2", "--q", "2"];
    assert_eq!(code(dir.path(), &bad), 3);
    let mut forced = bad.to_vec();
    forced.extend(["--force", "--counterexample-seeded", "--v-max", "4"]);
    let rep = ok_json(dir.path(), &forced);
    assert!(rep["result"]["best_ratio"].as_f64().unwrap() > 1.0);

    let run = |threads: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_herzlab"))
            .current_dir(dir.path())
            .env("HERZLAB_SEED", "17")
            .args(["--threads", threads, "embed", "search", "--preset", "2", "--trials", "40", "--restarts", "12", "-o", out])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let a = run("1", "a.json");
    let b = run("3", "b.json");
    assert_eq!(a.replace("a.json", "b.json"), b);
    let rep: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(rep["config"]["seed"], 17);
    assert!(rep["case"]["theta_rule"].is_string());
    assert_eq!(code(dir.path(), &["replay", "--report", "a.json"]), 0);

    let tampered = a.replace("\"best_ratio\": ", "\"best_ratio\": 1");
    std::fs::write(dir.path().join("t.json"), tampered).unwrap();
    assert_eq!(code(dir.path(), &["replay", "--report", "t.json"]), 4);
    std::fs::write(dir.path().join("x.json"), "{}").unwrap();
    assert_eq!(code(dir.path(), &["replay", "--report", "x.json"]), 2);
}

#[test]
fn transform_roundtrip_and_errors() {
    let dir = workdir();
    sample(dir.path(), "g.grid", &["--shape", "gaussian", "--level", "12", "--half-extent", "16", "--width", "0.8", "--center", "0.3"]);
    let rep = ok_json(dir.path(), &["transform", "roundtrip", "--input", "g.grid", "--top", "5"]);
    assert!(rep["result"]["relative_l2_error"].as_f64().unwrap() <= 1e-6);
    assert!(rep["result"]["calderon_residual"].as_f64().unwrap() <= 1e-12);

    sample(dir.path(), "z.grid", &["--shape", "indicator", "--level", "12", "--half-extent", "16", "--lo", "1", "--hi", "1"]);
    let rep = ok_json(dir.path(), &["transform", "roundtrip", "--input", "z.grid"]);
    assert_eq!(rep["result"]["relative_l2_error"], 0.0);

    assert_eq!(code(dir.path(), &["transform", "roundtrip", "--input", "g.grid", "--top", "40"]), 3);
    sample(dir.path(), "odd.grid", &["--shape", "gaussian", "--level", "8", "--half-extent", "3"]);
    assert_eq!(code(dir.path(), &["transform", "roundtrip", "--input", "odd.grid"]), 3);
}

#[test]
fn decompose_writes_a_field_and_replays_without_writing() {
    let dir = workdir();
    sample(dir.path(), "g.grid", &["--shape", "gaussian", "--level", "10", "--half-extent", "8"]);
    let out = herzlab(dir.path(), &["transform", "decompose", "--input", "g.grid", "--top", "3", "--coeffs", "c.jsonl", "-o", "d.json"]);
    assert_eq!(out.status.code(), Some(0));
    let coeffs = dir.path().join("c.jsonl");
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    let lines = std::fs::read_to_string(&coeffs).unwrap().lines().count();
    assert_eq!(lines as u64, rep["result"]["entries"].as_u64().unwrap() + 1);

    // the field is a valid norm input
    let n = ok_json(dir.path(), &["norm", "--space", "seq", "--alpha", "0", "--p", "2", "--q", "2", "--input", "c.jsonl"]);
    assert!(n["result"]["norm"].as_f64().unwrap() > 0.0);

    std::fs::remove_file(&coeffs).unwrap();
    assert_eq!(code(dir.path(), &["replay", "--report", "d.json"]), 0);
    assert!(!coeffs.exists());
}

#[test]
fn csv_format_flattens_scalar_results() {
    let dir = workdir();
    let out = herzlab(dir.path(), &["--format", "csv", "norm", "--space", "seq", "--alpha", "0.5", "--p", "2", "--q", "3", "--input", "single.jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# {\"schema\":\"herzlab-report/1\""));
    assert!(text.lines().any(|l| l.starts_with("norm,1.414213562373095")), "{text}");
    std::fs::write(dir.path().join("n.csv"), &text).unwrap();
    assert_eq!(code(dir.path(), &["replay", "--report", "n.csv"]), 0);
}

#[test]
fn hardy_sums_of_a_file() {
    let dir = workdir();
    std::fs::write(dir.path().join("eps.txt"), "# spike\n0\n1\n\n0\n").unwrap();
    let rep = ok_json(dir.path(), &["hardy", "--input", "eps.txt", "--a", "0.5", "--q", "1"]);
    assert_eq!(rep["result"]["length"], 3);
    assert!((rep["result"]["report"]["constant"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(rep["result"]["within_bound"], true);
    assert_eq!(code(dir.path(), &["hardy", "--input", "eps.txt", "--a", "1.5", "--q", "1"]), 3);
}
