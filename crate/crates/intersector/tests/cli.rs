//! End-to-end CLI tests against the real binary: JSON contracts, exit
//! codes, cache transparency, determinism across runs and thread counts.

use serde_json::Value;
use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_intersector"))
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (code, doc)
}

fn write_poly(dir: &std::path::Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path.to_str().unwrap().to_owned()
}

const POLY_ONE_R2: &str = r#"{"rank": 2, "vars": ["a2"], "terms": [{"exps": [0], "coeff": "1"}]}"#;
const POLY_AB2SQ_R2: &str =
    r#"{"rank": 2, "vars": ["a2"], "terms": [{"exps": [2], "coeff": "1"}]}"#;
const SPOLY_A1_R2: &str =
    r#"{"rank": 2, "vars": ["a1", "a2"], "terms": [{"exps": [1, 0], "coeff": "1"}]}"#;

/// Remove timing fields recursively so runs can be compared byte for byte.
fn strip_elapsed(doc: &mut Value) {
    match doc {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            for (_, v) in map.iter_mut() {
                strip_elapsed(v);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

#[test]
fn vi_and_residue_agree_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_poly(dir.path(), "one.json", POLY_ONE_R2);
    let (code, vi) = run(&[
        "--no-cache", "vi", "--r", "2", "--d", "5", "--g", "2", "--N", "4", "--poly", &poly,
        "--numeric",
    ]);
    assert_eq!(code, 0);
    assert_eq!(vi["value"], "24");
    assert_eq!(vi["method"], "vi-exact");
    assert!(vi["fingerprint"].as_str().unwrap().len() == 64);
    assert!(vi["numeric"]["value"].as_str().unwrap().starts_with("24.0000"));

    let (code, res) = run(&[
        "--no-cache", "quot-residue", "--r", "2", "--d", "5", "--g", "2", "--N", "4",
        "--poly", &poly,
    ]);
    assert_eq!(code, 0);
    assert_eq!(res["value"], "24");
    assert_eq!(res["method"], "quot-residue");
}

#[test]
fn moduli_and_witten_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_poly(dir.path(), "one.json", POLY_ONE_R2);
    let (code, doc) = run(&[
        "--no-cache", "moduli", "--r", "2", "--d", "1", "--g", "2", "--poly", &poly,
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["value"], "1/12");

    let (code, doc) = run(&[
        "--no-cache", "witten", "--r", "2", "--d", "1", "--g", "2", "--poly", &poly,
        "--height", "80", "--precision", "128",
    ]);
    assert_eq!(code, 0);
    let v: f64 = doc["value"].as_str().unwrap().parse().unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-3);
    assert!(doc["tail"].is_string() && doc["imag_max"].is_string());
}

#[test]
fn vanish_and_asymptote_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_poly(dir.path(), "ab2sq.json", POLY_AB2SQ_R2);
    let spoly = write_poly(dir.path(), "a1.json", SPOLY_A1_R2);
    let (code, doc) = run(&[
        "--no-cache", "vanish", "--r", "2", "--d", "3", "--g", "2", "--N", "11",
        "--poly", &poly, "--spoly", &spoly,
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["value"], "0");
    assert_eq!(doc["vanishes"], true);

    // sharpness gate: critical degree is an input error
    let critical = write_poly(
        dir.path(),
        "ab2.json",
        r#"{"rank": 2, "vars": ["a2"], "terms": [{"exps": [1], "coeff": "1"}]}"#,
    );
    let (code, doc) = run(&[
        "--no-cache", "vanish", "--r", "2", "--d", "1", "--g", "2", "--N", "6",
        "--poly", &critical,
    ]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("hypothesis"));

    let (code, doc) = run(&[
        "--no-cache", "asymptote", "--r", "2", "--d", "1", "--g", "2", "--poly", &poly,
        "--n-list", "4,6,8,10",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["verdict"], "InterpolationExact");
    assert_eq!(doc["target"], "0");
}

#[test]
fn equivalence_grid_exits_zero() {
    let (code, doc) = run(&["--no-cache", "--json-indent", "0", "equivalence"]);
    assert_eq!(code, 0);
    assert!(doc["compared"].as_u64().unwrap() >= 6);
    assert_eq!(doc["failures"], 0);
}

#[test]
fn cache_transparency_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_poly(dir.path(), "one.json", POLY_ONE_R2);
    let cache_dir = dir.path().join("cache");
    let cache = cache_dir.to_str().unwrap();
    let args = [
        "vi", "--r", "2", "--d", "5", "--g", "2", "--N", "4", "--poly", poly.as_str(),
    ];

    let run_with = |extra: &[&str]| -> Value {
        let out = bin().args(extra).args(args).output().unwrap();
        assert!(out.status.success());
        let mut doc: Value =
            serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        strip_elapsed(&mut doc);
        doc
    };

    let without_cache = run_with(&["--no-cache"]);
    let cold = run_with(&["--cache-dir", cache]);
    let warm = run_with(&["--cache-dir", cache]);
    assert_eq!(without_cache, cold);
    assert_eq!(cold, warm);
    // the cache directory now holds the entry
    assert!(std::fs::read_dir(&cache_dir).unwrap().count() >= 1);

    // thread counts must not affect output
    let t1 = run_with(&["--no-cache", "--threads", "1"]);
    let t4 = run_with(&["--no-cache", "--threads", "4"]);
    assert_eq!(t1, t4);
}

#[test]
fn cache_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_poly(dir.path(), "one.json", POLY_ONE_R2);
    let cache_dir = dir.path().join("envcache");
    let out = bin()
        .env("INTERSECTOR_CACHE", &cache_dir)
        .args(["vi", "--r", "2", "--d", "5", "--g", "2", "--N", "4", "--poly", &poly])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_dir(&cache_dir).unwrap().count() >= 1);
}

#[test]
fn input_errors_exit_two() {
    let (code, doc) = run(&["vi", "--r", "2", "--d", "4", "--g", "2", "--N", "4", "--poly",
        r#"{"rank": 2, "vars": ["a2"], "terms": []}"#]);
    assert_eq!(code, 2, "{doc}");
    assert!(doc["error"].is_string());

    let (code, _) = run(&["nonsense"]);
    assert_eq!(code, 2);

    let (code, doc) = run(&["moduli", "--r", "2", "--d", "1", "--g", "2", "--poly",
        "/does/not/exist.json"]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("cannot read"));
}

#[test]
fn verlinde_both_methods_agree() {
    let (code, doc) = run(&[
        "--no-cache", "verlinde", "--r", "3", "--d", "1", "--g", "2", "--s", "1",
        "--method", "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["value"], "85");
    assert_eq!(doc["mapcount_value"], "85");
    assert_eq!(doc["methods_agree"], true);
}
