//! Command-line interface: every engine behind one binary, JSON in and out.
//!
//! Exit codes: 0 on success, 1 on verification failure (a cross-check that
//! should hold did not, or an internal certification failed), 2 on input
//! errors (bad arguments, malformed polynomial files, violated
//! preconditions).

use super::cache::{entry_now, Cache};
use super::{asymptotic_extract, equivalence_report, vanishing_check, verlinde_mapcount,
            GridSpec, SuiteError};
use crate::exactnum::Rational;
use crate::polyseries::{AClassPoly, PolyFile, SPoly};
use crate::quotvi::{QuotError, QuotProblem};
use crate::residueengine::{moduli_pairing, quot_residue, verlinde_chi, ResidueError};
use crate::wittenreps::witten_sum;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "intersector",
    about = "Exact intersection numbers on Quot schemes and moduli of bundles",
    disable_help_subcommand = true
)]
struct Cli {
    /// Cache directory (overrides INTERSECTOR_CACHE)
    #[arg(long, global = true)]
    cache_dir: Option<std::path::PathBuf>,
    /// Disable the result cache entirely
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for parallel enumeration (0 = automatic)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Spaces of JSON indentation (0 = compact)
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Quot intersection by the root-of-unity sum
    Vi(ProblemArgs),
    /// Evaluate a Quot intersection by the iterated residue
    QuotResidue(QuotResidueArgs),
    /// Pairing of exp(fbar_2) with P on the moduli space of bundles
    Moduli(ModuliArgs),
    /// Verlinde number chi(L^s), by residue and/or map count
    Verlinde(VerlindeArgs),
    /// Witten representation sum (numeric cross-check)
    Witten(WittenArgs),
    /// Extract the leading N-coefficient of a Quot family
    Asymptote(AsymptoteArgs),
    /// Verify a vanishing instance
    Vanish(VanishArgs),
    /// Cross-method equivalence grid
    Equivalence(EquivalenceArgs),
    /// Run the acceptance criteria
    Selftest,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long = "N", visible_alias = "n")]
    n: u32,
    /// Polynomial in abar classes: a JSON file path, or inline JSON
    #[arg(long)]
    poly: String,
    /// Optional factor in plain a classes: JSON file path or inline JSON
    #[arg(long)]
    spoly: Option<String>,
    /// Also evaluate in complex floating arithmetic
    #[arg(long)]
    numeric: bool,
    /// Mantissa bits for --numeric
    #[arg(long, default_value_t = 128)]
    precision: u32,
}

#[derive(Args, Debug)]
struct QuotResidueArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long = "N", visible_alias = "n")]
    n: u32,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    spoly: Option<String>,
}

#[derive(Args, Debug)]
struct ModuliArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    poly: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerlindeMethod {
    Residue,
    Mapcount,
    Both,
}

#[derive(Args, Debug)]
struct VerlindeArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    s: u32,
    #[arg(long, value_enum, default_value_t = VerlindeMethod::Residue)]
    method: VerlindeMethod,
}

#[derive(Args, Debug)]
struct WittenArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    height: u32,
    #[arg(long, default_value_t = 128)]
    precision: u32,
}

#[derive(Args, Debug)]
struct AsymptoteArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    poly: String,
    /// Comma-separated N list; defaults to the admissible progression up to 20
    #[arg(long)]
    n_list: Option<String>,
}

#[derive(Args, Debug)]
struct VanishArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    g: u32,
    #[arg(long = "N", visible_alias = "n")]
    n: u32,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    spoly: Option<String>,
}

#[derive(Args, Debug)]
struct EquivalenceArgs {
    /// Extra random polynomials per rank
    #[arg(long, default_value_t = 0)]
    random_polys: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Input errors carry their own JSON rendering.
struct InputError(Value);

impl InputError {
    fn new(msg: impl Into<String>) -> Self {
        InputError(json!({ "error": msg.into() }))
    }
}

impl From<QuotError> for InputError {
    fn from(e: QuotError) -> Self {
        InputError::new(e.to_string())
    }
}

fn load_poly_source(arg: &str) -> Result<PolyFile, InputError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| InputError::new(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text)
        .map_err(|e| InputError::new(format!("malformed polynomial JSON: {e}")))
}

fn load_aclass(arg: &str) -> Result<AClassPoly, InputError> {
    AClassPoly::from_file(&load_poly_source(arg)?).map_err(InputError::new)
}

fn load_spoly(arg: &str) -> Result<SPoly, InputError> {
    SPoly::from_file(&load_poly_source(arg)?).map_err(InputError::new)
}

fn hex_digest(data: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data.as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the CLI on the given arguments, returning (exit code, stdout text).
pub fn run_cli<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help and version requests are not errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let doc = json!({ "error": e.to_string() });
            return (2, serde_json::to_string_pretty(&doc).unwrap());
        }
    };
    if cli.threads > 0 {
        // a global pool can only be installed once per process; exact
        // arithmetic keeps results identical regardless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let cache = Cache::resolve(cli.cache_dir.as_deref(), cli.no_cache);
    let (code, doc) = dispatch(&cli.command, &cache);
    (code, render(&doc, cli.json_indent))
}

fn render(doc: &Value, indent: usize) -> String {
    if indent == 0 {
        serde_json::to_string(doc).unwrap()
    } else {
        let spaces = vec![b' '; indent];
        let mut out = Vec::new();
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&spaces);
        let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
        serde::Serialize::serialize(doc, &mut ser).unwrap();
        String::from_utf8(out).unwrap()
    }
}

fn dispatch(cmd: &Command, cache: &Cache) -> (i32, Value) {
    match run_command(cmd, cache) {
        Ok(outcome) => outcome,
        Err(e) => (2, e.0),
    }
}

/// Exact-value commands go through the cache; the stored value string must
/// be identical to a recomputation, so a hit only skips work.
fn cached_exact(
    cache: &Cache,
    fingerprint: &str,
    method: &str,
    compute: impl FnOnce() -> Result<Rational, (i32, Value)>,
) -> Result<(Value, u64), (i32, Value)> {
    let start = Instant::now();
    if let Some(entry) = cache.get(fingerprint) {
        return Ok((
            Value::String(entry.value),
            start.elapsed().as_millis() as u64,
        ));
    }
    let value = compute()?;
    let rendered = value.to_string();
    cache.put(&entry_now(fingerprint, &rendered, method));
    Ok((Value::String(rendered), start.elapsed().as_millis() as u64))
}

fn residue_error_outcome(e: ResidueError) -> (i32, Value) {
    let code = match &e {
        ResidueError::TruncationUnstable { .. } | ResidueError::NonIntegerResult(_) => 1,
        _ => 2,
    };
    (code, json!({ "error": e.to_string() }))
}

fn run_command(cmd: &Command, cache: &Cache) -> Result<(i32, Value), InputError> {
    match cmd {
        Command::Vi(args) => {
            let p = load_aclass(&args.poly)?;
            let s = args.spoly.as_deref().map(load_spoly).transpose()?;
            let problem = QuotProblem::build(args.r, args.d, args.g, args.n, p, s)?;
            let fp = problem.fingerprint("vi-exact");
            let (value, elapsed) = match cached_exact(cache, &fp, "vi-exact", || {
                problem
                    .vi_evaluate()
                    .map(|r| r.value)
                    .map_err(|e| (1, json!({ "error": e.to_string() })))
            }) {
                Ok(v) => v,
                Err(out) => return Ok(out),
            };
            let mut doc = json!({
                "value": value,
                "method": "vi-exact",
                "fingerprint": fp,
                "elapsed_ms": elapsed,
            });
            if problem.n_equals_r() {
                doc["warnings"] =
                    json!(["N equals the rank: the value is a purely virtual number"]);
            }
            if args.numeric {
                let numeric = problem.vi_evaluate_numeric(args.precision);
                doc["numeric"] = json!({
                    "value": numeric.value.to_decimal_string(40),
                    "imag_max": numeric.imag_max.to_decimal_string(40),
                    "precision": numeric.precision,
                    "method": "vi-numeric",
                });
            }
            Ok((0, doc))
        }
        Command::QuotResidue(args) => {
            let p = load_aclass(&args.poly)?;
            let s = args.spoly.as_deref().map(load_spoly).transpose()?;
            let problem = QuotProblem::build(args.r, args.d, args.g, args.n, p, s)?;
            let fp = problem.fingerprint("quot-residue");
            let (value, elapsed) = match cached_exact(cache, &fp, "quot-residue", || {
                quot_residue(&problem)
                    .map(|r| r.value)
                    .map_err(residue_error_outcome)
            }) {
                Ok(v) => v,
                Err(out) => return Ok(out),
            };
            Ok((
                0,
                json!({
                    "value": value,
                    "method": "quot-residue",
                    "fingerprint": fp,
                    "elapsed_ms": elapsed,
                }),
            ))
        }
        Command::Moduli(args) => {
            let p = load_aclass(&args.poly)?;
            let fp = hex_digest(&format!(
                "moduli|r={}|d={}|g={}|P={}",
                args.r,
                args.d,
                args.g,
                p.canonical_string()
            ));
            let (value, elapsed) = match cached_exact(cache, &fp, "moduli-residue", || {
                moduli_pairing(args.r, args.d, args.g, &p).map_err(residue_error_outcome)
            }) {
                Ok(v) => v,
                Err(out) => return Ok(out),
            };
            Ok((
                0,
                json!({
                    "value": value,
                    "method": "moduli-residue",
                    "fingerprint": fp,
                    "elapsed_ms": elapsed,
                }),
            ))
        }
        Command::Verlinde(args) => {
            let start = Instant::now();
            let mut doc = json!({
                "method": match args.method {
                    VerlindeMethod::Residue => "verlinde-residue",
                    VerlindeMethod::Mapcount => "verlinde-mapcount",
                    VerlindeMethod::Both => "verlinde-both",
                },
            });
            let mut residue_val = None;
            let mut mapcount_val = None;
            if matches!(args.method, VerlindeMethod::Residue | VerlindeMethod::Both) {
                let fp = hex_digest(&format!(
                    "verlinde-residue|r={}|d={}|g={}|s={}",
                    args.r, args.d, args.g, args.s
                ));
                let (v, _) = match cached_exact(cache, &fp, "verlinde-residue", || {
                    verlinde_chi(args.r, args.d, args.g, args.s).map_err(residue_error_outcome)
                }) {
                    Ok(v) => v,
                    Err(out) => return Ok(out),
                };
                doc["fingerprint"] = Value::String(fp);
                residue_val = Some(v);
            }
            if matches!(args.method, VerlindeMethod::Mapcount | VerlindeMethod::Both) {
                let fp = hex_digest(&format!(
                    "verlinde-mapcount|r={}|d={}|g={}|s={}",
                    args.r, args.d, args.g, args.s
                ));
                let (v, _) = match cached_exact(cache, &fp, "verlinde-mapcount", || {
                    verlinde_mapcount(args.r, args.d, args.g, args.s)
                        .map_err(|e| suite_error_outcome(&e))
                }) {
                    Ok(v) => v,
                    Err(out) => return Ok(out),
                };
                if doc.get("fingerprint").is_none() {
                    doc["fingerprint"] = Value::String(fp);
                }
                mapcount_val = Some(v);
            }
            let (value, agree) = match (&residue_val, &mapcount_val) {
                (Some(a), Some(b)) => (a.clone(), Some(a == b)),
                (Some(a), None) => (a.clone(), None),
                (None, Some(b)) => (b.clone(), None),
                (None, None) => unreachable!(),
            };
            doc["value"] = value;
            if let Some(b) = mapcount_val {
                doc["mapcount_value"] = b;
            }
            doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            if let Some(eq) = agree {
                doc["methods_agree"] = json!(eq);
                if !eq {
                    return Ok((1, doc));
                }
            }
            Ok((0, doc))
        }
        Command::Witten(args) => {
            let p = load_aclass(&args.poly)?;
            let start = Instant::now();
            match witten_sum(args.r, args.d, args.g, &p, args.height, args.precision) {
                Ok(s) => Ok((
                    0,
                    json!({
                        "value": s.value.to_decimal_string(40),
                        "tail": s.tail.to_decimal_string(40),
                        "imag_max": s.imag_max.to_decimal_string(40),
                        "decay_exponent": s.decay_exponent,
                        "height": s.height,
                        "precision": s.precision,
                        "elapsed_ms": start.elapsed().as_millis() as u64,
                    }),
                )),
                Err(e) => Err(InputError::new(e.to_string())),
            }
        }
        Command::Asymptote(args) => {
            let p = load_aclass(&args.poly)?;
            let n_list: Vec<u32> = match &args.n_list {
                Some(s) => s
                    .split(',')
                    .map(|x| x.trim().parse::<u32>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| InputError::new(format!("bad N list: {e}")))?,
                None => default_progression(args.r, args.d, &p, 20),
            };
            let start = Instant::now();
            match asymptotic_extract(args.r, args.d, args.g, &p, &n_list) {
                Ok(report) => {
                    let passed = matches!(
                        report.verdict,
                        super::AsymptoticVerdict::InterpolationExact
                            | super::AsymptoticVerdict::RatioConverging
                    );
                    let mut doc = serde_json::to_value(&report).unwrap();
                    doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
                    Ok((if passed { 0 } else { 1 }, doc))
                }
                Err(e) => Err(InputError::new(e.to_string())),
            }
        }
        Command::Vanish(args) => {
            let p = load_aclass(&args.poly)?;
            let s = match &args.spoly {
                Some(sp) => load_spoly(sp)?,
                None => SPoly::one(args.r),
            };
            let start = Instant::now();
            match vanishing_check(args.r, args.d, args.g, args.n, &p, &s) {
                Ok(report) => {
                    let mut doc = serde_json::to_value(&report).unwrap();
                    doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
                    Ok((if report.vanishes { 0 } else { 1 }, doc))
                }
                Err(e @ SuiteError::HypothesisViolated(_)) => {
                    Err(InputError::new(e.to_string()))
                }
                Err(e) => Ok(suite_error_outcome(&e)),
            }
        }
        Command::Equivalence(args) => {
            let start = Instant::now();
            let mut grids = GridSpec::default_grid();
            if args.random_polys > 0 {
                for spec in &mut grids {
                    spec.random_polys = args.random_polys;
                    spec.seed = args.seed;
                }
            }
            let report = equivalence_report(&grids);
            let code = if report.all_equal() { 0 } else { 1 };
            let mut doc = serde_json::to_value(&report).unwrap();
            doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            Ok((code, doc))
        }
        Command::Selftest => {
            let results = super::selftest::run_criteria();
            let all = results.iter().all(|c| c.passed);
            let doc = json!({
                "criteria": results.iter().map(|c| json!({
                    "id": c.id,
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "elapsed_ms": c.elapsed_ms,
                })).collect::<Vec<_>>(),
                "all_passed": all,
            });
            Ok((if all { 0 } else { 1 }, doc))
        }
    }
}

fn suite_error_outcome(e: &SuiteError) -> (i32, Value) {
    let code = match e {
        SuiteError::Residue(ResidueError::TruncationUnstable { .. })
        | SuiteError::Residue(ResidueError::NonIntegerResult(_)) => 1,
        _ => 2,
    };
    (code, json!({ "error": e.to_string() }))
}

/// The admissible N-progression for (r, d mod r, deg P) up to `max_n`.
fn default_progression(r: u32, d: i64, p: &AClassPoly, max_n: u32) -> Vec<u32> {
    let deg_p = p.weighted_degree().value_or_zero() as i64;
    (r + 1..=max_n)
        .filter(|&n| (n as i64 * d - deg_p).rem_euclid(r as i64) == 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_one_json() -> String {
        r#"{"rank": 2, "vars": ["a2"], "terms": [{"exps": [0], "coeff": "1"}]}"#.into()
    }

    fn run(args: &[&str]) -> (i32, Value) {
        let mut argv = vec!["intersector", "--no-cache"];
        argv.extend_from_slice(args);
        let (code, out) = run_cli(argv);
        let doc: Value = serde_json::from_str(&out).unwrap_or(Value::Null);
        (code, doc)
    }

    #[test]
    fn vi_subcommand_pinned_value() {
        let (code, doc) = run(&[
            "vi", "--r", "2", "--d", "5", "--g", "2", "--N", "4", "--poly", &poly_one_json(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(doc["value"], "24");
        assert_eq!(doc["method"], "vi-exact");
    }

    #[test]
    fn verlinde_subcommand() {
        let (code, doc) = run(&[
            "verlinde", "--r", "2", "--d", "1", "--g", "2", "--s", "1", "--method", "residue",
        ]);
        assert_eq!(code, 0);
        assert_eq!(doc["value"], "6");
    }

    #[test]
    fn malformed_poly_is_input_error() {
        let (code, doc) = run(&[
            "moduli", "--r", "2", "--d", "1", "--g", "2", "--poly", "{\"rank\": bogus",
        ]);
        assert_eq!(code, 2);
        assert!(doc["error"].as_str().unwrap().contains("malformed"));
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _) = run(&[
            "vi", "--r", "2", "--d", "5", "--g", "2", "--N", "4", "--poly",
            "/nonexistent/path.json",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn unknown_subcommand_is_input_error() {
        let (code, doc) = run(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(doc["error"].is_string());
    }
}
