//! The acceptance criteria as an executable suite. Each criterion runs a
//! pinned cross-check at a pinned tolerance and reports pass/fail with
//! detail; the `selftest` subcommand and the acceptance test target both
//! drive this module.

use super::{asymptotic_extract, equivalence_report, vanishing_check, verlinde_mapcount,
            AsymptoticVerdict, EquivalenceStatus, GridSpec, SuiteError};
use crate::exactnum::{BigFloat, Rational};
use crate::polyseries::{segre_leading_coefficient, AClassPoly, SPoly};
use crate::quotvi::QuotProblem;
use crate::residueengine::{moduli_pairing, quot_residue, verlinde_chi};
use crate::wittenreps::witten_sum;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

pub fn run_criteria() -> Vec<CriterionResult> {
    let criteria: Vec<(u32, &str, fn() -> Result<String, String>)> = vec![
        (1, "symplectic volume pairing", criterion_volume),
        (2, "Verlinde numbers vs Koszul oracle", criterion_verlinde_chi),
        (3, "map-count equality and d-periodicity", criterion_mapcount),
        (4, "root-of-unity sum equals iterated residue", criterion_equivalence),
        (5, "asymptotic leading coefficients", criterion_asymptotics),
        (6, "Witten sum agreement", criterion_witten),
        (7, "vanishing instances and sharpness gate", criterion_vanishing),
        (8, "Segre leading coefficients", criterion_segre),
        (9, "kernel properties", criterion_kernel),
    ];
    criteria
        .into_iter()
        .map(|(id, name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CriterionResult {
                id,
                name: name.to_owned(),
                passed,
                detail,
                elapsed_ms: start.elapsed().as_millis() as u64,
            }
        })
        .collect()
}

fn criterion_volume() -> Result<String, String> {
    let v = moduli_pairing(2, 1, 2, &AClassPoly::one(2)).map_err(|e| e.to_string())?;
    if v != Rational::new(1, 12) {
        return Err(format!("pairing of exp(fbar_2) with 1 is {v}, expected 1/12"));
    }
    // dim = 3: the pairing is f2^3/3!, so f2^3 integrates to 1/2 and
    // c_1(L)^3 = (2 f2)^3 integrates to 4, the degree of the intersection
    // of two quadrics in P^5
    let f2_cubed = &v * &Rational::from_int(6);
    let c1_cubed = &f2_cubed * &Rational::from_int(8);
    if c1_cubed != Rational::from_int(4) {
        return Err(format!("c_1(L)^3 = {c1_cubed}, expected 4"));
    }
    Ok(format!("pairing 1/12, fbar_2^3 = {f2_cubed}, c_1(L)^3 = {c1_cubed}"))
}

fn koszul_quadrics(s: i64) -> Rational {
    // chi of two intersected quadrics in P^5: C(s+5,5) - 2 C(s+3,5) + C(s+1,5)
    let binom5 = |n: i64| -> i64 {
        if n < 5 {
            0
        } else {
            (n - 4..=n).product::<i64>() / 120
        }
    };
    Rational::from_int(binom5(s + 5) - 2 * binom5(s + 3) + binom5(s + 1))
}

fn criterion_verlinde_chi() -> Result<String, String> {
    let mut got = Vec::new();
    for s in 0..=2u32 {
        let chi = verlinde_chi(2, 1, 2, s).map_err(|e| e.to_string())?;
        let oracle = koszul_quadrics(s as i64);
        if chi != oracle {
            return Err(format!("chi(L^{s}) = {chi}, Koszul oracle gives {oracle}"));
        }
        got.push(chi.to_string());
    }
    Ok(format!("chi(L^s) = {} for s = 0, 1, 2", got.join(", ")))
}

fn criterion_mapcount() -> Result<String, String> {
    for s in 1..=2u32 {
        let mc = verlinde_mapcount(2, 1, 2, s).map_err(|e| e.to_string())?;
        let chi = verlinde_chi(2, 1, 2, s).map_err(|e| e.to_string())?;
        if mc != chi {
            return Err(format!("map count {mc} != chi {chi} at s = {s}"));
        }
    }
    let periodic = verlinde_mapcount(2, 3, 2, 1).map_err(|e| e.to_string())?;
    if periodic != Rational::from_int(6) {
        return Err(format!("map count at d = 3 is {periodic}, expected 6"));
    }
    Ok("map counts 6, 19 match chi; d = 3 reproduces 6".into())
}

fn criterion_equivalence() -> Result<String, String> {
    let report = equivalence_report(&GridSpec::default_grid());
    if !report.all_equal() {
        let bad: Vec<String> = report
            .entries
            .iter()
            .filter_map(|e| match &e.status {
                EquivalenceStatus::Compared {
                    equal: false,
                    vi_value,
                    residue_value,
                } => Some(format!(
                    "(r={}, d={}, g={}, N={}, {}): {vi_value} vs {residue_value}",
                    e.r, e.d, e.g, e.n, e.poly
                )),
                _ => None,
            })
            .collect();
        return Err(format!("mismatches: {}", bad.join("; ")));
    }
    let pinned = report
        .entries
        .iter()
        .find(|e| e.r == 2 && e.n == 4 && e.g == 2 && e.poly == "1")
        .ok_or("pinned grid point missing")?;
    match &pinned.status {
        EquivalenceStatus::Compared { vi_value, .. }
            if *vi_value == Rational::from_int(24) => {}
        other => return Err(format!("pinned value at (2,*,2,4): {other:?}")),
    }
    Ok(format!(
        "{} compared, {} equal, pinned 24 present",
        report.compared, report.equal
    ))
}

fn criterion_asymptotics() -> Result<String, String> {
    let n_list: Vec<u32> = (2..=10).map(|k| 2 * k).collect();
    let cases: [(AClassPoly, Rational); 3] = [
        (AClassPoly::one(2), Rational::new(1, 48)),
        (AClassPoly::abar(2, 2), Rational::new(1, 8)),
        (AClassPoly::abar(2, 2).pow(2), Rational::zero()),
    ];
    let mut notes = Vec::new();
    for (p, target) in cases {
        let report =
            asymptotic_extract(2, 1, 2, &p, &n_list).map_err(|e| e.to_string())?;
        if report.target != target {
            return Err(format!(
                "target for {p:?} is {}, expected {target}",
                report.target
            ));
        }
        match report.verdict {
            AsymptoticVerdict::InterpolationExact => {
                notes.push(format!("{p:?}: exact interpolation to {target}"))
            }
            AsymptoticVerdict::RatioConverging => {
                notes.push(format!("{p:?}: ratio route toward {target}"))
            }
            AsymptoticVerdict::Failed(why) => {
                return Err(format!("asymptotic verdict failed for {p:?}: {why}"))
            }
        }
    }
    Ok(notes.join("; "))
}

fn criterion_witten() -> Result<String, String> {
    let prec = 128;
    let s = witten_sum(2, 1, 2, &AClassPoly::one(2), 200, prec).map_err(|e| e.to_string())?;
    let target = BigFloat::from_rational(&Rational::new(1, 12), prec);
    let err = s.value.sub(&target).abs();
    let tol = BigFloat::from_rational(&Rational::new(2, 1000), prec);
    if !err.lt(&tol) {
        return Err(format!(
            "|witten - 1/12| = {} exceeds 2e-3",
            err.to_decimal_string(10)
        ));
    }
    if s.tail.is_negative() || s.tail.is_zero() {
        return Err("tail bound is not positive".into());
    }

    let s3 = witten_sum(2, 1, 3, &AClassPoly::one(2), 100, prec).map_err(|e| e.to_string())?;
    let pairing = moduli_pairing(2, 1, 3, &AClassPoly::one(2)).map_err(|e| e.to_string())?;
    let err3 = s3.value.sub(&BigFloat::from_rational(&pairing, prec)).abs();
    let budget = s3.tail.add(&BigFloat::pow2(-64, prec));
    if !err3.lt(&budget) {
        return Err(format!(
            "genus-3 sum misses the pairing {pairing} by {} with tail {}",
            err3.to_decimal_string(12),
            s3.tail.to_decimal_string(12)
        ));
    }
    Ok(format!(
        "genus 2: err {} < 2e-3 (tail {}); genus 3: err {} < tail {}",
        err.to_decimal_string(8),
        s.tail.to_decimal_string(8),
        err3.to_decimal_string(10),
        s3.tail.to_decimal_string(10)
    ))
}

fn criterion_vanishing() -> Result<String, String> {
    let ab2sq = AClassPoly::abar(2, 2).pow(2);
    let pairing = moduli_pairing(2, 1, 2, &ab2sq).map_err(|e| e.to_string())?;
    if !pairing.is_zero() {
        return Err(format!("pairing with abar_2^2 is {pairing}, expected 0"));
    }
    let r1 = vanishing_check(2, 5, 2, 10, &ab2sq, &SPoly::one(2)).map_err(|e| e.to_string())?;
    if !r1.vanishes {
        return Err(format!("S = 1 instance evaluates to {}", r1.value));
    }
    let r2 = vanishing_check(2, 3, 2, 11, &ab2sq, &SPoly::a(2, 1)).map_err(|e| e.to_string())?;
    if !r2.vanishes {
        return Err(format!("S = a_1 instance evaluates to {}", r2.value));
    }
    // sharpness: deg P = r(r-1)(g-1) must be rejected, not evaluated
    match vanishing_check(2, 1, 2, 6, &AClassPoly::abar(2, 2), &SPoly::one(2)) {
        Err(SuiteError::HypothesisViolated(_)) => {}
        other => return Err(format!("critical degree not rejected: {other:?}")),
    }
    Ok("both instances vanish exactly; critical degree rejected".into())
}

fn criterion_segre() -> Result<String, String> {
    for s in 1..=3u32 {
        for k in 0..=4u32 {
            let (_, leading, ok) = segre_leading_coefficient(s, k);
            if !ok {
                return Err(format!(
                    "leading coefficient mismatch at s = {s}, k = {k}: got {leading:?}"
                ));
            }
        }
    }
    Ok("leading coefficient is (-1)^k (h_1+...+h_s)^k / k! for all s <= 3, k <= 4".into())
}

fn criterion_kernel() -> Result<String, String> {
    // truncation idempotence is certified inside every residue computation
    // (T vs T+3); recompute representatives so a certification failure
    // surfaces here as TruncationUnstable
    let pr = QuotProblem::build(2, 5, 2, 4, AClassPoly::one(2), None)
        .map_err(|e| e.to_string())?;
    quot_residue(&pr).map_err(|e| format!("truncation certification: {e}"))?;
    moduli_pairing(3, 1, 2, &AClassPoly::abar(3, 2)).map_err(|e| e.to_string())?;

    // Galois rationality and exact-vs-numeric agreement across the grid
    let report = equivalence_report(&GridSpec::default_grid());
    let mut checked = 0;
    for entry in &report.entries {
        let exact = match &entry.status {
            EquivalenceStatus::Compared { vi_value, .. } => vi_value.clone(),
            EquivalenceStatus::ResidueInapplicable { vi_value, .. } => vi_value.clone(),
            EquivalenceStatus::Inadmissible { .. } => continue,
        };
        // rebuild the problem (entries store a lifted degree implicitly;
        // rebuild the same way)
        let p = grid_poly(entry.r, &entry.poly).ok_or("unknown grid polynomial")?;
        let mut problem = None;
        for lift in 0..=3i64 {
            if let Ok(pr) = QuotProblem::build(
                entry.r,
                entry.d + lift * entry.r as i64,
                entry.g,
                entry.n,
                p.clone(),
                None,
            ) {
                problem = Some(pr);
                break;
            }
        }
        let problem = problem.ok_or("grid problem no longer builds")?;
        let numeric = problem.vi_evaluate_numeric(128);
        let diff = numeric
            .value
            .sub(&BigFloat::from_rational(&exact, 128))
            .abs();
        if !diff.le_pow2(-64) {
            return Err(format!(
                "exact/numeric gap at (r={}, d={}, g={}, N={}, {}) is {}",
                entry.r,
                entry.d,
                entry.g,
                entry.n,
                entry.poly,
                diff.to_decimal_string(30)
            ));
        }
        if !numeric.imag_max.le_pow2(-64) {
            return Err("imaginary residue above 2^-64".into());
        }
        checked += 1;
    }

    // determinism across runs and thread counts: local pools, exact values
    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let pr = QuotProblem::build(2, 3, 2, 6, AClassPoly::one(2), None)
        .map_err(|e| e.to_string())?;
    let v1 = pool1.install(|| pr.vi_evaluate()).map_err(|e| e.to_string())?;
    let v4 = pool4.install(|| pr.vi_evaluate()).map_err(|e| e.to_string())?;
    if v1.value != v4.value || v1.fingerprint != v4.fingerprint {
        return Err("thread count changed an exact result".into());
    }

    // determinism of CLI output modulo the elapsed-time field
    let strip = |s: &str| -> String {
        let mut doc: serde_json::Value = serde_json::from_str(s).unwrap();
        doc.as_object_mut().map(|m| m.remove("elapsed_ms"));
        serde_json::to_string(&doc).unwrap()
    };
    let args = [
        "intersector", "--no-cache", "verlinde", "--r", "2", "--d", "1", "--g", "2",
        "--s", "1", "--method", "both",
    ];
    let (c1, out1) = super::cli::run_cli(args);
    let (c2, out2) = super::cli::run_cli(args);
    if c1 != 0 || c2 != 0 || strip(&out1) != strip(&out2) {
        return Err("CLI output not deterministic across runs".into());
    }

    Ok(format!(
        "truncation certified; {checked} grid points exact = numeric within 2^-64; \
         thread counts 1 and 4 agree; CLI deterministic"
    ))
}

fn grid_poly(r: u32, name: &str) -> Option<AClassPoly> {
    match (r, name) {
        (_, "1") => Some(AClassPoly::one(r)),
        (_, "abar2") => Some(AClassPoly::abar(r, 2)),
        (2, "abar2^2") => Some(AClassPoly::abar(2, 2).pow(2)),
        (3, "abar3") => Some(AClassPoly::abar(3, 3)),
        _ => None,
    }
}
