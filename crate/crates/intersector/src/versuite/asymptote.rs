//! Leading N-asymptotics of Quot-scheme values.
//!
//! For fixed rank, genus, degree class and polynomial P, the Quot value
//! V(N) along its admissible N-progression carries the moduli pairing in
//! its leading coefficient: the coefficient of N^{e(P)} with
//! e(P) = r^2 (g-1) + 1 - deg P equals (1/r^g) times the pairing of
//! exp(fbar_2) with P.
//!
//! Whether V(N) is exactly polynomial in N is an empirical question the
//! report answers rather than assumes: exact Newton divided differences
//! certify polynomiality when the order-(e+1) differences vanish, and the
//! ratio sequence V(N)/N^{e(P)} is always reported as the fallback route.

use super::SuiteError;
use crate::exactnum::Rational;
use crate::polyseries::{AClassPoly, PolyDegree};
use crate::quotvi::QuotProblem;
use crate::residueengine::{moduli_pairing, quot_residue};
use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub enum AsymptoticVerdict {
    /// the values interpolate exactly as a polynomial of degree <= e(P)
    /// whose leading coefficient equals the target
    InterpolationExact,
    /// no exact interpolation, but the ratio route converges monotonically
    /// at rate O(1/N) toward the target
    RatioConverging,
    Failed(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub r: u32,
    pub d_class: i64,
    pub g: u32,
    pub exponent: i64,
    pub n_values: Vec<u32>,
    /// the degree representative actually used at each N
    pub d_used: Vec<i64>,
    pub values: Vec<Rational>,
    pub ratios: Vec<Rational>,
    pub interpolated_leading: Option<Rational>,
    pub target: Rational,
    pub verdict: AsymptoticVerdict,
}

/// Divided-difference triangle; row k holds f[x_i..x_{i+k}].
fn divided_differences(xs: &[Rational], ys: &[Rational]) -> Vec<Vec<Rational>> {
    let mut rows = vec![ys.to_vec()];
    for k in 1..ys.len() {
        let prev = rows.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() - 1);
        for i in 0..prev.len() - 1 {
            let num = &prev[i + 1] - &prev[i];
            let den = &xs[i + k] - &xs[i];
            row.push(num / den);
        }
        rows.push(row);
    }
    rows
}

/// Extracts the leading N-coefficient of the Quot values over `n_list`
/// (one residue class mod r) and compares it against the moduli pairing.
pub fn asymptotic_extract(
    r: u32,
    d0: i64,
    g: u32,
    p: &AClassPoly,
    n_list: &[u32],
) -> Result<AsymptoticReport, SuiteError> {
    let gbar = (g - 1) as i64;
    let deg_p = match p.weighted_degree() {
        PolyDegree::Zero => {
            return Err(SuiteError::Other("P is the zero polynomial".into()))
        }
        PolyDegree::Degree(d) => d as i64,
    };
    let exponent = (r as i64) * (r as i64) * gbar + 1 - deg_p;
    let need = (exponent.max(0) as usize) + 2;
    if n_list.len() < need {
        return Err(SuiteError::InsufficientPoints { need, got: n_list.len() });
    }

    let mut values = Vec::with_capacity(n_list.len());
    let mut d_used = Vec::with_capacity(n_list.len());
    for &n in n_list {
        // lift d in its class mod r until M is a nonnegative integer;
        // a class-level obstruction mod r never resolves, so bound the lift
        let mut problem = None;
        for lift in 0..=(2 * n as i64 * gbar + 4) {
            if let Ok(pr) =
                QuotProblem::build(r, d0 + lift * r as i64, g, n, p.clone(), None)
            {
                problem = Some(pr);
                break;
            }
        }
        let problem = problem.ok_or_else(|| {
            SuiteError::Other(format!(
                "N = {n} admits no representative of d = {d0} mod {r} (degree obstruction)"
            ))
        })?;
        d_used.push(problem.degree());
        let value = if problem.validity_check().applicable {
            quot_residue(&problem)?.value
        } else {
            problem.vi_evaluate()?.value
        };
        values.push(value);
    }

    let xs: Vec<Rational> = n_list.iter().map(|&n| Rational::from_int(n as i64)).collect();
    let ratios: Vec<Rational> = values
        .iter()
        .zip(n_list)
        .map(|(v, &n)| v / &Rational::from_int(n as i64).pow(exponent))
        .collect();

    let dd = divided_differences(&xs, &values);
    let e = exponent.max(0) as usize;
    let interpolated_leading = if dd
        .get(e + 1)
        .map(|row| row.iter().all(Rational::is_zero))
        .unwrap_or(false)
    {
        Some(dd[e][0].clone())
    } else {
        None
    };

    let target = moduli_pairing(r, d0, g, p)?
        / Rational::from_int(r as i64).pow(g as i64);

    let verdict = match &interpolated_leading {
        Some(lead) if *lead == target => AsymptoticVerdict::InterpolationExact,
        Some(lead) => AsymptoticVerdict::Failed(format!(
            "interpolated leading coefficient {lead} differs from target {target}"
        )),
        None => ratio_verdict(&ratios, n_list, &target),
    };

    Ok(AsymptoticReport {
        r,
        d_class: d0,
        g,
        exponent,
        n_values: n_list.to_vec(),
        d_used,
        values,
        ratios,
        interpolated_leading,
        target,
        verdict,
    })
}

/// Fallback verdict: |ratio - target| must decrease monotonically and at
/// rate O(1/N), fitted by comparing the first and last scaled errors.
fn ratio_verdict(ratios: &[Rational], ns: &[u32], target: &Rational) -> AsymptoticVerdict {
    let errs: Vec<Rational> = ratios.iter().map(|q| (q - target).abs()).collect();
    if errs.iter().all(Rational::is_zero) {
        return AsymptoticVerdict::RatioConverging;
    }
    for w in errs.windows(2) {
        if w[1] > w[0] {
            return AsymptoticVerdict::Failed(
                "ratio errors are not monotonically decreasing".into(),
            );
        }
    }
    let first = &errs[0] * &Rational::from_int(ns[0] as i64);
    let last = errs.last().unwrap() * &Rational::from_int(*ns.last().unwrap() as i64);
    if last <= first * Rational::from_int(2) {
        AsymptoticVerdict::RatioConverging
    } else {
        AsymptoticVerdict::Failed("ratio errors decay slower than 1/N".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_difference_of_cubic() {
        // f(x) = 2x^3 - x on x = 0,1,2,3,4: leading dd = 2, order-4 dd = 0
        let xs: Vec<Rational> = (0..5).map(Rational::from_int).collect();
        let ys: Vec<Rational> = (0..5)
            .map(|x| Rational::from_int(2 * x * x * x - x))
            .collect();
        let dd = divided_differences(&xs, &ys);
        assert!(dd[3].iter().all(|c| *c == Rational::from_int(2)));
        assert!(dd[4].iter().all(Rational::is_zero));
    }

    #[test]
    fn rank2_volume_family_interpolates_to_1_over_48() {
        let n_list: Vec<u32> = (2..=10).map(|k| 2 * k).collect();
        let report =
            asymptotic_extract(2, 1, 2, &AClassPoly::one(2), &n_list).unwrap();
        assert_eq!(report.exponent, 5);
        assert_eq!(report.target, Rational::new(1, 48));
        assert_eq!(report.interpolated_leading, Some(Rational::new(1, 48)));
        assert_eq!(report.verdict, AsymptoticVerdict::InterpolationExact);
        // frozen small values of the family (d lifted to 3 within the odd class)
        assert_eq!(report.values[0], Rational::from_int(24));
        assert_eq!(report.values[1], Rational::from_int(171));
        assert_eq!(report.values[2], Rational::from_int(704));
        assert_eq!(report.values[3], Rational::from_int(2125));
    }

    #[test]
    fn rank2_abar2_family_is_n_cubed_over_8() {
        let n_list: Vec<u32> = (2..=8).map(|k| 2 * k).collect();
        let report =
            asymptotic_extract(2, 1, 2, &AClassPoly::abar(2, 2), &n_list).unwrap();
        assert_eq!(report.exponent, 3);
        assert_eq!(report.target, Rational::new(1, 8));
        assert_eq!(report.verdict, AsymptoticVerdict::InterpolationExact);
        for ratio in &report.ratios {
            assert_eq!(*ratio, Rational::new(1, 8));
        }
    }

    #[test]
    fn insufficient_points_rejected() {
        let err = asymptotic_extract(2, 1, 2, &AClassPoly::one(2), &[4, 6, 8]);
        assert!(matches!(err, Err(SuiteError::InsufficientPoints { need: 7, got: 3 })));
    }

    #[test]
    fn ratio_verdict_accepts_inverse_n() {
        // synthetic ratios target + 1/N
        let ns = [4u32, 8, 16, 32];
        let target = Rational::new(1, 3);
        let ratios: Vec<Rational> = ns
            .iter()
            .map(|&n| &target + &Rational::new(1, n as i64))
            .collect();
        assert_eq!(
            ratio_verdict(&ratios, &ns, &target),
            AsymptoticVerdict::RatioConverging
        );
    }
}
