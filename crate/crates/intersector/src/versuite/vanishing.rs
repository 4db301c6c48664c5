//! Vanishing of Quot-scheme intersections in the supercritical degree range.
//!
//! For weighted degrees deg P > r(r-1)(g-1), deg P + deg S < N/r, and
//! deg P + deg S + rM equal to the expected dimension with M a positive
//! integer, the intersection of P(abar) S(a) a_r^M against the virtual
//! class vanishes. The bound on deg P is sharp: the gate rejects
//! deg P = r(r-1)(g-1) rather than evaluating it.

use super::SuiteError;
use crate::exactnum::Rational;
use crate::polyseries::{AClassPoly, PolyDegree, SPoly};
use crate::quotvi::QuotProblem;
use crate::residueengine::quot_residue;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct VanishReport {
    pub r: u32,
    pub d: i64,
    pub g: u32,
    pub n: u32,
    pub m_power: i64,
    pub value: Rational,
    /// residue-route value when the certificates allow it
    pub residue_value: Option<Rational>,
    pub vanishes: bool,
}

/// Checks the three degree hypotheses, evaluates the intersection, and
/// reports whether it is exactly zero.
pub fn vanishing_check(
    r: u32,
    d: i64,
    g: u32,
    n: u32,
    p: &AClassPoly,
    s: &SPoly,
) -> Result<VanishReport, SuiteError> {
    let gbar = (g - 1) as i64;
    let deg_p = match p.weighted_degree() {
        PolyDegree::Zero => {
            return Err(SuiteError::HypothesisViolated("P is the zero polynomial".into()))
        }
        PolyDegree::Degree(deg) => deg as i64,
    };
    let deg_s = s.weighted_degree().value_or_zero() as i64;
    let critical = r as i64 * (r as i64 - 1) * gbar;
    if deg_p <= critical {
        return Err(SuiteError::HypothesisViolated(format!(
            "deg P = {deg_p} is not greater than r(r-1)(g-1) = {critical} \
             (the bound is sharp: nonvanishing occurs at the critical degree)"
        )));
    }
    if r as i64 * (deg_p + deg_s) >= n as i64 {
        return Err(SuiteError::HypothesisViolated(format!(
            "deg P + deg S = {} is not smaller than N/r = {}/{r}",
            deg_p + deg_s,
            n
        )));
    }
    let problem = QuotProblem::build(r, d, g, n, p.clone(), Some(s.clone()))?;
    if problem.m_power() < 1 {
        return Err(SuiteError::HypothesisViolated(format!(
            "M = {} is not a positive integer",
            problem.m_power()
        )));
    }

    let value = problem.vi_evaluate()?.value;
    let residue_value = if problem.validity_check().applicable {
        Some(quot_residue(&problem)?.value)
    } else {
        None
    };
    Ok(VanishReport {
        r,
        d,
        g,
        n,
        m_power: problem.m_power(),
        vanishes: value.is_zero() && residue_value.iter().all(Rational::is_zero),
        value,
        residue_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_instance_s_trivial() {
        let report = vanishing_check(
            2,
            5,
            2,
            10,
            &AClassPoly::abar(2, 2).pow(2),
            &SPoly::one(2),
        )
        .unwrap();
        assert_eq!(report.m_power, 15);
        assert!(report.vanishes);
        assert_eq!(report.value, Rational::zero());
    }

    #[test]
    fn vanishing_instance_with_a1() {
        // odd N makes deg P + deg S = 5 admissible (parity of N d)
        let report = vanishing_check(
            2,
            3,
            2,
            11,
            &AClassPoly::abar(2, 2).pow(2),
            &SPoly::a(2, 1),
        )
        .unwrap();
        assert_eq!(report.m_power, 5);
        assert!(report.vanishes);
    }

    #[test]
    fn sharpness_gate_rejects_critical_degree() {
        let err = vanishing_check(2, 1, 2, 6, &AClassPoly::abar(2, 2), &SPoly::one(2));
        assert!(matches!(err, Err(SuiteError::HypothesisViolated(_))));
    }

    #[test]
    fn gate_rejects_large_degrees_against_n() {
        // deg P + deg S = 4 needs N > 8
        let err = vanishing_check(2, 3, 2, 8, &AClassPoly::abar(2, 2).pow(2), &SPoly::one(2));
        assert!(matches!(err, Err(SuiteError::HypothesisViolated(_))));
    }
}
