//! Intersection problems on the Quot scheme of a trivial bundle and their
//! exact evaluation by sums over tuples of distinct N-th roots of unity.
//!
//! A fully resolved problem fixes rank r, degree d (coprime to r), genus g,
//! the number of sections N, polynomials P (in the normalized abar classes)
//! and S (in the plain a classes), the complementary exponent M of a_r with
//! deg P + deg S + r M = e = Nd - r(N-r)(g-1), the reduced exponents
//! m_i = i(M - g + 1) mod N, and the sign u = (-1)^{(g-1) r(r-1)/2 + d(r-1)}.
//!
//! The evaluation sums, over unordered r-element subsets of the N-th roots
//! of unity,
//!
//!     u N^{r(g-1)} sum_lambda A(lambda) (lambda_1...lambda_r)^{-(g-1)}
//!                    / prod_{i<j} (lambda_i - lambda_j)^{2(g-1)}
//!
//! with A = Q_P * T_S * (z_1...z_r)^M. The summand is symmetric in the
//! subset, so the unordered sum is well-defined; the unordered normalization
//! is the one under which this sum, the iterated-residue route, and the
//! independent geometric oracles for Verlinde numbers all agree.

use crate::exactnum::{BigComplex, BigFloat, CycloNum, ExactError, Rational};
use crate::polyseries::{AClassPoly, MPoly, PolyDegree, SPoly};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::time::Instant;
use thiserror::Error;

/// Errors from problem construction and evaluation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuotError {
    #[error("rank and degree are not coprime: gcd({r}, {d}) != 1")]
    NotCoprime { r: u32, d: i64 },
    #[error(
        "degree mismatch: N*d - deg P - deg S = {lhs} is {residue} mod {r}, \
         not a nonnegative multiple of the rank"
    )]
    DegreeMismatch { lhs: i64, residue: i64, r: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exact arithmetic failure: {0}")]
    Exact(#[from] ExactError),
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A fully resolved intersection problem on the Quot scheme.
#[derive(Debug, Clone)]
pub struct QuotProblem {
    r: u32,
    d: i64,
    g: u32,
    n: u32,
    p: AClassPoly,
    s: SPoly,
    /// exponent M of a_r
    m_power: i64,
    /// reduced exponents m_1..m_{r-1}, each in [0, N)
    reduced_exps: Vec<i64>,
    /// sign u
    sign: i64,
    /// expected dimension e = Nd - r(N-r)(g-1)
    expected_dim: i64,
    /// Q_P and T_S as Chern-root polynomials, fixed at construction
    q_chern: MPoly,
    s_chern: MPoly,
    /// set when N == r: the formula still evaluates but the underlying
    /// scheme is degenerate
    n_equals_r: bool,
}

impl QuotProblem {
    /// Resolves a problem from its raw data: computes e, solves for M,
    /// derives the reduced exponents and the sign.
    pub fn build(
        r: u32,
        d: i64,
        g: u32,
        n: u32,
        p: AClassPoly,
        s: Option<SPoly>,
    ) -> Result<Self, QuotError> {
        if r < 2 {
            return Err(QuotError::InvalidParameter(format!("rank {r} < 2")));
        }
        if g < 2 {
            return Err(QuotError::InvalidParameter(format!("genus {g} < 2")));
        }
        if n < r {
            return Err(QuotError::InvalidParameter(format!(
                "N = {n} is smaller than the rank {r}"
            )));
        }
        if gcd_i64(r as i64, d) != 1 {
            return Err(QuotError::NotCoprime { r, d });
        }
        if p.rank() != r {
            return Err(QuotError::InvalidParameter(format!(
                "polynomial rank {} does not match r = {r}",
                p.rank()
            )));
        }
        if p.is_zero() {
            return Err(QuotError::InvalidParameter("P is the zero polynomial".into()));
        }
        // the degree bookkeeping deg P + deg S + rM = e ties one exponent M
        // to one weighted degree; mixed-degree insertions have no single
        // admissible M and their lower pieces break the two evaluation
        // routes differently, so they are rejected up front
        if !p.is_weighted_homogeneous() {
            return Err(QuotError::InvalidParameter(
                "P must be weighted-homogeneous".into(),
            ));
        }
        let s = s.unwrap_or_else(|| SPoly::one(r));
        if s.rank() != r {
            return Err(QuotError::InvalidParameter(format!(
                "S-polynomial rank {} does not match r = {r}",
                s.rank()
            )));
        }
        if !s.is_weighted_homogeneous() {
            return Err(QuotError::InvalidParameter(
                "S must be weighted-homogeneous".into(),
            ));
        }
        let gbar = g as i64 - 1;
        let deg_p = p.weighted_degree().value_or_zero() as i64;
        let deg_s = match s.weighted_degree() {
            PolyDegree::Zero => {
                return Err(QuotError::InvalidParameter("S is the zero polynomial".into()))
            }
            PolyDegree::Degree(d) => d as i64,
        };
        let e = n as i64 * d - r as i64 * (n as i64 - r as i64) * gbar;
        let lhs = e - deg_p - deg_s;
        if lhs < 0 || lhs % r as i64 != 0 {
            return Err(QuotError::DegreeMismatch {
                lhs: n as i64 * d - deg_p - deg_s,
                residue: (n as i64 * d - deg_p - deg_s).rem_euclid(r as i64),
                r,
            });
        }
        let m_power = lhs / r as i64;
        let reduced_exps = (1..r as i64)
            .map(|i| (i * (m_power - gbar)).rem_euclid(n as i64))
            .collect();
        let sign = if (gbar * (r as i64) * (r as i64 - 1) / 2 + d * (r as i64 - 1))
            .rem_euclid(2)
            == 0
        {
            1
        } else {
            -1
        };
        let q_chern = p.to_chern_roots();
        let s_chern = s.to_chern_roots();
        Ok(QuotProblem {
            r,
            d,
            g,
            n,
            p,
            s,
            m_power,
            reduced_exps,
            sign,
            expected_dim: e,
            q_chern,
            s_chern,
            n_equals_r: n == r,
        })
    }

    pub fn rank(&self) -> u32 {
        self.r
    }
    pub fn degree(&self) -> i64 {
        self.d
    }
    pub fn genus(&self) -> u32 {
        self.g
    }
    pub fn sections(&self) -> u32 {
        self.n
    }
    pub fn a_poly(&self) -> &AClassPoly {
        &self.p
    }
    pub fn s_poly(&self) -> &SPoly {
        &self.s
    }
    pub fn m_power(&self) -> i64 {
        self.m_power
    }
    pub fn reduced_exps(&self) -> &[i64] {
        &self.reduced_exps
    }
    pub fn sign(&self) -> i64 {
        self.sign
    }
    pub fn expected_dim(&self) -> i64 {
        self.expected_dim
    }
    pub fn chern_numerator(&self) -> (&MPoly, &MPoly) {
        (&self.q_chern, &self.s_chern)
    }
    /// True for the degenerate N = r case: the formula still evaluates, but
    /// the value is a purely virtual number.
    pub fn n_equals_r(&self) -> bool {
        self.n_equals_r
    }

    /// Canonical fingerprint of (method, problem data).
    pub fn fingerprint(&self, method: &str) -> String {
        let data = format!(
            "{method}|r={}|d={}|g={}|N={}|M={}|P={}|S={}",
            self.r,
            self.d,
            self.g,
            self.n,
            self.m_power,
            self.p.canonical_string(),
            self.s.canonical_string()
        );
        let mut hasher = Sha256::new();
        hasher.update(data.as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// One term of the root-of-unity sum: the summand at the unordered
    /// subset {zeta^k : k in exponents}. Symmetric in the subset.
    pub fn vi_summand(&self, exponents: &[u32]) -> CycloNum {
        assert_eq!(exponents.len(), self.r as usize);
        debug_assert!(
            (1..exponents.len()).all(|i| !exponents[..i].contains(&exponents[i])),
            "exponents must be distinct"
        );
        let n = self.n;
        let gbar = self.g as i64 - 1;
        let lambdas: Vec<CycloNum> = exponents
            .iter()
            .map(|&k| CycloNum::zeta_pow(n, k as i64))
            .collect();

        // (z_1...z_r)^(M - gbar) = zeta^{(sum k_j)(M - gbar)}
        let sum_k: i64 = exponents.iter().map(|&k| k as i64).sum();
        let mut numer = CycloNum::zeta_pow(n, sum_k * (self.m_power - gbar));
        if self.q_chern.total_degree().unwrap_or(0) > 0 {
            numer = numer.mul(&self.q_chern.eval_cyclo(&lambdas));
        } else {
            numer = numer.scale(&self.q_chern.eval_cyclo(&lambdas).to_rational().unwrap());
        }
        if !self.s.is_one() {
            numer = numer.mul(&self.s_chern.eval_cyclo(&lambdas));
        }

        let mut denom = CycloNum::one(n);
        for i in 0..lambdas.len() {
            for j in (i + 1)..lambdas.len() {
                let diff = lambdas[i].sub(&lambdas[j]);
                for _ in 0..(2 * gbar) {
                    denom = denom.mul(&diff);
                }
            }
        }
        // distinct roots of unity: the denominator cannot vanish
        numer.mul(&denom.inverse().expect("vanishing denominator"))
    }

    /// All r-element subsets of {0, ..., N-1} in colexicographic order, so
    /// chunked parallel reduction is reproducible.
    pub fn subsets_colex(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        colex(self.n, self.r, &mut acc, &mut out);
        out
    }

    /// The full root-of-unity sum, exact. Chunks of the colex enumeration
    /// are evaluated in parallel; exact addition makes the reduction
    /// schedule-independent.
    pub fn vi_evaluate(&self) -> Result<EvalResult, QuotError> {
        let start = Instant::now();
        let subsets = self.subsets_colex();
        let total: CycloNum = subsets
            .par_chunks(64)
            .map(|chunk| {
                let mut acc = CycloNum::zero(self.n);
                for subset in chunk {
                    acc = acc.add(&self.vi_summand(subset));
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(CycloNum::zero(self.n), |a, b| a.add(&b));

        let gbar = self.g as i64 - 1;
        let rational = total.to_rational()?;
        let value = rational
            * Rational::from_int(self.sign)
            * Rational::from_int(self.n as i64).pow(self.r as i64 * gbar);
        Ok(EvalResult {
            value,
            method: EvalMethod::ViExact,
            fingerprint: self.fingerprint("vi-exact"),
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// The same sum in complex floating arithmetic: returns the real part
    /// and the largest imaginary magnitude seen, which bounds the numeric
    /// error scale.
    pub fn vi_evaluate_numeric(&self, precision: u32) -> NumericEval {
        assert!(precision >= 64);
        let gbar = self.g as i64 - 1;
        let subsets = self.subsets_colex();
        let roots: Vec<BigComplex> = (0..self.n)
            .map(|k| BigComplex::root_of_unity(k as i64, self.n as i64, precision))
            .collect();
        let mut total = BigComplex::zero(precision);
        for subset in &subsets {
            let lambdas: Vec<BigComplex> =
                subset.iter().map(|&k| roots[k as usize].clone()).collect();
            let mexp = (subset.iter().map(|&k| k as i64).sum::<i64>()
                * (self.m_power - gbar))
                .rem_euclid(self.n as i64);
            let mut numer = BigComplex::root_of_unity(mexp, self.n as i64, precision);
            numer = numer.mul(&self.q_chern.eval_complex(&lambdas));
            if !self.s.is_one() {
                numer = numer.mul(&self.s_chern.eval_complex(&lambdas));
            }
            let mut denom = BigComplex::one(precision);
            for i in 0..lambdas.len() {
                for j in (i + 1)..lambdas.len() {
                    denom = denom.mul(&lambdas[i].sub(&lambdas[j]).powu(2 * gbar as u32));
                }
            }
            total = total.add(&numer.div(&denom));
        }
        let scale = Rational::from_int(self.sign)
            * Rational::from_int(self.n as i64).pow(self.r as i64 * gbar);
        let scaled = total.scale_rational(&scale);
        NumericEval {
            value: scaled.re.clone(),
            imag_max: scaled.im.abs(),
            precision,
        }
    }

    /// Whether the iterated-residue route applies to this problem, with the
    /// degree-count certificates for regularity at 0 and infinity.
    ///
    /// As a function of the k-th substituted variable, the integrand has a
    /// zero of order at least m_k - 1 - 2(g-1) C(k,2) at the origin (the
    /// pairs i < j <= k each contribute a pole of order 2(g-1) there), and
    /// degree at most m_k - 1 - N + deg(Q T) - 2(g-1)(C(r,2) - C(r-k,2)) at
    /// infinity, which must be at most -2 for the form to be regular there.
    pub fn validity_check(&self) -> ValidityReport {
        let gbar = self.g as i64 - 1;
        let n = self.n as i64;
        let r = self.r as i64;
        let deg_qt = self.p.weighted_degree().value_or_zero() as i64
            + self.s.weighted_degree().value_or_zero() as i64;
        let binom2 = |x: i64| x * (x - 1) / 2;
        let mut items = Vec::new();
        let mut applicable = true;
        for (idx, &mk) in self.reduced_exps.iter().enumerate() {
            let k = idx as i64 + 1;
            let zero_margin = mk - 1 - 2 * gbar * binom2(k);
            let infinity_margin = n - 1 - deg_qt + 2 * gbar * (binom2(r) - binom2(r - k)) - mk;
            let ok = zero_margin >= 0 && infinity_margin >= 0;
            applicable &= ok;
            items.push(ValidityItem {
                variable: k as u32,
                reduced_exp: mk,
                zero_margin,
                infinity_margin,
                ok,
            });
        }
        let mut notes = Vec::new();
        if self.n_equals_r {
            notes.push(
                "N equals the rank: the scheme is degenerate and the value is purely virtual"
                    .to_owned(),
            );
        }
        ValidityReport { applicable, items, notes }
    }
}

fn colex(n: u32, r: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    // r-subsets of [0, n) in colexicographic order: all subsets with largest
    // element `top` appear before any subset with a larger top, recursively.
    if r == 0 {
        let mut s = acc.clone();
        s.reverse();
        out.push(s);
        return;
    }
    for top in (r - 1)..n {
        acc.push(top);
        colex(top, r - 1, acc, out);
        acc.pop();
    }
}

/// Exact evaluation result with provenance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Rational,
    pub method: EvalMethod,
    pub fingerprint: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalMethod {
    #[serde(rename = "vi-exact")]
    ViExact,
    #[serde(rename = "vi-numeric")]
    ViNumeric,
    #[serde(rename = "quot-residue")]
    QuotResidue,
}

impl EvalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalMethod::ViExact => "vi-exact",
            EvalMethod::ViNumeric => "vi-numeric",
            EvalMethod::QuotResidue => "quot-residue",
        }
    }
}

/// Floating evaluation: real part plus the observed imaginary scale.
#[derive(Debug, Clone)]
pub struct NumericEval {
    pub value: BigFloat,
    pub imag_max: BigFloat,
    pub precision: u32,
}

/// Residue-path applicability report.
#[derive(Debug, Clone, Serialize)]
pub struct ValidityReport {
    pub applicable: bool,
    pub items: Vec<ValidityItem>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidityItem {
    pub variable: u32,
    pub reduced_exp: i64,
    pub zero_margin: i64,
    pub infinity_margin: i64,
    pub ok: bool,
}
