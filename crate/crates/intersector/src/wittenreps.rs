//! Infinite sums over the irreducible representations of SU(r), evaluated as
//! high-precision truncated series.
//!
//! For a dominant weight chi (components chi_1 >= ... >= chi_r with integer
//! differences summing to zero) and mu = chi + rho, the Weyl dimension
//! formula gives dim = prod_{i<j} (mu_i - mu_j)/(j - i), and the central
//! element exp(2 pi i d / r) I acts with trace
//! (-1)^{d(r-1)} exp(-2 pi i d mu_r) dim. The moduli pairing of exp(fbar_2)
//! with P equals
//!
//!     C sum_chi Trace_chi(c) / dim^{2g-1} * Q_P(2 pi i mu),
//!     C = r^g / ((2 pi)^{r(r-1)(g-1)} prod_{k<r} (k!)^{2(g-1)})
//!
//! whenever the summand decays fast enough. The sum is an independent
//! transcendental cross-check of the exact residue values: exactness lives
//! in the residue engine, this module only ever produces certified
//! approximations (partial sum, tail bound from an integral comparison with
//! safety factor 4, and the observed imaginary scale).

use crate::exactnum::{BigComplex, BigFloat, CycloNum, Rational};
use crate::polyseries::{AClassPoly, PolyDegree};
use num::bigint::BigInt;
use num::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WittenError {
    #[error(
        "convergence not guaranteed: per-direction decay exponent {decay} < 2 \
         (need deg P small compared to the genus)"
    )]
    ConvergenceNotGuaranteed { decay: i64 },
    #[error("imaginary part {imag} exceeds the precision budget")]
    PrecisionExhausted { imag: String },
    #[error("non-positive Weyl dimension for a dominant weight: convention bug")]
    NonPositiveDimension,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A dominant weight of SU(r): components with pairwise integer differences
/// and zero sum, weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSU {
    rank: u32,
    components: Vec<Rational>,
    height: u32,
}

impl WeightSU {
    /// Builds the weight from its gap vector (chi_i - chi_{i+1} >= 0).
    pub fn from_gaps(rank: u32, gaps: &[u32]) -> Self {
        assert_eq!(gaps.len(), rank as usize - 1);
        let correction = Rational::new(
            gaps.iter()
                .enumerate()
                .map(|(j, &n)| (j as i64 + 1) * n as i64)
                .sum::<i64>(),
            rank as i64,
        );
        let components = (0..rank as usize)
            .map(|i| {
                let tail: i64 = gaps[i..].iter().map(|&n| n as i64).sum();
                Rational::from_int(tail) - &correction
            })
            .collect();
        WeightSU {
            rank,
            components,
            height: gaps.iter().sum(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
    pub fn components(&self) -> &[Rational] {
        &self.components
    }
    /// chi_1 - chi_r
    pub fn height(&self) -> u32 {
        self.height
    }

    /// The rho-shifted components mu = chi + rho, rho_i = (r - 2i + 1)/2.
    pub fn rho_shifted(&self) -> Vec<Rational> {
        let r = self.rank as i64;
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| c + &Rational::new(r - 2 * (i as i64 + 1) + 1, 2))
            .collect()
    }
}

/// All dominant weights of height at most `max_height`, by height shell and
/// lexicographic gap order within a shell.
pub fn enumerate_dominant_weights(r: u32, max_height: u32) -> Vec<WeightSU> {
    assert!(r >= 2);
    let mut out = Vec::new();
    for h in 0..=max_height {
        let mut gaps = vec![0u32; r as usize - 1];
        compositions(h, 0, &mut gaps, &mut |g| out.push(WeightSU::from_gaps(r, g)));
    }
    out
}

/// Gap vectors with the given total, lexicographically.
fn compositions(total: u32, idx: usize, gaps: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if idx + 1 == gaps.len() {
        gaps[idx] = total;
        emit(gaps);
        return;
    }
    for v in 0..=total {
        gaps[idx] = v;
        compositions(total - v, idx + 1, gaps, emit);
    }
}

/// The Weyl dimension prod_{i<j} (mu_i - mu_j)/(j - i); a positive integer
/// for every dominant weight.
pub fn weyl_dimension(chi: &WeightSU) -> Result<BigInt, WittenError> {
    let mu = chi.rho_shifted();
    let r = chi.rank as usize;
    let mut dim = Rational::one();
    for i in 0..r {
        for j in (i + 1)..r {
            dim = dim * (&mu[i] - &mu[j]) / Rational::from_int((j - i) as i64);
        }
    }
    if !dim.is_integer() || dim.is_negative() || dim.is_zero() {
        return Err(WittenError::NonPositiveDimension);
    }
    Ok(dim.numer().clone())
}

/// The trace of the central element exp(2 pi i d / r) I on the irreducible
/// representation with highest weight chi, as an exact element of
/// Q(zeta_{2r}): (-1)^{d(r-1)} exp(-2 pi i d mu_r) dim.
pub fn central_trace(chi: &WeightSU, d: i64) -> Result<CycloNum, WittenError> {
    let r = chi.rank;
    if num::integer::gcd(r as i64, d.rem_euclid(r as i64)) != 1 {
        return Err(WittenError::InvalidInput(format!(
            "gcd({r}, {d}) != 1"
        )));
    }
    let dim = weyl_dimension(chi)?;
    let mu_r = chi.rho_shifted().pop().unwrap();
    // -d mu_r as a multiple of 1/(2r)
    let twor = Rational::from_int(2 * r as i64);
    let scaled = &(-Rational::from_int(d) * mu_r) * &twor;
    if !scaled.is_integer() {
        return Err(WittenError::InvalidInput(
            "mu_r is not a multiple of 1/(2r)".into(),
        ));
    }
    let mut exponent = scaled.numer().to_i64().expect("exponent in range");
    if (d * (r as i64 - 1)).rem_euclid(2) == 1 {
        exponent += r as i64; // times -1 = zeta_{2r}^r
    }
    Ok(CycloNum::zeta_pow(2 * r, exponent).scale(&Rational::from_bigint(dim)))
}

/// Partial Witten sum with certified tail.
#[derive(Debug, Clone)]
pub struct WittenSummary {
    pub value: BigFloat,
    pub tail: BigFloat,
    pub imag_max: BigFloat,
    /// contribution of the trivial weight alone
    pub leading_term: BigFloat,
    /// per-direction decay exponent of the shell sums
    pub decay_exponent: i64,
    pub height: u32,
    pub precision: u32,
}

/// Evaluates the representation sum for exp(fbar_2) paired with P, truncated
/// at the given height, in fixed-point complex arithmetic.
pub fn witten_sum(
    r: u32,
    d: i64,
    g: u32,
    p: &AClassPoly,
    max_height: u32,
    precision: u32,
) -> Result<WittenSummary, WittenError> {
    if r < 2 || g < 2 {
        return Err(WittenError::InvalidInput("need r >= 2 and g >= 2".into()));
    }
    if precision < 64 {
        return Err(WittenError::InvalidInput("precision below 64 bits".into()));
    }
    if num::integer::gcd(r as i64, d.rem_euclid(r as i64)) != 1 {
        return Err(WittenError::InvalidInput(format!("gcd({r}, {d}) != 1")));
    }
    let gbar = (g - 1) as i64;
    let deg_p = match p.weighted_degree() {
        PolyDegree::Zero => return Err(WittenError::InvalidInput("P is zero".into())),
        PolyDegree::Degree(deg) => deg as i64,
    };
    // worst single-direction decay of a term is height^-(2(g-1)(r-1) - deg P);
    // a shell holds O(height^{r-2}) weights
    let decay = 2 * gbar * (r as i64 - 1) - deg_p - (r as i64 - 2);
    if decay < 2 {
        return Err(WittenError::ConvergenceNotGuaranteed { decay });
    }

    let q = p.to_chern_roots();
    let two_pi = BigFloat::pi(precision).add(&BigFloat::pi(precision));

    // C = r^g / ((2 pi)^{r(r-1)(g-1)} prod_{k<r} (k!)^{2(g-1)})
    let mut c_rat = Rational::from_int(r as i64).pow(g as i64);
    let mut fact = BigInt::one();
    for k in 1..r as i64 {
        fact *= BigInt::from(k);
        c_rat = c_rat / Rational::from_bigint(fact.clone()).pow(2 * gbar);
    }
    let pi_power = (r as i64 * (r as i64 - 1) * gbar) as u32;
    let c_float = {
        let mut t = BigFloat::from_int(1, precision);
        for _ in 0..pi_power {
            t = t.div(&two_pi);
        }
        t.scale_rational(&c_rat)
    };

    let sign_d = if (d * (r as i64 - 1)).rem_euclid(2) == 0 { 1 } else { -1 };

    let mut total = BigComplex::zero(precision);
    let mut imag_max = BigFloat::zero(precision);
    let mut leading_term = BigFloat::zero(precision);
    let mut shell_norms: Vec<BigFloat> = Vec::with_capacity(max_height as usize + 1);

    for h in 0..=max_height {
        let mut gaps = vec![0u32; r as usize - 1];
        let mut shell = BigComplex::zero(precision);
        let mut weights: Vec<WeightSU> = Vec::new();
        compositions(h, 0, &mut gaps, &mut |gv| {
            weights.push(WeightSU::from_gaps(r, gv));
        });
        for chi in &weights {
            let mu = chi.rho_shifted();
            let dim = weyl_dimension(chi)?;
            // phase: (-1)^{d(r-1)} exp(-2 pi i d mu_r)
            let arg = -Rational::from_int(d) * mu.last().unwrap();
            let (cos, sin) = BigFloat::sincos_two_pi(&arg, precision);
            let mut phase = BigComplex { re: cos, im: sin };
            if sign_d < 0 {
                phase = phase.neg();
            }
            // Q_P(2 pi i mu)
            let xs: Vec<BigComplex> = mu
                .iter()
                .map(|m| BigComplex {
                    re: BigFloat::zero(precision),
                    im: two_pi.scale_rational(m),
                })
                .collect();
            let qval = q.eval_complex(&xs);
            // dim / dim^{2g-1} = dim^{-2(g-1)}
            let dim_pow = num::pow::pow(dim, 2 * gbar as usize);
            let weight_scale = Rational::from_big(BigInt::one(), dim_pow);
            let term = phase.mul(&qval).mul(&c_float.clone().into_complex()).scale_rational(&weight_scale);
            shell = shell.add(&term);
        }
        total = total.add(&shell);
        imag_max = imag_max.max(&total.im.abs());
        if h == 0 {
            leading_term = shell.re.clone();
        }
        shell_norms.push(shell.re.abs().add(&shell.im.abs()));
    }

    // empirical shell constant near the cutoff: |shell(h)| <= K h^-decay
    let window = 10.min(shell_norms.len());
    let mut k_emp = BigFloat::zero(precision);
    for (h, norm) in shell_norms.iter().enumerate().skip(shell_norms.len() - window) {
        let hh = (h as i64).max(1);
        let scaled = norm.scale_rational(&Rational::from_int(hh).pow(decay));
        k_emp = k_emp.max(&scaled);
    }
    // integral comparison: sum_{h > H} K h^-decay <= K H^{1-decay}/(decay-1),
    // with safety factor 4
    let tail_factor = Rational::from_int(4)
        * Rational::from_int(max_height.max(1) as i64).pow(1 - decay)
        / Rational::from_int(decay - 1);
    let tail = k_emp.scale_rational(&tail_factor);

    if !imag_max.le_pow2(-(precision as i32) / 2) {
        return Err(WittenError::PrecisionExhausted {
            imag: imag_max.to_decimal_string(40),
        });
    }

    Ok(WittenSummary {
        value: total.re,
        tail,
        imag_max,
        leading_term,
        decay_exponent: decay,
        height: max_height,
        precision,
    })
}

trait IntoComplex {
    fn into_complex(self) -> BigComplex;
}

impl IntoComplex for BigFloat {
    fn into_complex(self) -> BigComplex {
        let zero = BigFloat::zero(self.precision());
        BigComplex { re: self, im: zero }
    }
}
