//! One-variable truncated Laurent/power series with rational coefficients.

use crate::exactnum::Rational;
use num::bigint::BigInt;
use num::One;

/// Coefficients from `min_exp` upward: `coeffs[k]` is the coefficient of the
/// exponent `min_exp + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series1 {
    pub min_exp: i64,
    pub coeffs: Vec<Rational>,
}

impl Series1 {
    pub fn coeff(&self, exp: i64) -> Rational {
        let idx = exp - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    /// Product truncated at exponent `max_exp`.
    pub fn mul(&self, other: &Self, max_exp: i64) -> Self {
        let min = self.min_exp + other.min_exp;
        let len = (max_exp - min + 1).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len && !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Series1 { min_exp: min, coeffs }
    }
}

/// Inverts a unit power series (nonzero constant term) to order `t_max`.
pub fn invert_unit(coeffs: &[Rational], t_max: i64) -> Series1 {
    assert!(!coeffs.is_empty() && !coeffs[0].is_zero(), "not a unit");
    let n = t_max.max(0) as usize;
    let mut inv = vec![Rational::zero(); n + 1];
    let lead = coeffs[0].recip();
    inv[0] = lead.clone();
    for k in 1..=n {
        let mut s = Rational::zero();
        for j in 1..=k.min(coeffs.len() - 1) {
            s += &(&coeffs[j] * &inv[k - j]);
        }
        inv[k] = -(s * &lead);
    }
    Series1 { min_exp: 0, coeffs: inv }
}

/// The Laurent expansion of 1/(e^Y - 1) about Y = 0 through degree `t_max`:
/// Y^-1 - 1/2 + Y/12 - Y^3/720 + ... (odd powers beyond the constant, with
/// Bernoulli-number coefficients).
pub fn reciprocal_expm1_series(t_max: i64) -> Series1 {
    assert!(t_max >= -1);
    // (e^Y - 1)/Y = sum Y^k/(k+1)!
    let order = (t_max + 1).max(0);
    let mut unit = Vec::with_capacity(order as usize + 1);
    let mut fact = BigInt::one();
    for k in 0..=order {
        fact *= BigInt::from(k + 1);
        unit.push(Rational::from_big(BigInt::one(), fact.clone()));
    }
    let inv = invert_unit(&unit, order);
    Series1 { min_exp: -1, coeffs: inv.coeffs }
}

/// The expansion of u/(2 sinh(u/2)) through degree `t_max`:
/// 1 - u^2/24 + 7u^4/5760 - ...
pub fn ahat_factor_series(t_max: i64) -> Series1 {
    assert!(t_max >= 0);
    // 2 sinh(u/2)/u = sum_k u^{2k} / (4^k (2k+1)!)
    let mut unit = vec![Rational::zero(); t_max as usize + 1];
    let mut k = 0i64;
    let mut denom = BigInt::one(); // 4^k (2k+1)!
    loop {
        let idx = 2 * k;
        if idx > t_max {
            break;
        }
        unit[idx as usize] = Rational::from_big(BigInt::one(), denom.clone());
        k += 1;
        denom *= BigInt::from(4) * BigInt::from(2 * k) * BigInt::from(2 * k + 1);
    }
    invert_unit(&unit, t_max)
}

/// exp(c * Y) through degree `t_max`.
pub fn exp_series(c: &Rational, t_max: i64) -> Series1 {
    let n = t_max.max(0) as usize;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::one());
    for k in 1..=n {
        let next = &coeffs[k - 1] * c * &Rational::new(1, k as i64);
        coeffs.push(next);
    }
    Series1 { min_exp: 0, coeffs }
}

/// (1 + t)^k for integer k (negative allowed), truncated at degree `t_max`.
pub fn binomial_series(k: i64, t_max: i64) -> Series1 {
    let n = t_max.max(0) as usize;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::one());
    for j in 1..=n as i64 {
        if k >= 0 && j > k {
            break;
        }
        let next = coeffs.last().unwrap() * &Rational::new(k - j + 1, j);
        coeffs.push(next);
    }
    Series1 { min_exp: 0, coeffs }
}

/// N/((1+t)^N - 1) as a Laurent series in t through degree `t_max`: a simple
/// pole t^-1 times the inverse of sum_{k>=1} C(N,k)/N t^{k-1}.
pub fn pole_factor_series(n: u32, t_max: i64) -> Series1 {
    let order = t_max + 1;
    let mut unit = Vec::with_capacity(order.max(0) as usize + 1);
    // C(N, k+1)/N for k = 0..order
    let mut binom = Rational::from_int(n as i64); // C(N, 1)
    for k in 0..=order {
        unit.push(&binom / &Rational::from_int(n as i64));
        binom = binom * Rational::new(n as i64 - k - 1, k + 2);
    }
    let inv = invert_unit(&unit, order);
    Series1 { min_exp: -1, coeffs: inv.coeffs }
}
