//! The cyclotomic fields Q(zeta_N), represented as Q[x]/Phi_N(x).
//!
//! Elements carry their order N and a coefficient vector of length phi(N),
//! the canonical reduced representative modulo the N-th cyclotomic polynomial.
//! Working modulo Phi_N (rather than x^N - 1) keeps the representation a
//! field, so quotients like 1/(zeta^a - zeta^b) exist whenever the
//! denominator is nonzero.

use super::{BigComplex, ExactError, Rational};
use num::bigint::BigInt;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the N-th cyclotomic polynomial, low degree first, monic.
///
/// Computed by the recursion x^n - 1 = prod_{d | n} Phi_d, dividing out the
/// proper-divisor factors exactly over the integers.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut phis: HashMap<u32, Vec<BigInt>> = HashMap::new();
    for m in 1..=n {
        if n % m != 0 {
            continue;
        }
        // x^m - 1
        let mut poly = vec![BigInt::zero(); m as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[m as usize] = BigInt::one();
        for d in 1..m {
            if m % d == 0 {
                poly = divide_exact(&poly, &phis[&d]);
            }
        }
        phis.insert(m, poly);
    }
    phis.remove(&n).unwrap()
}

/// Exact division of integer polynomials, `b` monic. Panics on a nonzero
/// remainder, which would signal a bug in the divisor chain.
fn divide_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor not monic");
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[i + j] -= &c * bc;
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact division");
    quot
}

// Phi_N with rational coefficients, cached per order: reduction runs on every
// multiplication so recomputing it each time would dominate.
static PHI_CACHE: LazyLock<Mutex<HashMap<u32, Arc<Vec<Rational>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn phi_poly(order: u32) -> Arc<Vec<Rational>> {
    let mut cache = PHI_CACHE.lock().unwrap();
    cache
        .entry(order)
        .or_insert_with(|| {
            Arc::new(
                cyclotomic_polynomial(order)
                    .into_iter()
                    .map(Rational::from_bigint)
                    .collect(),
            )
        })
        .clone()
}

/// An element of Q(zeta_N): a residue class in Q[x]/Phi_N(x), with
/// `coeffs.len() == phi(N)`.
///
/// Arithmetic requires equal orders; mixing orders is a programming error and
/// panics. Serializes as `{"order": N, "coeffs": ["p/q", ...]}`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloNum {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        CycloNum {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// The rational `q` as an element of Q(zeta_N).
    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut z = Self::zero(order);
        if !z.coeffs.is_empty() {
            z.coeffs[0] = q;
        } else {
            // phi(1) = 0 never happens: phi(n) >= 1 for all n >= 1
            unreachable!("phi(order) == 0");
        }
        z
    }

    /// zeta_N^k, exponent taken modulo N.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut rep = vec![Rational::zero(); k + 1];
        rep[k] = Rational::one();
        Self::reduce(order, rep)
    }

    /// Canonical reduction of an arbitrary representative polynomial.
    fn reduce(order: u32, mut rep: Vec<Rational>) -> Self {
        let phi = phi_poly(order);
        let deg = phi.len() - 1;
        while rep.len() > deg {
            let lead = rep.pop().unwrap();
            if !lead.is_zero() {
                let k = rep.len() - deg;
                for (j, pc) in phi.iter().take(deg).enumerate() {
                    let delta = &lead * pc;
                    rep[k + j] -= &delta;
                }
            }
        }
        rep.resize(deg, Rational::zero());
        CycloNum { order, coeffs: rep }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients over the power basis 1, zeta, ..., zeta^(phi(N)-1).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic orders differ: no implicit coercion"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloNum { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycloNum { order: self.order, coeffs }
    }

    pub fn neg(&self) -> Self {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_order(other);
        let n = self.coeffs.len();
        if n == 0 {
            return self.clone();
        }
        let mut rep = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rep[i + j] += &(a * b);
                }
            }
        }
        Self::reduce(self.order, rep)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]:
    /// Phi_N is irreducible, so gcd(a, Phi_N) = 1 for nonzero a.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero { order: self.order });
        }
        let phi = phi_poly(self.order);

        // (r0, s0) starts at (Phi, 0), (r1, s1) at (a, 1); invariant
        // r_i = s_i * a mod Phi throughout the remainder sequence.
        let mut r0: Vec<Rational> = phi.to_vec();
        let mut s0: Vec<Rational> = vec![Rational::zero()];
        let mut r1: Vec<Rational> = self.coeffs.clone();
        let mut s1: Vec<Rational> = vec![Rational::one()];

        fn deg(p: &[Rational]) -> Option<usize> {
            p.iter().rposition(|c| !c.is_zero())
        }
        // p -= c * x^k * q
        fn sub_scaled(p: &mut Vec<Rational>, q: &[Rational], c: &Rational, k: usize) {
            if p.len() < q.len() + k {
                p.resize(q.len() + k, Rational::zero());
            }
            for (j, qc) in q.iter().enumerate() {
                if !qc.is_zero() {
                    let delta = c * qc;
                    p[k + j] -= &delta;
                }
            }
        }

        loop {
            let d1 = deg(&r1).expect("gcd chain hit zero before a unit");
            if d1 == 0 {
                let c = r1[0].recip();
                let coeffs = s1.iter().map(|x| x * &c).collect();
                return Ok(Self::reduce(self.order, coeffs));
            }
            let d0 = match deg(&r0) {
                Some(d0) if d0 >= d1 => d0,
                _ => {
                    std::mem::swap(&mut r0, &mut r1);
                    std::mem::swap(&mut s0, &mut s1);
                    continue;
                }
            };
            let c = &r0[d0] / &r1[d1];
            sub_scaled(&mut r0, &r1, &c, d0 - d1);
            sub_scaled(&mut s0, &s1, &c, d0 - d1);
        }
    }

    /// Extracts the rational value of a constant element; errors with the
    /// first offending coefficient otherwise.
    pub fn to_rational(&self) -> Result<Rational, ExactError> {
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                return Err(ExactError::NotRational {
                    index: i,
                    coeff: c.clone(),
                });
            }
        }
        Ok(self.coeffs[0].clone())
    }

    /// The Galois automorphism zeta -> zeta^k, gcd(k, N) = 1.
    pub fn galois_conjugate(&self, k: u32) -> Self {
        assert_eq!(
            num::integer::gcd(k % self.order, self.order) % self.order,
            1 % self.order,
            "k must be coprime to the order"
        );
        let n = self.order as usize;
        let mut rep = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                rep[(i * k as usize) % n] += c;
            }
        }
        Self::reduce(self.order, rep)
    }

    /// Numeric value of the representative polynomial at exp(2 pi i / N),
    /// computed with `precision` mantissa bits (>= 64).
    pub fn complex_eval(&self, precision: u32) -> BigComplex {
        assert!(precision >= 64, "precision below 64 bits");
        let n = self.order;
        let mut acc = BigComplex::zero(precision);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let root = BigComplex::root_of_unity(k as i64, n as i64, precision);
            acc = acc.add(&root.scale_rational(c));
        }
        acc
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum(order {}; {:?})", self.order, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn phi_values() {
        for (n, expect) in [(1, 1), (2, 1), (4, 2), (6, 2), (12, 4), (30, 8), (48, 16)] {
            assert_eq!(euler_phi(n), expect);
        }
    }

    #[test]
    fn cyclotomic_small() {
        // x - 1 and x^2 + 1
        assert_eq!(
            cyclotomic_polynomial(1),
            vec![BigInt::from(-1), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_polynomial(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
    }

    #[test]
    fn cyclotomic_12_by_divisor_product() {
        // Phi_12 must be the exact quotient of x^12 - 1 by prod_{k | 12, k < 12} Phi_k,
        // monic of degree phi(12) = 4, and coprime to each x^k - 1 for proper k | 12.
        let phi12 = cyclotomic_polynomial(12);
        assert_eq!(phi12.len(), 5);
        assert!(phi12[4].is_one());

        let mut product = vec![BigInt::from(1)];
        for k in [1u32, 2, 3, 4, 6, 12] {
            let f = if k == 12 {
                phi12.clone()
            } else {
                cyclotomic_polynomial(k)
            };
            let mut next = vec![BigInt::zero(); product.len() + f.len() - 1];
            for (i, a) in product.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            product = next;
        }
        let mut x12 = vec![BigInt::zero(); 13];
        x12[0] = BigInt::from(-1);
        x12[12] = BigInt::from(1);
        assert_eq!(product, x12);

        // zeta_12^k != 1 for proper divisors k: Phi_12 does not divide x^k - 1
        for k in [1u32, 2, 3, 4, 6] {
            let z = CycloNum::zeta_pow(12, k as i64);
            assert_ne!(z, CycloNum::one(12));
        }
    }

    #[test]
    fn gaussian_inverse() {
        // (1 + i)^{-1} = (1 - i)/2 in Q(zeta_4)
        let a = CycloNum::one(4).add(&CycloNum::zeta_pow(4, 1));
        let inv = a.inverse().unwrap();
        let mut expect = CycloNum::from_rational(4, q(1, 2));
        expect = expect.sub(&CycloNum::zeta_pow(4, 1).scale(&q(1, 2)));
        assert_eq!(inv, expect);
        assert_eq!(a.mul(&inv), CycloNum::one(4));
    }

    #[test]
    fn root_of_unity_inverse() {
        // zeta_3^{-1} = zeta_3^2
        let z = CycloNum::zeta_pow(3, 1);
        assert_eq!(z.inverse().unwrap(), CycloNum::zeta_pow(3, 2));
    }

    #[test]
    fn inverse_of_one_minus_zeta5() {
        let a = CycloNum::one(5).sub(&CycloNum::zeta_pow(5, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), CycloNum::one(5));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(
            CycloNum::zero(6).inverse(),
            Err(ExactError::DivisionByZero { order: 6 })
        );
    }

    #[test]
    fn to_rational_cases() {
        let c = CycloNum::from_rational(7, q(7, 3));
        assert_eq!(c.to_rational().unwrap(), q(7, 3));

        // zeta_4 + zeta_4^3 = i - i = 0
        let s = CycloNum::zeta_pow(4, 1).add(&CycloNum::zeta_pow(4, 3));
        assert_eq!(s.to_rational().unwrap(), Rational::zero());

        let z = CycloNum::zeta_pow(3, 1);
        assert!(matches!(
            z.to_rational(),
            Err(ExactError::NotRational { .. })
        ));
    }

    #[test]
    fn galois_sum_is_rational() {
        // symmetrize an arbitrary element over the Galois group
        let a = CycloNum::zeta_pow(12, 1)
            .scale(&q(3, 7))
            .add(&CycloNum::zeta_pow(12, 5).scale(&q(-2, 1)))
            .add(&CycloNum::from_rational(12, q(1, 3)));
        let mut sum = CycloNum::zero(12);
        for k in 1..12 {
            if num::integer::gcd(k, 12u32) == 1 {
                sum = sum.add(&a.galois_conjugate(k));
            }
        }
        assert!(sum.to_rational().is_ok());
    }

    #[test]
    fn complex_eval_basics() {
        let tol = BigFloatTol::new(128);
        // zeta_4 = i
        let z = CycloNum::zeta_pow(4, 1).complex_eval(128);
        assert!(tol.close(&z.re, &Rational::zero()));
        assert!(tol.close(&z.im, &Rational::one()));
        // constants at order 1
        let c = CycloNum::from_rational(1, q(5, 2)).complex_eval(128);
        assert!(tol.close(&c.re, &q(5, 2)));
        // zeta_8 + zeta_8^7 = 2 cos(pi/4) = sqrt 2
        let s = CycloNum::zeta_pow(8, 1)
            .add(&CycloNum::zeta_pow(8, 7))
            .complex_eval(128);
        let sqrt2_sq = s.re.mul(&s.re);
        assert!(tol.close(&sqrt2_sq, &Rational::from_int(2)));
        assert!(tol.close(&s.im, &Rational::zero()));
    }

    struct BigFloatTol {
        prec: u32,
    }
    impl BigFloatTol {
        fn new(prec: u32) -> Self {
            BigFloatTol { prec }
        }
        fn close(&self, x: &super::super::BigFloat, q: &Rational) -> bool {
            let diff = x.sub(&super::super::BigFloat::from_rational(q, self.prec));
            diff.abs().le_pow2(-60)
        }
    }
}
