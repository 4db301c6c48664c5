//! Symbolic leading term of Segre-type expansions: the degree-k part of
//! prod_i (1 + h_i)^{-N} as a polynomial in N, with the check that its N^k
//! coefficient is (-1)^k (h_1 + ... + h_s)^k / k!.

use super::mpoly::MPoly;
use crate::exactnum::Rational;

/// A polynomial in N whose coefficients are polynomials in h_1..h_s:
/// `coeffs[m]` is the coefficient of N^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSeriesPoly {
    pub coeffs: Vec<MPoly>,
}

impl NSeriesPoly {
    fn zero(nvars: usize) -> Self {
        NSeriesPoly { coeffs: vec![MPoly::zero(nvars)] }
    }

    fn constant_one(nvars: usize) -> Self {
        NSeriesPoly { coeffs: vec![MPoly::one(nvars)] }
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
    }

    /// Coefficient of N^m.
    pub fn n_coeff(&self, m: usize) -> MPoly {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(self.coeffs[0].nvars()))
    }

    /// Product with truncation of the h-degree at `h_cap`.
    fn mul_capped(&self, other: &Self, h_cap: u32) -> Self {
        let nvars = self.coeffs[0].nvars();
        let mut out = vec![MPoly::zero(nvars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                // drop h-degrees above the cap
                let mut kept = MPoly::zero(nvars);
                for d in 0..=h_cap {
                    kept = kept.add(&prod.homogeneous_component(d));
                }
                out[i + j] = out[i + j].add(&kept);
            }
        }
        let mut r = NSeriesPoly { coeffs: out };
        r.trim();
        r
    }

    /// Restricts every N-coefficient to its h-degree-d homogeneous part.
    fn homogeneous_h_part(&self, d: u32) -> Self {
        let mut r = NSeriesPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.homogeneous_component(d))
                .collect(),
        };
        r.trim();
        r
    }
}

/// The binomial coefficient C(-N, j) as a polynomial in N:
/// prod_{t=0}^{j-1} (-N - t) / j!.
fn binom_minus_n(j: u32) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    for t in 0..j {
        // multiply by (-N - t)
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (m, c) in poly.iter().enumerate() {
            next[m] += &(c * &Rational::from_int(-(t as i64)));
            next[m + 1] += &(-c);
        }
        poly = next;
    }
    let mut fact = Rational::one();
    for t in 1..=j {
        fact = fact * Rational::from_int(t as i64);
    }
    let inv = fact.recip();
    poly.into_iter().map(|c| c * &inv).collect()
}

/// Computes the h-degree-k part of prod_{i=1..s} (1 + h_i)^{-N} symbolically
/// as a polynomial in N with coefficients in Q[h_1..h_s]. Returns that
/// polynomial, its N^k coefficient, and whether the coefficient equals
/// (-1)^k (h_1 + ... + h_s)^k / k!.
pub fn segre_leading_coefficient(s: u32, k: u32) -> (NSeriesPoly, MPoly, bool) {
    assert!(s >= 1);
    let nvars = s as usize;
    let mut product = NSeriesPoly::constant_one(nvars);
    for i in 0..nvars {
        // (1 + h_i)^{-N} truncated at h-degree k
        let mut factor = NSeriesPoly::zero(nvars);
        factor.coeffs.clear();
        for j in 0..=k {
            let bn = binom_minus_n(j);
            let mut e = vec![0u16; nvars];
            e[i] = j as u16;
            for (m, c) in bn.iter().enumerate() {
                while factor.coeffs.len() <= m {
                    factor.coeffs.push(MPoly::zero(nvars));
                }
                factor.coeffs[m] =
                    factor.coeffs[m].add(&MPoly::monomial(nvars, e.clone(), c.clone()));
            }
        }
        product = product.mul_capped(&factor, k);
    }
    let degree_k_part = product.homogeneous_h_part(k);
    let leading = degree_k_part.n_coeff(k as usize);

    // (-1)^k (h_1 + ... + h_s)^k / k!
    let mut h_sum = MPoly::zero(nvars);
    for i in 0..nvars {
        h_sum = h_sum.add(&MPoly::var(nvars, i));
    }
    let mut kfact = Rational::one();
    for t in 1..=k {
        kfact = kfact * Rational::from_int(t as i64);
    }
    let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
    let expect = h_sum.pow(k).scale(&(sign / kfact));

    let ok = leading == expect;
    (degree_k_part, leading, ok)
}
