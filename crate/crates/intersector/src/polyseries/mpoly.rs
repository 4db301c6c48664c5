//! Dense-exponent multivariate polynomials over the rationals.

use super::PolyError;
use crate::exactnum::{BigComplex, CycloNum, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// A multivariate polynomial: a map from exponent vectors (all of length
/// `nvars`) to nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable x_i (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u16>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, e: Vec<u16>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    /// The homogeneous component of the given total degree.
    pub fn homogeneous_component(&self, degree: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `polys[i]` for variable i.
    pub fn compose(&self, polys: &[MPoly]) -> Self {
        assert_eq!(polys.len(), self.nvars);
        let n_out = polys.first().map_or(0, MPoly::nvars);
        assert!(polys.iter().all(|p| p.nvars() == n_out));
        let mut out = Self::zero(n_out);
        for (e, c) in &self.terms {
            let mut term = Self::constant(n_out, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&polys[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Applies a permutation to the variables: exponent of variable i moves
    /// to position perm[i].
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0u16; self.nvars];
                    for (i, &x) in e.iter().enumerate() {
                        ne[perm[i]] = x;
                    }
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluation at cyclotomic points (all of equal order).
    pub fn eval_cyclo(&self, xs: &[CycloNum]) -> CycloNum {
        assert_eq!(xs.len(), self.nvars);
        let order = xs[0].order();
        // power tables up to the max exponent per variable
        let mut pows: Vec<Vec<CycloNum>> = Vec::with_capacity(self.nvars);
        for (i, x) in xs.iter().enumerate() {
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut tab = Vec::with_capacity(maxe as usize + 1);
            tab.push(CycloNum::one(order));
            for _ in 0..maxe {
                tab.push(tab.last().unwrap().mul(x));
            }
            pows.push(tab);
        }
        let mut acc = CycloNum::zero(order);
        for (e, c) in &self.terms {
            let mut t = CycloNum::from_rational(order, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t.mul(&pows[i][exp as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluation at complex points.
    pub fn eval_complex(&self, xs: &[BigComplex]) -> BigComplex {
        assert_eq!(xs.len(), self.nvars);
        let prec = xs[0].precision();
        let mut acc = BigComplex::zero(prec);
        for (e, c) in &self.terms {
            let mut t = BigComplex::from_rational(c, prec);
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t.mul(&xs[i].powu(exp as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// The elementary symmetric polynomial e_k in n variables.
pub fn elementary_symmetric(k: i64, n: usize) -> Result<MPoly, PolyError> {
    if k < 0 || k as usize > n {
        return Err(PolyError::OutOfRange { k, n });
    }
    let k = k as usize;
    // DP over prod_i (1 + x_i t), tracking coefficients of t^0..t^k
    let mut layers = vec![MPoly::zero(n); k + 1];
    layers[0] = MPoly::one(n);
    for i in 0..n {
        let xi = MPoly::var(n, i);
        for j in (1..=k).rev() {
            let lifted = layers[j - 1].mul(&xi);
            layers[j] = layers[j].add(&lifted);
        }
    }
    Ok(layers.pop().unwrap())
}

/// Elementary symmetric e_k of the given list of polynomial values.
pub fn elementary_symmetric_of(values: &[MPoly], k: usize) -> MPoly {
    let n_out = values.first().map_or(0, MPoly::nvars);
    let mut layers = vec![MPoly::zero(n_out); k + 1];
    layers[0] = MPoly::one(n_out);
    for v in values {
        for j in (1..=k).rev() {
            let lifted = layers[j - 1].mul(v);
            layers[j] = layers[j].add(&lifted);
        }
    }
    layers.pop().unwrap()
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| {
                        if x == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, x)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_symmetric_small() {
        assert_eq!(elementary_symmetric(0, 3).unwrap(), MPoly::one(3));
        // e_2(x1,x2,x3) = x1x2 + x1x3 + x2x3
        let e2 = elementary_symmetric(2, 3).unwrap();
        let mut expect = MPoly::zero(3);
        expect = expect.add(&MPoly::monomial(3, vec![1, 1, 0], Rational::one()));
        expect = expect.add(&MPoly::monomial(3, vec![1, 0, 1], Rational::one()));
        expect = expect.add(&MPoly::monomial(3, vec![0, 1, 1], Rational::one()));
        assert_eq!(e2, expect);
        // e_3 = x1x2x3
        let e3 = elementary_symmetric(3, 3).unwrap();
        assert_eq!(e3, MPoly::monomial(3, vec![1, 1, 1], Rational::one()));
        assert!(elementary_symmetric(4, 3).is_err());
        assert!(elementary_symmetric(-1, 3).is_err());
    }

    #[test]
    fn compose_and_permute() {
        // p = x1^2 - x2, substitute x1 -> y1+y2, x2 -> y1*y2
        let p = MPoly::monomial(2, vec![2, 0], Rational::one())
            .add(&MPoly::monomial(2, vec![0, 1], -Rational::one()));
        let y1 = MPoly::var(2, 0);
        let y2 = MPoly::var(2, 1);
        let sum = y1.add(&y2);
        let prod = y1.mul(&y2);
        let q = p.compose(&[sum, prod]);
        // (y1+y2)^2 - y1 y2 = y1^2 + y1 y2 + y2^2
        let mut expect = MPoly::monomial(2, vec![2, 0], Rational::one());
        expect = expect.add(&MPoly::monomial(2, vec![1, 1], Rational::one()));
        expect = expect.add(&MPoly::monomial(2, vec![0, 2], Rational::one()));
        assert_eq!(q, expect);

        let swapped = q.permute_vars(&[1, 0]);
        assert_eq!(swapped, q); // symmetric
    }

    #[test]
    fn eval_cyclo_matches_direct() {
        // x1*x2 + 3 at (zeta_5, zeta_5^4) = 1 + 3 = 4
        let p = MPoly::monomial(2, vec![1, 1], Rational::one())
            .add(&MPoly::constant(2, Rational::from_int(3)));
        let v = p.eval_cyclo(&[CycloNum::zeta_pow(5, 1), CycloNum::zeta_pow(5, 4)]);
        assert_eq!(v.to_rational().unwrap(), Rational::from_int(4));
    }
}
