//! Polynomials in the normalized a-bar classes and in the plain a classes,
//! with weighted degrees and translation into Chern-root polynomials.
//!
//! The class abar_i (and a_i) carries weight i. A polynomial in
//! abar_2..abar_r becomes a symmetric, translation-invariant polynomial in
//! the Chern roots x_1..x_r by substituting the elementary symmetric
//! functions of the normalized roots xbar_i = x_i - (x_1+...+x_r)/r; a
//! polynomial in a_1..a_r substitutes the plain elementary symmetric
//! functions.

use super::mpoly::{elementary_symmetric_of, MPoly};
use crate::exactnum::Rational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Weighted degree with a dedicated marker for the zero polynomial, keeping
/// sentinel values out of degree bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyDegree {
    /// Degree of the zero polynomial (conventionally minus infinity).
    Zero,
    Degree(u32),
}

impl PolyDegree {
    /// The numeric degree, treating the zero polynomial as degree 0; callers
    /// that must distinguish match on the enum instead.
    pub fn value_or_zero(&self) -> u32 {
        match self {
            PolyDegree::Zero => 0,
            PolyDegree::Degree(d) => *d,
        }
    }
}

/// A polynomial in the normalized classes abar_2, ..., abar_r. Exponent
/// vectors have length r-1, entry i corresponding to abar_{i+2}.
#[derive(Clone, PartialEq, Eq)]
pub struct AClassPoly {
    rank: u32,
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl AClassPoly {
    pub fn zero(rank: u32) -> Self {
        assert!(rank >= 2);
        AClassPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: u32) -> Self {
        Self::constant(rank, Rational::one())
    }

    pub fn constant(rank: u32, c: Rational) -> Self {
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank as usize - 1], c);
        }
        p
    }

    /// The single class abar_i (2 <= i <= r).
    pub fn abar(rank: u32, i: u32) -> Self {
        assert!((2..=rank).contains(&i));
        let mut e = vec![0u16; rank as usize - 1];
        e[(i - 2) as usize] = 1;
        let mut p = Self::zero(rank);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn monomial(rank: u32, exps: Vec<u16>, c: Rational) -> Self {
        assert_eq!(exps.len(), rank as usize - 1);
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.rank);
        }
        AClassPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = Self::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(Rational::zero);
                *entry += &(ca * cb);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.rank);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn term_weight(e: &[u16]) -> u32 {
        e.iter()
            .enumerate()
            .map(|(i, &x)| (i as u32 + 2) * x as u32)
            .sum()
    }

    /// Weighted degree: max over terms of sum_i i * e_i, abar_i carrying
    /// weight i.
    pub fn weighted_degree(&self) -> PolyDegree {
        match self.terms.keys().map(|e| Self::term_weight(e)).max() {
            None => PolyDegree::Zero,
            Some(d) => PolyDegree::Degree(d),
        }
    }

    /// Whether all terms share one weighted degree (vacuously true for 0).
    pub fn is_weighted_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| Self::term_weight(e));
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|w| w == first),
        }
    }

    /// Splits into weighted-homogeneous components, keyed by degree.
    pub fn graded_components(&self) -> BTreeMap<u32, AClassPoly> {
        let mut out: BTreeMap<u32, AClassPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let w = Self::term_weight(e);
            out.entry(w)
                .or_insert_with(|| AClassPoly::zero(self.rank))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// The Chern-root polynomial Q(x_1,...,x_r) obtained by substituting the
    /// elementary symmetric functions of the normalized roots
    /// xbar_i = x_i - (x_1+...+x_r)/r. The result is symmetric and invariant
    /// under the simultaneous translation x_i -> x_i + c.
    pub fn to_chern_roots(&self) -> MPoly {
        let r = self.rank as usize;
        let mean = {
            let mut s = MPoly::zero(r);
            for i in 0..r {
                s = s.add(&MPoly::var(r, i));
            }
            s.scale(&Rational::new(1, r as i64))
        };
        let xbars: Vec<MPoly> = (0..r)
            .map(|i| MPoly::var(r, i).sub(&mean))
            .collect();
        let sym: Vec<MPoly> = (2..=r)
            .map(|k| elementary_symmetric_of(&xbars, k))
            .collect();
        let mut out = MPoly::zero(r);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(r, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&sym[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Canonical text form for fingerprints: sorted terms, reduced
    /// coefficients.
    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("[{}]{}", es.join(","), c)
            })
            .collect();
        format!("rank{}:{}", self.rank, parts.join(";"))
    }

    pub fn from_file(pf: &PolyFile) -> Result<Self, String> {
        let rank = pf.rank;
        if rank < 2 {
            return Err("rank must be at least 2".into());
        }
        let expect: Vec<String> = (2..=rank).map(|i| format!("a{i}")).collect();
        if pf.vars != expect {
            return Err(format!(
                "variable list {:?} does not match expected {:?} for rank {rank}",
                pf.vars, expect
            ));
        }
        let mut p = AClassPoly::zero(rank);
        for t in &pf.terms {
            if t.exps.len() != rank as usize - 1 {
                return Err(format!(
                    "term exponent vector {:?} has wrong length (expected {})",
                    t.exps,
                    rank - 1
                ));
            }
            let coeff: Rational = t.coeff.parse().map_err(|e| format!("{e}"))?;
            p = p.add(&AClassPoly::monomial(rank, t.exps.clone(), coeff));
        }
        Ok(p)
    }

    pub fn to_file(&self) -> PolyFile {
        PolyFile {
            rank: self.rank,
            vars: (2..=self.rank).map(|i| format!("a{i}")).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| PolyTerm { exps: e.clone(), coeff: c.to_string() })
                .collect(),
        }
    }
}

impl fmt::Debug for AClassPoly {
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
                            format!("abar{}", i + 2)
                        } else {
                            format!("abar{}^{}", i + 2, x)
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

/// A polynomial in the plain classes a_1, ..., a_r (exponent vectors of
/// length r, a_i with weight i). Used for the extra factor in vanishing
/// statements; translates by a_i -> s_i(x).
#[derive(Clone, PartialEq, Eq)]
pub struct SPoly {
    rank: u32,
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl SPoly {
    pub fn one(rank: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; rank as usize], Rational::one());
        SPoly { rank, terms }
    }

    /// The single class a_i (1 <= i <= r).
    pub fn a(rank: u32, i: u32) -> Self {
        assert!((1..=rank).contains(&i));
        let mut e = vec![0u16; rank as usize];
        e[(i - 1) as usize] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rational::one());
        SPoly { rank, terms }
    }

    pub fn monomial(rank: u32, exps: Vec<u16>, c: Rational) -> Self {
        assert_eq!(exps.len(), rank as usize);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        SPoly { rank, terms }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = SPoly { rank: self.rank, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(Rational::zero);
                *entry += &(ca * cb);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn weighted_degree(&self) -> PolyDegree {
        match self.terms.keys().map(|e| Self::term_weight(e)).max() {
            None => PolyDegree::Zero,
            Some(d) => PolyDegree::Degree(d),
        }
    }

    fn term_weight(e: &[u16]) -> u32 {
        e.iter()
            .enumerate()
            .map(|(i, &x)| (i as u32 + 1) * x as u32)
            .sum()
    }

    /// Whether all terms share one weighted degree.
    pub fn is_weighted_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| Self::term_weight(e));
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|w| w == first),
        }
    }

    /// Substitutes a_i -> s_i(x_1,...,x_r), the plain (un-normalized)
    /// elementary symmetric functions of the Chern roots.
    pub fn to_chern_roots(&self) -> MPoly {
        let r = self.rank as usize;
        let xs: Vec<MPoly> = (0..r).map(|i| MPoly::var(r, i)).collect();
        let sym: Vec<MPoly> = (1..=r)
            .map(|k| elementary_symmetric_of(&xs, k))
            .collect();
        let mut out = MPoly::zero(r);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(r, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&sym[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("[{}]{}", es.join(","), c)
            })
            .collect();
        format!("srank{}:{}", self.rank, parts.join(";"))
    }

    pub fn from_file(pf: &PolyFile) -> Result<Self, String> {
        let rank = pf.rank;
        if rank < 2 {
            return Err("rank must be at least 2".into());
        }
        let expect: Vec<String> = (1..=rank).map(|i| format!("a{i}")).collect();
        if pf.vars != expect {
            return Err(format!(
                "variable list {:?} does not match expected {:?} for rank {rank}",
                pf.vars, expect
            ));
        }
        let mut p = SPoly { rank, terms: BTreeMap::new() };
        for t in &pf.terms {
            if t.exps.len() != rank as usize {
                return Err(format!(
                    "term exponent vector {:?} has wrong length (expected {rank})",
                    t.exps
                ));
            }
            let coeff: Rational = t.coeff.parse().map_err(|e| format!("{e}"))?;
            p = SPoly {
                rank,
                terms: {
                    let m = SPoly::monomial(rank, t.exps.clone(), coeff);
                    let mut terms = p.terms;
                    for (e, c) in m.terms {
                        let entry = terms.entry(e).or_insert_with(Rational::zero);
                        *entry += &c;
                    }
                    terms.retain(|_, c| !c.is_zero());
                    terms
                },
            };
        }
        Ok(p)
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*a^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// On-disk polynomial format:
/// `{"rank": r, "vars": ["a2",...], "terms": [{"exps": [...], "coeff": "p/q"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyFile {
    pub rank: u32,
    pub vars: Vec<String>,
    pub terms: Vec<PolyTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exps: Vec<u16>,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_degrees() {
        assert_eq!(AClassPoly::one(2).weighted_degree(), PolyDegree::Degree(0));
        assert_eq!(AClassPoly::zero(2).weighted_degree(), PolyDegree::Zero);
        let ab2sq = AClassPoly::abar(2, 2).pow(2);
        assert_eq!(ab2sq.weighted_degree(), PolyDegree::Degree(4));
        let p = AClassPoly::abar(3, 2).mul(&AClassPoly::abar(3, 3));
        assert_eq!(p.weighted_degree(), PolyDegree::Degree(5));
        assert_eq!(SPoly::a(2, 1).weighted_degree(), PolyDegree::Degree(1));
    }

    #[test]
    fn chern_translation_rank2() {
        // abar_2 -> -(x1-x2)^2/4
        let q = AClassPoly::abar(2, 2).to_chern_roots();
        let x1 = MPoly::var(2, 0);
        let x2 = MPoly::var(2, 1);
        let expect = x1.sub(&x2).pow(2).scale(&Rational::new(-1, 4));
        assert_eq!(q, expect);
    }

    #[test]
    fn chern_translation_rank3() {
        // abar_2 at r=3 -> s_2(x) - s_1(x)^2/3
        let q = AClassPoly::abar(3, 2).to_chern_roots();
        let s2 = super::super::mpoly::elementary_symmetric(2, 3).unwrap();
        let s1 = super::super::mpoly::elementary_symmetric(1, 3).unwrap();
        let expect = s2.sub(&s1.pow(2).scale(&Rational::new(1, 3)));
        assert_eq!(q, expect);
    }

    #[test]
    fn constant_translation() {
        let q = AClassPoly::one(4).to_chern_roots();
        assert_eq!(q, MPoly::one(4));
    }

    #[test]
    fn translation_invariance_symbolic() {
        // substitute x_i -> x_i + c with an extra variable c and check the
        // result is independent of c
        for rank in [2u32, 3] {
            let p = AClassPoly::abar(rank, 2)
                .add(&AClassPoly::abar(rank, rank).scale(&Rational::new(3, 5)));
            let q = p.to_chern_roots();
            let n = rank as usize;
            // embed into n+1 variables, where variable n is c
            let shifted: Vec<MPoly> = (0..n)
                .map(|i| MPoly::var(n + 1, i).add(&MPoly::var(n + 1, n)))
                .collect();
            let qs = q.compose(&shifted);
            let plain: Vec<MPoly> = (0..n).map(|i| MPoly::var(n + 1, i)).collect();
            let q_embedded = q.compose(&plain);
            assert_eq!(qs, q_embedded);
        }
    }

    #[test]
    fn file_roundtrip() {
        let p = AClassPoly::abar(3, 2)
            .pow(2)
            .add(&AClassPoly::abar(3, 3).scale(&Rational::new(-7, 3)));
        let pf = p.to_file();
        let json = serde_json::to_string(&pf).unwrap();
        let back: PolyFile = serde_json::from_str(&json).unwrap();
        assert_eq!(AClassPoly::from_file(&back).unwrap(), p);
    }

    #[test]
    fn file_validation() {
        let bad = PolyFile {
            rank: 3,
            vars: vec!["a2".into()],
            terms: vec![],
        };
        assert!(AClassPoly::from_file(&bad).is_err());
        let bad_coeff = PolyFile {
            rank: 2,
            vars: vec!["a2".into()],
            terms: vec![PolyTerm { exps: vec![1], coeff: "x".into() }],
        };
        assert!(AClassPoly::from_file(&bad_coeff).is_err());
    }
}
