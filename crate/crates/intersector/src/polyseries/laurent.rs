//! Iterated truncated Laurent series: the field of expansion for iterated
//! residues.
//!
//! A context fixes an ordered variable list v_1, ..., v_m and a truncation
//! bound T. The expansion regime makes each later variable infinitesimal
//! relative to every earlier one, which is exactly the regime in which an
//! iterated residue "from right to left, keeping all but one variable fixed"
//! is computed: the innermost (last) variable is the first residue taken.
//!
//! A monomial v^gamma tends to zero in this regime precisely when every
//! suffix sum of gamma is nonnegative and some suffix sum is positive; a
//! polynomial with a term dominating all others in this order has a
//! well-defined geometric expansion of its reciprocal (the cone expansion).

use super::series::Series1;
use super::PolyError;
use crate::exactnum::Rational;
use std::collections::BTreeMap;
use std::fmt;

/// Ordered variable list plus truncation bound. Later variables are
/// infinitesimal relative to earlier ones.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesContext {
    vars: Vec<String>,
    trunc: i64,
}

impl SeriesContext {
    pub fn new(vars: Vec<String>, trunc: i64) -> Self {
        assert!(trunc >= 0, "truncation bound must be nonnegative");
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable {v}");
        }
        SeriesContext { vars, trunc }
    }

    /// Y_1, ..., Y_m with the given truncation.
    pub fn with_prefix(prefix: &str, m: usize, trunc: i64) -> Self {
        Self::new((1..=m).map(|i| format!("{prefix}{i}")).collect(), trunc)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    fn shorten(&self) -> Self {
        let mut vars = self.vars.clone();
        vars.pop();
        SeriesContext { vars, trunc: self.trunc }
    }
}

impl fmt::Debug for SeriesContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeriesContext({:?}, T={})", self.vars, self.trunc)
    }
}

fn total_degree(e: &[i32]) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

/// True when v^gamma is infinitesimal or bounded in the cone: all suffix
/// sums nonnegative.
fn cone_nonneg(gamma: &[i32]) -> bool {
    let mut s = 0i64;
    for &g in gamma.iter().rev() {
        s += g as i64;
        if s < 0 {
            return false;
        }
    }
    true
}

/// A truncated Laurent series over a context: exponent vectors (negatives
/// allowed) with nonzero rational coefficients, every stored term of total
/// degree at most the context bound.
#[derive(Clone, PartialEq, Eq)]
pub struct IterLaurent {
    ctx: SeriesContext,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl IterLaurent {
    pub fn zero(ctx: &SeriesContext) -> Self {
        IterLaurent { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &SeriesContext, c: Rational) -> Self {
        let mut s = Self::zero(ctx);
        if !c.is_zero() {
            s.terms.insert(vec![0; ctx.nvars()], c);
        }
        s
    }

    pub fn one(ctx: &SeriesContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn monomial(ctx: &SeriesContext, exps: Vec<i32>, c: Rational) -> Self {
        assert_eq!(exps.len(), ctx.nvars());
        let mut s = Self::zero(ctx);
        if !c.is_zero() && total_degree(&exps) <= ctx.trunc {
            s.terms.insert(exps, c);
        }
        s
    }

    /// Lifts a one-variable series onto context variable `var`.
    pub fn from_series1(ctx: &SeriesContext, var: usize, s1: &Series1) -> Self {
        assert!(var < ctx.nvars());
        let mut s = Self::zero(ctx);
        for (k, c) in s1.coeffs.iter().enumerate() {
            let exp = s1.min_exp + k as i64;
            if c.is_zero() || exp > ctx.trunc {
                continue;
            }
            let mut e = vec![0i32; ctx.nvars()];
            e[var] = i32::try_from(exp).unwrap();
            s.terms.insert(e, c.clone());
        }
        s
    }

    /// A linear form sum_i coeff_i * v_i as a series.
    pub fn from_linear_form(ctx: &SeriesContext, form: &[(usize, Rational)]) -> Self {
        let mut s = Self::zero(ctx);
        for (var, c) in form {
            assert!(*var < ctx.nvars());
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0i32; ctx.nvars()];
            e[*var] = 1;
            let entry = s.terms.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    fn check_ctx(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "series context mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ctx(other);
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

    pub fn neg(&self) -> Self {
        IterLaurent {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ctx);
        }
        IterLaurent {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        self.mul_capped(other, self.ctx.trunc)
    }

    fn mul_capped(&self, other: &Self, cap: i64) -> Self {
        let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if total_degree(&e) > cap {
                    continue;
                }
                use std::collections::btree_map::Entry;
                match terms.entry(e) {
                    Entry::Vacant(v) => {
                        let c = ca * cb;
                        if !c.is_zero() {
                            v.insert(c);
                        }
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += &(ca * cb);
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
        }
        IterLaurent { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The cone expansion of `self^power` for a series with a dominant term.
    ///
    /// Writes self = c * v^m0 * (1 + w), where v^m0 dominates every other
    /// term in the cone order, and expands (1 + w)^power geometrically to
    /// order T. Every monomial of w is cone-infinitesimal, so w-powers have
    /// nonnegative total degree and the truncation is consistent.
    pub fn cone_power(&self, power: i32) -> Result<Self, PolyError> {
        if self.terms.is_empty() {
            return Err(PolyError::ZeroForm);
        }
        let m0 = self
            .terms
            .keys()
            .find(|cand| {
                self.terms.keys().all(|other| {
                    let gamma: Vec<i32> =
                        other.iter().zip(cand.iter()).map(|(o, c)| o - c).collect();
                    cone_nonneg(&gamma)
                })
            })
            .cloned()
            .ok_or(PolyError::NoDominantMonomial)?;
        let c0 = self.terms[&m0].clone();

        let mut w = Self::zero(&self.ctx);
        for (e, c) in &self.terms {
            if *e == m0 {
                continue;
            }
            let rel: Vec<i32> = e.iter().zip(&m0).map(|(x, y)| x - y).collect();
            w.terms.insert(rel, c / &c0);
        }

        // final exponents get p*m0 added, so the inner cap compensates
        let inner_cap = self.ctx.trunc - (power as i64) * total_degree(&m0);
        let mut acc = Self::one(&self.ctx);
        let mut wj = Self::one(&self.ctx);
        let mut coef = Rational::one();
        for j in 1..=self.ctx.trunc {
            wj = wj.mul_capped(&w, inner_cap);
            if wj.is_zero() {
                break;
            }
            coef = coef * Rational::new(power as i64 - (j - 1), j);
            acc = acc.add(&wj.scale(&coef));
        }

        // multiply by c0^power * v^{power * m0} and truncate
        let c0p = c0.pow(power as i64);
        let mut terms = BTreeMap::new();
        for (e, c) in &acc.terms {
            let ee: Vec<i32> = e
                .iter()
                .zip(&m0)
                .map(|(x, y)| x + power * y)
                .collect();
            if total_degree(&ee) <= self.ctx.trunc {
                terms.insert(ee, c * &c0p);
            }
        }
        Ok(IterLaurent { ctx: self.ctx.clone(), terms })
    }

    /// The coefficient of `var`^-1, where `var` must be the innermost (last)
    /// variable of the context; the result lives over the shortened context.
    pub fn inner_residue(&self, var: &str) -> Result<Self, PolyError> {
        match self.ctx.vars.last() {
            Some(last) if last == var => {}
            _ => {
                return Err(PolyError::WrongVariableOrder { var: var.to_owned() });
            }
        }
        let ctx = self.ctx.shorten();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if *e.last().unwrap() == -1 {
                terms.insert(e[..e.len() - 1].to_vec(), c.clone());
            }
        }
        Ok(IterLaurent { ctx, terms })
    }

    /// Iterated residue over all variables, right to left: the coefficient
    /// of v_1^-1 ... v_m^-1.
    pub fn iterated_residue(&self) -> Rational {
        let mut cur = self.clone();
        while cur.ctx.nvars() > 0 {
            let var = cur.ctx.vars.last().unwrap().clone();
            cur = cur.inner_residue(&var).expect("innermost variable");
        }
        cur.coeff(&[])
    }

    /// Evaluates a polynomial at the given series values (variable i of the
    /// polynomial replaced by `values[i]`).
    pub fn eval_mpoly(p: &super::MPoly, values: &[IterLaurent]) -> Self {
        assert_eq!(values.len(), p.nvars());
        assert!(!values.is_empty());
        let ctx = values[0].context().clone();
        let mut out = Self::zero(&ctx);
        for (e, c) in p.terms() {
            let mut term = Self::constant(&ctx, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&values[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitutes the series `form` into a one-variable power series
    /// (min_exp >= 0): sum_k s1[k] * form^k.
    pub fn series_in_form(s1: &Series1, form: &IterLaurent) -> Self {
        assert!(s1.min_exp >= 0, "substitution needs a power series");
        let ctx = form.context().clone();
        let mut acc = Self::zero(&ctx);
        let mut pw = Self::one(&ctx);
        for (k, c) in s1.coeffs.iter().enumerate() {
            let exp = s1.min_exp + k as i64;
            if exp > 0 {
                pw = pw.mul(form);
                if pw.is_zero() {
                    break;
                }
            }
            if !c.is_zero() {
                acc = acc.add(&pw.scale(c));
            }
        }
        // handle min_exp > 1 offsets (unused in practice but kept correct)
        if s1.min_exp > 1 {
            let mut shift = Self::one(&ctx);
            for _ in 0..(s1.min_exp - 1) {
                shift = shift.mul(form);
            }
            acc = acc.mul(&shift);
        }
        acc
    }
}

/// The cone expansion of a nonzero linear form raised to `-power`.
pub fn cone_reciprocal(
    form: &[(usize, Rational)],
    power: u32,
    ctx: &SeriesContext,
) -> Result<IterLaurent, PolyError> {
    let f = IterLaurent::from_linear_form(ctx, form);
    if f.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    f.cone_power(-(power as i32))
}

impl fmt::Debug for IterLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| format!("{}^{}", self.ctx.vars[i], x))
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c} {}", vars.join(" "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyseries::series::reciprocal_expm1_series;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ctx2(t: i64) -> SeriesContext {
        SeriesContext::with_prefix("Y", 2, t)
    }

    #[test]
    fn cone_reciprocal_simple_pole() {
        // 1/(Y1+Y2) at T=2: Y1^-1 - Y2 Y1^-2 + Y2^2 Y1^-3
        let ctx = ctx2(2);
        let s = cone_reciprocal(&[(0, Rational::one()), (1, Rational::one())], 1, &ctx).unwrap();
        assert_eq!(s.num_terms(), 3);
        assert_eq!(s.coeff(&[-1, 0]), q(1, 1));
        assert_eq!(s.coeff(&[-2, 1]), q(-1, 1));
        assert_eq!(s.coeff(&[-3, 2]), q(1, 1));
    }

    #[test]
    fn cone_reciprocal_single_variable() {
        let ctx = SeriesContext::with_prefix("Y", 1, 0);
        let s = cone_reciprocal(&[(0, Rational::one())], 2, &ctx).unwrap();
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&[-2]), q(1, 1));
    }

    #[test]
    fn cone_reciprocal_double_pole() {
        // 1/(Y1+Y2)^2 at T=2: Y1^-2 - 2 Y2 Y1^-3 + 3 Y2^2 Y1^-4
        let ctx = ctx2(2);
        let s = cone_reciprocal(&[(0, Rational::one()), (1, Rational::one())], 2, &ctx).unwrap();
        assert_eq!(s.num_terms(), 3);
        assert_eq!(s.coeff(&[-2, 0]), q(1, 1));
        assert_eq!(s.coeff(&[-3, 1]), q(-2, 1));
        assert_eq!(s.coeff(&[-4, 2]), q(3, 1));
    }

    #[test]
    fn cone_reciprocal_rejects_zero() {
        let ctx = ctx2(2);
        assert_eq!(
            cone_reciprocal(&[], 1, &ctx).unwrap_err(),
            PolyError::ZeroForm
        );
    }

    #[test]
    fn cone_times_form_power_is_one() {
        let trunc = 6;
        let ctx = SeriesContext::with_prefix("Y", 3, trunc);
        for (form, p) in [
            (vec![(0, q(2, 1)), (2, q(-1, 3))], 1u32),
            (vec![(0, q(1, 1)), (1, q(1, 1)), (2, q(1, 1))], 2),
            (vec![(1, q(5, 7)), (2, q(1, 2))], 3),
        ] {
            let inv = cone_reciprocal(&form, p, &ctx).unwrap();
            let f = IterLaurent::from_linear_form(&ctx, &form);
            let prod = inv.mul(&f.pow(p));
            assert_eq!(prod.coeff(&[0, 0, 0]), Rational::one());
            // the leftover terms lie beyond the expansion order: their
            // positive exponent part exceeds the truncation bound
            for (e, _) in prod.terms() {
                if e == &[0, 0, 0] {
                    continue;
                }
                let pos: i64 = e.iter().map(|&x| (x.max(0)) as i64).sum();
                assert!(pos > trunc, "unexpected low-order term {e:?}");
            }
        }
    }

    #[test]
    fn inner_residue_examples() {
        let ctx = ctx2(2);
        // Y2^-1 Y1^-2 -> Y1^-2
        let s = IterLaurent::monomial(&ctx, vec![-2, -1], Rational::one());
        let r = s.inner_residue("Y2").unwrap();
        assert_eq!(r.coeff(&[-2]), Rational::one());
        assert_eq!(r.num_terms(), 1);

        // no pole -> 0
        let s = IterLaurent::monomial(&ctx, vec![3, 0], q(5, 2));
        assert!(s.inner_residue("Y2").unwrap().is_zero());

        // cone expansion of 1/(Y1+Y2) has no Y2^-1 term
        let s = cone_reciprocal(&[(0, Rational::one()), (1, Rational::one())], 1, &ctx).unwrap();
        assert!(s.inner_residue("Y2").unwrap().is_zero());

        // wrong variable order
        let s = IterLaurent::one(&ctx);
        assert!(matches!(
            s.inner_residue("Y1"),
            Err(PolyError::WrongVariableOrder { .. })
        ));
    }

    /// d/dvar as a test-only helper.
    fn derivative(s: &IterLaurent, var: usize) -> IterLaurent {
        let mut out = IterLaurent::zero(s.context());
        for (e, c) in s.terms() {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out = out.add(&IterLaurent::monomial(
                s.context(),
                ne,
                c * &Rational::from_int(e[var] as i64),
            ));
        }
        out
    }

    #[test]
    fn residue_annihilates_derivatives_and_is_linear() {
        let ctx = ctx2(5);
        // F = (Y1^2 + 3 Y2) * Y2^-3, a polynomial times a single pole
        let poly = IterLaurent::monomial(&ctx, vec![2, 0], Rational::one())
            .add(&IterLaurent::monomial(&ctx, vec![0, 1], q(3, 1)));
        let f = poly.mul(&IterLaurent::monomial(&ctx, vec![0, -3], Rational::one()));
        let df = derivative(&f, 1);
        assert!(df.inner_residue("Y2").unwrap().is_zero());

        // linearity
        let g = IterLaurent::monomial(&ctx, vec![1, -1], q(7, 2));
        let lhs = f.add(&g.scale(&q(2, 3))).inner_residue("Y2").unwrap();
        let rhs = f
            .inner_residue("Y2")
            .unwrap()
            .add(&g.inner_residue("Y2").unwrap().scale(&q(2, 3)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn iterated_residue_via_expm1() {
        // Res_Y [ 1/(e^Y - 1) * Y ] = coefficient of Y^-1 in (Y^-1 - 1/2 + ...) * Y = -1/2...
        // actually (Y^-1 - 1/2 + Y/12) * Y = 1 - Y/2 + ..., residue 0;
        // Res_Y [ 1/(e^Y-1) ] = 1.
        let ctx = SeriesContext::with_prefix("Y", 1, 4);
        let s = IterLaurent::from_series1(&ctx, 0, &reciprocal_expm1_series(4));
        assert_eq!(s.iterated_residue(), Rational::one());
        let y = IterLaurent::monomial(&ctx, vec![1], Rational::one());
        assert_eq!(s.mul(&y).iterated_residue(), Rational::zero());
    }
}
