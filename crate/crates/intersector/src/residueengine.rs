//! Iterated-residue evaluation: Quot-scheme intersections, top pairings on
//! the moduli space of bundles, and Verlinde Euler characteristics.
//!
//! The moduli-space pairing of a polynomial P in the normalized abar classes
//! against exp(fbar_2) is
//!
//!     (-1)^{(g-1) C(r,2)} r^{g-1} Res_{Y_1=0} ... Res_{Y_{r-1}=0}
//!        prod_i 1/(e^{Y_i}-1) * exp(L) * Q_P(X) / prod_{i<j} (X_i-X_j)^{2(g-1)}
//!
//! over the variable system X_1+...+X_r = 0, Y_i = X_i - X_{i+1}, with
//! L = sum_i {d i / r} Y_i built from fractional parts. Residues are taken
//! right to left; the iterated-Laurent cone (later variables smaller)
//! realizes "keeping all but one fixed". Truncation is certified by
//! recomputation at T+3: disagreement raises `TruncationUnstable` instead of
//! returning a silently wrong value.
//!
//! The Quot-scheme route substitutes y_i = 1 + t_i into the form
//!
//!     prod_i dy_i/y_i * N/(y_i^N - 1) * y_i^{m_i} * R(y_1...y_{r-1}, ..., 1)
//!
//! and assembles u (-1)^{r-1} N^{r(g-1)+1} / r times the iterated residue,
//! the normalization under which it equals the unordered root-of-unity sum.

use crate::exactnum::Rational;
use crate::polyseries::{
    ahat_factor_series, exp_series, pole_factor_series, reciprocal_expm1_series, AClassPoly,
    IterLaurent, MPoly, PolyDegree, PolyError, SeriesContext,
};
use crate::quotvi::{EvalMethod, EvalResult, QuotProblem};
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("rank and degree are not coprime: gcd({r}, {d}) != 1")]
    NotCoprime { r: u32, d: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("residue path not applicable: {0}")]
    ResiduePathInvalid(String),
    #[error("truncation unstable: values at T and T+3 disagree ({at_t} vs {at_t3})")]
    TruncationUnstable { at_t: Rational, at_t3: Rational },
    #[error("engine bug: expected an integer, got {0}")]
    NonIntegerResult(Rational),
    #[error("series kernel error: {0}")]
    Poly(#[from] PolyError),
}

/// The linear form sum_i {d i / r} Y_i of fractional parts; the exponential
/// weight in the moduli-space residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LForm {
    rank: u32,
    degree: i64,
    coeffs: Vec<Rational>,
}

impl LForm {
    pub fn build(r: u32, d: i64) -> Result<Self, ResidueError> {
        if r < 2 {
            return Err(ResidueError::InvalidInput(format!("rank {r} < 2")));
        }
        if num::integer::gcd(r as i64, d.rem_euclid(r as i64)) != 1 {
            return Err(ResidueError::NotCoprime { r, d });
        }
        let coeffs: Vec<Rational> = (1..r as i64)
            .map(|i| Rational::new(d * i, r as i64).fract_nonneg())
            .collect();
        // coprimality guarantees every fractional part is strictly inside (0,1)
        debug_assert!(coeffs.iter().all(|c| !c.is_zero()));
        Ok(LForm { rank: r, degree: d, coeffs })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

/// The variable system X_1..X_r over Y_1..Y_{r-1}: X_1+...+X_r = 0 and
/// Y_i = X_i - X_{i+1}, so X_i = sum_{j>=i} Y_j - (1/r) sum_j j Y_j and
/// X_i - X_j = Y_i + ... + Y_{j-1} for i < j.
#[derive(Debug, Clone)]
pub struct XYSystem {
    rank: u32,
    x_exprs: Vec<Vec<Rational>>,
}

impl XYSystem {
    pub fn new(r: u32) -> Self {
        assert!(r >= 2);
        let m = r as usize - 1;
        let mut x_exprs = Vec::with_capacity(r as usize);
        for i in 1..=r as usize {
            let mut v = vec![Rational::zero(); m];
            for (j, item) in v.iter_mut().enumerate() {
                if j + 1 >= i {
                    *item += &Rational::one();
                }
                *item -= &Rational::new(j as i64 + 1, r as i64);
            }
            x_exprs.push(v);
        }
        XYSystem { rank: r, x_exprs }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Coefficients of X_i (1-based) over Y_1..Y_{r-1}.
    pub fn x_form(&self, i: u32) -> &[Rational] {
        &self.x_exprs[i as usize - 1]
    }

    /// X_i - X_j for i < j as a sparse linear form: Y_i + ... + Y_{j-1}.
    pub fn difference_form(&self, i: u32, j: u32) -> Vec<(usize, Rational)> {
        assert!(i < j && j <= self.rank);
        (i..j).map(|k| (k as usize - 1, Rational::one())).collect()
    }
}

/// Multiplies the standard moduli-residue factors onto `numer` and extracts
/// the iterated residue.
fn theorem_residue(
    r: u32,
    d: i64,
    g: u32,
    ctx: &SeriesContext,
    numer: &IterLaurent,
) -> Result<Rational, ResidueError> {
    let gbar = (g - 1) as i64;
    let m = r as usize - 1;
    let trunc = ctx.trunc();
    let lform = LForm::build(r, d)?;
    let xy = XYSystem::new(r);

    let mut f = numer.clone();
    for i in 0..m {
        f = f.mul(&IterLaurent::from_series1(ctx, i, &reciprocal_expm1_series(trunc)));
        f = f.mul(&IterLaurent::from_series1(
            ctx,
            i,
            &exp_series(&lform.coeffs()[i], trunc),
        ));
    }
    for i in 1..=r {
        for j in (i + 1)..=r {
            let form = IterLaurent::from_linear_form(ctx, &xy.difference_form(i, j));
            f = f.mul(&form.cone_power(-2 * gbar as i32)?);
        }
    }
    Ok(f.iterated_residue())
}

fn stable_pair(
    t0: i64,
    eval: impl Fn(i64) -> Result<Rational, ResidueError>,
) -> Result<Rational, ResidueError> {
    let a = eval(t0)?;
    let b = eval(t0 + 3)?;
    if a != b {
        return Err(ResidueError::TruncationUnstable { at_t: a, at_t3: b });
    }
    Ok(a)
}

fn moduli_prefactor(r: u32, g: u32) -> Rational {
    let gbar = (g - 1) as i64;
    let sign = if (gbar * (r as i64) * (r as i64 - 1) / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    };
    Rational::from_int(sign) * Rational::from_int(r as i64).pow(gbar)
}

fn check_moduli_inputs(r: u32, d: i64, g: u32) -> Result<(), ResidueError> {
    if r < 2 {
        return Err(ResidueError::InvalidInput(format!("rank {r} < 2")));
    }
    if g < 2 {
        return Err(ResidueError::InvalidInput(format!("genus {g} < 2")));
    }
    if num::integer::gcd(r as i64, d.rem_euclid(r as i64)) != 1 {
        return Err(ResidueError::NotCoprime { r, d });
    }
    Ok(())
}

/// The pairing of exp(fbar_2) with P over the moduli space of bundles of
/// rank r and degree d on a genus-g curve (fixed determinant).
pub fn moduli_pairing(r: u32, d: i64, g: u32, p: &AClassPoly) -> Result<Rational, ResidueError> {
    check_moduli_inputs(r, d, g)?;
    let gbar = (g - 1) as i64;
    let deg_p = match p.weighted_degree() {
        PolyDegree::Zero => return Ok(Rational::zero()),
        PolyDegree::Degree(deg) => deg as i64,
    };
    // degrees beyond r(r-1)(g-1) leave the integrand pole-free and the
    // pairing vanishes by degree selection; no upper gate is needed
    let q = p.to_chern_roots();
    let t0 = r as i64 * (r as i64 - 1) * gbar + deg_p + r as i64;
    let residue = stable_pair(t0, |t| {
        let ctx = SeriesContext::with_prefix("Y", r as usize - 1, t);
        let numer = chern_numerator(&q, r, &ctx);
        theorem_residue(r, d, g, &ctx, &numer)
    })?;
    Ok(moduli_prefactor(r, g) * residue)
}

/// Q as a series in the Y variables: substitute the X linear forms.
fn chern_numerator(q: &MPoly, r: u32, ctx: &SeriesContext) -> IterLaurent {
    let xy = XYSystem::new(r);
    let xs: Vec<IterLaurent> = (1..=r)
        .map(|i| {
            let form: Vec<(usize, Rational)> = xy
                .x_form(i)
                .iter()
                .enumerate()
                .map(|(k, c)| (k, c.clone()))
                .collect();
            IterLaurent::from_linear_form(ctx, &form)
        })
        .collect();
    IterLaurent::eval_mpoly(q, &xs)
}

/// The pairing of exp(c * fbar_2) with a polynomial, by degree selection:
/// a weighted-homogeneous component of degree k pairs with the
/// complementary power of fbar_2, contributing c^{dim - k} times its
/// exp(fbar_2) pairing.
pub fn moduli_exp_pairing(
    r: u32,
    d: i64,
    g: u32,
    c: &Rational,
    series: &AClassPoly,
) -> Result<Rational, ResidueError> {
    check_moduli_inputs(r, d, g)?;
    let gbar = (g - 1) as i64;
    let dim = (r as i64 * r as i64 - 1) * gbar;
    let mut total = Rational::zero();
    for (k, comp) in series.graded_components() {
        if k as i64 > dim {
            return Err(ResidueError::InvalidInput(format!(
                "component of weighted degree {k} exceeds the moduli dimension {dim}"
            )));
        }
        let pairing = moduli_pairing(r, d, g, &comp)?;
        total += &(c.pow(dim - k as i64) * pairing);
    }
    Ok(total)
}

/// The A-hat product over the root differences, assembled directly in the
/// Y variables and split into homogeneous components by total degree.
fn ahat_components(r: u32, g: u32, dim: i64) -> BTreeMap<i64, Vec<(Vec<i32>, Rational)>> {
    let gbar = g - 1;
    let ctx = SeriesContext::with_prefix("Y", r as usize - 1, dim);
    let xy = XYSystem::new(r);
    let factor = ahat_factor_series(dim);
    let mut product = IterLaurent::one(&ctx);
    for i in 1..=r {
        for j in (i + 1)..=r {
            let form = IterLaurent::from_linear_form(&ctx, &xy.difference_form(i, j));
            let sub = IterLaurent::series_in_form(&factor, &form);
            product = product.mul(&sub.pow(2 * gbar));
        }
    }
    let mut comps: BTreeMap<i64, Vec<(Vec<i32>, Rational)>> = BTreeMap::new();
    for (e, c) in product.terms() {
        let k: i64 = e.iter().map(|&x| x as i64).sum();
        comps.entry(k).or_default().push((e.clone(), c.clone()));
    }
    comps
}

/// The Verlinde Euler characteristic chi(L^s): the pairing of
/// exp((s+1) r fbar_2) with the A-hat class, an integer by construction.
///
/// Degree selection folds into one residue: the component of degree k
/// pairs against the complementary power of the exponential, so the
/// numerator is sum_k c^{dim - k} Ahat_k with c = (s+1) r.
pub fn verlinde_chi(r: u32, d: i64, g: u32, s: u32) -> Result<Rational, ResidueError> {
    check_moduli_inputs(r, d, g)?;
    let gbar = (g - 1) as i64;
    let dim = (r as i64 * r as i64 - 1) * gbar;
    let c = Rational::from_int((s as i64 + 1) * r as i64);
    let comps = ahat_components(r, g, dim);
    let t0 = r as i64 * (r as i64 - 1) * gbar + dim + r as i64;
    let residue = stable_pair(t0, |t| {
        let ctx = SeriesContext::with_prefix("Y", r as usize - 1, t);
        let mut numer = IterLaurent::zero(&ctx);
        for (k, terms) in &comps {
            let scale = c.pow(dim - k);
            for (e, coeff) in terms {
                numer = numer.add(&IterLaurent::monomial(&ctx, e.clone(), coeff * &scale));
            }
        }
        theorem_residue(r, d, g, &ctx, &numer)
    })?;
    let total = moduli_prefactor(r, g) * residue;
    if !total.is_integer() {
        return Err(ResidueError::NonIntegerResult(total));
    }
    Ok(total)
}

/// Evaluates a Quot-scheme problem by the iterated-residue route. Requires
/// the validity certificates; returns exactly the root-of-unity value.
pub fn quot_residue(problem: &QuotProblem) -> Result<EvalResult, ResidueError> {
    let start = Instant::now();
    let validity = problem.validity_check();
    if !validity.applicable {
        let reasons: Vec<String> = validity
            .items
            .iter()
            .filter(|it| !it.ok)
            .map(|it| {
                format!(
                    "variable {} (m = {}): zero margin {}, infinity margin {}",
                    it.variable, it.reduced_exp, it.zero_margin, it.infinity_margin
                )
            })
            .collect();
        return Err(ResidueError::ResiduePathInvalid(reasons.join("; ")));
    }

    let r = problem.rank();
    let g = problem.genus();
    let n = problem.sections();
    let gbar = (g - 1) as i64;
    let deg = problem.a_poly().weighted_degree().value_or_zero() as i64
        + problem.s_poly().weighted_degree().value_or_zero() as i64;
    let t0 = r as i64 * (r as i64 - 1) * gbar + deg + r as i64;

    let residue = stable_pair(t0, |t| quot_integrand_residue(problem, t))?;

    let u = Rational::from_int(problem.sign());
    let sign_r = if (r as i64 - 1) % 2 == 0 { 1 } else { -1 };
    let value = u
        * Rational::from_int(sign_r)
        * Rational::from_int(n as i64).pow(r as i64 * gbar + 1)
        * residue
        / Rational::from_int(r as i64);
    Ok(EvalResult {
        value,
        method: EvalMethod::QuotResidue,
        fingerprint: problem.fingerprint("quot-residue"),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// The iterated residue at y_i = 1 of the Quot one-form, via y_i = 1 + t_i.
fn quot_integrand_residue(problem: &QuotProblem, trunc: i64) -> Result<Rational, ResidueError> {
    let r = problem.rank() as usize;
    let n = problem.sections();
    let gbar = (problem.genus() - 1) as i64;
    let m = r - 1;
    let ctx = SeriesContext::with_prefix("t", m, trunc);

    // x_i(t) = prod_{k >= i} (1 + t_k), x_r = 1
    let xs: Vec<IterLaurent> = (0..r)
        .map(|i| {
            let mut acc = IterLaurent::one(&ctx);
            for k in i..m {
                let mut e = vec![0i32; m];
                e[k] = 1;
                let lin = IterLaurent::one(&ctx)
                    .add(&IterLaurent::monomial(&ctx, e, Rational::one()));
                acc = acc.mul(&lin);
            }
            acc
        })
        .collect();

    let (q_chern, s_chern) = problem.chern_numerator();
    let mut f = IterLaurent::eval_mpoly(q_chern, &xs);
    if !problem.s_poly().is_one() {
        f = f.mul(&IterLaurent::eval_mpoly(s_chern, &xs));
    }

    // per-variable factors: 1/y * N/(y^N - 1) * y^{m_i} at y = 1 + t
    for i in 0..m {
        f = f.mul(&IterLaurent::from_series1(&ctx, i, &pole_factor_series(n, trunc)));
        let mi = problem.reduced_exps()[i];
        // (1 + t)^{m_i - 1}; the validity gate guarantees m_i >= 1
        f = f.mul(&IterLaurent::from_series1(
            &ctx,
            i,
            &crate::polyseries::binomial_series(mi - 1, trunc),
        ));
    }

    // (x_i - x_j)^{-2 gbar}, cone-expanded with t_{r-1} smallest
    for i in 0..r {
        for j in (i + 1)..r {
            let diff = xs[i].add(&xs[j].neg());
            f = f.mul(&diff.cone_power(-2 * gbar as i32)?);
        }
    }
    Ok(f.iterated_residue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyseries::SPoly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn l_form_fractional_parts() {
        assert_eq!(LForm::build(2, 1).unwrap().coeffs(), &[q(1, 2)]);
        assert_eq!(LForm::build(3, 1).unwrap().coeffs(), &[q(1, 3), q(2, 3)]);
        assert_eq!(LForm::build(3, 2).unwrap().coeffs(), &[q(2, 3), q(1, 3)]);
        assert!(matches!(
            LForm::build(2, 4),
            Err(ResidueError::NotCoprime { .. })
        ));
    }

    #[test]
    fn xy_system_relations() {
        for r in [2u32, 3, 4] {
            let xy = XYSystem::new(r);
            let m = r as usize - 1;
            // sum of X_i is zero
            for k in 0..m {
                let s: Rational = (1..=r)
                    .map(|i| xy.x_form(i)[k].clone())
                    .fold(Rational::zero(), |a, b| a + b);
                assert!(s.is_zero());
            }
            // X_i - X_{i+1} = Y_i
            for i in 1..r {
                for k in 0..m {
                    let diff = &xy.x_form(i)[k] - &xy.x_form(i + 1)[k];
                    let expect = if k + 1 == i as usize {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    assert_eq!(diff, expect);
                }
            }
        }
    }

    #[test]
    fn pairing_rank2_volume() {
        let v = moduli_pairing(2, 1, 2, &AClassPoly::one(2)).unwrap();
        assert_eq!(v, q(1, 12));
    }

    #[test]
    fn pairing_rank2_abar2() {
        let v = moduli_pairing(2, 1, 2, &AClassPoly::abar(2, 2)).unwrap();
        assert_eq!(v, q(1, 2));
    }

    #[test]
    fn pairing_rank2_abar2_squared_vanishes() {
        let v = moduli_pairing(2, 1, 2, &AClassPoly::abar(2, 2).pow(2)).unwrap();
        assert_eq!(v, Rational::zero());
    }

    #[test]
    fn pairing_higher_genus_and_rank() {
        assert_eq!(moduli_pairing(2, 1, 3, &AClassPoly::one(2)).unwrap(), q(7, 1440));
        assert_eq!(
            moduli_pairing(3, 1, 2, &AClassPoly::one(3)).unwrap(),
            q(53, 1632960)
        );
    }

    #[test]
    fn pairing_depends_on_d_mod_r() {
        let a = moduli_pairing(3, 1, 2, &AClassPoly::abar(3, 2)).unwrap();
        let b = moduli_pairing(3, 4, 2, &AClassPoly::abar(3, 2)).unwrap();
        assert_eq!(a, b);
        let a = moduli_pairing(2, 1, 3, &AClassPoly::one(2)).unwrap();
        let b = moduli_pairing(2, 7, 3, &AClassPoly::one(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exp_pairing_examples() {
        let one = AClassPoly::one(2);
        // c = 1 agrees with the plain pairing
        assert_eq!(
            moduli_exp_pairing(2, 1, 2, &Rational::one(), &one).unwrap(),
            q(1, 12)
        );
        // c = 2: 2^3 * 1/12
        assert_eq!(
            moduli_exp_pairing(2, 1, 2, &Rational::from_int(2), &one).unwrap(),
            q(2, 3)
        );
        // c = 0: positive power of zero
        assert_eq!(
            moduli_exp_pairing(2, 1, 2, &Rational::zero(), &one).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn verlinde_rank2_small() {
        assert_eq!(verlinde_chi(2, 1, 2, 0).unwrap(), Rational::from_int(1));
        assert_eq!(verlinde_chi(2, 1, 2, 1).unwrap(), Rational::from_int(6));
        assert_eq!(verlinde_chi(2, 1, 2, 2).unwrap(), Rational::from_int(19));
    }

    #[test]
    fn quot_residue_pinned_24() {
        let pr = QuotProblem::build(2, 5, 2, 4, AClassPoly::one(2), None).unwrap();
        let res = quot_residue(&pr).unwrap();
        assert_eq!(res.value, Rational::from_int(24));
        assert_eq!(res.method, EvalMethod::QuotResidue);
    }

    #[test]
    fn quot_residue_matches_vi_rank2() {
        for (d, g, n, p, expect) in [
            (3i64, 2u32, 6u32, AClassPoly::one(2), Some(171i64)),
            (3, 2, 4, AClassPoly::abar(2, 2), Some(8)),
            (3, 2, 6, AClassPoly::abar(2, 2).pow(2), Some(0)),
            (3, 3, 6, AClassPoly::abar(2, 2), Some(1539)),
        ] {
            let problem = QuotProblem::build(2, d, g, n, p, None).unwrap();
            let vi = problem.vi_evaluate().unwrap().value;
            let res = quot_residue(&problem).unwrap().value;
            assert_eq!(vi, res, "d={d} g={g} N={n}");
            if let Some(v) = expect {
                assert_eq!(vi, Rational::from_int(v));
            }
        }
    }

    #[test]
    fn quot_residue_matches_vi_rank3() {
        // a residue-valid rank-3 case: m = [6, 5] at N = 7
        let pr = QuotProblem::build(3, 2, 2, 7, AClassPoly::abar(3, 2), None).unwrap();
        assert_eq!(pr.reduced_exps(), &[6, 5]);
        assert!(pr.validity_check().applicable);
        let vi = pr.vi_evaluate().unwrap().value;
        let res = quot_residue(&pr).unwrap().value;
        assert_eq!(vi, res);
    }

    #[test]
    fn quot_residue_rejects_invalid() {
        let pr = QuotProblem::build(2, 5, 2, 2, AClassPoly::one(2), None).unwrap();
        assert!(matches!(
            quot_residue(&pr),
            Err(ResidueError::ResiduePathInvalid(_))
        ));
    }

    #[test]
    fn quot_residue_with_s_factor() {
        let pr =
            QuotProblem::build(2, 3, 2, 5, AClassPoly::one(2), Some(SPoly::a(2, 1))).unwrap();
        if pr.validity_check().applicable {
            let vi = pr.vi_evaluate().unwrap().value;
            let res = quot_residue(&pr).unwrap().value;
            assert_eq!(vi, res);
        }
    }

    #[test]
    fn vanishing_above_pontryagin_degree() {
        // pairings vanish for weighted degree > r(r-1)(g-1), up to the dimension
        let cases: Vec<(u32, AClassPoly)> = vec![
            (2, AClassPoly::abar(2, 2).pow(2)),                     // degree 4 > 2
            (3, AClassPoly::abar(3, 2).pow(2).mul(&AClassPoly::abar(3, 3))), // degree 7 > 6
            (3, AClassPoly::abar(3, 2).pow(4)),                     // degree 8 > 6
            (3, AClassPoly::abar(3, 2).mul(&AClassPoly::abar(3, 3).pow(2))), // degree 8
        ];
        for (r, p) in cases {
            let v = moduli_pairing(r, 1, 2, &p).unwrap();
            assert_eq!(v, Rational::zero(), "rank {r}, P = {p:?}");
        }
    }
}
