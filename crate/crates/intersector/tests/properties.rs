//! Property tests for the exact kernels: arithmetic laws, symmetry and
//! translation invariance of the Chern-root translation, summand symmetries
//! of the root-of-unity sum, and Galois rationality.

use intersector::exactnum::{BigFloat, CycloNum, Rational};
use intersector::polyseries::{AClassPoly, MPoly, SPoly};
use intersector::quotvi::QuotProblem;
use proptest::prelude::*;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rational::new(n, d))
}

fn cyclo_strategy(orders: &'static [u32]) -> impl Strategy<Value = CycloNum> {
    (0..orders.len(), proptest::collection::vec(rational_strategy(), 1..6)).prop_map(
        move |(oi, coeffs)| {
            let order = orders[oi];
            let mut acc = CycloNum::zero(order);
            for (k, c) in coeffs.into_iter().enumerate() {
                acc = acc.add(&CycloNum::zeta_pow(order, k as i64).scale(&c));
            }
            acc
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(
        (an, ad) in (-100i64..=100, 1i64..=40),
        (bn, bd) in (-100i64..=100, 1i64..=40),
    ) {
        // (a/b + c/d) (b d) = a d + c b, exactly
        let a = Rational::new(an, ad);
        let b = Rational::new(bn, bd);
        let lhs = (&a + &b) * Rational::from_int(ad * bd);
        let rhs = Rational::from_int(an * bd + bn * ad);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclo_inverse_is_involutive(a in cyclo_strategy(&[3, 4, 5, 8, 12])) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(inv.inverse().unwrap(), a.clone());
        prop_assert_eq!(a.mul(&inv), CycloNum::one(a.order()));
    }

    #[test]
    fn cyclo_complex_eval_is_multiplicative(
        a in cyclo_strategy(&[5, 8]),
        b in cyclo_strategy(&[5, 8]),
    ) {
        prop_assume!(a.order() == b.order());
        let prod = a.mul(&b).complex_eval(128);
        let sep = a.complex_eval(128).mul(&b.complex_eval(128));
        prop_assert!(prod.re.sub(&sep.re).abs().le_pow2(-64));
        prop_assert!(prod.im.sub(&sep.im).abs().le_pow2(-64));
    }

    #[test]
    fn galois_symmetrization_is_rational(a in cyclo_strategy(&[5, 8, 12])) {
        let n = a.order();
        let mut sum = CycloNum::zero(n);
        for k in 1..n {
            if num::integer::gcd(k, n) == 1 {
                sum = sum.add(&a.galois_conjugate(k));
            }
        }
        prop_assert!(sum.to_rational().is_ok());
    }
}

fn aclass_strategy(rank: u32) -> impl Strategy<Value = AClassPoly> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0u16..3, rank as usize - 1),
            rational_strategy(),
        ),
        1..4,
    )
    .prop_map(move |terms| {
        let mut p = AClassPoly::zero(rank);
        for (exps, c) in terms {
            p = p.add(&AClassPoly::monomial(rank, exps, c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chern_translation_is_symmetric(rank in 2u32..=4, p in aclass_strategy(3)) {
        // regenerate at the sampled rank
        let p = resize_rank(&p, rank);
        let q = p.to_chern_roots();
        let n = rank as usize;
        for i in 0..n - 1 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            prop_assert_eq!(q.permute_vars(&perm), q.clone());
        }
    }

    #[test]
    fn chern_translation_is_translation_invariant(rank in 2u32..=3, p in aclass_strategy(3)) {
        let p = resize_rank(&p, rank);
        let q = p.to_chern_roots();
        let n = rank as usize;
        // substitute x_i -> x_i + c with c a fresh variable
        let shifted: Vec<MPoly> = (0..n)
            .map(|i| MPoly::var(n + 1, i).add(&MPoly::var(n + 1, n)))
            .collect();
        let plain: Vec<MPoly> = (0..n).map(|i| MPoly::var(n + 1, i)).collect();
        prop_assert_eq!(q.compose(&shifted), q.compose(&plain));
    }

    #[test]
    fn chern_translation_preserves_weighted_degree(
        rank in 2u32..=4,
        exps in proptest::collection::vec(0u16..3, 3),
        c in rational_strategy(),
    ) {
        // a single monomial is weighted-homogeneous
        prop_assume!(!c.is_zero());
        let exps: Vec<u16> = exps.into_iter().take(rank as usize - 1).collect();
        prop_assume!(exps.len() == rank as usize - 1);
        prop_assume!(exps.iter().any(|&e| e > 0));
        let p = AClassPoly::monomial(rank, exps.clone(), c);
        let weight: u32 = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u32 + 2) * e as u32)
            .sum();
        let q = p.to_chern_roots();
        prop_assert_eq!(q.total_degree(), Some(weight));
    }
}

fn resize_rank(p: &AClassPoly, rank: u32) -> AClassPoly {
    let mut out = AClassPoly::zero(rank);
    for (exps, c) in p.terms() {
        let mut e = exps.clone();
        e.resize(rank as usize - 1, 0);
        out = out.add(&AClassPoly::monomial(rank, e, c.clone()));
    }
    if out.is_zero() {
        AClassPoly::one(rank)
    } else {
        out
    }
}

/// Admissible sample problems reused by the summand properties.
fn sample_problems() -> Vec<QuotProblem> {
    vec![
        QuotProblem::build(2, 3, 2, 4, AClassPoly::one(2), None).unwrap(),
        QuotProblem::build(2, 3, 2, 6, AClassPoly::abar(2, 2), None).unwrap(),
        QuotProblem::build(2, 3, 3, 6, AClassPoly::abar(2, 2), None).unwrap(),
        QuotProblem::build(3, 2, 2, 7, AClassPoly::abar(3, 2), None).unwrap(),
        QuotProblem::build(2, 3, 2, 5, AClassPoly::one(2), Some(SPoly::a(2, 1))).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn summand_is_subset_symmetric_and_rescaling_invariant(
        which in 0usize..5,
        pick in proptest::collection::vec(0u32..100, 3),
        shift in 0u32..20,
    ) {
        let problems = sample_problems();
        let pr = &problems[which];
        let n = pr.sections();
        let r = pr.rank() as usize;
        // choose r distinct exponents from the picks
        let mut exps: Vec<u32> = Vec::new();
        let mut k = 0;
        while exps.len() < r {
            let cand = (pick[exps.len() % pick.len()] + k) % n;
            if !exps.contains(&cand) {
                exps.push(cand);
            }
            k += 1;
        }
        let base = pr.vi_summand(&exps);
        // permutation invariance
        let mut rev = exps.clone();
        rev.reverse();
        prop_assert_eq!(&pr.vi_summand(&rev), &base);
        // rescaling by a common root of unity
        let shifted: Vec<u32> = exps.iter().map(|&e| (e + shift % n) % n).collect();
        let distinct = (1..shifted.len()).all(|i| !shifted[..i].contains(&shifted[i]));
        prop_assume!(distinct);
        prop_assert_eq!(&pr.vi_summand(&shifted), &base);
    }
}

#[test]
fn full_sums_are_rational_and_match_numeric() {
    for pr in sample_problems() {
        let exact = pr.vi_evaluate().expect("Galois rationality");
        let numeric = pr.vi_evaluate_numeric(128);
        let diff = numeric
            .value
            .sub(&BigFloat::from_rational(&exact.value, 128));
        assert!(diff.abs().le_pow2(-64), "gap at {exact:?}");
        assert!(numeric.imag_max.le_pow2(-64));
    }
}

#[test]
fn d_periodicity_on_the_small_grid() {
    // N = 4: P = S = 1; values agree for d and d + 2
    let a = QuotProblem::build(2, 3, 2, 4, AClassPoly::one(2), None)
        .unwrap()
        .vi_evaluate()
        .unwrap()
        .value;
    let b = QuotProblem::build(2, 5, 2, 4, AClassPoly::one(2), None)
        .unwrap()
        .vi_evaluate()
        .unwrap()
        .value;
    assert_eq!(a, b);
    // N = 5 admits no problem with P = S = 1 (parity); the nearest
    // admissible family uses S = a_1
    assert!(QuotProblem::build(2, 3, 2, 5, AClassPoly::one(2), None).is_err());
    let a = QuotProblem::build(2, 3, 2, 5, AClassPoly::one(2), Some(SPoly::a(2, 1)))
        .unwrap()
        .vi_evaluate()
        .unwrap()
        .value;
    let b = QuotProblem::build(2, 5, 2, 5, AClassPoly::one(2), Some(SPoly::a(2, 1)))
        .unwrap()
        .vi_evaluate()
        .unwrap()
        .value;
    assert_eq!(a, b);
}

#[test]
fn supercritical_pairings_vanish_rank3() {
    use intersector::residueengine::moduli_pairing;
    // random-ish supercritical combinations: degrees in (6, 8] at rank 3
    let combos = [
        AClassPoly::abar(3, 2).pow(2).mul(&AClassPoly::abar(3, 3)),
        AClassPoly::abar(3, 2).pow(4),
        AClassPoly::abar(3, 2).mul(&AClassPoly::abar(3, 3).pow(2)),
        AClassPoly::abar(3, 2)
            .pow(2)
            .mul(&AClassPoly::abar(3, 3))
            .scale(&Rational::new(3, 7))
            .add(&AClassPoly::abar(3, 2).pow(4).scale(&Rational::new(-2, 5))),
    ];
    for p in combos {
        assert_eq!(
            moduli_pairing(3, 1, 2, &p).unwrap(),
            Rational::zero(),
            "P = {p:?}"
        );
    }
}
