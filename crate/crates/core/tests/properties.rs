use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use rsdist_core::aj::{aj_binsum, aj_permutation, aj_series, AjParams};
use rsdist_core::budget::Budget;
use rsdist_core::classes::{class_mul, class_of, dist_table_formula, LeadClass};
use rsdist_core::distance::classify_word;
use rsdist_core::interval::{Dyadic, Interval};
use rsdist_core::poly::{lagrange_poly, EvalSet, Poly};
use rsdist_core::region::{EndpointMargin, RegionParams, Branch, VerdictKind, region_check};
use rsdist_core::scalar::Scalar;
use rsdist_core::FieldSpec;

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 3u64.pow(11)];

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| FieldSpec::with_order(q).unwrap())
}

fn small_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]).prop_map(|q| FieldSpec::with_order(q).unwrap())
}

fn elems(f: &FieldSpec, n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..f.order(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((f, v) in field().prop_flat_map(|f| { let e = elems(&f, 3); (Just(f), e) })) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        if a != 0 {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), 1);
            prop_assert_eq!(f.pow(a, f.order() as u64 - 1), 1);
        } else {
            prop_assert!(f.inv(0).is_none());
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn interpolation_recovers_low_degree(
        (f, pts, coeffs) in small_field().prop_flat_map(|f| {
            let q = f.order() as usize;
            let pts = prop::sample::subsequence((0..f.order()).collect::<Vec<_>>(), 1..=q);
            (Just(f), pts).prop_flat_map(|(f, pts)| {
                let n = pts.len();
                let c = elems(&f, n);
                (Just(f), Just(pts), c)
            })
        })
    ) {
        let set = EvalSet::new(&f, pts).unwrap();
        let poly = Poly::new(coeffs);
        let word = set.evaluate(&f, &poly);
        prop_assert_eq!(lagrange_poly(&f, &word, &set).unwrap(), poly);
    }

    #[test]
    fn classes_form_a_group(
        (f, ell, idx) in small_field().prop_flat_map(|f| {
            (Just(f), 1usize..=3).prop_flat_map(|(f, ell)| {
                let n = (f.order() as usize).pow(ell as u32);
                (Just(f), Just(ell), prop::collection::vec(0..n, 3))
            })
        })
    ) {
        let [a, b, c] = [0, 1, 2].map(|i| LeadClass::from_index(&f, ell, idx[i]));
        let e = LeadClass::identity(&f, ell);
        let ab = class_mul(&f, &a, &b).unwrap();
        prop_assert_eq!(&ab, &class_mul(&f, &b, &a).unwrap());
        prop_assert_eq!(
            class_mul(&f, &ab, &c).unwrap(),
            class_mul(&f, &a, &class_mul(&f, &b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(&class_mul(&f, &a, &e).unwrap(), &a);
        prop_assert_eq!(class_mul(&f, &a, &a.inverse(&f)).unwrap(), e);
        prop_assert_eq!(LeadClass::from_index(&f, ell, a.index()), a);
    }

    #[test]
    fn class_of_product_is_product_of_classes(
        (f, ell, g, h) in small_field().prop_flat_map(|f| {
            (Just(f), 1usize..=3, 0usize..5, 0usize..5).prop_flat_map(|(f, ell, dg, dh)| {
                (Just(f.clone()), Just(ell), elems(&f, dg), elems(&f, dh))
            })
        })
    ) {
        let monic = |mut c: Vec<u32>| { c.push(1); Poly::new(c) };
        let (g, h) = (monic(g), monic(h));
        let gh = g.mul(&h, &f);
        prop_assert_eq!(
            class_of(&f, &gh, ell).unwrap(),
            class_mul(&f, &class_of(&f, &g, ell).unwrap(), &class_of(&f, &h, ell).unwrap()).unwrap()
        );
    }

    #[test]
    fn distance_distribution_rows_sum_to_class_size(
        (f, ell, d, idx) in small_field().prop_flat_map(|f| {
            (Just(f), 1usize..=2).prop_flat_map(|(f, ell)| {
                let n = (f.order() as usize).pow(ell as u32);
                (Just(f), Just(ell), ell..=5usize, 0..n)
            })
        })
    ) {
        let eps = LeadClass::from_index(&f, ell, idx);
        let t = dist_table_formula(&f, &eps, d, &EvalSet::full(&f), &Budget::default()).unwrap();
        let expected = BigUint::from(f.order()).pow((d - ell) as u32);
        prop_assert_eq!(t.total(), expected);
    }

    #[test]
    fn every_word_respects_the_distance_bounds(
        (f, k, word) in prop::sample::select(vec![3u64, 4, 5, 7]).prop_flat_map(|q| {
            let f = FieldSpec::with_order(q).unwrap();
            (Just(f.clone()), 1usize..3, elems(&f, q as usize))
        })
    ) {
        let set = EvalSet::full(&f);
        let c = classify_word(&f, &word, k, &set, &Budget::default()).unwrap();
        prop_assert!(c.satisfies_distance_bounds(set.len(), k));
        prop_assert!(c.distance <= set.len() - k);
    }

    #[test]
    fn aj_evaluators_agree(j in 0usize..9, p in prop::sample::select(vec![2u64, 3, 5, 7]),
                           un in 0i64..20, ud in 1i64..5, wn in 0i64..6, wd in 1i64..6) {
        let params = AjParams::new(j, p, Scalar::ratio(un, ud), Scalar::ratio(wn, wd)).unwrap();
        let s = aj_series(&params);
        prop_assert_eq!(&s, &aj_binsum(&params));
        prop_assert_eq!(&s, &aj_permutation(&params).unwrap());
    }

    #[test]
    fn elementary_functions_enclose(n in 1u64..1_000_000, d in 1u64..1000) {
        let x = BigRational::new(n.into(), d.into());
        for prec in [53u32, 128] {
            let xi = Interval::from_rational(&x, prec);
            prop_assert!(xi.ln().exp().contains_rational(&x));
            prop_assert!(xi.sqrt().sqr().contains_rational(&x));
            let v = n as f64 / d as f64;
            let l = xi.ln();
            prop_assert!((l.to_f64() - v.ln()).abs() <= 1e-12 * (1.0 + v.ln().abs()));
        }
    }

    #[test]
    fn verdicts_never_flip_with_precision(cn in 1i64..100, q in prop::sample::select(vec![7u64, 25, 27, 32, 256])) {
        let c = BigRational::new(cn.into(), 100.into());
        let m = EndpointMargin { p: rsdist_core::gf::prime_power(q).unwrap().0, q, c: c.clone(), g_at: c, threshold: BigRational::from_integer(0.into()) };
        let verdicts: Vec<VerdictKind> = [53, 128, 256, 512].iter().map(|&p| m.check(p).unwrap().verdict).collect();
        for pair in verdicts.windows(2) {
            if pair[0] != VerdictKind::Unknown {
                prop_assert_eq!(pair[0], pair[1]);
            }
        }
    }

    #[test]
    fn region_verdicts_are_stable(k in 1usize..30, ell in 1usize..4) {
        prop_assume!(k + ell < 32);
        let params = RegionParams::new(32, k, ell).unwrap();
        let lo = region_check(&params, Branch::B, 53).unwrap();
        let hi = region_check(&params, Branch::B, 256).unwrap();
        if lo.verdict != VerdictKind::Unknown {
            prop_assert_eq!(lo.verdict, hi.verdict);
        }
    }
}

#[test]
fn dyadic_rounding_is_directed() {
    use rsdist_core::interval::Round;
    let third = BigRational::new(1.into(), 3.into());
    let down = Dyadic::from_rational(&third, 53, Round::Down);
    let up = Dyadic::from_rational(&third, 53, Round::Up);
    assert!(down.to_rational() < third && third < up.to_rational());
}
