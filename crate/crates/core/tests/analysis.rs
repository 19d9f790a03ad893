use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use rsdist_core::interval::DEFAULT_PRECISION as PREC;
use rsdist_core::region::{
    coverage_report, f_value, fg_second_derivative, fg_second_derivative_alt, figure_scan,
    g_half_check, g_uniform_check, second_difference, threshold_constants, SignTag,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Grid `lo, lo + step, ...` up to and including `hi`.
fn grid(lo: &BigRational, hi: &BigRational, step: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::new();
    let mut c = lo.clone();
    while &c <= hi {
        out.push(c.clone());
        c += step;
    }
    out
}

#[test]
fn f_minus_g_is_concave_down() {
    let h = rat(1, 1000);
    for (p, q) in [(2u64, 32u64), (3, 27), (5, 25), (7, 7)] {
        let lo = std::cmp::max(rat(1, 50), rat(1, q as i64));
        for c in grid(&lo, &rat(1, 2), &rat(1, 200)) {
            let d2 = second_difference(p, Some(q), &c, &h, PREC).unwrap();
            assert!(d2.is_negative(), "p={p} q={q} c={c}: {d2:?}");
        }
    }
}

#[test]
fn f_is_concave_down() {
    let h = rat(1, 1000);
    for p in [2u64, 3, 5, 7] {
        for c in grid(&rat(1, 100), &rat(99, 100), &rat(1, 100)) {
            assert!(second_difference(p, None, &c, &h, PREC).unwrap().is_negative());
        }
    }
}

#[test]
fn closed_form_matches_differences() {
    let h = rat(1, 1000);
    for (p, q) in [(2u64, 32u64), (3, 27), (5, 25), (7, 7)] {
        for c in grid(&rat(1, 10), &rat(1, 2), &rat(1, 20)) {
            let d2 = second_difference(p, Some(q), &c, &h, PREC).unwrap().to_f64();
            let derived = fg_second_derivative(p, q, &c).to_f64().unwrap();
            let printed = fg_second_derivative_alt(p, q, &c).to_f64().unwrap();
            assert!((d2 - derived).abs() < 1e-3 * derived.abs(), "p={p} q={q} c={c}");
            // the other form is off by 1/(1-c) - 1/(p(1+c))
            assert!((d2 - printed).abs() > 0.5);
        }
    }
}

#[test]
fn g_is_maximal_at_half_and_uniformly_bounded() {
    for q in [2u64, 3, 7, 32, 256, 1024, 2401] {
        assert!(g_uniform_check(q, PREC).holds(), "q={q}");
        for c in grid(&rat(1, 20), &rat(19, 20), &rat(1, 20)) {
            if c == rat(1, 2) {
                continue;
            }
            assert!(g_half_check(q, &c, PREC).unwrap().holds(), "q={q} c={c}");
        }
    }
}

#[test]
fn threshold_constants_are_consistent() {
    for (c, p0, prime) in [(rat(1, 2), rat(3, 1), 3u64), (rat(9, 10), rat(19, 1), 19)] {
        let t = threshold_constants(&c, PREC).unwrap();
        assert_eq!(t.p0, p0);
        assert_eq!(t.prime, prime);
        assert!(t.f_floor.holds());
        let mut q = t.q0;
        while q % prime == 0 {
            q /= prime;
        }
        assert_eq!(q, 1);
        assert!(t.gamma0.is_positive());
    }
}

#[test]
fn coverage_reports_every_prime() {
    let rows = coverage_report(&[2, 3, 5, 7, 11], PREC).unwrap();
    assert_eq!(rows.iter().map(|r| r.q).collect::<Vec<_>>(), vec![256, 81, 125, 2401, 14641]);
    for r in &rows {
        assert_eq!(r.covered, r.required.iter().all(|v| v.holds()));
        assert!(r.stated_lower < r.stated_upper && r.stated_upper < BigRational::one());
    }
}

#[test]
fn sign_examples() {
    assert!(f_value(&rat(2, 1), &rat(1, 2), PREC).unwrap().is_positive());
    assert!(f_value(&rat(2, 1), &rat(9, 10), PREC).unwrap().is_negative());
    for p in [2, 3, 5, 7, 17] {
        assert!(f_value(&rat(p, 1), &rat(1, 100), PREC).unwrap().is_positive());
    }
    let fig = figure_scan(&[2, 3], &rat(1, 20), PREC).unwrap();
    assert_eq!(fig.rows.len(), 2 * 19);
    assert!(fig.rows.iter().all(|r| r.sign != SignTag::Unknown));
    for p in [2, 3] {
        assert_eq!(fig.brackets_for(p).len(), 1);
    }
}
