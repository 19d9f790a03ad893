//! Error bounds for the boundary terms W_j and the counts N_{k+ell}(eps, r)
//! over D = F_q, and upper bounds on ln A_j(q, q1/q).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::aj::{aj_binsum, ln_aj, ln_gen_binom, q1_gamma, AjParams};
use crate::classes::main_term;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::interval::Interval;
use crate::scalar::{LogValue, Scalar};

/// `q^(e/2)`, exact for even `e` or square `q`.
pub fn half_power(q: u64, e: u64, prec: u32) -> Scalar {
    let whole = Scalar::int(num_traits::pow(BigInt::from(q), (e / 2) as usize));
    if e % 2 == 0 {
        whole
    } else {
        whole.mul(&Scalar::int(q).sqrt(prec))
    }
}

fn one_minus_q_pow(q: u64, ell: usize) -> Scalar {
    Scalar::int(1).sub(&Scalar::Exact(BigRational::new(
        1.into(),
        num_traits::pow(BigInt::from(q), ell),
    )))
}

fn bound_term(q: u64, k: usize, ell: usize, j: usize, prec: u32) -> Result<Scalar> {
    let gap = (k + ell - j) as u64;
    let choose = Scalar::int(binomial(ell as u64 - 1, gap));
    if choose.is_exact_zero() {
        return Ok(Scalar::int(0));
    }
    let a = aj_binsum(&AjParams::from_field(q, ell, j, prec)?);
    Ok(choose.mul(&half_power(q, gap, prec)).mul(&a))
}

/// Bound on `|W_j(eps) - C(q, j) q^(k-j)|` for `k + 1 <= j <= k + ell`:
/// `(1 - q^-ell) C(ell-1, ell+k-j) q^((ell+k-j)/2) A_j(q, q1/q)`.
pub fn wj_error_bound(q: u64, k: usize, ell: usize, j: usize, prec: u32) -> Result<Scalar> {
    if ell == 0 || j <= k || j > k + ell {
        return Err(Error::Precondition(format!(
            "need k + 1 <= j <= k + ell, got k = {k}, ell = {ell}, j = {j}"
        )));
    }
    Ok(one_minus_q_pow(q, ell).mul(&bound_term(q, k, ell, j, prec)?))
}

/// Bound on `|N_{k+ell}(eps, r) - main term|` over D = F_q.
pub fn ndr_error_bound(q: u64, k: usize, ell: usize, r: usize, prec: u32) -> Result<Scalar> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let mut sum = Scalar::int(0);
    for j in k + 1..=k + ell {
        let c = Scalar::int(binomial(j as u64, r as u64));
        if c.is_exact_zero() {
            continue;
        }
        sum = sum.add(&c.mul(&bound_term(q, k, ell, j, prec)?));
    }
    Ok(one_minus_q_pow(q, ell).mul(&sum))
}

/// Upper limit of the alternating sum in the main term of N_{k+ell}(eps, r).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumLimit {
    /// `k - r`: only the terms that do not involve the boundary W_j.
    Short,
    /// `k + ell - r`: also absorbs the expected size of every W_j.
    Full,
}

/// `C(q, r) q^(k-r) sum_{j=0}^{L} C(q-r, j) (-q)^(-j)`.
pub fn count_main_term(q: u64, k: usize, ell: usize, r: usize, limit: SumLimit) -> BigRational {
    let base = k as i64 - r as i64;
    let top = match limit {
        SumLimit::Short => base,
        SumLimit::Full => base + ell as i64,
    };
    main_term(q, q, r as u64, base, top)
}

/// Upper bound on ln A_j(q, q1/q) from the approximate saddle point
/// `y = (j/(q+j))^(1/p)`.
pub fn lemma_general(q: u64, ell: usize, j: usize, prec: u32) -> Result<Interval> {
    if j == 0 {
        return Err(Error::Precondition("j must be at least 1".into()));
    }
    let (p, _) = prime_power(q)?;
    let (q1, _) = q1_gamma(q, ell, prec)?;
    let wp = prec;
    let qi = Interval::from_int(q, wp);
    let ji = Interval::from_int(j as u64, wp);
    let pi = Interval::from_int(p, wp);
    let q1i = q1.to_interval(wp);
    let qj = &qi + &ji;
    let mut total = (&ji / &pi) * (&qj / &ji).ln() + ((&qi - &q1i) / &pi) * (&qj / &qi).ln();
    if !q1.is_exact_zero() {
        let y = (&ji / &qj).powr(&pi.recip());
        total = total - q1i * (Interval::one(wp) - y).ln();
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlaggedBound {
    pub value: Interval,
    /// Whether `1 <= j <= q`, where `(j/(q+j))^(1/p) <= 2^(-1/p)` and the
    /// linear bound on `e^-t` used in the simplification applies.
    pub within_window: bool,
}

/// The simplified bound
/// `q (c/p ln((1+c)/c) + (1-gamma)/p ln(1+c) + gamma ln(2p))`, `c = j/q`.
pub fn lemma_large(q: u64, ell: usize, j: usize, prec: u32) -> Result<FlaggedBound> {
    if j == 0 {
        return Err(Error::Precondition("j must be at least 1".into()));
    }
    let (p, _) = prime_power(q)?;
    let (_, gamma) = q1_gamma(q, ell, prec)?;
    let c = Interval::from_rational(&BigRational::new(j.into(), q.into()), prec);
    let pi = Interval::from_int(p, prec);
    let g = gamma.to_interval(prec);
    let one = Interval::one(prec);
    let one_c = &one + &c;
    let mut inner = (&c / &pi) * (&one_c / &c).ln() + ((&one - &g) / &pi) * one_c.ln();
    if !gamma.is_exact_zero() {
        inner = inner + g * Interval::from_int(2 * p, prec).ln();
    }
    Ok(FlaggedBound {
        value: inner.mul_int(q as i64),
        within_window: j as u64 <= q,
    })
}

/// Exact root of the characteristic-two saddle equation,
/// `y = (sqrt(gamma^2 + 4c^2 + 4c) - gamma) / (2(1+c))`.
pub fn saddle_y(gamma: &Scalar, c: &Scalar, prec: u32) -> Interval {
    let four = Scalar::int(4);
    let disc = gamma
        .mul(gamma)
        .add(&four.mul(c).mul(c))
        .add(&four.mul(c));
    let num = disc.sqrt(prec).sub(gamma);
    num.div(&Scalar::int(2).mul(&Scalar::int(1).add(c)))
        .to_interval(prec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaddleBound {
    pub y: Interval,
    /// `-j ln y - q1 ln(1-y) - (q-q1)/2 ln(1-y^2)`
    pub bound: Interval,
    /// `q1 y/(1-y) + (q-q1) y^2/(1-y^2) - j`, zero at the exact saddle.
    pub residual: Interval,
}

pub fn saddle_p2(q: u64, ell: usize, j: usize, prec: u32) -> Result<SaddleBound> {
    let (p, _) = prime_power(q)?;
    if p != 2 {
        return Err(Error::Precondition(format!(
            "the closed-form saddle point needs characteristic 2, got {p}"
        )));
    }
    if j == 0 {
        return Err(Error::Precondition("j must be at least 1".into()));
    }
    let (q1, gamma) = q1_gamma(q, ell, prec)?;
    let c = Scalar::ratio(j as u64, q);
    let y = saddle_y(&gamma, &c, prec);
    let one = Interval::one(prec);
    let qi = Interval::from_int(q, prec);
    let ji = Interval::from_int(j as u64, prec);
    let q1i = q1.to_interval(prec);
    let y2 = y.sqr();
    let rest = &qi - &q1i;
    let mut bound = -(&ji * y.ln()) - (&rest / &Interval::from_int(2, prec)) * (&one - &y2).ln();
    let mut residual = &rest * &y2 / (&one - &y2) - &ji;
    if !q1.is_exact_zero() {
        bound = bound - &q1i * (&one - &y).ln();
        residual = residual + &q1i * &y / (&one - &y);
    }
    Ok(SaddleBound { y, bound, residual })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialFactorComparison {
    pub q: u64,
    pub ell: usize,
    pub j: usize,
    /// `ln C(q/p + q1 + j - 1, j)`
    pub ln_binomial_factor: LogValue,
    pub ln_aj: LogValue,
    /// `None` when A_j is exactly zero (the difference is +infinity).
    pub difference: Option<Interval>,
    /// `ln((q1 + j)/q1)`, the closed form of the difference when p = q and
    /// j < p.
    pub prime_field_identity: Option<Interval>,
}

/// Compares the older binomial factor `C(q/p + q1 + j - 1, j)` with A_j.
pub fn compare_binomial_factor(
    q: u64,
    ell: usize,
    j: usize,
    prec: u32,
) -> Result<BinomialFactorComparison> {
    let (p, _) = prime_power(q)?;
    let (q1, _) = q1_gamma(q, ell, prec)?;
    let arg = Scalar::ratio(q, p)
        .add(&q1)
        .add(&Scalar::int(j as u64))
        .sub(&Scalar::int(1));
    let ln_binomial_factor = ln_gen_binom(&arg, j, prec)?;
    let ln_a = ln_aj(&AjParams::from_field(q, ell, j, prec)?, prec);
    let difference = match (&ln_binomial_factor, &ln_a) {
        (LogValue::Finite(b), LogValue::Finite(a)) => Some(b - a),
        (_, LogValue::NegInfinity) => None,
        (LogValue::NegInfinity, LogValue::Finite(_)) => {
            return Err(Error::Precondition(
                "binomial factor vanished while A_j did not".into(),
            ))
        }
    };
    let prime_field_identity = (p == q && j < p as usize && !q1.is_exact_zero()).then(|| {
        let q1i = q1.to_interval(prec);
        ((&q1i + &Interval::from_int(j as u64, prec)) / &q1i).ln()
    });
    Ok(BinomialFactorComparison {
        q,
        ell,
        j,
        ln_binomial_factor,
        ln_aj: ln_a,
        difference,
        prime_field_identity,
    })
}

/// `C(q, j) q^(k-j)`, the leading size of W_j.
pub fn wj_expected(q: u64, k: usize, j: usize) -> BigRational {
    let c = BigRational::from_integer(BigInt::from(binomial(q, j as u64)));
    let qr = BigRational::from_integer(BigInt::from(q));
    let e = k as i64 - j as i64;
    let pw = num_traits::pow(qr, e.unsigned_abs() as usize);
    if e < 0 {
        c / pw
    } else {
        c * pw
    }
}
