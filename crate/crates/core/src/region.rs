//! The region functions
//!
//! ```text
//! f(p, c)    = (p-1)c/p ln(1/c) + (1-c) ln(1/(1-c)) - (1+c)/p ln(1+c)
//! g(q, c)    = 1/(6q) + ln(q)/q + ln(2 q pi c (1-c)) / (2q)
//! h1(p,q,c)  = ln(q)/sqrt(q)     + ln(2p) - ln(1+c)/p
//! h2(p,q,c)  = ln(q)/(2 sqrt(q)) + ln(2p) - ln(1+c)/p
//! ```
//!
//! and the certified checks built from them: the sufficient conditions for
//! every word of degree k + ell to be ordinary (branch a) or for no such word
//! to be a deep hole (branch b), the largest admissible gamma, endpoint
//! margins, threshold constants, and the sign scan of f.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{is_prime, prime_power};
use crate::interval::{escalate, Interval};
use crate::scalar::{rational_decimal, rational_string, Scalar};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn iv(r: &BigRational, prec: u32) -> Interval {
    Interval::from_rational(r, prec)
}

pub fn f_interval(p: &Interval, c: &Interval) -> Interval {
    let one = Interval::one(p.prec().max(c.prec()));
    let rest = &one - c;
    let up = &one + c;
    ((p - &one) / p) * c * (-c.ln()) - &rest * rest.ln() - (&up / p) * up.ln()
}

pub fn g_interval(q: &Interval, c: &Interval) -> Interval {
    let prec = q.prec().max(c.prec());
    let one = Interval::one(prec);
    let two_q = q.mul_int(2);
    let inner = &two_q * Interval::pi(prec) * c * (&one - c);
    q.mul_int(6).recip() + q.ln() / q + inner.ln() / two_q
}

fn h_common(p: &Interval, c: &Interval) -> Interval {
    let one = Interval::one(p.prec().max(c.prec()));
    p.mul_int(2).ln() - (&one + c).ln() / p
}

pub fn h1_interval(p: &Interval, q: &Interval, c: &Interval) -> Interval {
    q.ln() / q.sqrt() + h_common(p, c)
}

pub fn h2_interval(p: &Interval, q: &Interval, c: &Interval) -> Interval {
    q.ln() / q.sqrt().mul_int(2) + h_common(p, c)
}

fn check_c(c: &BigRational) -> Result<()> {
    if c <= &BigRational::zero() || c >= &BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "c = {} must lie strictly between 0 and 1",
            rational_string(c)
        )));
    }
    Ok(())
}

pub fn f_value(p: &BigRational, c: &BigRational, prec: u32) -> Result<Interval> {
    check_c(c)?;
    Ok(f_interval(&iv(p, prec), &iv(c, prec)))
}

pub fn g_value(q: u64, c: &BigRational, prec: u32) -> Result<Interval> {
    check_c(c)?;
    Ok(g_interval(&Interval::from_int(q, prec), &iv(c, prec)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionValues {
    pub f: Interval,
    pub g: Interval,
    pub h1: Interval,
    pub h2: Interval,
}

pub fn region_functions(p: u64, q: u64, c: &BigRational, prec: u32) -> Result<RegionValues> {
    check_c(c)?;
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let (pi, qi, ci) = (
        Interval::from_int(p, prec),
        Interval::from_int(q, prec),
        iv(c, prec),
    );
    Ok(RegionValues {
        f: f_interval(&pi, &ci),
        g: g_interval(&qi, &ci),
        h1: h1_interval(&pi, &qi, &ci),
        h2: h2_interval(&pi, &qi, &ci),
    })
}

/// Which sufficient condition is in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// c = (k+ell)/q with h1: every word of degree k + ell is ordinary.
    A,
    /// c = (k+1)/q with h2: no word of degree k + ell is a deep hole.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegionParams {
    pub p: u64,
    pub q: u64,
    pub k: usize,
    pub ell: usize,
}

impl RegionParams {
    pub fn new(q: u64, k: usize, ell: usize) -> Result<Self> {
        let (p, _) = prime_power(q)?;
        if ell == 0 {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        Ok(RegionParams { p, q, k, ell })
    }

    /// Like [`RegionParams::new`] but checks that q is a power of `p`.
    pub fn with_characteristic(p: u64, q: u64, k: usize, ell: usize) -> Result<Self> {
        let params = Self::new(q, k, ell)?;
        if params.p != p {
            return Err(Error::InvalidParameter(format!("{q} is not a power of {p}")));
        }
        Ok(params)
    }

    pub fn c(&self, branch: Branch) -> BigRational {
        let top = match branch {
            Branch::A => self.k + self.ell,
            Branch::B => self.k + 1,
        };
        BigRational::new(top.into(), self.q.into())
    }

    /// `(ell - 1) / sqrt(q)`, exact for square q.
    pub fn gamma(&self, prec: u32) -> Scalar {
        Scalar::int(self.ell as u64 - 1).div(&Scalar::int(self.q).sqrt(prec))
    }

    pub fn gamma_at_most_one(&self) -> bool {
        let m = self.ell as u128 - 1;
        m * m <= self.q as u128
    }

    fn json(&self, branch: Branch, prec: u32) -> Value {
        json!({
            "p": self.p,
            "q": self.q,
            "k": self.k,
            "ell": self.ell,
            "branch": branch,
            "c": rational_string(&self.c(branch)),
            "gamma": self.gamma(prec).to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Holds,
    Fails,
    Unknown,
}

impl VerdictKind {
    pub fn of(margin: &Interval) -> Self {
        if margin.is_positive() {
            VerdictKind::Holds
        } else if margin.is_negative() {
            VerdictKind::Fails
        } else {
            VerdictKind::Unknown
        }
    }
}

fn serialize_margin<S: Serializer>(m: &Interval, s: S) -> std::result::Result<S::Ok, S::Error> {
    let (lo, hi) = m.bound_strings();
    [lo, hi].serialize(s)
}

/// Outcome of a strict inequality `margin > 0` certified in interval
/// arithmetic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub condition: String,
    pub params: Value,
    pub verdict: VerdictKind,
    #[serde(serialize_with = "serialize_margin")]
    pub margin: Interval,
    pub precision_bits: u32,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.verdict == VerdictKind::Holds
    }
}

/// Evaluates `margin` at `start` bits and escalates until its sign is
/// certified or the precision ladder runs out.
pub fn certify(
    condition: &str,
    params: Value,
    start: u32,
    margin: impl Fn(u32) -> Interval,
) -> Verdict {
    let (m, prec) = escalate(start, margin, |m| VerdictKind::of(m) != VerdictKind::Unknown);
    Verdict {
        condition: condition.to_string(),
        params,
        verdict: VerdictKind::of(&m),
        margin: m,
        precision_bits: prec,
    }
}

/// `f(p,c) - g(q,c) - gamma h(p,q,c) > 0` for the branch's c and h.
pub fn region_check(params: &RegionParams, branch: Branch, prec: u32) -> Result<Verdict> {
    if !params.gamma_at_most_one() {
        return Err(Error::Precondition(format!(
            "gamma = (ell-1)/sqrt(q) exceeds 1 for q = {}, ell = {}",
            params.q, params.ell
        )));
    }
    let c = params.c(branch);
    check_c(&c)?;
    let name = match branch {
        Branch::A => "thm7a",
        Branch::B => "thm7b",
    };
    let p = *params;
    Ok(certify(name, params.json(branch, prec), prec, move |wp| {
        let (pi, qi, ci) = (
            Interval::from_int(p.p, wp),
            Interval::from_int(p.q, wp),
            iv(&c, wp),
        );
        let h = match branch {
            Branch::A => h1_interval(&pi, &qi, &ci),
            Branch::B => h2_interval(&pi, &qi, &ci),
        };
        let gamma = p.gamma(wp);
        let base = f_interval(&pi, &ci) - g_interval(&qi, &ci);
        if gamma.is_exact_zero() {
            base
        } else {
            base - gamma.to_interval(wp) * h
        }
    }))
}

/// The same two conditions with g and the c-dependent part of h replaced
/// by their uniform bounds:
/// `f(p,c) > (ell-1)(a ln(q)/q + ln(2p)/sqrt(q)) + 2/(3q) + 3 ln(q)/(2q)`
/// with `a = 1` for branch a and `a = 1/2` for branch b.
pub fn simplified_check(params: &RegionParams, branch: Branch, prec: u32) -> Result<Verdict> {
    let c = params.c(branch);
    check_c(&c)?;
    let name = match branch {
        Branch::A => "thm2a",
        Branch::B => "thm2b",
    };
    let p = *params;
    Ok(certify(name, params.json(branch, prec), prec, move |wp| {
        let (pi, qi) = (Interval::from_int(p.p, wp), Interval::from_int(p.q, wp));
        let lnq = qi.ln();
        let lnq_term = match branch {
            Branch::A => &lnq / &qi,
            Branch::B => &lnq / qi.mul_int(2),
        };
        let per_ell = lnq_term + pi.mul_int(2).ln() / qi.sqrt();
        let rhs = per_ell.mul_int(p.ell as i64 - 1) + uniform_g_bound(&qi);
        f_interval(&pi, &iv(&c, wp)) - rhs
    }))
}

/// `2/(3q) + 3 ln(q)/(2q)`
fn uniform_g_bound(q: &Interval) -> Interval {
    Interval::from_int(2, q.prec()) / q.mul_int(3) + q.ln().mul_int(3) / q.mul_int(2)
}

/// Which numerator and denominator the largest admissible gamma uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaBound {
    /// `(f - g(q,c)) / h1`
    H1,
    /// `(f - g(q,c)) / h2`
    H2,
    /// `(f - g(q,1/2)) / h1`, uniform in c.
    H1HalfG,
}

/// Largest gamma admitted by the chosen condition, clamped below at 0.
pub fn gamma_max(p: u64, q: u64, c: &BigRational, bound: GammaBound, prec: u32) -> Result<Interval> {
    check_c(c)?;
    let (pi, qi, ci) = (
        Interval::from_int(p, prec),
        Interval::from_int(q, prec),
        iv(c, prec),
    );
    let f = f_interval(&pi, &ci);
    let (g, h) = match bound {
        GammaBound::H1 => (g_interval(&qi, &ci), h1_interval(&pi, &qi, &ci)),
        GammaBound::H2 => (g_interval(&qi, &ci), h2_interval(&pi, &qi, &ci)),
        GammaBound::H1HalfG => (
            g_interval(&qi, &iv(&rat(1, 2), prec)),
            h1_interval(&pi, &qi, &ci),
        ),
    };
    Ok((f - g) / h).map(|x| x.max(&Interval::zero(prec)))
}

/// One endpoint inequality `f(p, c) - g(q, c_g) > threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointMargin {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub c: BigRational,
    /// Where g is evaluated: c itself, or 1/2.
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub g_at: BigRational,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub threshold: BigRational,
}

impl EndpointMargin {
    fn new(p: u64, q: u64, c: BigRational, g_at_half: bool, threshold: BigRational) -> Self {
        let g_at = if g_at_half { rat(1, 2) } else { c.clone() };
        EndpointMargin {
            p,
            q,
            c,
            g_at,
            threshold,
        }
    }

    pub fn label(&self) -> String {
        format!(
            "f({},{}) - g({},{}) > {}",
            self.p,
            rational_decimal(&self.c),
            self.q,
            rational_decimal(&self.g_at),
            rational_decimal(&self.threshold)
        )
    }

    pub fn check(&self, prec: u32) -> Result<Verdict> {
        check_c(&self.c)?;
        check_c(&self.g_at)?;
        let params = json!({
            "p": self.p,
            "q": self.q,
            "c": rational_string(&self.c),
            "g_at": rational_string(&self.g_at),
            "threshold": rational_string(&self.threshold),
        });
        Ok(certify("endpoint-margin", params, prec, |wp| {
            f_interval(&Interval::from_int(self.p, wp), &iv(&self.c, wp))
                - g_interval(&Interval::from_int(self.q, wp), &iv(&self.g_at, wp))
                - iv(&self.threshold, wp)
        }))
    }
}

/// The sixteen published endpoint margins: eight for the not-a-deep-hole
/// ranges (g at c) and eight for the ordinary-word ranges (g at 1/2).
pub fn endpoint_margins() -> Vec<EndpointMargin> {
    let t = |s: &str| crate::scalar::parse_rational(s).unwrap();
    let m = EndpointMargin::new;
    vec![
        m(2, 32, rat(1, 2), false, t("0.041")),
        m(2, 32, rat(4, 32), false, t("0.0187")),
        m(3, 27, rat(1, 2), false, t("0.1772")),
        m(3, 27, rat(2, 27), false, t("0.0005")),
        m(5, 25, rat(1, 2), false, t("0.2933")),
        m(5, 25, rat(2, 25), false, t("0.0373")),
        m(7, 7, rat(1, 2), false, t("0.0837")),
        m(7, 7, rat(2, 7), false, t("0.0424")),
        m(2, 256, t("0.7"), true, t("0.0009")),
        m(2, 256, rat(3, 256), true, t("0.0069")),
        m(3, 81, t("0.8"), true, t("0.002")),
        m(3, 81, rat(3, 81), true, t("0.0189")),
        m(5, 125, rat(1, 2), true, t("0.0011")),
        m(5, 125, rat(2, 125), true, t("0.0044")),
        m(7, 2401, t("0.95"), true, t("0.0004")),
        m(7, 2401, rat(2, 2401), true, t("0.0007")),
    ]
}

/// Second central difference `(F(c+h) - 2F(c) + F(c-h)) / h^2` of
/// `F(c) = f(p,c) - g(q,c)`, or of f alone when `q` is `None`.
pub fn second_difference(
    p: u64,
    q: Option<u64>,
    c: &BigRational,
    h: &BigRational,
    prec: u32,
) -> Result<Interval> {
    let fun = |x: &BigRational| -> Result<Interval> {
        check_c(x)?;
        let pi = Interval::from_int(p, prec);
        let xi = iv(x, prec);
        let mut v = f_interval(&pi, &xi);
        if let Some(q) = q {
            v = v - g_interval(&Interval::from_int(q, prec), &xi);
        }
        Ok(v)
    };
    let sum = fun(&(c + h))? - fun(c)?.mul_int(2) + fun(&(c - h))?;
    Ok(sum / iv(&(h * h), prec))
}

/// Closed form of `d^2/dc^2 (f(p,c) - g(q,c))`:
/// `-1/(c(1-c)) + 1/(p c (1+c)) + (1 - 2c + 2c^2) / (2 q c^2 (1-c)^2)`.
pub fn fg_second_derivative(p: u64, q: u64, c: &BigRational) -> BigRational {
    let one = BigRational::one();
    let pr = BigRational::from_integer(p.into());
    let qr = BigRational::from_integer(q.into());
    let om = &one - c;
    -(&one / (c * &om)) + &one / (&pr * c * (&one + c)) + g_curvature(&qr, c)
}

/// `(1 - 2c + 2c^2) / (2 q c^2 (1-c)^2)`, the second derivative of `-g(q, c)`.
fn g_curvature(q: &BigRational, c: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let om = &one - c;
    (&one - &two * c + &two * c * c) / (&two * q * c * c * &om * &om)
}

/// The alternative closed form
/// `(1+c)/(c(c-1)) + 1/(c p) + (1 - 2c + 2c^2) / (2 q c^2 (1-c)^2)`.
pub fn fg_second_derivative_alt(p: u64, q: u64, c: &BigRational) -> BigRational {
    let one = BigRational::one();
    let pr = BigRational::from_integer(p.into());
    let qr = BigRational::from_integer(q.into());
    (&one + c) / (c * (c - &one)) + &one / (c * &pr) + g_curvature(&qr, c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdConstants {
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub c: BigRational,
    /// `(1+c)/(1-c)`
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub p0: BigRational,
    /// Smallest prime at least p0.
    pub prime: u64,
    /// Smallest power of `prime` with `2/(3q0) + 3 ln(q0)/(2q0) < (c/2) ln(1/c)`.
    pub q0: u64,
    /// `(f(p0,c) - g(q0,1/2)) / h1(p0,q0,0)`
    pub gamma0: Interval,
    /// `f(p0, c) >= (c/2) ln(1/c)`, certified strictly or reported.
    pub f_floor: Verdict,
}

pub fn threshold_constants(c: &BigRational, prec: u32) -> Result<ThresholdConstants> {
    check_c(c)?;
    let one = BigRational::one();
    let p0 = (&one + c) / (&one - c);
    let mut prime = p0.ceil().to_integer().try_into().unwrap_or(u64::MAX);
    while !is_prime(prime) {
        prime += 1;
    }
    let target = |wp: u32| {
        let ci = iv(c, wp);
        (&ci * (-ci.ln())).mul_pow2(-1)
    };
    let mut q0 = prime;
    loop {
        let (v, _) = escalate(
            prec,
            |wp| target(wp) - uniform_g_bound(&Interval::from_int(q0, wp)),
            |m| VerdictKind::of(m) != VerdictKind::Unknown,
        );
        if v.is_positive() {
            break;
        }
        q0 = q0.checked_mul(prime).ok_or_else(|| {
            Error::Precondition("no admissible power of p below 2^64".into())
        })?;
    }
    let p0i = iv(&p0, prec);
    let q0i = Interval::from_int(q0, prec);
    let half = iv(&rat(1, 2), prec);
    let zero = Interval::zero(prec);
    let gamma0 = (f_interval(&p0i, &iv(c, prec)) - g_interval(&q0i, &half))
        / h1_interval(&p0i, &q0i, &zero);
    let params = json!({"c": rational_string(c), "p0": rational_string(&p0)});
    let f_floor = certify("f-floor", params, prec, |wp| {
        f_interval(&iv(&p0, wp), &iv(c, wp)) - target(wp)
    });
    Ok(ThresholdConstants {
        c: c.clone(),
        p0,
        prime,
        q0,
        gamma0,
        f_floor,
    })
}

/// `g(q,1/2) < 2/(3q) + 3 ln(q)/(2q)`.
pub fn g_uniform_check(q: u64, prec: u32) -> Verdict {
    certify("g-uniform", json!({"q": q}), prec, |wp| {
        let qi = Interval::from_int(q, wp);
        uniform_g_bound(&qi) - g_interval(&qi, &iv(&rat(1, 2), wp))
    })
}

/// `g(q,c) < g(q,1/2)` for `c != 1/2`, through the exact difference
/// `ln(1/(4c(1-c))) / (2q)`.
pub fn g_half_check(q: u64, c: &BigRational, prec: u32) -> Result<Verdict> {
    check_c(c)?;
    let one = BigRational::one();
    let ratio = one.clone() / (BigRational::from_integer(4.into()) * c * (&one - c));
    Ok(certify(
        "g-half",
        json!({"q": q, "c": rational_string(c)}),
        prec,
        |wp| iv(&ratio, wp).ln() / Interval::from_int(2 * q, wp),
    ))
}

/// Whether the ordinary-word ranges certified at the published thresholds
/// cover `3/q <= c <= 0.7` for one characteristic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageRow {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub stated_lower: BigRational,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub stated_upper: BigRational,
    pub stated: [Verdict; 2],
    pub required: [Verdict; 2],
    pub covered: bool,
}

fn half_g_margin(p: u64, q: u64, c: &BigRational, prec: u32) -> Verdict {
    EndpointMargin::new(p, q, c.clone(), true, BigRational::zero())
        .check(prec)
        .expect("endpoints lie in (0, 1)")
}

pub fn coverage_report(primes: &[u64], prec: u32) -> Result<Vec<CoverageRow>> {
    primes
        .iter()
        .map(|&p| {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let (min_q, lo_num, hi) = match p {
                2 => (256, 3, rat(7, 10)),
                3 => (81, 3, rat(8, 10)),
                5 => (125, 2, rat(9, 10)),
                _ => (2401, 2, rat(95, 100)),
            };
            let mut q = p;
            while q < min_q {
                q *= p;
            }
            let lo = rat(lo_num, q as i64);
            let stated = [half_g_margin(p, q, &lo, prec), half_g_margin(p, q, &hi, prec)];
            let required = [
                half_g_margin(p, q, &rat(3, q as i64), prec),
                half_g_margin(p, q, &rat(7, 10), prec),
            ];
            let covered = required.iter().all(Verdict::holds);
            Ok(CoverageRow {
                p,
                q,
                stated_lower: lo,
                stated_upper: hi,
                stated,
                required,
                covered,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignTag {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "?")]
    Unknown,
}

impl SignTag {
    fn of(x: &Interval) -> Self {
        match VerdictKind::of(x) {
            VerdictKind::Holds => SignTag::Positive,
            VerdictKind::Fails => SignTag::Negative,
            VerdictKind::Unknown => SignTag::Unknown,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            SignTag::Positive => "+",
            SignTag::Negative => "-",
            SignTag::Unknown => "?",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FigureRow {
    pub p: u64,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub c: BigRational,
    pub f: Interval,
    pub sign: SignTag,
}

/// A root of f(p, .) certified to lie strictly between two grid points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub p: u64,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::classes::serialize_rational")]
    pub hi: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Figure {
    pub rows: Vec<FigureRow>,
    pub brackets: Vec<Bracket>,
}

impl Figure {
    /// CSV with columns `p,c,f_lo,f_hi,sign`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,c,f_lo,f_hi,sign\n");
        for row in &self.rows {
            let (lo, hi) = row.f.bound_strings();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.p,
                rational_decimal(&row.c),
                lo,
                hi,
                row.sign.symbol()
            ));
        }
        out
    }

    pub fn brackets_for(&self, p: u64) -> Vec<&Bracket> {
        self.brackets.iter().filter(|b| b.p == p).collect()
    }
}

/// Signs of f(p, c) on the grid `c = step, 2 step, ...` below 1, with
/// brackets wherever consecutive certified signs differ.
pub fn figure_scan(ps: &[u64], step: &BigRational, prec: u32) -> Result<Figure> {
    if step <= &BigRational::zero() || step >= &BigRational::one() {
        return Err(Error::InvalidParameter("step must lie in (0, 1)".into()));
    }
    let count = (BigRational::one() / step).ceil().to_integer();
    let count: usize = (count - BigInt::one())
        .try_into()
        .map_err(|_| Error::InvalidParameter("step is too small".into()))?;
    let grid: Vec<(u64, BigRational)> = ps
        .iter()
        .flat_map(|&p| (1..=count).map(move |i| (p, step * BigRational::from_integer(i.into()))))
        .filter(|(_, c)| c < &BigRational::one())
        .collect();
    let rows: Vec<FigureRow> = grid
        .into_par_iter()
        .map(|(p, c)| {
            let (f, _) = escalate(
                prec,
                |wp| f_interval(&Interval::from_int(p, wp), &iv(&c, wp)),
                |x| SignTag::of(x) != SignTag::Unknown,
            );
            let sign = SignTag::of(&f);
            FigureRow { p, c, f, sign }
        })
        .collect();
    let mut brackets = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let flip = matches!(
            (a.sign, b.sign),
            (SignTag::Positive, SignTag::Negative) | (SignTag::Negative, SignTag::Positive)
        );
        if a.p == b.p && flip {
            brackets.push(Bracket {
                p: a.p,
                lo: a.c.clone(),
                hi: b.c.clone(),
            });
        }
    }
    Ok(Figure { rows, brackets })
}
