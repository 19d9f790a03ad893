//! Directed-rounding interval arithmetic over binary floating point with
//! arbitrary-length mantissas.
//!
//! A [`Dyadic`] is `mant * 2^exp`. Every rounded operation takes a mantissa
//! width and a direction, so an [`Interval`] keeps its lower end rounded
//! down and its upper end rounded up. Elementary functions evaluate a
//! truncated series at a few guard bits above the target width and add an
//! explicit bound for the discarded tail.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precisions tried in turn when a verdict does not resolve.
pub const PRECISIONS: [u32; 4] = [53, 128, 256, 512];
pub const DEFAULT_PRECISION: u32 = 128;

const GUARD: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalize()
    }

    pub fn from_int(i: impl Into<BigInt>) -> Self {
        Self::new(i.into(), 0)
    }

    fn normalize(mut self) -> Self {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(tz) if tz > 0 => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
            _ => {}
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    /// `2^(top-1) <= |x| < 2^top` for nonzero x.
    pub fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Exact multiplication by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone().normalize();
        }
        let s = bits - prec as u64;
        let m = div_round(&self.mant, &pow2(s), dir);
        Dyadic::new(m, self.exp + s as i64)
    }

    fn add_exact(&self, o: &Dyadic) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn add(&self, o: &Dyadic, prec: u32, dir: Round) -> Self {
        if self.is_zero() {
            return o.round(prec, dir);
        }
        if o.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= o.top() {
            (self, o)
        } else {
            (o, self)
        };
        if big.top() - small.top() > prec as i64 + 8 {
            // Replace the negligible operand by a nearby power of two on the
            // safe side of the rounding direction.
            let e = big.top() - prec as i64 - 4;
            let tiny = match (small.sign(), dir) {
                (Sign::Plus, Round::Down) | (Sign::Minus, Round::Up) => Dyadic::zero(),
                (Sign::Plus, Round::Up) => Dyadic::new(BigInt::one(), e),
                _ => Dyadic::new(-BigInt::one(), e),
            };
            return big.add_exact(&tiny).round(prec, dir);
        }
        self.add_exact(o).round(prec, dir)
    }

    pub fn sub(&self, o: &Dyadic, prec: u32, dir: Round) -> Self {
        self.add(&o.neg(), prec, dir)
    }

    pub fn mul(&self, o: &Dyadic, prec: u32, dir: Round) -> Self {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp).round(prec, dir)
    }

    pub fn div(&self, o: &Dyadic, prec: u32, dir: Round) -> Self {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let want = prec as i64 + 2 + o.mant.bits() as i64 - self.mant.bits() as i64;
        let s = want.max(0) as u64;
        let num = &self.mant << s;
        let q = div_round(&num, &o.mant, dir);
        Dyadic::new(q, self.exp - s as i64 - o.exp).round(prec, dir)
    }

    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(self.sign() != Sign::Minus, "square root of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        let bits = self.mant.bits() as i64;
        let mut t = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let m = &self.mant << t as u64;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, (self.exp - t) / 2).round(prec, dir)
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        Dyadic::from_int(r.numer().clone()).div(&Dyadic::from_int(r.denom().clone()), prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    /// floor or ceil of `self * 10^digits` as an integer.
    fn scaled_decimal(&self, digits: u32, dir: Round) -> BigInt {
        let m = &self.mant * num_traits::pow(BigInt::from(10), digits as usize);
        if self.exp >= 0 {
            m << self.exp as u64
        } else {
            div_round(&m, &pow2((-self.exp) as u64), dir)
        }
    }

    /// Fixed-point decimal with `digits` fractional digits, rounded in the
    /// given direction; trailing zeros are trimmed.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let v = self.scaled_decimal(digits, dir);
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits as usize);
        let frac = frac.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        out
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), other.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        if self.top() != other.top() {
            let by_mag = self.top().cmp(&other.top());
            return if sa == Sign::Plus { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Closed interval `[lo, hi]` with ends carried at `prec` mantissa bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval ends out of order");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(x: &Dyadic, prec: u32) -> Self {
        Self::new(x.clone(), x.clone(), prec)
    }

    pub fn from_int(i: impl Into<BigInt>, prec: u32) -> Self {
        Self::point(&Dyadic::from_int(i), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn hull(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.hi.sign() == Sign::Minus
    }

    /// Every point of `self` is below every point of `o`.
    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    /// Exact midpoint.
    pub fn mid(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo, self.prec, Round::Up)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Interval) -> Self {
        let p = self.prec.max(o.prec);
        Interval {
            lo: self.lo.add(&o.lo, p, Round::Down),
            hi: self.hi.add(&o.hi, p, Round::Up),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Interval) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Self {
        let p = self.prec.max(o.prec);
        let ends = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = ends.iter().map(|(a, b)| a.mul(b, p, Round::Down)).min().unwrap();
        let hi = ends.iter().map(|(a, b)| a.mul(b, p, Round::Up)).max().unwrap();
        Interval { lo, hi, prec: p }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.contains_zero(), "reciprocal of an interval containing zero");
        let one = Dyadic::from_int(1);
        Interval {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// Panics when the divisor contains zero.
    pub fn div(&self, o: &Interval) -> Self {
        assert!(!o.contains_zero(), "division by an interval containing zero");
        let p = self.prec.max(o.prec);
        let ends = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = ends.iter().map(|(a, b)| a.div(b, p, Round::Down)).min().unwrap();
        let hi = ends.iter().map(|(a, b)| a.div(b, p, Round::Up)).max().unwrap();
        Interval { lo, hi, prec: p }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Interval::from_int(k, self.prec))
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div(&Interval::from_int(k, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Interval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Self {
        let m = self.mul(self);
        if self.contains_zero() {
            Interval {
                lo: Dyadic::zero(),
                hi: m.hi,
                prec: m.prec,
            }
        } else {
            m
        }
    }

    pub fn pow_u32(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Interval::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn max(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    pub fn min(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    /// Negative parts of the lower end are clamped to zero.
    pub fn sqrt(&self) -> Self {
        assert!(self.hi.sign() != Sign::Minus, "square root of a negative interval");
        let lo = if self.lo.sign() == Sign::Minus {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.prec, Round::Down)
        };
        Interval {
            lo,
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive interval");
        let wp = self.prec + GUARD;
        let lo = ln_point(&self.lo, wp).lo;
        let hi = ln_point(&self.hi, wp).hi;
        Interval::new(lo, hi, self.prec)
    }

    pub fn exp(&self) -> Self {
        let wp = self.prec + GUARD;
        let lo = exp_point(&self.lo, wp).lo;
        let hi = exp_point(&self.hi, wp).hi;
        Interval::new(lo, hi, self.prec)
    }

    /// `self^e` for a strictly positive base.
    pub fn powr(&self, e: &Interval) -> Self {
        let wp = self.prec.max(e.prec);
        let base = self.with_prec(wp + GUARD);
        e.with_prec(wp + GUARD).mul(&base.ln()).exp().with_prec(wp)
    }

    pub fn pi(prec: u32) -> Self {
        cached(&PI_CACHE, prec + GUARD, pi_raw).with_prec(prec)
    }

    pub fn ln2(prec: u32) -> Self {
        cached(&LN2_CACHE, prec + GUARD, ln2_raw).with_prec(prec)
    }

    fn digits(&self) -> u32 {
        let base = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as u32;
        let mag = self.mag();
        let extra = if !mag.is_zero() && mag.top() < 0 {
            ((-mag.top()) as f64 * std::f64::consts::LOG10_2).floor() as u32
        } else {
            0
        };
        base + extra
    }

    /// Decimal renderings of the ends, rounded outward.
    pub fn bound_strings(&self) -> (String, String) {
        let d = self.digits();
        (self.lo.to_decimal(d, Round::Down), self.hi.to_decimal(d, Round::Up))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.bound_strings();
        write!(f, "[{lo}, {hi}]")
    }
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&Interval> for &Interval {
            type Output = Interval;
            fn $method(self, o: &Interval) -> Interval {
                Interval::$method(self, o)
            }
        }
        impl std::ops::$tr<Interval> for Interval {
            type Output = Interval;
            fn $method(self, o: Interval) -> Interval {
                Interval::$method(&self, &o)
            }
        }
        impl std::ops::$tr<&Interval> for Interval {
            type Output = Interval;
            fn $method(self, o: &Interval) -> Interval {
                Interval::$method(&self, o)
            }
        }
        impl std::ops::$tr<Interval> for &Interval {
            type Output = Interval;
            fn $method(self, o: Interval) -> Interval {
                Interval::$method(self, &o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(&self)
    }
}

impl std::ops::Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(self)
    }
}

type Cache = OnceLock<Mutex<HashMap<u32, Interval>>>;

static LN2_CACHE: Cache = OnceLock::new();
static PI_CACHE: Cache = OnceLock::new();

fn cached(cache: &Cache, wp: u32, compute: fn(u32) -> Interval) -> Interval {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().unwrap().get(&wp) {
        return v.clone();
    }
    let v = compute(wp);
    map.lock().unwrap().insert(wp, v.clone());
    v
}

/// Sum of `t^(2i+1) / (2i+1)` with signs `(+,+,...)` or `(+,-,...)`, for
/// |t| <= 1/2, plus a bound on the tail.
fn odd_series(t: &Interval, alternating: bool, wp: u32) -> Interval {
    if t.is_point() && t.lo.is_zero() {
        return Interval::zero(wp);
    }
    let t2 = t.sqr();
    let mut pw = t.clone();
    let mut sum = t.clone();
    let mut i = 1i64;
    loop {
        pw = pw.mul(&t2);
        let term = pw.div_int(2 * i + 1);
        sum = if alternating && i % 2 == 1 {
            sum.sub(&term)
        } else {
            sum.add(&term)
        };
        let m = pw.mag();
        if m.is_zero() || m.top() < -(wp as i64) - 4 {
            break;
        }
        i += 1;
    }
    // with t^2 <= 1/4 the tail is at most |pw| / 3
    let b = pw.mag();
    sum.add(&Interval {
        lo: b.neg(),
        hi: b,
        prec: wp,
    })
}

fn ln2_raw(wp: u32) -> Interval {
    let third = Interval::one(wp).div_int(3);
    odd_series(&third, false, wp).mul_pow2(1)
}

fn pi_raw(wp: u32) -> Interval {
    let a = odd_series(&Interval::one(wp).div_int(5), true, wp);
    let b = odd_series(&Interval::one(wp).div_int(239), true, wp);
    a.mul_int(16).sub(&b.mul_int(4))
}

fn ln_point(x: &Dyadic, wp: u32) -> Interval {
    assert!(x.sign() == Sign::Plus);
    let mut k = x.top() - 1;
    let mut y = x.mul_pow2(-k);
    if y > Dyadic::new(BigInt::from(3), -1) {
        k += 1;
        y = y.mul_pow2(-1);
    }
    let yi = Interval::point(&y, wp);
    let one = Interval::one(wp);
    let t = yi.sub(&one).div(&yi.add(&one));
    let s = odd_series(&t, false, wp).mul_pow2(1);
    if k == 0 {
        s
    } else {
        s.add(&Interval::ln2(wp).mul_int(k))
    }
}

fn exp_point(x: &Dyadic, wp: u32) -> Interval {
    if x.is_zero() {
        return Interval::one(wp);
    }
    assert!(x.top() <= 64, "exponential argument out of range");
    let m = (x.top() + 8).max(0);
    let wp2 = wp + m as u32 + 16;
    let r = Interval::point(&x.mul_pow2(-m), wp2);
    let mut sum = Interval::one(wp2);
    let mut term = Interval::one(wp2);
    let mut i = 1i64;
    loop {
        term = term.mul(&r).div_int(i);
        sum = sum.add(&term);
        let mag = term.mag();
        if mag.is_zero() || mag.top() < -(wp2 as i64) - 4 {
            break;
        }
        i += 1;
    }
    // |r| < 2^-8, so the remaining terms sum to less than |term|
    let b = term.mag();
    sum = sum.add(&Interval {
        lo: b.neg(),
        hi: b,
        prec: wp2,
    });
    for _ in 0..m {
        sum = sum.sqr();
    }
    sum.with_prec(wp)
}

/// Re-runs `eval` at increasing precision until `decided` accepts the
/// result or the ladder is exhausted. Returns the last value and the
/// precision used.
pub fn escalate<T>(
    start: u32,
    mut eval: impl FnMut(u32) -> T,
    decided: impl Fn(&T) -> bool,
) -> (T, u32) {
    let mut ladder: Vec<u32> = PRECISIONS.iter().copied().filter(|&p| p >= start).collect();
    if ladder.is_empty() {
        ladder.push(start);
    }
    let mut last = None;
    for &p in &ladder {
        let v = eval(p);
        if decided(&v) {
            return (v, p);
        }
        last = Some((v, p));
    }
    last.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::from_int(0b1011_0111);
        assert_eq!(x.round(4, Round::Down), Dyadic::from_int(0b1011_0000));
        assert_eq!(x.round(4, Round::Up), Dyadic::from_int(0b1100_0000));
        let y = x.neg();
        assert_eq!(y.round(4, Round::Down), Dyadic::from_int(-0b1100_0000));
        assert_eq!(y.round(4, Round::Up), Dyadic::from_int(-0b1011_0000));
    }

    #[test]
    fn thirds_enclose() {
        let t = Interval::from_rational(&rat(1, 3), 53);
        assert!(t.contains_rational(&rat(1, 3)));
        assert!(!t.is_point());
        let back = t.mul_int(3);
        assert!(back.contains(&Dyadic::from_int(1)));
    }

    #[test]
    fn add_with_large_gap_stays_directed() {
        let big = Dyadic::from_int(1);
        let tiny = Dyadic::new(BigInt::one(), -1000);
        let down = big.add(&tiny, 20, Round::Down);
        let up = big.add(&tiny, 20, Round::Up);
        assert!(down <= big.add_exact(&tiny));
        assert!(up >= big.add_exact(&tiny));
        let down = big.add(&tiny.neg(), 20, Round::Down);
        assert!(down < big);
    }

    #[test]
    fn constants() {
        let pi = Interval::pi(256);
        let ln2 = Interval::ln2(256);
        assert!(pi.lo().to_f64() <= std::f64::consts::PI && std::f64::consts::PI <= pi.hi().to_f64());
        assert!(ln2.contains_rational(&BigRational::from_float(std::f64::consts::LN_2).unwrap()) || ln2.width().top() < -200);
        assert!(pi.width().top() < -240);
        let (lo, _) = pi.bound_strings();
        assert!(lo.starts_with("3.14159265358979323846264338327950288419716939937510"));
    }

    #[test]
    fn ln_exp_roundtrip() {
        for prec in PRECISIONS {
            for (n, d) in [(1, 7), (3, 2), (10, 1), (1000, 3), (1, 1)] {
                let x = Interval::from_rational(&rat(n, d), prec);
                let y = x.ln().exp();
                assert!(y.contains_rational(&rat(n, d)));
                let w = y.width();
                assert!(w.is_zero() || w.top() < -(prec as i64) + 16, "{prec} {n}/{d}");
            }
        }
        assert_eq!(Interval::one(128).ln(), Interval::zero(128));
    }

    #[test]
    fn ln_matches_f64() {
        for x in [0.001f64, 0.3, 0.75, 1.5, 2.0, 17.0, 1e6] {
            let i = Interval::from_rational(&BigRational::from_float(x).unwrap(), 64).ln();
            assert!((i.to_f64() - x.ln()).abs() < 1e-14 * (1.0 + x.ln().abs()));
        }
    }

    #[test]
    fn exp_matches_f64() {
        for x in [-30.0f64, -1.0, 0.5, 1.0, 7.25, 100.0] {
            let i = Interval::from_rational(&BigRational::from_float(x).unwrap(), 64).exp();
            assert!((i.to_f64() / x.exp() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_and_powr() {
        let s = Interval::from_int(7, 128).sqrt();
        assert!(s.sqr().contains(&Dyadic::from_int(7)));
        let four = Interval::from_int(2, 128).sqr().sqrt();
        assert!(four.contains(&Dyadic::from_int(2)));
        let r = Interval::from_int(8, 128).powr(&Interval::from_rational(&rat(1, 3), 128));
        assert!(r.contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn decimal_output_rounds_outward() {
        let t = Interval::from_rational(&rat(-2, 3), 53);
        let (lo, hi) = t.bound_strings();
        assert_eq!(lo, "-0.6666666666666668");
        assert_eq!(hi, "-0.6666666666666666");
        assert_eq!(Interval::from_int(5, 53).to_string(), "[5, 5]");
    }

    #[test]
    fn escalation_stops_when_decided() {
        let (v, p) = escalate(53, |p| p, |&p| p >= 256);
        assert_eq!((v, p), (256, 256));
        let (_, p) = escalate(53, |p| p, |_| false);
        assert_eq!(p, 512);
    }
}
