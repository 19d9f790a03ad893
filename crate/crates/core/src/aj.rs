//! The cycle-counting function
//! `A_j(u, w) = (1/j!) sum over permutations of u^(cycles) w^(cycles of length not divisible by p)`,
//! equal to `[z^j] (1-z)^(-uw) (1-z^p)^(-(u-uw)/p)`, with three independent
//! evaluators.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::combinatorics::{factorial, partitions};
use crate::error::{Error, Result};
use crate::gf::{is_prime, prime_power};
use crate::scalar::{LogValue, Scalar};

pub const MAX_PERMUTATION_J: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AjParams {
    pub j: usize,
    pub p: u64,
    pub u: Scalar,
    pub w: Scalar,
}

impl AjParams {
    pub fn new(j: usize, p: u64, u: Scalar, w: Scalar) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(AjParams { j, p, u, w })
    }

    /// `u = q`, `w = q1 / q` for the code over F_q with `ell` tracked
    /// coefficients.
    pub fn from_field(q: u64, ell: usize, j: usize, prec: u32) -> Result<Self> {
        let (p, _) = prime_power(q)?;
        let (_, gamma) = q1_gamma(q, ell, prec)?;
        Ok(AjParams {
            j,
            p,
            u: Scalar::int(q),
            w: gamma,
        })
    }

    fn uw(&self) -> Scalar {
        self.u.mul(&self.w)
    }

    /// `(u - uw) / p`
    fn v(&self) -> Scalar {
        self.u.sub(&self.uw()).div(&Scalar::int(self.p))
    }
}

/// `q1 = min(q, (ell-1) sqrt(q))` and `gamma = q1 / q`. Exact when the
/// minimum is q or q is a perfect square.
pub fn q1_gamma(q: u64, ell: usize, prec: u32) -> Result<(Scalar, Scalar)> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let m = (ell - 1) as u128;
    let q1 = if m * m >= q as u128 {
        Scalar::int(q)
    } else {
        Scalar::int(m as u64).mul(&Scalar::int(q).sqrt(prec))
    };
    let gamma = q1.div(&Scalar::int(q));
    Ok((q1, gamma))
}

/// `a (a-1) ... (a-k+1) / k!`
pub fn gen_binom(a: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::int(1);
    for i in 0..k {
        acc = acc
            .mul(&a.sub(&Scalar::int(i as u64)))
            .div(&Scalar::int(i as u64 + 1));
    }
    acc
}

/// `ln gen_binom(a, k)`. An exact zero factor gives negative infinity; every
/// other factor must be certainly positive.
pub fn ln_gen_binom(a: &Scalar, k: usize, prec: u32) -> Result<LogValue> {
    let mut acc = Scalar::int(1);
    for i in 0..k {
        let factor = a
            .sub(&Scalar::int(i as u64))
            .div(&Scalar::int(i as u64 + 1));
        if factor.is_exact_zero() {
            return Ok(LogValue::NegInfinity);
        }
        if !factor.to_interval(prec).is_positive() {
            return Err(Error::Precondition(format!(
                "binomial factor {i} is not certainly positive"
            )));
        }
        acc = acc.mul(&factor);
    }
    Ok(acc.ln(prec))
}

fn scalar_pow(x: &Scalar, e: usize) -> Scalar {
    (0..e).fold(Scalar::int(1), |acc, _| acc.mul(x))
}

/// Sum over cycle types of j with weight `1 / prod(m_i! i^m_i)`.
pub fn aj_permutation(params: &AjParams) -> Result<Scalar> {
    let j = params.j;
    if j > MAX_PERMUTATION_J {
        return Err(Error::InvalidParameter(format!(
            "cycle-type enumeration is limited to j <= {MAX_PERMUTATION_J}, got {j}"
        )));
    }
    let mut total = Scalar::int(0);
    for mult in partitions(j) {
        let mut den = BigInt::from(1);
        let (mut cycles, mut coprime) = (0, 0);
        for (i, &m) in mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let len = i as u64 + 1;
            den *= BigInt::from(factorial(m as u64)) * num_traits::pow(BigInt::from(len), m);
            cycles += m;
            if len % params.p != 0 {
                coprime += m;
            }
        }
        let weight = Scalar::Exact(BigRational::new(1.into(), den));
        let term = weight
            .mul(&scalar_pow(&params.u, cycles))
            .mul(&scalar_pow(&params.w, coprime));
        total = total.add(&term);
    }
    Ok(total)
}

/// Power-series route: with `s_k = u` when p | k and `uw` otherwise,
/// `n A_n = sum_{k=1}^{n} s_k A_{n-k}`.
pub fn aj_series(params: &AjParams) -> Scalar {
    let uw = params.uw();
    let mut a = vec![Scalar::int(1)];
    for n in 1..=params.j {
        let mut acc = Scalar::int(0);
        for k in 1..=n {
            let s = if k as u64 % params.p == 0 { &params.u } else { &uw };
            acc = acc.add(&s.mul(&a[n - k]));
        }
        a.push(acc.div(&Scalar::int(n as u64)));
    }
    a.pop().unwrap()
}

/// `sum_{0 <= i <= j/p} C(uw + j - ip - 1, j - ip) C(v + i - 1, i)` with
/// `v = (u - uw)/p`; both binomial sequences are built by their term ratios.
pub fn aj_binsum(params: &AjParams) -> Scalar {
    let j = params.j;
    let uw = params.uw();
    let v = params.v();
    let rising = |x: &Scalar, len: usize| {
        let mut seq = vec![Scalar::int(1)];
        for n in 1..=len {
            let next = seq[n - 1]
                .mul(&x.add(&Scalar::int(n as u64 - 1)))
                .div(&Scalar::int(n as u64));
            seq.push(next);
        }
        seq
    };
    let a = rising(&uw, j);
    let b = rising(&v, j / params.p as usize);
    let mut total = Scalar::int(0);
    for (i, bi) in b.iter().enumerate() {
        total = total.add(&a[j - i * params.p as usize].mul(bi));
    }
    total
}

/// Enclosure of `ln A_j`; negative infinity when A_j is exactly zero.
pub fn ln_aj(params: &AjParams, prec: u32) -> LogValue {
    aj_binsum(params).ln(prec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AjMethod {
    Permutation,
    Series,
    Binsum,
}

pub fn aj(params: &AjParams, method: AjMethod) -> Result<Scalar> {
    match method {
        AjMethod::Permutation => aj_permutation(params),
        AjMethod::Series => Ok(aj_series(params)),
        AjMethod::Binsum => Ok(aj_binsum(params)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn params(j: usize, p: u64, u: Scalar, w: Scalar) -> AjParams {
        AjParams::new(j, p, u, w).unwrap()
    }

    fn all_three(pr: &AjParams) -> [Scalar; 3] {
        [aj_permutation(pr).unwrap(), aj_series(pr), aj_binsum(pr)]
    }

    #[test]
    fn q1_examples() {
        let (q1, g) = q1_gamma(64, 2, 128).unwrap();
        assert_eq!((q1, g), (Scalar::int(8), Scalar::ratio(1, 8)));
        let (q1, g) = q1_gamma(9, 5, 128).unwrap();
        assert_eq!((q1, g), (Scalar::int(9), Scalar::int(1)));
        let (q1, _) = q1_gamma(7, 2, 128).unwrap();
        assert!(!q1.is_exact());
        let i = q1.to_interval(128);
        assert!(i.sqr().contains(&crate::interval::Dyadic::from_int(7)));
        assert_eq!(q1_gamma(5, 1, 128).unwrap().0, Scalar::int(0));
    }

    #[test]
    fn gen_binom_examples() {
        assert_eq!(gen_binom(&Scalar::ratio(5, 2), 2), Scalar::ratio(15, 8));
        assert_eq!(gen_binom(&Scalar::ratio(-7, 3), 0), Scalar::int(1));
        assert_eq!(gen_binom(&Scalar::int(3), 5), Scalar::int(0));
        assert_eq!(
            ln_gen_binom(&Scalar::int(3), 5, 128).unwrap(),
            LogValue::NegInfinity
        );
        let l = ln_gen_binom(&Scalar::int(10), 3, 128).unwrap();
        assert!(l.finite().unwrap().exp().contains(&crate::interval::Dyadic::from_int(120)));
    }

    #[test]
    fn spec_examples() {
        let p = params(0, 5, Scalar::int(3), Scalar::ratio(1, 3));
        assert!(all_three(&p).iter().all(|v| *v == Scalar::int(1)));
        let p = params(1, 3, Scalar::int(3), Scalar::ratio(1, 3));
        assert!(all_three(&p).iter().all(|v| *v == Scalar::int(1)));
        let p = params(2, 2, Scalar::int(4), Scalar::ratio(1, 2));
        assert!(all_three(&p).iter().all(|v| *v == Scalar::int(4)));
        let p = params(3, 3, Scalar::int(1), Scalar::int(1));
        assert_eq!(aj_binsum(&p), Scalar::int(1));
        let p = params(5, 2, Scalar::int(2), Scalar::int(1));
        assert_eq!(aj_binsum(&p), Scalar::int(6));
    }

    /// Direct average over all j! permutations.
    fn oracle(j: usize, p: u64, u: &BigRational, w: &BigRational) -> BigRational {
        let mut total = BigRational::from_integer(0.into());
        for perm in (0..j).permutations(j) {
            let mut seen = vec![false; j];
            let mut term = BigRational::from_integer(1.into());
            for s in 0..j {
                if seen[s] {
                    continue;
                }
                let mut len = 0u64;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                    len += 1;
                }
                term *= u;
                if len % p != 0 {
                    term *= w;
                }
            }
            total += term;
        }
        total / BigRational::from_integer(factorial(j as u64).into())
    }

    #[test]
    fn cycle_types_match_permutation_average() {
        for j in 0..=6 {
            for p in [2, 3, 5] {
                let u = BigRational::new(5.into(), 2.into());
                let w = BigRational::new(1.into(), 3.into());
                let pr = params(j, p, Scalar::Exact(u.clone()), Scalar::Exact(w.clone()));
                assert_eq!(aj_permutation(&pr).unwrap(), Scalar::Exact(oracle(j, p, &u, &w)));
            }
        }
    }

    #[test]
    fn three_routes_agree_exactly() {
        let us = [Scalar::int(1), Scalar::int(2), Scalar::ratio(5, 2), Scalar::int(7)];
        let ws = [Scalar::int(0), Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::int(1)];
        for j in 0..=8 {
            for p in [2, 3, 5, 7] {
                for u in &us {
                    for w in &ws {
                        let [a, b, c] = all_three(&params(j, p, u.clone(), w.clone()));
                        assert_eq!(a, b);
                        assert_eq!(b, c);
                    }
                }
            }
        }
    }

    #[test]
    fn interval_inputs() {
        let pr = AjParams::from_field(7, 2, 30, 128).unwrap();
        let s = aj_series(&pr);
        let b = aj_binsum(&pr);
        assert!(!s.is_exact());
        assert!(s.agrees_with(&b));
        assert!(aj_permutation(&AjParams { j: 21, ..pr }).is_err());
    }
}
