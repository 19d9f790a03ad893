//! Finite fields F_q with q = p^s.
//!
//! Elements are encoded as integers `0..q`, read as base-p digit vectors
//! (lowest digit = constant coefficient of the residue modulo the defining
//! polynomial). The defining polynomial of an extension field is the
//! lexicographically smallest monic irreducible of degree `s`, so two
//! `FieldSpec`s built from the same `(p, s)` are identical.

use crate::error::{Error, Result};

/// A field element in the integer encoding `0..q`.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Above this order no log/antilog tables are built.
const LOG_TABLE_MAX: u32 = 1 << 16;

/// Above this order no addition table is built for extension fields.
const ADD_TABLE_MAX: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` into `(p, s)` with `q = p^s`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut rest = q;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LogTables {
    generator: Elem,
    /// `antilog[i] = g^i` for `i in 0..2(q-1)`; doubled to skip a reduction.
    antilog: Vec<Elem>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The finite field F_q, immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    s: u32,
    q: u32,
    /// Monic defining polynomial over F_p, lowest degree first (length s+1).
    modulus: Vec<u32>,
    logs: Option<LogTables>,
    add_table: Option<Vec<Elem>>,
}

impl FieldSpec {
    /// Builds F_{p^s}. Fails when `p` is not prime, `s == 0`, or `p^s > 2^20`.
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = p
            .checked_pow(s)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, s })?;
        let p = p as u32;
        let q = q as u32;
        let modulus = if s == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, s as usize)
        };
        let mut field = FieldSpec {
            p,
            s,
            q,
            modulus,
            logs: None,
            add_table: None,
        };
        if q <= LOG_TABLE_MAX {
            field.logs = Some(field.build_logs());
        }
        if s > 1 && p != 2 && q <= ADD_TABLE_MAX {
            let mut table = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = Some(table);
        }
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, s) = prime_power(q)?;
        Self::new(p, s)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// The defining polynomial, or `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.s > 1).then_some(self.modulus.as_slice())
    }

    /// Generator of the multiplicative group used by the log tables.
    pub fn generator(&self) -> Option<Elem> {
        self.logs.as_ref().map(|l| l.generator)
    }

    /// The antilog table `g^0, g^1, ..., g^(q-2)` when built.
    pub fn antilog_table(&self) -> Option<&[Elem]> {
        self.logs
            .as_ref()
            .map(|l| &l.antilog[..(self.q - 1) as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn check(&self, a: u64) -> Result<Elem> {
        if a < self.q as u64 {
            Ok(a as Elem)
        } else {
            Err(Error::NotAnElement {
                value: a,
                q: self.q,
            })
        }
    }

    /// Base-p digits of `a`, lowest first.
    pub fn digits(&self, mut a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.s as usize);
        for _ in 0..self.s {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.s == 1 {
            let c = a + b;
            if c >= self.p {
                c - self.p
            } else {
                c
            }
        } else if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.s == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let d: Vec<u32> = self
                .digits(a)
                .into_iter()
                .map(|x| (self.p - x) % self.p)
                .collect();
            self.from_digits(&d)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.s == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Elem;
        }
        match &self.logs {
            Some(t) => t.antilog[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_digits(a, b),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        match &self.logs {
            Some(t) => {
                let order = self.q - 1;
                let l = t.log[a as usize];
                Some(t.antilog[((order - l) % order) as usize])
            }
            None => Some(self.pow(a, self.q as u64 - 2)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.s {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let s = self.s as usize;
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(s) {
                let idx = top - s + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[top] = 0;
        }
        let digits: Vec<u32> = prod[..s].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    fn build_logs(&self) -> LogTables {
        let order = self.q - 1;
        let prime_factors = distinct_prime_factors(order as u64);
        let slow_pow = |a: Elem, mut e: u64| {
            let mut base = a;
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_slow(acc, base);
                }
                base = self.mul_slow(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..self.q)
            .find(|&g| {
                order == 1
                    || prime_factors
                        .iter()
                        .all(|&r| slow_pow(g, order as u64 / r) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let mut antilog = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x: Elem = 1;
        for i in 0..order {
            antilog.push(x);
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        antilog.extend_from_within(..);
        LogTables {
            generator,
            antilog,
            log,
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.s == 1 {
            ((a as u64 * b as u64) % self.p as u64) as Elem
        } else {
            self.mul_digits(a, b)
        }
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic `m` over F_p (both lowest degree first).
fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for (i, &mi) in m.iter().enumerate().take(dm) {
                let idx = top - dm + i;
                r[idx] = (r[idx] + (p64 - c) * mi as u64) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `index`.
fn monic_from_index(index: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut rest = index;
    for _ in 0..deg {
        coeffs.push((rest % p as u64) as u32);
        rest /= p as u64;
    }
    coeffs.push(1);
    coeffs
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg / 2`.
pub(crate) fn is_irreducible_fp(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..(p as u64).pow(d as u32) {
            let divisor = monic_from_index(idx, d, p);
            if fp_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `s` over F_p, ordering candidates by
/// their lower coefficients read as a base-p integer (constant term lowest).
fn smallest_irreducible(p: u32, s: usize) -> Vec<u32> {
    (0..(p as u64).pow(s as u32))
        .map(|idx| monic_from_index(idx, s, p))
        .find(|cand| is_irreducible_fp(cand, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: the first monic cubic over F_2 with no root and
    /// (being a cubic) therefore no quadratic factor.
    fn first_rootless_cubic_f2() -> Vec<u32> {
        for idx in 0..8u32 {
            let c = [idx & 1, (idx >> 1) & 1, (idx >> 2) & 1, 1];
            let eval = |x: u32| (c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x) % 2;
            if eval(0) != 0 && eval(1) != 0 {
                return c.to_vec();
            }
        }
        unreachable!()
    }

    #[test]
    fn prime_field_of_order_three() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus(), None);
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.neg(1), 2);
    }

    #[test]
    fn gf8_modulus_is_smallest_irreducible() {
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.order(), 8);
        assert_eq!(f.modulus().unwrap(), first_rootless_cubic_f2().as_slice());
        assert_eq!(f.modulus().unwrap(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::new(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(3, 0), Err(Error::ZeroExtensionDegree));
        assert!(matches!(
            FieldSpec::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(FieldSpec::with_order(12).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2401).unwrap(), (7, 4));
        assert_eq!(prime_power(1024).unwrap(), (2, 10));
        assert_eq!(prime_power(13).unwrap(), (13, 1));
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)] {
            let f = FieldSpec::new(p, s).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_schoolbook_multiplication() {
        for (p, s) in [(2, 8), (3, 4), (5, 3), (7, 2), (2, 10)] {
            let f = FieldSpec::new(p, s).unwrap();
            for a in (0..f.order()).step_by(7) {
                for b in (0..f.order()).step_by(11) {
                    assert_eq!(f.mul(a, b), f.mul_digits(a, b));
                    assert_eq!(f.add(a, b), f.add_digits(a, b));
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49, 64, 81, 125, 128, 243, 256] {
            let f = FieldSpec::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a, "q = {q}, a = {a}");
            }
        }
    }

    #[test]
    fn large_field_without_log_tables() {
        let f = FieldSpec::new(2, 17).unwrap();
        assert!(f.antilog_table().is_none());
        for a in [1u32, 2, 3, 12345, 99999] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.pow(a, f.order() as u64), a);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        for (p, s) in [(3, 3), (2, 6), (5, 2)] {
            assert_eq!(FieldSpec::new(p, s).unwrap(), FieldSpec::new(p, s).unwrap());
        }
    }

    #[test]
    fn moduli_are_irreducible() {
        for (p, s) in [(2, 2), (2, 5), (3, 3), (5, 2), (7, 3), (2, 12)] {
            let f = FieldSpec::new(p, s).unwrap();
            assert!(is_irreducible_fp(f.modulus().unwrap(), p as u32));
        }
    }
}
