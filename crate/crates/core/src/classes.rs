//! Leading-coefficient classes and the exact counting formulas built on them.
//!
//! A monic `f` of degree `d` is identified, for a fixed `ell`, with the
//! truncated reciprocal series `1 + c_1 t + ... + c_ell t^ell` where
//! `c_j = [x^(d-j)] f` (zero when `d < j`). Classes multiply as truncated
//! series, which matches multiplying representatives.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::budget::{binomial_cost, cost, Budget};
use crate::combinatorics::{binomial, falling_factorial, factorial};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::poly::{EvalSet, Poly};
use crate::scalar::rational_string;

/// An equivalence class of monic polynomials sharing `ell` leading
/// coefficients below the leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeadClass {
    q: u32,
    coeffs: Vec<Elem>,
}

impl Serialize for LeadClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl std::fmt::Display for LeadClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.coeffs.iter().join(","))
    }
}

impl LeadClass {
    pub fn new(field: &FieldSpec, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        for &c in &coeffs {
            field.check(c as u64)?;
        }
        Ok(LeadClass {
            q: field.order(),
            coeffs,
        })
    }

    /// The class of 1, i.e. all zeros.
    pub fn identity(field: &FieldSpec, ell: usize) -> Self {
        LeadClass {
            q: field.order(),
            coeffs: vec![0; ell],
        }
    }

    pub fn ell(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Position in lexicographic order (c_1 most significant).
    pub fn index(&self) -> usize {
        self.coeffs
            .iter()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }

    pub fn from_index(field: &FieldSpec, ell: usize, mut index: usize) -> Self {
        let q = field.order() as usize;
        let mut coeffs = vec![0; ell];
        for slot in coeffs.iter_mut().rev() {
            *slot = (index % q) as Elem;
            index /= q;
        }
        LeadClass {
            q: field.order(),
            coeffs,
        }
    }

    /// The group inverse under [`class_mul`].
    pub fn inverse(&self, field: &FieldSpec) -> Self {
        let ell = self.ell();
        let mut inv = vec![0; ell];
        for i in 0..ell {
            let mut acc = self.coeffs[i];
            for s in 0..i {
                acc = field.add(acc, field.mul(self.coeffs[s], inv[i - 1 - s]));
            }
            inv[i] = field.neg(acc);
        }
        LeadClass { q: self.q, coeffs: inv }
    }

    /// A monic representative of degree `deg` (requires `deg >= ell`).
    pub fn representative(&self, deg: usize) -> Result<Poly> {
        if deg < self.ell() {
            return Err(Error::Precondition(format!(
                "degree {deg} is below ell = {}",
                self.ell()
            )));
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = 1;
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[deg - 1 - j] = c;
        }
        Ok(Poly::new(coeffs))
    }
}

/// Reads the `ell` coefficients below the leading term of a monic `f`.
pub fn class_of(field: &FieldSpec, f: &Poly, ell: usize) -> Result<LeadClass> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let deg = f.degree().expect("monic is nonzero");
    let coeffs = (1..=ell)
        .map(|j| if j <= deg { f.coeff(deg - j) } else { 0 })
        .collect();
    Ok(LeadClass {
        q: field.order(),
        coeffs,
    })
}

/// `out = a * b mod t^(ell+1)` on the series coefficients `c_1..c_ell`.
#[inline]
fn mul_truncated(field: &FieldSpec, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    for i in 0..out.len() {
        let mut acc = field.add(a[i], b[i]);
        for s in 0..i {
            acc = field.add(acc, field.mul(a[s], b[i - 1 - s]));
        }
        out[i] = acc;
    }
}

pub fn class_mul(field: &FieldSpec, a: &LeadClass, b: &LeadClass) -> Result<LeadClass> {
    if a.ell() != b.ell() {
        return Err(Error::ClassMismatch(format!(
            "ell {} vs {}",
            a.ell(),
            b.ell()
        )));
    }
    if a.q != b.q || a.q != field.order() {
        return Err(Error::ClassMismatch(format!(
            "field orders {} and {} vs {}",
            a.q,
            b.q,
            field.order()
        )));
    }
    let mut coeffs = vec![0; a.ell()];
    mul_truncated(field, &a.coeffs, &b.coeffs, &mut coeffs);
    Ok(LeadClass { q: a.q, coeffs })
}

/// The distinct classes of monic polynomials of degree `m`, in
/// lexicographic order.
pub fn enumerate_classes(field: &FieldSpec, m: usize, ell: usize) -> Vec<LeadClass> {
    let free = m.min(ell);
    let q = field.order() as usize;
    let count = q.pow(free as u32);
    (0..count)
        .map(|idx| {
            let mut coeffs = LeadClass::from_index(field, free, idx).coeffs;
            coeffs.resize(ell, 0);
            LeadClass {
                q: field.order(),
                coeffs,
            }
        })
        .collect()
}

/// Where a distance table came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Formula,
    BruteForce,
}

/// `N_d(eps, r)` for `r = 0..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistTable {
    pub q: u32,
    pub ell: usize,
    pub d: usize,
    pub class: LeadClass,
    #[serde(serialize_with = "serialize_counts")]
    pub counts: Vec<BigUint>,
    pub source: Source,
}

fn serialize_counts<S: Serializer>(
    counts: &[BigUint],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(counts.len()))?;
    for c in counts {
        match c.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&c.to_string())?,
        }
    }
    seq.end()
}

impl DistTable {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// W_j for every class at once, indexed by [`LeadClass::index`]: the number
/// of pairs (eta, S) with eta a class of degree `d - j`, S a j-subset of D,
/// and `eta * prod_{a in S} <x - a>` landing in each class. The factors are
/// `x - a` so that the roots counted are the points of D themselves.
pub fn wj_table(
    field: &FieldSpec,
    ell: usize,
    j: usize,
    d: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<Vec<u64>> {
    if j > d {
        return Err(Error::Precondition(format!("j = {j} exceeds d = {d}")));
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let q = field.order() as usize;
    let n = set.len();
    let etas = enumerate_classes(field, d - j, ell);
    budget.check(cost(&[
        etas.len() as u128,
        binomial_cost(n as u64, j as u64),
        (j as u128).max(1) * (ell * ell) as u128,
    ]))?;
    let mut table = vec![0u64; q.pow(ell as u32)];
    if j > n {
        return Ok(table);
    }
    let mut sigma = vec![0; ell];
    let mut prod = vec![0; ell];
    let mut lin = vec![0; ell];
    for subset in set.elements().iter().combinations(j) {
        sigma.iter_mut().for_each(|c| *c = 0);
        for &&alpha in &subset {
            lin[0] = field.neg(alpha);
            mul_truncated(field, &sigma, &lin, &mut prod);
            sigma.copy_from_slice(&prod);
        }
        for eta in &etas {
            mul_truncated(field, &eta.coeffs, &sigma, &mut prod);
            let idx = prod.iter().fold(0usize, |acc, &c| acc * q + c as usize);
            table[idx] += 1;
        }
    }
    Ok(table)
}

/// W_j(eps) by exact enumeration for any `j <= d`; the counting formula only
/// uses `d - ell + 1 <= j <= d`. Zero when D has fewer than `j` points.
pub fn wj_exact(
    field: &FieldSpec,
    eps: &LeadClass,
    j: usize,
    d: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<BigUint> {
    let table = wj_table(field, eps.ell(), j, d, set, budget)?;
    Ok(BigUint::from(table[eps.index()]))
}

/// `C(n, r) q^(base_exp) sum_{j=0}^{limit} C(n-r, j) (-q)^(-j)`, empty (zero)
/// when `limit < 0`.
pub fn main_term(n: u64, q: u64, r: u64, base_exp: i64, limit: i64) -> BigRational {
    if limit < 0 || r > n {
        return BigRational::zero();
    }
    let qr = BigRational::from_integer(BigInt::from(q));
    let mut sum = BigRational::zero();
    let mut neg_q_pow = BigRational::one();
    let minus_inv_q = -qr.recip();
    for j in 0..=limit as u64 {
        sum += BigRational::from_integer(binomial(n - r, j).into()) * &neg_q_pow;
        neg_q_pow *= &minus_inv_q;
    }
    BigRational::from_integer(binomial(n, r).into()) * rational_pow(&qr, base_exp) * sum
}

fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let mag = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// The full row `N_d(eps, 0..=d)` assembled from the main term and the
/// boundary W_j terms.
pub fn dist_table_formula(
    field: &FieldSpec,
    eps: &LeadClass,
    d: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<DistTable> {
    let ell = eps.ell();
    if d < ell {
        return Err(Error::Precondition(format!("d = {d} is below ell = {ell}")));
    }
    let w: Vec<BigUint> = (d - ell + 1..=d)
        .map(|j| wj_exact(field, eps, j, d, set, budget))
        .collect::<Result<_>>()?;
    let counts = (0..=d)
        .map(|r| assemble_count(field, eps, d, r, set, &w))
        .collect::<Result<_>>()?;
    Ok(DistTable {
        q: field.order(),
        ell,
        d,
        class: eps.clone(),
        counts,
        source: Source::Formula,
    })
}

fn assemble_count(
    field: &FieldSpec,
    eps: &LeadClass,
    d: usize,
    r: usize,
    set: &EvalSet,
    w: &[BigUint],
) -> Result<BigUint> {
    let ell = eps.ell();
    let n = set.len() as u64;
    let q = field.order() as u64;
    let base = d as i64 - ell as i64 - r as i64;
    let mut total = main_term(n, q, r as u64, base, base);
    for (offset, wj) in w.iter().enumerate() {
        let j = d - ell + 1 + offset;
        if j < r {
            continue;
        }
        let sign = if (j - r) % 2 == 0 { 1 } else { -1 };
        let term = BigInt::from(binomial(j as u64, r as u64)) * BigInt::from(wj.clone()) * sign;
        total += BigRational::from_integer(term);
    }
    if !total.is_integer() || total.is_negative() {
        return Err(Error::NonIntegralCount(format!(
            "N_{d}({eps}, {r}) = {}",
            rational_string(&total)
        )));
    }
    Ok(total.to_integer().to_biguint().expect("nonnegative"))
}

/// N_d(eps, r): monic degree-d polynomials in class `eps` with exactly `r`
/// distinct roots in D.
pub fn count_formula(
    field: &FieldSpec,
    eps: &LeadClass,
    d: usize,
    r: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<BigUint> {
    if r > d {
        return Ok(BigUint::zero());
    }
    let table = dist_table_formula(field, eps, d, set, budget)?;
    Ok(table.counts[r].clone())
}

/// Which case of the factorial-moment formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentBranch {
    /// m <= k
    Trivial,
    /// k < m <= k + ell
    Boundary,
    /// m > k + ell
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub m: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub value: BigRational,
    pub branch: MomentBranch,
}

pub(crate) fn serialize_rational<S: Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// E(Y^(m falling)) for Y the number of agreements between the word of `f`
/// and a uniformly random codeword of RS_{n,k}.
pub fn moments_formula(
    field: &FieldSpec,
    f: &Poly,
    k: usize,
    set: &EvalSet,
    m: usize,
    budget: &Budget,
) -> Result<MomentReport> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let deg = f.degree().unwrap();
    if deg <= k {
        return Err(Error::Precondition(format!(
            "deg f = {deg} must exceed k = {k}"
        )));
    }
    let ell = deg - k;
    let n = set.len() as u64;
    let q = BigInt::from(field.order());
    let (value, branch) = if m <= k {
        let num = BigInt::from(falling_factorial(n, m as u64));
        (
            BigRational::new(num, num_traits::pow(q, m)),
            MomentBranch::Trivial,
        )
    } else if m <= k + ell {
        let eps = class_of(field, f, ell)?;
        let w = wj_exact(field, &eps, m, deg, set, budget)?;
        let num = BigInt::from(factorial(m as u64)) * BigInt::from(w);
        (
            BigRational::new(num, num_traits::pow(q, k)),
            MomentBranch::Boundary,
        )
    } else {
        (BigRational::zero(), MomentBranch::Zero)
    };
    Ok(MomentReport { m, value, branch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    #[test]
    fn class_read_off() {
        let f = f3();
        let x2p2 = Poly::new(vec![2, 0, 1]);
        assert_eq!(class_of(&f, &x2p2, 1).unwrap().coeffs(), &[0]);
        assert_eq!(class_of(&f, &x2p2, 2).unwrap().coeffs(), &[0, 2]);
        assert_eq!(class_of(&f, &Poly::new(vec![1, 1]), 2).unwrap().coeffs(), &[1, 0]);
        assert_eq!(class_of(&f, &Poly::new(vec![1, 2]), 1), Err(Error::NotMonic));
    }

    #[test]
    fn class_products() {
        let f = f3();
        let a = class_of(&f, &Poly::new(vec![1, 1]), 1).unwrap();
        let b = class_of(&f, &Poly::new(vec![2, 1]), 1).unwrap();
        assert_eq!(class_mul(&f, &a, &b).unwrap().coeffs(), &[0]);
        let a2 = LeadClass::new(&f, vec![1, 0]).unwrap();
        let b2 = LeadClass::new(&f, vec![2, 0]).unwrap();
        assert_eq!(class_mul(&f, &a2, &b2).unwrap().coeffs(), &[0, 2]);
        for eps in enumerate_classes(&f, 3, 2) {
            assert_eq!(class_mul(&f, &LeadClass::identity(&f, 2), &eps).unwrap(), eps);
        }
        assert!(class_mul(&f, &a, &a2).is_err());
    }

    #[test]
    fn class_enumeration_sizes() {
        let f = f3();
        let e0 = enumerate_classes(&f, 0, 2);
        assert_eq!(e0, vec![LeadClass::identity(&f, 2)]);
        let e1 = enumerate_classes(&f, 1, 2);
        assert_eq!(e1.len(), 3);
        assert!(e1.iter().all(|c| c.coeffs()[1] == 0));
        assert_eq!(enumerate_classes(&f, 2, 2).len(), 9);
        assert_eq!(enumerate_classes(&f, 5, 2).len(), 9);
    }

    #[test]
    fn index_roundtrip() {
        let f = FieldSpec::new(5, 1).unwrap();
        for idx in 0..125 {
            assert_eq!(LeadClass::from_index(&f, 3, idx).index(), idx);
        }
    }

    #[test]
    fn wj_small_examples() {
        let f = f3();
        let d = EvalSet::full(&f);
        let eps = LeadClass::new(&f, vec![0]).unwrap();
        let b = Budget::default();
        assert_eq!(wj_exact(&f, &eps, 2, 2, &d, &b).unwrap(), BigUint::from(1u32));
        assert_eq!(wj_exact(&f, &eps, 1, 2, &d, &b).unwrap(), BigUint::from(3u32));
        assert_eq!(wj_table(&f, 1, 1, 2, &d, &b).unwrap(), vec![3, 3, 3]);
        assert!(wj_exact(&f, &eps, 3, 2, &d, &b).is_err());
        let small = EvalSet::new(&f, vec![0]).unwrap();
        assert_eq!(wj_exact(&f, &eps, 2, 2, &small, &b).unwrap(), BigUint::zero());
    }

    #[test]
    fn count_formula_small_example() {
        let f = f3();
        let d = EvalSet::full(&f);
        let eps = LeadClass::new(&f, vec![0]).unwrap();
        let table = dist_table_formula(&f, &eps, 2, &d, &Budget::default()).unwrap();
        let ones: Vec<BigUint> = vec![1u32.into(); 3];
        assert_eq!(table.counts, ones);
        assert_eq!(
            serde_json::to_string(&table).unwrap(),
            r#"{"q":3,"ell":1,"d":2,"class":[0],"counts":[1,1,1],"source":"formula"}"#
        );
    }

    #[test]
    fn count_with_too_few_points_for_r_equal_d() {
        let f = FieldSpec::new(5, 1).unwrap();
        let set = EvalSet::new(&f, vec![0, 1]).unwrap();
        for eps in enumerate_classes(&f, 3, 1) {
            let c = count_formula(&f, &eps, 3, 3, &set, &Budget::default()).unwrap();
            assert!(c.is_zero());
        }
    }

    #[test]
    fn moments_small_examples() {
        let f = f3();
        let d = EvalSet::full(&f);
        let sq = Poly::monomial(2);
        let b = Budget::default();
        let m1 = moments_formula(&f, &sq, 1, &d, 1, &b).unwrap();
        assert_eq!(m1.value, BigRational::one());
        assert_eq!(m1.branch, MomentBranch::Trivial);
        let m2 = moments_formula(&f, &sq, 1, &d, 2, &b).unwrap();
        assert_eq!(m2.value, BigRational::new(2.into(), 3.into()));
        assert_eq!(m2.branch, MomentBranch::Boundary);
        let m4 = moments_formula(&f, &sq, 1, &d, 4, &b).unwrap();
        assert!(m4.value.is_zero());
        assert_eq!(m4.branch, MomentBranch::Zero);
        assert_eq!(
            serde_json::to_string(&m2).unwrap(),
            r#"{"m":2,"value":"2/3","branch":"boundary"}"#
        );
    }

    #[test]
    fn budget_refusal() {
        let f = FieldSpec::new(7, 1).unwrap();
        let d = EvalSet::full(&f);
        let eps = LeadClass::identity(&f, 2);
        let tight = Budget::new(10).unwrap();
        assert!(matches!(
            wj_exact(&f, &eps, 3, 4, &d, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
