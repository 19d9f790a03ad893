//! Brute-force ground truth: distances to RS_{n,k}, word classification,
//! root-count distributions over all codeword shifts, class tables by full
//! enumeration, exhaustive factorial moments, and the deep-hole scan.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{cost, pow_cost, Budget};
use crate::classes::{DistTable, LeadClass, Source};
use crate::combinatorics::falling_factorial;
use crate::enumerate::Family;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::poly::{lagrange_poly, EvalSet, Poly};

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

fn codeword_cost(field: &FieldSpec, k: usize, n: usize) -> u128 {
    cost(&[pow_cost(field.order() as u128, k as u32), n.max(1) as u128])
}

/// d(u, RS_{n,k}) by minimizing over all q^k codewords.
pub fn rs_distance(
    field: &FieldSpec,
    word: &[Elem],
    k: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<usize> {
    let n = set.len();
    if word.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: word.len(),
        });
    }
    check_k(k, n)?;
    budget.check(codeword_cost(field, k, n))?;
    let zero = Poly::zero();
    let fam = Family {
        field,
        base: &zero,
        offset: 0,
        len: k,
        points: set.elements(),
    };
    let best = fam.par_fold(
        || usize::MAX,
        |best, _, vals| {
            let mism = vals.iter().zip(word).filter(|(a, b)| a != b).count();
            *best = (*best).min(mism);
        },
    );
    Ok(best.into_iter().min().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordClassification {
    pub word: Vec<Elem>,
    /// `None` for the zero word.
    pub degree: Option<usize>,
    pub distance: usize,
    pub is_codeword: bool,
    pub is_deep_hole: bool,
    pub is_ordinary: bool,
}

impl WordClassification {
    /// `n - k >= d >= n - deg(u)` whenever `k <= deg(u) <= n - 1`; vacuous
    /// otherwise.
    pub fn satisfies_distance_bounds(&self, n: usize, k: usize) -> bool {
        match self.degree {
            Some(deg) if deg >= k && deg < n => {
                n - k >= self.distance && self.distance >= n - deg
            }
            _ => true,
        }
    }
}

pub fn classify_word(
    field: &FieldSpec,
    word: &[Elem],
    k: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<WordClassification> {
    let n = set.len();
    let distance = rs_distance(field, word, k, set, budget)?;
    let degree = lagrange_poly(field, word, set)?.degree();
    let is_codeword = degree < Some(k);
    Ok(WordClassification {
        word: word.to_vec(),
        degree,
        distance,
        is_codeword,
        is_deep_hole: distance == n - k,
        is_ordinary: !is_codeword && degree.is_some_and(|d| d <= n && distance == n - d),
    })
}

/// `out[r]` = number of g with deg g <= k-1 such that f + g has exactly r
/// distinct roots in D.
pub fn nfr_distribution(
    field: &FieldSpec,
    f: &Poly,
    k: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<Vec<u64>> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < k {
        return Err(Error::Precondition(format!(
            "deg f = {deg} is below k = {k}; f + g can vanish"
        )));
    }
    check_k(k, set.len().max(k))?;
    budget.check(codeword_cost(field, k, set.len()))?;
    let fam = Family {
        field,
        base: f,
        offset: 0,
        len: k,
        points: set.elements(),
    };
    let width = deg.min(set.len()) + 1;
    let parts = fam.par_fold(
        || vec![0u64; width],
        |acc, _, vals| {
            let roots = vals.iter().filter(|&&v| v == 0).count();
            acc[roots] += 1;
        },
    );
    let mut out = vec![0u64; deg + 1];
    for part in parts {
        for (o, p) in out.iter_mut().zip(part) {
            *o += p;
        }
    }
    Ok(out)
}

/// N(f, r) by direct enumeration of the q^k shifts.
pub fn count_nfr_bruteforce(
    field: &FieldSpec,
    f: &Poly,
    k: usize,
    r: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<BigUint> {
    let dist = nfr_distribution(field, f, k, set, budget)?;
    Ok(BigUint::from(dist.get(r).copied().unwrap_or(0)))
}

/// E(Y^(m falling)) with Y = n - d(u_f, u_g) over uniform codewords g.
pub fn moments_bruteforce(
    field: &FieldSpec,
    f: &Poly,
    k: usize,
    set: &EvalSet,
    m: usize,
    budget: &Budget,
) -> Result<BigRational> {
    let dist = nfr_distribution(field, f, k, set, budget)?;
    let total: BigInt = dist
        .iter()
        .enumerate()
        .map(|(y, &count)| BigInt::from(count) * BigInt::from(falling_factorial(y as u64, m as u64)))
        .sum();
    Ok(BigRational::new(
        total,
        num_traits::pow(BigInt::from(field.order()), k),
    ))
}

/// N_d(eps, r) for all r by enumerating every member of M_d(eps).
pub fn dist_table_bruteforce(
    field: &FieldSpec,
    eps: &LeadClass,
    d: usize,
    set: &EvalSet,
    budget: &Budget,
) -> Result<DistTable> {
    let ell = eps.ell();
    let base = eps.representative(d)?;
    budget.check(cost(&[
        pow_cost(field.order() as u128, (d - ell) as u32),
        set.len().max(1) as u128,
    ]))?;
    let fam = Family {
        field,
        base: &base,
        offset: 0,
        len: d - ell,
        points: set.elements(),
    };
    let width = d.min(set.len()) + 1;
    let parts = fam.par_fold(
        || vec![0u64; width],
        |acc, _, vals| acc[vals.iter().filter(|&&v| v == 0).count()] += 1,
    );
    let mut counts = vec![BigUint::zero(); d + 1];
    for part in parts {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(DistTable {
        q: field.order(),
        ell,
        d,
        class: eps.clone(),
        counts,
        source: Source::BruteForce,
    })
}

/// One line of the deep-hole scan stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub f: Vec<Elem>,
    pub deg: usize,
    pub dist: usize,
    pub deep_hole: bool,
    pub ordinary: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub q: u32,
    pub k: usize,
    pub ell: usize,
    pub words_scanned: usize,
    pub degree_k_words: usize,
    pub degree_k_deep_holes: usize,
    /// Deep holes of degree above k: candidate counterexamples to the
    /// conjecture that degree-k words are the only deep holes.
    pub higher_degree_deep_holes: Vec<Vec<Elem>>,
    pub distance_bound_violations: Vec<Vec<Elem>>,
    /// `ordinary_by_degree[j]` counts ordinary words of degree k + j.
    pub ordinary_by_degree: Vec<usize>,
}

impl ScanSummary {
    pub fn all_degree_k_deep(&self) -> bool {
        self.degree_k_words == self.degree_k_deep_holes
    }
}

/// Classifies every monic word of degree k..=k+ell over D = F_q, one per
/// coset of the code: the k low coefficients are fixed to zero because
/// adding a codeword does not change the distance, and scaling by a nonzero
/// constant does not either. Records are passed to `sink` in lexicographic
/// order of the free coefficients.
pub fn scan_deep_holes(
    field: &FieldSpec,
    k: usize,
    ell: usize,
    budget: &Budget,
    mut sink: impl FnMut(&ScanRecord),
) -> Result<ScanSummary> {
    let q = field.order() as usize;
    let set = EvalSet::full(field);
    check_k(k, q)?;
    if k + ell >= q {
        return Err(Error::Precondition(format!(
            "k + ell = {} must be at most q - 1 = {}",
            k + ell,
            q - 1
        )));
    }
    let words: u128 = (0..=ell).map(|j| pow_cost(q as u128, j as u32)).sum();
    budget.check(cost(&[words, pow_cost(q as u128, k as u32), q as u128]))?;

    let mut summary = ScanSummary {
        q: field.order(),
        k,
        ell,
        ordinary_by_degree: vec![0; ell + 1],
        ..Default::default()
    };
    for j in 0..=ell {
        let deg = k + j;
        let count = q.pow(j as u32);
        const CHUNK: usize = 512;
        for start in (0..count).step_by(CHUNK) {
            let records: Vec<Result<ScanRecord>> = (start..(start + CHUNK).min(count))
                .into_par_iter()
                .map(|idx| {
                    let mut coeffs = vec![0; deg + 1];
                    coeffs[deg] = 1;
                    let mut rest = idx;
                    for c in coeffs[k..deg].iter_mut() {
                        *c = (rest % q) as Elem;
                        rest /= q;
                    }
                    let f = Poly::new(coeffs);
                    let word = set.evaluate(field, &f);
                    let cls = classify_word(field, &word, k, &set, &Budget::unlimited())?;
                    if cls.degree != Some(deg) {
                        return Err(Error::Precondition(format!(
                            "interpolated degree {:?} differs from {deg}",
                            cls.degree
                        )));
                    }
                    let record = ScanRecord {
                        f: f.coeffs().to_vec(),
                        deg,
                        dist: cls.distance,
                        deep_hole: cls.is_deep_hole,
                        ordinary: cls.is_ordinary,
                    };
                    Ok(record)
                })
                .collect();
            for rec in records {
                let rec = rec?;
                summary.words_scanned += 1;
                let n = q;
                let within = n - k >= rec.dist && rec.dist >= n - rec.deg;
                if !within {
                    summary.distance_bound_violations.push(rec.f.clone());
                }
                if j == 0 {
                    summary.degree_k_words += 1;
                    summary.degree_k_deep_holes += rec.deep_hole as usize;
                } else if rec.deep_hole {
                    summary.higher_degree_deep_holes.push(rec.f.clone());
                }
                summary.ordinary_by_degree[j] += rec.ordinary as usize;
                sink(&rec);
            }
        }
    }
    Ok(summary)
}
