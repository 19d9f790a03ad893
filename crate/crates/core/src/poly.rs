//! Dense polynomials over F_q, evaluation sets, root counting and Lagrange
//! interpolation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

/// A polynomial with coefficients lowest degree first. Never stores trailing
/// zeros, so the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Elem>", from = "Vec<Elem>")]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl From<Vec<Elem>> for Poly {
    fn from(coeffs: Vec<Elem>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<Elem> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Validates every coefficient against the field.
    pub fn from_coeffs(field: &FieldSpec, coeffs: &[u64]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|&c| field.check(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, with `None` standing for the zero polynomial. `None` orders
    /// below every `Some(_)`, so `deg(u) < Some(k)` reads as "codeword".
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &FieldSpec, a: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, a), c))
    }

    pub fn add(&self, other: &Poly, field: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| field.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, field: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| field.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly, field: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: Elem, field: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Poly, field: &FieldSpec) -> Result<(Poly, Poly)> {
        if !divisor.is_monic() {
            return Err(Error::NotMonic);
        }
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), Poly::new(rem)));
        }
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            for (i, &m) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = field.sub(rem[idx], field.mul(c, m));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }
}

impl fmt::Display for Poly {
    /// Comma-separated coefficients, lowest degree first; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses a comma-separated coefficient list, lowest degree first.
pub fn parse_elems(field: &FieldSpec, text: &str) -> Result<Vec<Elem>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("`{s}` is not an element")))
                .and_then(|v| field.check(v))
        })
        .collect()
}

/// A duplicate-free ordered subset D of F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EvalSet {
    elements: Vec<Elem>,
}

impl EvalSet {
    pub fn new(field: &FieldSpec, elements: Vec<Elem>) -> Result<Self> {
        let mut seen = vec![false; field.order() as usize];
        for &a in &elements {
            field.check(a as u64)?;
            if std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::DuplicatePoint(a));
            }
        }
        Ok(EvalSet { elements })
    }

    /// D = F_q in the natural order.
    pub fn full(field: &FieldSpec) -> Self {
        EvalSet::new(field, field.elements().collect()).expect("F_q has no duplicates")
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Evaluations of `f` at the points of D, in order.
    pub fn evaluate(&self, field: &FieldSpec, f: &Poly) -> Vec<Elem> {
        self.elements.iter().map(|&a| f.eval(field, a)).collect()
    }
}

pub fn poly_eval(field: &FieldSpec, f: &Poly, a: Elem) -> Elem {
    f.eval(field, a)
}

/// Number of distinct roots of a nonzero `f` lying in D.
pub fn distinct_roots_in(field: &FieldSpec, f: &Poly, set: &EvalSet) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(set
        .elements()
        .iter()
        .filter(|&&a| f.eval(field, a) == 0)
        .count())
}

/// The unique polynomial of degree at most n-1 taking the values `word` on D.
pub fn lagrange_poly(field: &FieldSpec, word: &[Elem], set: &EvalSet) -> Result<Poly> {
    let n = set.len();
    if word.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: word.len(),
        });
    }
    for &u in word {
        field.check(u as u64)?;
    }
    let xs = set.elements();
    // M(x) = prod (x - x_i)
    let mut master = Poly::constant(1);
    for &x in xs {
        master = master.mul(&Poly::new(vec![field.neg(x), 1]), field);
    }
    let mut acc = vec![0; n];
    for (i, (&xi, &ui)) in xs.iter().zip(word).enumerate() {
        if ui == 0 {
            continue;
        }
        let (basis, _) = master.div_rem_monic(&Poly::new(vec![field.neg(xi), 1]), field)?;
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(1, |d, (_, &xj)| field.mul(d, field.sub(xi, xj)));
        let scale = field.mul(ui, field.inv(denom).expect("points are distinct"));
        for (k, &c) in basis.coeffs().iter().enumerate() {
            acc[k] = field.add(acc[k], field.mul(c, scale));
        }
    }
    Ok(Poly::new(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    #[test]
    fn horner_evaluation() {
        let f = f3();
        let x2p1 = Poly::new(vec![1, 0, 1]);
        assert_eq!(poly_eval(&f, &x2p1, 0), 1);
        assert_eq!(poly_eval(&f, &x2p1, 1), 2);
    }

    #[test]
    fn frobenius_polynomial_vanishes() {
        for q in [4u64, 5, 8, 9] {
            let f = FieldSpec::with_order(q).unwrap();
            // x^q - x
            let mut c = vec![0; q as usize + 1];
            c[1] = f.neg(1);
            c[q as usize] = 1;
            let poly = Poly::new(c);
            assert!(f.elements().all(|a| poly.eval(&f, a) == 0));
        }
    }

    #[test]
    fn root_counts() {
        let f = f3();
        let d = EvalSet::full(&f);
        // x^2 - 1 = x^2 + 2
        assert_eq!(distinct_roots_in(&f, &Poly::new(vec![2, 0, 1]), &d).unwrap(), 2);
        assert_eq!(distinct_roots_in(&f, &Poly::new(vec![1, 0, 1]), &d).unwrap(), 0);
        assert_eq!(distinct_roots_in(&f, &Poly::constant(1), &d).unwrap(), 0);
        assert_eq!(
            distinct_roots_in(&f, &Poly::zero(), &d),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn interpolation_examples() {
        let f = f3();
        let d = EvalSet::full(&f);
        assert_eq!(lagrange_poly(&f, &[0, 1, 2], &d).unwrap(), Poly::new(vec![0, 1]));
        assert_eq!(lagrange_poly(&f, &[2, 2, 2], &d).unwrap(), Poly::constant(2));
        let zero = lagrange_poly(&f, &[0, 0, 0], &d).unwrap();
        assert_eq!(zero.degree(), None);
        assert!(zero.degree() < Some(0));

        let f5 = FieldSpec::new(5, 1).unwrap();
        let d5 = EvalSet::full(&f5);
        let sq = Poly::monomial(2);
        let u = d5.evaluate(&f5, &sq);
        assert_eq!(lagrange_poly(&f5, &u, &d5).unwrap(), sq);
        assert!(matches!(
            lagrange_poly(&f5, &u[..3], &d5),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn eval_set_rejects_duplicates() {
        let f = f3();
        assert_eq!(EvalSet::new(&f, vec![0, 1, 0]), Err(Error::DuplicatePoint(0)));
        assert!(EvalSet::new(&f, vec![3]).is_err());
    }

    #[test]
    fn division_by_monic() {
        let f = FieldSpec::new(5, 1).unwrap();
        let a = Poly::new(vec![1, 2, 3, 4]);
        let b = Poly::new(vec![3, 1]);
        let (q, r) = a.div_rem_monic(&b, &f).unwrap();
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        assert!(r.degree() < b.degree());
    }
}
