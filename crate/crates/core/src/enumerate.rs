//! Odometer enumeration of polynomial families with incremental evaluation.
//!
//! A family is `base + sum_{i < len} c_i x^(offset + i)` with every
//! `(c_0, ..., c_{len-1})` in F_q^len. Stepping the odometer changes one
//! coefficient, so the value vector at the tracked points is patched in
//! O(points) instead of re-running Horner.

use rayon::prelude::*;

use crate::gf::{Elem, FieldSpec};
use crate::poly::Poly;

pub(crate) struct Family<'a> {
    pub field: &'a FieldSpec,
    pub base: &'a Poly,
    pub offset: usize,
    pub len: usize,
    pub points: &'a [Elem],
}

impl Family<'_> {
    /// Visits members in lexicographic order of `(c_{len-1}, ..., c_0)`,
    /// passing the free coefficients and the values at `points`.
    pub fn for_each(&self, mut visit: impl FnMut(&[Elem], &[Elem])) {
        self.walk(self.len, self.base, &mut visit);
    }

    /// Splits on the top free coefficient and folds each slice in parallel.
    /// The returned accumulators are in slice order.
    pub fn par_fold<T, I, F>(&self, init: I, fold: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, &[Elem], &[Elem]) + Sync,
    {
        if self.len == 0 {
            let mut acc = init();
            self.for_each(|c, v| fold(&mut acc, c, v));
            return vec![acc];
        }
        let top = self.offset + self.len - 1;
        (0..self.field.order())
            .into_par_iter()
            .map(|lead| {
                let mut base = self.base.clone();
                let mut coeffs = base.coeffs().to_vec();
                if coeffs.len() <= top {
                    coeffs.resize(top + 1, 0);
                }
                coeffs[top] = self.field.add(coeffs[top], lead);
                base = Poly::new(coeffs);
                let mut acc = init();
                self.walk(self.len - 1, &base, &mut |c: &[Elem], v: &[Elem]| {
                    let mut full = c.to_vec();
                    full.push(lead);
                    fold(&mut acc, &full, v)
                });
                acc
            })
            .collect()
    }

    fn walk(&self, len: usize, base: &Poly, visit: &mut dyn FnMut(&[Elem], &[Elem])) {
        let field = self.field;
        let q = field.order();
        let mut values: Vec<Elem> = self.points.iter().map(|&a| base.eval(field, a)).collect();
        // powers[i][t] = points[t]^(offset + i)
        let powers: Vec<Vec<Elem>> = (0..len)
            .map(|i| {
                self.points
                    .iter()
                    .map(|&a| field.pow(a, (self.offset + i) as u64))
                    .collect()
            })
            .collect();
        let mut digits = vec![0 as Elem; len];
        loop {
            visit(&digits, &values);
            let mut i = 0;
            loop {
                if i == len {
                    return;
                }
                let old = digits[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                let delta = field.sub(new, old);
                for (v, &pw) in values.iter_mut().zip(&powers[i]) {
                    *v = field.add(*v, field.mul(delta, pw));
                }
                digits[i] = new;
                if new != 0 {
                    break;
                }
                i += 1;
            }
        }
    }
}
