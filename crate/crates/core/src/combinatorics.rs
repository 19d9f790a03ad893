use num_bigint::BigUint;
use num_traits::{One, Zero};

/// C(n, k) as an exact integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// n (n-1) ... (n-m+1); one for m = 0.
pub fn falling_factorial(n: u64, m: u64) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    (0..m).fold(BigUint::one(), |acc, i| acc * (n - i))
}

/// Integer partitions of `n` as multiplicity vectors: `mult[i]` is the
/// number of parts equal to `i + 1`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, mult: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(mult.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            mult[part - 1] += 1;
            rec(rest - part, part, mult, out);
            mult[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut mult = vec![0; n];
    rec(n, n, &mut mult, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(9, 4), BigUint::from(126u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial(5, 0), BigUint::one());
        assert_eq!(falling_factorial(2, 3), BigUint::zero());
    }

    #[test]
    fn partition_counts() {
        // p(n) for n = 0..=10
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &p) in expected.iter().enumerate() {
            let parts = partitions(n);
            assert_eq!(parts.len(), p);
            for m in &parts {
                assert_eq!(m.iter().enumerate().map(|(i, c)| (i + 1) * c).sum::<usize>(), n);
            }
        }
    }
}
