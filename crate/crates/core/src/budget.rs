//! Up-front cost accounting for exhaustive enumerations.

use crate::error::{Error, Result};

/// Default cap on estimated primitive operations.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "RSDIST_BUDGET";

/// An upper limit on the number of primitive operations an enumeration may
/// perform. Checked before any work starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u128) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidParameter("budget must be positive".into()));
        }
        Ok(Self { limit })
    }

    /// Parses `100000000`, `1e8` or `5_000`.
    pub fn parse(raw: &str) -> Result<Self> {
        let limit = parse_count(raw)
            .ok_or_else(|| Error::InvalidParameter(format!("{raw:?} is not a count")))?;
        Self::new(limit)
    }

    pub fn unlimited() -> Self {
        Self { limit: u128::MAX }
    }

    /// Reads `RSDIST_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => Self::parse(&raw),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn limit(&self) -> u128 {
        self.limit
    }

    pub fn check(&self, estimate: u128) -> Result<()> {
        if estimate > self.limit {
            Err(Error::BudgetExceeded {
                estimate,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Accepts plain integers and `1e8`-style powers of ten.
fn parse_count(raw: &str) -> Option<u128> {
    let raw = raw.trim().replace('_', "");
    if let Some((mant, exp)) = raw.split_once(['e', 'E']) {
        let mant: u128 = mant.parse().ok()?;
        let exp: u32 = exp.parse().ok()?;
        mant.checked_mul(10u128.checked_pow(exp)?)
    } else {
        raw.parse().ok()
    }
}

/// Saturating product used when building cost estimates.
pub(crate) fn cost(factors: &[u128]) -> u128 {
    factors.iter().fold(1u128, |acc, &f| acc.saturating_mul(f))
}

pub(crate) fn pow_cost(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

pub(crate) fn binomial_cost(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_counts() {
        assert_eq!(parse_count("100000000"), Some(100_000_000));
        assert_eq!(parse_count("1e8"), Some(100_000_000));
        assert_eq!(parse_count("5_000"), Some(5000));
        assert_eq!(parse_count("x"), None);
    }

    #[test]
    fn refuses_over_limit() {
        let b = Budget::new(10).unwrap();
        assert!(b.check(10).is_ok());
        assert_eq!(
            b.check(11),
            Err(Error::BudgetExceeded {
                estimate: 11,
                limit: 10
            })
        );
        assert!(Budget::new(0).is_err());
    }

    #[test]
    fn binomial_estimates() {
        assert_eq!(binomial_cost(9, 4), 126);
        assert_eq!(binomial_cost(3, 5), 0);
        assert_eq!(binomial_cost(10, 0), 1);
    }
}
