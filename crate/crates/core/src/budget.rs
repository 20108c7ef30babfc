//! Explicit step budgets. Exceeding one is always an error, never a silent
//! truncation of the search.

use crate::error::{Error, Result};

/// Default number of elementary steps an operation may take.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Fails with [`Error::BudgetExceeded`] when `needed` is larger than `budget`.
pub fn ensure(what: &str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded {
            what: what.to_string(),
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// Running counter for searches whose size is not known up front.
#[derive(Debug)]
pub struct Meter {
    what: &'static str,
    used: u64,
    limit: u64,
}

impl Meter {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Meter {
            what,
            used: 0,
            limit,
        }
    }

    pub fn tick(&mut self, steps: u64) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                what: self.what.to_string(),
                needed: self.used as u128,
                budget: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }
}

/// Saturating product used for counting models, rows and instances.
pub(crate) fn product<I: IntoIterator<Item = u128>>(items: I) -> u128 {
    items
        .into_iter()
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

pub(crate) fn pow(base: u128, exp: u128) -> u128 {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX {
            break;
        }
        if base <= 1 {
            break;
        }
    }
    acc
}
