//! Work caps for the brute-force oracles.

use std::env;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "REVZETA_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("work budget of {limit} units exceeded while {task}")]
pub struct BudgetExceeded {
    pub limit: u64,
    pub task: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{BUDGET_ENV}={0:?} is not a positive integer")]
pub struct InvalidBudget(pub String);

/// Upper bound on the number of elementary steps (enumerated windows, visited
/// search nodes) an oracle may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkBudget(u64);

impl WorkBudget {
    pub fn new(limit: u64) -> Self {
        WorkBudget(limit)
    }

    pub fn unlimited() -> Self {
        WorkBudget(u64::MAX)
    }

    /// The default, or the value of `REVZETA_BUDGET` when set.
    pub fn from_env() -> Result<Self, InvalidBudget> {
        match env::var(BUDGET_ENV) {
            Ok(text) => match text.trim().parse::<u64>() {
                Ok(n) if n > 0 => Ok(WorkBudget(n)),
                _ => Err(InvalidBudget(text)),
            },
            Err(_) => Ok(WorkBudget::default()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.0
    }

    pub fn meter(&self, task: impl Into<String>) -> Meter {
        Meter {
            limit: self.0,
            used: 0,
            task: task.into(),
        }
    }
}

impl Default for WorkBudget {
    fn default() -> Self {
        WorkBudget(DEFAULT_BUDGET)
    }
}

/// Running tally against a [`WorkBudget`].
#[derive(Debug)]
pub struct Meter {
    limit: u64,
    used: u64,
    task: String,
}

impl Meter {
    pub fn charge(&mut self, units: u64) -> Result<(), BudgetExceeded> {
        self.used = self.used.saturating_add(units);
        if self.used > self.limit {
            return Err(BudgetExceeded {
                limit: self.limit,
                task: self.task.clone(),
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
