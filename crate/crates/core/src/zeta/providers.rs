//! Sources of fixed-point counts for the generating and zeta functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::ZetaError;
use crate::budget::WorkBudget;
use crate::sft::{FlipTriple, ReversalSft};
use crate::sofic::{LabeledChain, LabeledPresentation, TheoremC};

/// Counts of a reversal system of order `2r` and of its subsystems.
pub trait CountProvider {
    fn backend(&self) -> &'static str;

    fn half_order(&self) -> usize;

    /// `f(m, 2l)` on `X_{2k}`: points with `phi^{2k} x = x` and
    /// `sigma^m phi^{2l} x = x`, for `l < k`, `k | r`.
    fn automorphism_count(&self, k: usize, m: usize, l: usize) -> Result<BigInt, ZetaError>;

    /// `(p(2m-1, 0), p(2m, 0), p(2m, 1))` of the flip `(X_{2d}, sigma, phi^d)`,
    /// `d` odd dividing `r`.
    fn flip_triple(&self, d: usize, m: usize) -> Result<FlipTriple, ZetaError>;
}

/// Providers that count any flip condition `sigma^m x = x`,
/// `sigma^n phi^d x = x` directly.
pub trait FixedPointOracle: CountProvider {
    fn flip_count(&self, d: usize, m: usize, n: usize) -> Result<BigInt, ZetaError>;
}

fn check_divisor(k: usize, r: usize) -> Result<(), ZetaError> {
    if k == 0 || !r.is_multiple_of(k) {
        return Err(ZetaError::BadSubsystem { k, r });
    }
    Ok(())
}

/// Trace formulas on a reversal SFT.
#[derive(Debug, Clone)]
pub struct SftTrace {
    sys: ReversalSft,
}

impl SftTrace {
    pub fn new(sys: ReversalSft) -> Self {
        SftTrace { sys }
    }
}

impl CountProvider for SftTrace {
    fn backend(&self) -> &'static str {
        "sft-trace"
    }

    fn half_order(&self) -> usize {
        self.sys.r()
    }

    fn automorphism_count(&self, k: usize, m: usize, l: usize) -> Result<BigInt, ZetaError> {
        check_divisor(k, self.sys.r())?;
        Ok(self
            .sys
            .restrict_fixed_subsystem(k)
            .fixed_count_trace(m, l)?)
    }

    fn flip_triple(&self, d: usize, m: usize) -> Result<FlipTriple, ZetaError> {
        Ok(self.sys.flip_view(d)?.flip_counts_trace(m)?)
    }
}

/// Window enumeration on a reversal SFT.
#[derive(Debug, Clone)]
pub struct SftBruteForce {
    sys: ReversalSft,
    budget: WorkBudget,
}

impl SftBruteForce {
    pub fn new(sys: ReversalSft, budget: WorkBudget) -> Self {
        SftBruteForce { sys, budget }
    }
}

impl CountProvider for SftBruteForce {
    fn backend(&self) -> &'static str {
        "sft-bruteforce"
    }

    fn half_order(&self) -> usize {
        self.sys.r()
    }

    fn automorphism_count(&self, k: usize, m: usize, l: usize) -> Result<BigInt, ZetaError> {
        check_divisor(k, self.sys.r())?;
        Ok(self
            .sys
            .restrict_fixed_subsystem(k)
            .fixed_count_bruteforce(m, l, self.budget)?)
    }

    fn flip_triple(&self, d: usize, m: usize) -> Result<FlipTriple, ZetaError> {
        Ok(self
            .sys
            .flip_view(d)?
            .flip_counts_bruteforce(m, self.budget)?)
    }
}

impl FixedPointOracle for SftBruteForce {
    fn flip_count(&self, d: usize, m: usize, n: usize) -> Result<BigInt, ZetaError> {
        Ok(self
            .sys
            .flip_view(d)?
            .flip_count_bruteforce(m, n, self.budget)?)
    }
}

/// Signed subset matrices of a labeled chain, one set per subsystem.
#[derive(Debug, Clone)]
pub struct SoficTheoremC {
    r: usize,
    subsystems: BTreeMap<usize, TheoremC>,
    flips: BTreeMap<usize, TheoremC>,
}

impl SoficTheoremC {
    pub fn new(chain: &LabeledChain, budget: WorkBudget) -> Result<Self, ZetaError> {
        let r = chain.r();
        let mut subsystems = BTreeMap::new();
        let mut flips = BTreeMap::new();
        for k in (1..=r).filter(|k| r.is_multiple_of(*k)) {
            subsystems.insert(k, TheoremC::new(&chain.restrict(k)?, budget)?);
            if k % 2 == 1 {
                flips.insert(k, TheoremC::new(&chain.flip_chain(k)?, budget)?);
            }
        }
        Ok(SoficTheoremC {
            r,
            subsystems,
            flips,
        })
    }

    /// Signed matrices of the whole system.
    pub fn full(&self) -> &TheoremC {
        &self.subsystems[&self.r]
    }
}

impl CountProvider for SoficTheoremC {
    fn backend(&self) -> &'static str {
        "sofic-theorem-c"
    }

    fn half_order(&self) -> usize {
        self.r
    }

    fn automorphism_count(&self, k: usize, m: usize, l: usize) -> Result<BigInt, ZetaError> {
        check_divisor(k, self.r)?;
        Ok(self.subsystems[&k].fixed_count(m, l)?)
    }

    fn flip_triple(&self, d: usize, m: usize) -> Result<FlipTriple, ZetaError> {
        let tc = self
            .flips
            .get(&d)
            .ok_or(ZetaError::BadSubsystem { k: d, r: self.r })?;
        Ok(tc.flip_counts(m)?)
    }
}

/// Enumeration of periodic label sequences of a presentation.
#[derive(Debug, Clone)]
pub struct SoficBruteForce {
    presentation: LabeledPresentation,
    budget: WorkBudget,
}

impl SoficBruteForce {
    pub fn new(presentation: LabeledPresentation, budget: WorkBudget) -> Self {
        SoficBruteForce {
            presentation,
            budget,
        }
    }
}

impl CountProvider for SoficBruteForce {
    fn backend(&self) -> &'static str {
        "sofic-bruteforce"
    }

    fn half_order(&self) -> usize {
        self.presentation.r()
    }

    fn automorphism_count(&self, k: usize, m: usize, l: usize) -> Result<BigInt, ZetaError> {
        check_divisor(k, self.presentation.r())?;
        Ok(self
            .presentation
            .subsystem_fixed_count_bruteforce(k, m, l, self.budget)?)
    }

    fn flip_triple(&self, d: usize, m: usize) -> Result<FlipTriple, ZetaError> {
        Ok((
            self.flip_count(d, 2 * m - 1, 0)?,
            self.flip_count(d, 2 * m, 0)?,
            self.flip_count(d, 2 * m, 1)?,
        ))
    }
}

impl FixedPointOracle for SoficBruteForce {
    fn flip_count(&self, d: usize, m: usize, n: usize) -> Result<BigInt, ZetaError> {
        Ok(self
            .presentation
            .flip_count_bruteforce(d, m, n, self.budget)?)
    }
}
