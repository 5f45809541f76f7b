//! Sofic reversal systems: labeled presentations, Krieger's joint state
//! chain, signed subset matrices and the counts built on them.
//!
//! The reversal acts on label sequences by `phi(x)_i = tau(x_{-i})`.

pub(crate) mod automata;
mod brute;
mod chain;
mod properties;
mod signed;

use num_bigint::BigInt;

use crate::algebra::AlgebraError;
use crate::budget::{BudgetExceeded, WorkBudget};
use crate::sft::{permutation_inverse, permutation_power, ReversalSft, SftError};

use automata::{Nfa, MAX_STATES};

pub use chain::{
    build_joint_state_chain, compute_futures, compute_futures_by_stabilization, compute_pasts,
    JointState, JointStateChain, LabeledChain,
};
pub use properties::{check_properties, Certificate, PropertyCheck};
pub use signed::{build_signed_matrices, SignedSubsetMatrices, TheoremC};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SoficError {
    #[error("reversal order 2r needs r >= 1")]
    ZeroOrder,
    #[error("{0} states, at most {MAX_STATES} supported")]
    TooManyStates(usize),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("edge {index} refers to {what} {value} which does not exist")]
    BadEdge {
        index: usize,
        what: &'static str,
        value: usize,
    },
    #[error("tau is not a permutation of the labels: {0}")]
    NotPermutation(String),
    #[error("tau^{order} is not the identity")]
    OrderViolation { order: usize },
    #[error("presents the empty shift")]
    Empty,
    #[error("language is not closed under reversal followed by tau; witness word {0:?}")]
    NotTauClosed(Vec<String>),
    #[error("no {side} matches the tau-image of {what}")]
    MissingImage { side: &'static str, what: String },
    #[error("joint state chain fails its property checks: {0}")]
    PropertyFailure(Box<Certificate>),
    #[error("inclusion-exclusion violated: {what} = {total} < 0; terms {terms:?}")]
    NegativeCount {
        what: String,
        total: BigInt,
        terms: Vec<BigInt>,
    },
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("need m >= 1, got {0}")]
    ZeroPeriod(usize),
    #[error("l = {l} outside 0..{r}")]
    LOutOfRange { l: usize, r: usize },
    #[error("flip power {d} must be odd and divide r = {r}")]
    BadFlipPower { d: usize, r: usize },
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

/// A finite edge-labeled graph together with the label map `tau` of a
/// one-block reversal of order `2r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPresentation {
    states: Vec<String>,
    labels: Vec<String>,
    edges: Vec<Edge>,
    tau: Vec<usize>,
    r: usize,
}

fn check_names(names: &[String]) -> Result<(), SoficError> {
    for (i, s) in names.iter().enumerate() {
        if names[..i].contains(s) {
            return Err(SoficError::DuplicateName(s.clone()));
        }
    }
    Ok(())
}

impl LabeledPresentation {
    pub fn new(
        states: Vec<String>,
        labels: Vec<String>,
        edges: Vec<Edge>,
        tau: Vec<usize>,
        r: usize,
    ) -> Result<Self, SoficError> {
        if r == 0 {
            return Err(SoficError::ZeroOrder);
        }
        if states.len() > MAX_STATES {
            return Err(SoficError::TooManyStates(states.len()));
        }
        check_names(&states)?;
        check_names(&labels)?;
        for (index, e) in edges.iter().enumerate() {
            for (what, value, bound) in [
                ("state", e.from, states.len()),
                ("state", e.to, states.len()),
                ("label", e.label, labels.len()),
            ] {
                if value >= bound {
                    return Err(SoficError::BadEdge { index, what, value });
                }
            }
        }
        let mut hit = vec![false; labels.len()];
        if tau.len() != labels.len() {
            return Err(SoficError::NotPermutation(format!(
                "{} images for {} labels",
                tau.len(),
                labels.len()
            )));
        }
        for &t in &tau {
            if t >= labels.len() || std::mem::replace(&mut hit[t], true) {
                return Err(SoficError::NotPermutation(format!("{tau:?}")));
            }
        }
        if permutation_power(&tau, 2 * r)
            .iter()
            .enumerate()
            .any(|(i, &t)| i != t)
        {
            return Err(SoficError::OrderViolation { order: 2 * r });
        }
        let mut edges = edges;
        edges.sort();
        edges.dedup();
        Ok(LabeledPresentation {
            states,
            labels,
            edges,
            tau,
            r,
        })
    }

    /// Vertex-shift presentation of an SFT: one state per symbol, an edge
    /// `a -> b` labeled `b` whenever `A(a, b) = 1`.
    pub fn from_sft(sys: &ReversalSft) -> Result<Self, SoficError> {
        let n = sys.len();
        let edges = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| sys.allowed(a, b))
            .map(|(from, to)| Edge {
                from,
                to,
                label: to,
            })
            .collect();
        Self::new(
            sys.alphabet().to_vec(),
            sys.alphabet().to_vec(),
            edges,
            sys.tau().to_vec(),
            sys.r(),
        )
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        2 * self.r
    }

    pub(crate) fn nfa(&self) -> Nfa {
        Nfa::new(
            self.states.len(),
            self.labels.len(),
            self.edges.iter().map(|e| (e.from, e.to, e.label)),
        )
    }

    /// Removes states without incoming or outgoing edges until none remain.
    pub fn trim_essential(&self) -> Result<Self, SoficError> {
        let n = self.states.len();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for e in &self.edges {
                if alive[e.from] && alive[e.to] {
                    outdeg[e.from] += 1;
                    indeg[e.to] += 1;
                }
            }
            let mut changed = false;
            for q in 0..n {
                if alive[q] && (indeg[q] == 0 || outdeg[q] == 0) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !alive.iter().any(|&a| a) {
            return Err(SoficError::Empty);
        }
        let mut new_index = vec![usize::MAX; n];
        let mut states = Vec::new();
        for q in (0..n).filter(|&q| alive[q]) {
            new_index[q] = states.len();
            states.push(self.states[q].clone());
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| alive[e.from] && alive[e.to])
            .map(|e| Edge {
                from: new_index[e.from],
                to: new_index[e.to],
                label: e.label,
            })
            .collect();
        Ok(LabeledPresentation {
            states,
            labels: self.labels.clone(),
            edges,
            tau: self.tau.clone(),
            r: self.r,
        })
    }

    /// Exact check that `w` in the language implies `tau(reverse(w))` is too.
    /// Returns a word whose image is missing (or which is a missing image).
    pub fn tau_closure_witness(&self) -> Result<Option<Vec<String>>, SoficError> {
        let trimmed = self.trim_essential()?;
        let g = trimmed.nfa();
        let rev = g.reversed();
        let tau_inv = permutation_inverse(&self.tau);
        Ok(
            automata::first_difference(&g, g.all(), &rev, rev.all(), &tau_inv)
                .map(|w| w.iter().map(|&a| self.labels[a].clone()).collect()),
        )
    }

    pub fn is_tau_closed(&self) -> Result<bool, SoficError> {
        Ok(self.tau_closure_witness()?.is_none())
    }

    /// `f(m, 2l)`: label sequences with `sigma^m phi^{2l} x = x`, by enumeration.
    pub fn fixed_count_bruteforce(
        &self,
        m: usize,
        l: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SoficError> {
        self.subsystem_fixed_count_bruteforce(self.r, m, l, budget)
    }

    /// As [`Self::fixed_count_bruteforce`] on the subsystem `X_{2k}` of
    /// sequences whose labels are all fixed by `tau^{2k}`, with `l < k`.
    pub fn subsystem_fixed_count_bruteforce(
        &self,
        k: usize,
        m: usize,
        l: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SoficError> {
        if m == 0 {
            return Err(SoficError::ZeroPeriod(m));
        }
        if l >= k || k > self.r {
            return Err(SoficError::LOutOfRange {
                l,
                r: k.min(self.r),
            });
        }
        let mask = self.fixed_label_mask(k);
        let step = permutation_inverse(&permutation_power(&self.tau, 2 * l));
        Ok(brute::fixed_count(&self.nfa(), &mask, &step, m, budget)?.into())
    }

    /// `p(m, n)` for the flip `phi^d` on `X_{2d}`: sequences with
    /// `sigma^m x = x` and `sigma^n phi^d x = x`.
    pub fn flip_count_bruteforce(
        &self,
        d: usize,
        m: usize,
        n: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SoficError> {
        if m == 0 {
            return Err(SoficError::ZeroPeriod(m));
        }
        if d.is_multiple_of(2) || !self.r.is_multiple_of(d) {
            return Err(SoficError::BadFlipPower { d, r: self.r });
        }
        let mask = self.fixed_label_mask(d);
        let flip = permutation_power(&self.tau, d);
        Ok(brute::flip_count(&self.nfa(), &mask, &flip, m, n, budget)?.into())
    }

    fn fixed_label_mask(&self, k: usize) -> Vec<bool> {
        let t = permutation_power(&self.tau, 2 * k);
        t.iter().enumerate().map(|(i, &x)| i == x).collect()
    }
}
