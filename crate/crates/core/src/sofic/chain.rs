//! Labeled reversal SFTs and Krieger's joint state chain.

use std::collections::HashMap;

use num_traits::One;

use super::automata::{self, bits, languages_equal, StateSet};
use super::properties::{check_properties, Certificate};
use super::{LabeledPresentation, SoficError};
use crate::algebra::IntMatrix;
use crate::budget::WorkBudget;
use crate::sft::{permutation_inverse, permutation_power, ReversalSft};

/// A reversal SFT `(A, J)` with a one-block labeling into an alphabet with
/// symbol map `tau`, checked to satisfy (P1)-(P3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChain {
    system: ReversalSft,
    labeling: Vec<usize>,
    labels: Vec<String>,
    label_tau: Vec<usize>,
}

impl LabeledChain {
    pub fn new(
        system: ReversalSft,
        labeling: Vec<usize>,
        labels: Vec<String>,
        label_tau: Vec<usize>,
    ) -> Result<Self, SoficError> {
        let cert = check_properties(
            system.a(),
            system.j(),
            &labeling,
            &label_tau,
            system.r(),
            system.alphabet(),
        );
        if !cert.passed() {
            return Err(SoficError::PropertyFailure(Box::new(cert)));
        }
        Ok(LabeledChain {
            system,
            labeling,
            labels,
            label_tau,
        })
    }

    /// The SFT labeled by its own symbols.
    pub fn from_sft(sys: &ReversalSft) -> Result<Self, SoficError> {
        Self::new(
            sys.clone(),
            (0..sys.len()).collect(),
            sys.alphabet().to_vec(),
            sys.tau().to_vec(),
        )
    }

    pub fn system(&self) -> &ReversalSft {
        &self.system
    }

    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_tau(&self) -> &[usize] {
        &self.label_tau
    }

    pub fn r(&self) -> usize {
        self.system.r()
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn certificate(&self) -> Certificate {
        check_properties(
            self.system.a(),
            self.system.j(),
            &self.labeling,
            &self.label_tau,
            self.r(),
            self.system.alphabet(),
        )
    }

    fn sub(
        &self,
        keep: &[usize],
        j: &IntMatrix,
        r: usize,
        label_keep: &[usize],
        label_tau: &[usize],
    ) -> Result<Self, SoficError> {
        if keep.is_empty() {
            return Ok(LabeledChain {
                system: ReversalSft::empty(r),
                labeling: Vec::new(),
                labels: Vec::new(),
                label_tau: Vec::new(),
            });
        }
        let mut label_index = vec![usize::MAX; self.labels.len()];
        for (i, &l) in label_keep.iter().enumerate() {
            label_index[l] = i;
        }
        let alphabet = keep
            .iter()
            .map(|&x| self.system.alphabet()[x].clone())
            .collect();
        let system = ReversalSft::validate(
            alphabet,
            self.system.a().submatrix(keep),
            j.submatrix(keep),
            r,
        )?;
        Self::new(
            system,
            keep.iter()
                .map(|&x| label_index[self.labeling[x]])
                .collect(),
            label_keep.iter().map(|&l| self.labels[l].clone()).collect(),
            label_keep
                .iter()
                .map(|&l| label_index[label_tau[l]])
                .collect(),
        )
    }

    /// The part of the chain carrying bi-infinite paths.
    pub fn essential(&self) -> Result<Self, SoficError> {
        let n = self.len();
        let a = self.system.a();
        let mut alive = vec![true; n];
        loop {
            let dead: Vec<usize> = (0..n)
                .filter(|&x| alive[x])
                .filter(|&x| {
                    !(0..n).any(|y| alive[y] && a.get(x, y).is_one())
                        || !(0..n).any(|y| alive[y] && a.get(y, x).is_one())
                })
                .collect();
            if dead.is_empty() {
                break;
            }
            for x in dead {
                alive[x] = false;
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();
        let labels: Vec<usize> = (0..self.labels.len()).collect();
        self.sub(&keep, self.system.j(), self.r(), &labels, &self.label_tau)
    }

    /// `X_{2k}`: symbols fixed by `tau_J^{2k}`, as a system of order `2k`.
    /// Periodic points of the image fixed by `phi^{2k}` have their canonical
    /// lifts here, so the restriction presents the subsystem.
    pub fn restrict(&self, k: usize) -> Result<Self, SoficError> {
        let k = k.max(1);
        if k >= self.r() {
            return Ok(self.clone());
        }
        let t = self.system.tau_power(2 * k);
        let keep: Vec<usize> = (0..self.len()).filter(|&x| t[x] == x).collect();
        let lt = permutation_power(&self.label_tau, 2 * k);
        let label_keep: Vec<usize> = (0..self.labels.len()).filter(|&l| lt[l] == l).collect();
        self.sub(&keep, self.system.j(), k, &label_keep, &self.label_tau)
    }

    /// The flip `(X_{2d}, sigma, phi^d)` as a chain of order 2.
    pub fn flip_chain(&self, d: usize) -> Result<Self, SoficError> {
        let r = self.r();
        if d.is_multiple_of(2) || !r.is_multiple_of(d) {
            return Err(SoficError::BadFlipPower { d, r });
        }
        let t = self.system.tau_power(2 * d);
        let keep: Vec<usize> = (0..self.len()).filter(|&x| t[x] == x).collect();
        let lt = permutation_power(&self.label_tau, 2 * d);
        let label_keep: Vec<usize> = (0..self.labels.len()).filter(|&l| lt[l] == l).collect();
        let flip = IntMatrix::permutation(&self.system.tau_power(d));
        let label_flip = permutation_power(&self.label_tau, d);
        self.sub(&keep, &flip, 1, &label_keep, &label_flip)
    }
}

/// A vertex of the joint state chain: indices into the future and past lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointState {
    pub future: usize,
    pub symbol: usize,
    pub past: usize,
}

#[derive(Debug, Clone)]
pub struct JointStateChain {
    presentation: LabeledPresentation,
    futures: Vec<StateSet>,
    pasts: Vec<StateSet>,
    states: Vec<JointState>,
    chain: LabeledChain,
    certificate: Certificate,
}

impl JointStateChain {
    /// The trimmed presentation the chain was built from.
    pub fn presentation(&self) -> &LabeledPresentation {
        &self.presentation
    }

    /// Futures as state sets of the trimmed presentation.
    pub fn futures(&self) -> Vec<Vec<usize>> {
        self.futures.iter().map(|&s| bits(s).collect()).collect()
    }

    /// Pasts as state sets (a past is read backwards from its states).
    pub fn pasts(&self) -> Vec<Vec<usize>> {
        self.pasts.iter().map(|&s| bits(s).collect()).collect()
    }

    pub fn states(&self) -> &[JointState] {
        &self.states
    }

    pub fn chain(&self) -> &LabeledChain {
        &self.chain
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }
}

fn trimmed_sets(
    p: &LabeledPresentation,
    reverse: bool,
    budget: WorkBudget,
) -> Result<Vec<StateSet>, SoficError> {
    let t = p.trim_essential()?;
    let g = if reverse { t.nfa().reversed() } else { t.nfa() };
    let side = if reverse { "pasts" } else { "futures" };
    let mut meter = budget.meter(format!("enumerating the transition monoid for {side}"));
    Ok(automata::stabilized_sets(&g, &mut meter)?)
}

/// Futures of the shift presented by `p`, as saturated state sets of the
/// trimmed presentation.
pub fn compute_futures(
    p: &LabeledPresentation,
    budget: WorkBudget,
) -> Result<Vec<Vec<usize>>, SoficError> {
    Ok(trimmed_sets(p, false, budget)?
        .into_iter()
        .map(|s| bits(s).collect())
        .collect())
}

/// Pasts, as saturated state sets of the reversed trimmed presentation.
pub fn compute_pasts(
    p: &LabeledPresentation,
    budget: WorkBudget,
) -> Result<Vec<Vec<usize>>, SoficError> {
    Ok(trimmed_sets(p, true, budget)?
        .into_iter()
        .map(|s| bits(s).collect())
        .collect())
}

/// Futures by the bounded stabilization `lim_j All M_u^j M_v` over words
/// `u`, `v` of length at most `max_len`; a cross-check for
/// [`compute_futures`] that may miss futures needing longer words.
pub fn compute_futures_by_stabilization(
    p: &LabeledPresentation,
    max_len: usize,
) -> Result<Vec<Vec<usize>>, SoficError> {
    let t = p.trim_essential()?;
    Ok(automata::stabilized_sets_by_words(&t.nfa(), max_len)
        .into_iter()
        .map(|s| bits(s).collect())
        .collect())
}

/// Builds Krieger's joint state chain of a tau-closed presentation and
/// checks (P1)-(P3) on the result.
pub fn build_joint_state_chain(
    p: &LabeledPresentation,
    budget: WorkBudget,
) -> Result<JointStateChain, SoficError> {
    let p = p.trim_essential()?;
    if let Some(w) = p.tau_closure_witness()? {
        return Err(SoficError::NotTauClosed(w));
    }
    let g = p.nfa();
    let rev = g.reversed();
    let mut meter = budget.meter("building the joint state chain");
    let futures = automata::stabilized_sets(&g, &mut meter)?;
    let pasts = automata::stabilized_sets(&rev, &mut meter)?;
    let labels = p.labels().len();
    let tau = p.tau();
    let tau_inv = permutation_inverse(tau);
    let set_name = |s: StateSet| {
        let names: Vec<&str> = bits(s).map(|q| p.states()[q].as_str()).collect();
        format!("{{{}}}", names.join(","))
    };

    // tau^+ : future -> past and tau^- : past -> future
    let find =
        |sets: &[StateSet], pred: &dyn Fn(StateSet) -> bool| sets.iter().position(|&s| pred(s));
    let mut tau_plus = Vec::with_capacity(futures.len());
    for &f in &futures {
        let j =
            find(&pasts, &|pst| languages_equal(&rev, pst, &g, f, &tau_inv)).ok_or_else(|| {
                SoficError::MissingImage {
                    side: "past",
                    what: format!("future {}", set_name(f)),
                }
            })?;
        tau_plus.push(j);
    }
    let mut tau_minus = Vec::with_capacity(pasts.len());
    for &pst in &pasts {
        let i =
            find(&futures, &|f| languages_equal(&g, f, &rev, pst, &tau_inv)).ok_or_else(|| {
                SoficError::MissingImage {
                    side: "future",
                    what: format!("past {}", set_name(pst)),
                }
            })?;
        tau_minus.push(i);
    }

    // F(a) and P(a), as indices (None when empty)
    let follow = |nfa: &automata::Nfa,
                  sets: &[StateSet],
                  side: &'static str|
     -> Result<Vec<Vec<Option<usize>>>, SoficError> {
        sets.iter()
            .map(|&s| {
                (0..labels)
                    .map(|a| {
                        let img = nfa.image(s, a);
                        if img == 0 {
                            return Ok(None);
                        }
                        let sat = nfa.saturate(img);
                        sets.iter()
                            .position(|&t| t == sat)
                            .map(Some)
                            .ok_or_else(|| SoficError::MissingImage {
                                side,
                                what: format!("{} after {}", set_name(s), p.labels()[a]),
                            })
                    })
                    .collect()
            })
            .collect()
    };
    let f_next = follow(&g, &futures, "future")?;
    let p_prev = follow(&rev, &pasts, "past")?;

    let mut states = Vec::new();
    for f in 0..futures.len() {
        for a in 0..labels {
            for q in 0..pasts.len() {
                meter.charge(1)?;
                if f_next[f][a].is_some() && p_prev[q][a].is_some() {
                    states.push(JointState {
                        future: f,
                        symbol: a,
                        past: q,
                    });
                }
            }
        }
    }
    let index: HashMap<JointState, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = states.len();
    meter.charge((n * n) as u64)?;
    let mut a_rows = vec![vec![0u8; n]; n];
    for (x, s1) in states.iter().enumerate() {
        let f2 = f_next[s1.future][s1.symbol];
        for (y, s2) in states.iter().enumerate() {
            if Some(s2.future) == f2 && p_prev[s2.past][s2.symbol] == Some(s1.past) {
                a_rows[x][y] = 1;
            }
        }
    }
    let mut tau_j = Vec::with_capacity(n);
    for s in &states {
        let image = JointState {
            future: tau_minus[s.past],
            symbol: tau[s.symbol],
            past: tau_plus[s.future],
        };
        let &y = index.get(&image).ok_or_else(|| SoficError::MissingImage {
            side: "joint state",
            what: format!("F{}.{}.P{}", s.future, p.labels()[s.symbol], s.past),
        })?;
        tau_j.push(y);
    }
    let names: Vec<String> = states
        .iter()
        .map(|s| format!("F{}.{}.P{}", s.future, p.labels()[s.symbol], s.past))
        .collect();
    let a = IntMatrix::from_rows(&a_rows)?;
    let j = IntMatrix::permutation(&tau_j);
    let labeling: Vec<usize> = states.iter().map(|s| s.symbol).collect();
    let certificate = check_properties(&a, &j, &labeling, tau, p.r(), &names);
    if !certificate.passed() {
        return Err(SoficError::PropertyFailure(Box::new(certificate)));
    }
    let system = ReversalSft::validate(names, a, j, p.r())?;
    let chain = LabeledChain::new(system, labeling, p.labels().to_vec(), tau.to_vec())?;
    Ok(JointStateChain {
        presentation: p,
        futures,
        pasts,
        states,
        chain,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn b() -> WorkBudget {
        WorkBudget::default()
    }

    #[test]
    fn future_counts() {
        let one = fixtures::full_two_shift_presentation(&[0, 1]);
        assert_eq!(compute_futures(&one, b()).unwrap().len(), 1);
        let golden = fixtures::golden_mean_presentation().presentation;
        assert_eq!(compute_futures(&golden, b()).unwrap().len(), 2);
        assert_eq!(compute_pasts(&golden, b()).unwrap().len(), 2);
        // even run, odd run, and the all-ones left ray
        let even = fixtures::even_shift().presentation;
        assert_eq!(compute_futures(&even, b()).unwrap().len(), 3);
        assert_eq!(compute_pasts(&even, b()).unwrap().len(), 3);
    }

    #[test]
    fn monoid_sets_agree_with_word_stabilization() {
        for f in fixtures::sofic_fixtures() {
            let t = f.presentation.trim_essential().unwrap();
            // keep the quadratic word search small on wide alphabets
            let len = (1..=6)
                .rev()
                .find(|&l| t.labels().len().pow(l as u32) <= 5000)
                .unwrap_or(2);
            for g in [t.nfa(), t.nfa().reversed()] {
                let mut meter = b().meter("test");
                let by_monoid = automata::stabilized_sets(&g, &mut meter).unwrap();
                assert_eq!(
                    automata::stabilized_sets_by_words(&g, len),
                    by_monoid,
                    "{}",
                    f.name
                );
            }
        }
    }

    #[test]
    fn futures_ignore_state_order_and_split_states() {
        let even = fixtures::even_shift().presentation;
        // reorder and split q0 into two copies with the same edges
        let e = |from, to, label| super::super::Edge { from, to, label };
        let split = LabeledPresentation::new(
            vec!["q1".into(), "q0a".into(), "q0b".into(), "junk".into()],
            even.labels().to_vec(),
            vec![
                e(1, 1, 0),
                e(1, 2, 0),
                e(2, 1, 0),
                e(2, 2, 0),
                e(1, 0, 1),
                e(2, 0, 1),
                e(0, 1, 1),
                e(0, 2, 1),
                e(3, 0, 0),
            ],
            even.tau().to_vec(),
            1,
        )
        .unwrap();
        assert_eq!(compute_futures(&split, b()).unwrap().len(), 3);
        assert_eq!(compute_pasts(&split, b()).unwrap().len(), 3);
    }

    #[test]
    fn two_shift_with_swap_has_two_joint_states() {
        let p = fixtures::full_two_shift_presentation(&[1, 0]);
        let jsc = build_joint_state_chain(&p, b()).unwrap();
        assert_eq!(jsc.states().len(), 2);
        assert_eq!(
            jsc.chain().system().a(),
            &IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap()
        );
        assert_eq!(jsc.chain().system().tau(), &[1, 0]);
    }

    #[test]
    fn every_fixture_chain_passes() {
        for f in fixtures::sofic_fixtures()
            .into_iter()
            .chain([fixtures::example_6_presentation()])
        {
            let jsc = build_joint_state_chain(&f.presentation, b()).unwrap();
            assert!(
                jsc.certificate().passed(),
                "{}: {}",
                f.name,
                jsc.certificate()
            );
        }
    }

    #[test]
    fn closure_violation_is_reported() {
        let e = |from, to, label| super::super::Edge { from, to, label };
        let p = LabeledPresentation::new(
            vec!["a".into(), "b".into()],
            vec!["0".into(), "1".into()],
            vec![e(0, 0, 0), e(0, 1, 1), e(1, 1, 1)],
            vec![0, 1],
            1,
        )
        .unwrap();
        assert!(matches!(
            build_joint_state_chain(&p, b()),
            Err(SoficError::NotTauClosed(_))
        ));
    }

    #[test]
    fn restriction_and_flip_chain_of_an_sft() {
        let sys = fixtures::paper_example_6();
        let chain = LabeledChain::from_sft(&sys).unwrap();
        let r2 = chain.restrict(2).unwrap();
        assert_eq!(r2.system(), &sys.restrict_fixed_subsystem(2));
        let flip = chain.flip_chain(3).unwrap();
        assert_eq!(flip.r(), 1);
        assert_eq!(flip.len(), 7);
        assert!(chain.flip_chain(2).is_err());
    }
}
