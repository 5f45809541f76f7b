//! Subset automata over labeled graphs with at most 64 states.
//!
//! All graphs handled here are essential, so a nonempty state set always
//! carries infinite continuations; comparing finite-word follower languages
//! is then the same as comparing sets of infinite rays.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::budget::{BudgetExceeded, Meter};

pub(crate) type StateSet = u64;

pub(crate) const MAX_STATES: usize = 64;

pub(crate) fn bits(set: StateSet) -> impl Iterator<Item = usize> {
    let mut s = set;
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let q = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(q)
        }
    })
}

/// `step[a][q]`: successors of `q` along edges labeled `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Nfa {
    pub n: usize,
    pub step: Vec<Vec<StateSet>>,
}

/// A word's action on states, row `q` holding the reachable set from `q`.
pub(crate) type Relation = Vec<StateSet>;

impl Nfa {
    pub fn new(
        n: usize,
        labels: usize,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Self {
        assert!(n <= MAX_STATES);
        let mut step = vec![vec![0; n]; labels];
        for (from, to, label) in edges {
            step[label][from] |= 1 << to;
        }
        Nfa { n, step }
    }

    pub fn labels(&self) -> usize {
        self.step.len()
    }

    pub fn all(&self) -> StateSet {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn image(&self, set: StateSet, a: usize) -> StateSet {
        bits(set).fold(0, |acc, q| acc | self.step[a][q])
    }

    pub fn reversed(&self) -> Nfa {
        let mut step = vec![vec![0; self.n]; self.labels()];
        for (a, rows) in self.step.iter().enumerate() {
            for (q, &succ) in rows.iter().enumerate() {
                for p in bits(succ) {
                    step[a][p] |= 1 << q;
                }
            }
        }
        Nfa { n: self.n, step }
    }

    pub fn relation(&self, a: usize) -> Relation {
        self.step[a].clone()
    }

    /// Is `L(x) ⊆ L(y)`?
    pub fn included(&self, x: StateSet, y: StateSet) -> bool {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(x, y)]);
        seen.insert((x, y));
        while let Some((x, y)) = queue.pop_front() {
            for a in 0..self.labels() {
                let x2 = self.image(x, a);
                if x2 == 0 {
                    continue;
                }
                let y2 = self.image(y, a);
                if y2 == 0 {
                    return false;
                }
                if seen.insert((x2, y2)) {
                    queue.push_back((x2, y2));
                }
            }
        }
        true
    }

    /// `{q : L(q) ⊆ L(set)}`, the canonical representative of `L(set)`.
    pub fn saturate(&self, set: StateSet) -> StateSet {
        if set == 0 {
            return 0;
        }
        (0..self.n)
            .filter(|&q| set >> q & 1 == 1 || self.included(1 << q, set))
            .fold(0, |acc, q| acc | 1 << q)
    }
}

/// Does `L_first(x)` equal `L_second(y)` when `second` reads `letter_map[a]`
/// wherever `first` reads `a`?
pub(crate) fn languages_equal(
    first: &Nfa,
    x: StateSet,
    second: &Nfa,
    y: StateSet,
    letter_map: &[usize],
) -> bool {
    first_difference(first, x, second, y, letter_map).is_none()
}

/// A shortest word (in `first`'s letters) in exactly one of the two
/// languages of [`languages_equal`].
pub(crate) fn first_difference(
    first: &Nfa,
    x: StateSet,
    second: &Nfa,
    y: StateSet,
    letter_map: &[usize],
) -> Option<Vec<usize>> {
    if (x == 0) != (y == 0) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<(StateSet, StateSet), Option<((StateSet, StateSet), usize)>> =
        HashMap::new();
    let mut queue = VecDeque::from([(x, y)]);
    parent.insert((x, y), None);
    let word_to =
        |parent: &HashMap<_, Option<((StateSet, StateSet), usize)>>, mut key, last: usize| {
            let mut word = vec![last];
            while let Some(&Some((prev, a))) = parent.get(&key) {
                word.push(a);
                key = prev;
            }
            word.reverse();
            word
        };
    while let Some(cur) = queue.pop_front() {
        for a in 0..first.labels() {
            let x2 = first.image(cur.0, a);
            let y2 = second.image(cur.1, letter_map[a]);
            if (x2 == 0) != (y2 == 0) {
                return Some(word_to(&parent, cur, a));
            }
            if x2 != 0 && !parent.contains_key(&(x2, y2)) {
                parent.insert((x2, y2), Some((cur, a)));
                queue.push_back((x2, y2));
            }
        }
    }
    None
}

pub(crate) fn compose(first: &Relation, then: &Relation) -> Relation {
    first
        .iter()
        .map(|&row| bits(row).fold(0, |acc, q| acc | then[q]))
        .collect()
}

pub(crate) fn apply(set: StateSet, rel: &Relation) -> StateSet {
    bits(set).fold(0, |acc, q| acc | rel[q])
}

/// Transition monoid of nonempty words, by breadth-first closure.
pub(crate) fn transition_monoid(
    nfa: &Nfa,
    meter: &mut Meter,
) -> Result<Vec<Relation>, BudgetExceeded> {
    let gens: Vec<Relation> = (0..nfa.labels()).map(|a| nfa.relation(a)).collect();
    let mut index: HashMap<Relation, usize> = HashMap::new();
    let mut elems: Vec<Relation> = Vec::new();
    for g in &gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for g in &gens {
            meter.charge(nfa.n as u64 + 1)?;
            let next = compose(&cur, g);
            if !index.contains_key(&next) {
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
    }
    Ok(elems)
}

/// Canonical (saturated) state sets of all futures: `sat(All e m)` for
/// idempotents `e` and `m` in the monoid or the identity, nonempty ones only.
pub(crate) fn stabilized_sets(
    nfa: &Nfa,
    meter: &mut Meter,
) -> Result<Vec<StateSet>, BudgetExceeded> {
    let monoid = transition_monoid(nfa, meter)?;
    let all = nfa.all();
    let mut heads: HashSet<StateSet> = HashSet::new();
    for e in &monoid {
        if compose(e, e) == *e {
            let s = apply(all, e);
            if s != 0 {
                heads.insert(s);
            }
        }
    }
    let mut found: HashSet<StateSet> = HashSet::new();
    for &h in &heads {
        found.insert(h);
        for m in &monoid {
            meter.charge(1)?;
            let s = apply(h, m);
            if s != 0 {
                found.insert(s);
            }
        }
    }
    let mut canon: Vec<StateSet> = found.into_iter().map(|s| nfa.saturate(s)).collect();
    canon.sort_unstable();
    canon.dedup();
    Ok(canon)
}

/// Cross-check for [`stabilized_sets`]: `lim_j All M_u^j M_v` over nonempty
/// words `u` and words `v` of length at most `max_len`.
pub(crate) fn stabilized_sets_by_words(nfa: &Nfa, max_len: usize) -> Vec<StateSet> {
    let words = words_up_to(nfa.labels(), max_len);
    let all = nfa.all();
    let mut found = HashSet::new();
    for u in words.iter().filter(|w| !w.is_empty()) {
        let mut s = all;
        loop {
            let next = u.iter().fold(s, |acc, &a| nfa.image(acc, a));
            if next == s {
                break;
            }
            s = next;
        }
        if s == 0 {
            continue;
        }
        for v in &words {
            let t = v.iter().fold(s, |acc, &a| nfa.image(acc, a));
            if t != 0 {
                found.insert(nfa.saturate(t));
            }
        }
    }
    let mut out: Vec<StateSet> = found.into_iter().collect();
    out.sort_unstable();
    out
}

fn words_up_to(labels: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..labels {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
