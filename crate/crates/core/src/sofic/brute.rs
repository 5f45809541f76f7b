//! Enumeration oracle for periodic label sequences of a presentation.
//!
//! A periodic sequence `W^inf` lies in the sofic shift iff the graph has a
//! cycle labeled by some power of `W`.

use super::automata::{compose, Nfa, Relation};
use crate::budget::{BudgetExceeded, Meter, WorkBudget};
use crate::sft::permutation_power;

fn word_relation(nfa: &Nfa, word: &[usize]) -> Relation {
    let mut rel: Relation = (0..nfa.n).map(|q| 1u64 << q).collect();
    for &a in word {
        rel = compose(&rel, &nfa.relation(a));
    }
    rel
}

fn has_cycle(rel: &Relation, n: usize) -> bool {
    let mut power = rel.clone();
    for _ in 0..n.max(1) {
        if (0..n).any(|q| power[q] >> q & 1 == 1) {
            return true;
        }
        power = compose(&power, rel);
    }
    false
}

/// Depth-first over words of length `m` whose letters pass `allowed(i, a, word)`
/// and that can be read somewhere in the graph.
fn for_each_word<F, V>(
    nfa: &Nfa,
    m: usize,
    meter: &mut Meter,
    allowed: &F,
    visit: &mut V,
) -> Result<(), BudgetExceeded>
where
    F: Fn(usize, usize, &[usize]) -> bool,
    V: FnMut(&[usize]),
{
    fn go<F, V>(
        nfa: &Nfa,
        m: usize,
        set: u64,
        word: &mut Vec<usize>,
        meter: &mut Meter,
        allowed: &F,
        visit: &mut V,
    ) -> Result<(), BudgetExceeded>
    where
        F: Fn(usize, usize, &[usize]) -> bool,
        V: FnMut(&[usize]),
    {
        meter.charge(1)?;
        if word.len() == m {
            visit(word);
            return Ok(());
        }
        let i = word.len();
        for a in 0..nfa.labels() {
            if !allowed(i, a, word) {
                continue;
            }
            let next = nfa.image(set, a);
            if next != 0 {
                word.push(a);
                go(nfa, m, next, word, meter, allowed, visit)?;
                word.pop();
            }
        }
        Ok(())
    }
    go(
        nfa,
        m,
        nfa.all(),
        &mut Vec::with_capacity(m),
        meter,
        allowed,
        visit,
    )
}

fn permutation_order(p: &[usize]) -> usize {
    (1..)
        .find(|&e| {
            permutation_power(p, e)
                .iter()
                .enumerate()
                .all(|(i, &x)| i == x)
        })
        .unwrap()
}

/// Sequences with `x_{m+i} = step(x_i)` and all letters in `mask`.
pub(crate) fn fixed_count(
    nfa: &Nfa,
    mask: &[bool],
    step: &[usize],
    m: usize,
    budget: WorkBudget,
) -> Result<u64, BudgetExceeded> {
    let mut meter = budget.meter(format!("enumerating sofic words of length {m}"));
    let q = permutation_order(step);
    let mut count = 0u64;
    let mut long = Vec::with_capacity(m * q);
    let allowed = |_: usize, a: usize, _: &[usize]| mask[a];
    let mut words = Vec::new();
    for_each_word(nfa, m, &mut meter, &allowed, &mut |w| {
        words.push(w.to_vec())
    })?;
    for w in words {
        meter.charge((m * q * nfa.n) as u64)?;
        long.clear();
        let mut block = w;
        for _ in 0..q {
            long.extend_from_slice(&block);
            block = block.iter().map(|&a| step[a]).collect();
        }
        if has_cycle(&word_relation(nfa, &long), nfa.n) {
            count += 1;
        }
    }
    Ok(count)
}

/// Sequences of period `m` with `x_i = flip(x_{-i-n})` and letters in `mask`.
pub(crate) fn flip_count(
    nfa: &Nfa,
    mask: &[bool],
    flip: &[usize],
    m: usize,
    n: usize,
    budget: WorkBudget,
) -> Result<u64, BudgetExceeded> {
    let mut meter = budget.meter(format!(
        "enumerating flip-symmetric sofic words of length {m}"
    ));
    let partner = |i: usize| (2 * m - i % m - n % m) % m;
    let allowed = |i: usize, a: usize, word: &[usize]| {
        let j = partner(i);
        mask[a]
            && match j.cmp(&i) {
                std::cmp::Ordering::Less => a == flip[word[j]],
                std::cmp::Ordering::Equal => a == flip[a],
                std::cmp::Ordering::Greater => true,
            }
    };
    let mut count = 0u64;
    let mut words = Vec::new();
    for_each_word(nfa, m, &mut meter, &allowed, &mut |w| {
        words.push(w.to_vec())
    })?;
    for w in words {
        meter.charge((m * nfa.n) as u64)?;
        if has_cycle(&word_relation(nfa, &w), nfa.n) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_detection() {
        // q0 -a-> q1 -a-> q0: "a" has no fixed state but "aa" does
        let g = Nfa::new(2, 1, [(0, 1, 0), (1, 0, 0)]);
        assert!(has_cycle(&word_relation(&g, &[0]), 2));
        let path = Nfa::new(2, 1, [(0, 1, 0)]);
        assert!(!has_cycle(&word_relation(&path, &[0]), 2));
    }

    #[test]
    fn full_shift_counts() {
        let g = Nfa::new(1, 2, [(0, 0, 0), (0, 0, 1)]);
        let b = WorkBudget::default();
        assert_eq!(fixed_count(&g, &[true, true], &[0, 1], 4, b).unwrap(), 16);
        // swap: x_{m+i} = swap(x_i), so period 2m, determined by m letters
        assert_eq!(fixed_count(&g, &[true, true], &[1, 0], 3, b).unwrap(), 8);
        // palindromes of period 3 under plain reversal: x_i = x_{-i}
        assert_eq!(flip_count(&g, &[true, true], &[0, 1], 3, 0, b).unwrap(), 4);
    }
}
