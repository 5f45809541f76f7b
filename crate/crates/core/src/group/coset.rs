//! Todd-Coxeter coset enumeration (HLT strategy) for subgroups of `G_2r`.

use std::collections::VecDeque;

use super::{element_word, GroupElement};

const NONE: usize = usize::MAX;
const GENS: usize = 4;

fn inv(x: usize) -> usize {
    x ^ 1
}

/// Result of an enumeration that may hit its coset bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetIndex {
    Finite(usize),
    Exceeded,
}

/// A complete coset table in standard form: coset 0 is the subgroup, and
/// cosets are numbered in order of first appearance during a breadth-first
/// walk over the letters `a, a^-1, b, b^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    rows: Vec<[usize; GENS]>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// Does the word (letters 0..4) fix coset 0, i.e. lie in the subgroup?
    pub fn contains_word(&self, word: &[usize]) -> bool {
        word.iter().fold(0, |c, &x| self.rows[c][x]) == 0
    }
}

struct Enumerator {
    table: Vec<[usize; GENS]>,
    parent: Vec<usize>,
    bound: usize,
    exceeded: bool,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = c;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) {
        if self.table.len() >= self.bound {
            self.exceeded = true;
            return;
        }
        let d = self.table.len();
        self.table.push([NONE; GENS]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][inv(x)] = c;
    }

    fn merge(&mut self, queue: &mut VecDeque<usize>, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(&mut queue, a, b);
        while let Some(e) = queue.pop_front() {
            for x in 0..GENS {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][inv(x)] == e {
                    self.table[f][inv(x)] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(&mut queue, f1, t);
                } else if self.table[f1][inv(x)] != NONE {
                    let t = self.table[f1][inv(x)];
                    self.merge(&mut queue, e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) {
        if word.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, word.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][word[i]] != NONE {
                f = self.table[f][word[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.table[b][inv(word[j as usize])] != NONE {
                b = self.table[b][inv(word[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            } else if j == i as isize {
                self.table[f][word[i]] = b;
                self.table[b][inv(word[i])] = f;
                return;
            } else {
                self.define(f, word[i]);
                if self.exceeded {
                    return;
                }
            }
        }
    }
}

/// Full coset table of the subgroup generated by `generators` in `G_2r`, or
/// `None` if more than `coset_bound` cosets had to be defined.
pub fn coset_table(
    generators: &[GroupElement],
    r: usize,
    coset_bound: usize,
) -> Option<CosetTable> {
    // relators a b a b^-1 (from ab = ba^-1) and b^2r
    let relators: Vec<Vec<usize>> = vec![vec![0, 2, 0, 3], vec![2; 2 * r]];
    let sub_words: Vec<Vec<usize>> = generators.iter().map(element_word).collect::<Option<_>>()?;
    let mut en = Enumerator {
        table: vec![[NONE; GENS]],
        parent: vec![0],
        bound: coset_bound.max(1),
        exceeded: false,
    };
    for w in &sub_words {
        en.scan_and_fill(0, w);
        if en.exceeded {
            return None;
        }
    }
    let mut c = 0;
    while c < en.table.len() {
        for rel in &relators {
            if !en.live(c) {
                break;
            }
            en.scan_and_fill(c, rel);
            if en.exceeded {
                return None;
            }
        }
        for x in 0..GENS {
            if en.live(c) && en.table[c][x] == NONE {
                en.define(c, x);
                if en.exceeded {
                    return None;
                }
            }
        }
        c += 1;
    }
    let table = standardize(&mut en);
    debug_assert!(table.rows.iter().enumerate().all(|(c, row)| {
        relators
            .iter()
            .all(|rel| rel.iter().fold(c, |d, &x| table.rows[d][x]) == c)
            && row
                .iter()
                .enumerate()
                .all(|(x, &d)| table.rows[d][inv(x)] == c)
    }));
    Some(table)
}

fn standardize(en: &mut Enumerator) -> CosetTable {
    let mut label = vec![NONE; en.table.len()];
    let mut order = vec![0usize];
    label[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for x in 0..GENS {
            let d = en.rep(en.table[c][x]);
            if label[d] == NONE {
                label[d] = order.len();
                order.push(d);
            }
        }
    }
    let rows = order
        .iter()
        .map(|&c| {
            let mut row = [0; GENS];
            for (x, slot) in row.iter_mut().enumerate() {
                let d = en.rep(en.table[c][x]);
                *slot = label[d];
            }
            row
        })
        .collect();
    CosetTable { rows }
}

/// Index of `<generators>` in `G_2r`, found by coset enumeration.
pub fn coset_enumeration_index(
    generators: &[GroupElement],
    r: usize,
    coset_bound: usize,
) -> CosetIndex {
    match coset_table(generators, r, coset_bound) {
        Some(t) => CosetIndex::Finite(t.index()),
        None => CosetIndex::Exceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_subgroups;

    fn el(n: i64, k: usize, r: usize) -> GroupElement {
        GroupElement::new(n, k, r).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            coset_enumeration_index(&[el(1, 0, 3), el(0, 1, 3)], 3, 100),
            CosetIndex::Finite(1)
        );
        assert_eq!(
            coset_enumeration_index(&[el(2, 0, 3), el(0, 2, 3)], 3, 100),
            CosetIndex::Finite(4)
        );
        assert_eq!(
            coset_enumeration_index(&[el(2, 0, 1), el(1, 1, 1)], 1, 100),
            CosetIndex::Finite(2)
        );
    }

    #[test]
    fn infinite_index_exceeds() {
        assert_eq!(coset_enumeration_index(&[], 2, 500), CosetIndex::Exceeded);
        assert_eq!(
            coset_enumeration_index(&[el(0, 1, 2)], 2, 500),
            CosetIndex::Exceeded
        );
    }

    #[test]
    fn closed_form_indexes() {
        for r in 1..=4 {
            for (d, index) in enumerate_subgroups(r, 12) {
                assert_eq!(
                    coset_enumeration_index(&d.generators(), r, 20_000),
                    CosetIndex::Finite(index),
                    "{d}"
                );
            }
        }
    }

    #[test]
    fn descriptors_name_distinct_subgroups() {
        use std::collections::HashMap;
        for r in 1..=3 {
            let mut seen: HashMap<CosetTable, String> = HashMap::new();
            for (d, _) in enumerate_subgroups(r, 8) {
                let t = coset_table(&d.generators(), r, 20_000).unwrap();
                if let Some(prev) = seen.insert(t, d.to_string()) {
                    panic!("{prev} and {d} are the same subgroup");
                }
            }
        }
    }

    #[test]
    fn membership_from_table() {
        let t = coset_table(&[el(2, 0, 1), el(1, 1, 1)], 1, 100).unwrap();
        // a^2 and ab are in, a is not
        assert!(t.contains_word(&[0, 0]));
        assert!(t.contains_word(&[0, 2]));
        assert!(!t.contains_word(&[0]));
    }
}
