//! Runtime checks of the three properties a labeled reversal SFT needs
//! before its signed subset matrices count points of the sofic image:
//! (P1) `A`, `J` form a reversal system of order `2r`, (P2) the labeling
//! intertwines `tau_J` with `tau`, (P3) no graph diamonds.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::algebra::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn new(name: &str, witness: Option<String>) -> Self {
        PropertyCheck {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub p1: PropertyCheck,
    pub p2: PropertyCheck,
    pub p3: PropertyCheck,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.p1.passed && self.p2.passed && self.p3.passed
    }

    pub fn checks(&self) -> [&PropertyCheck; 3] {
        [&self.p1, &self.p2, &self.p3]
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, " ({w})")?;
            }
        }
        Ok(())
    }
}

fn as_permutation(j: &IntMatrix) -> Option<Vec<usize>> {
    let n = j.rows();
    let mut tau = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for (x, slot) in tau.iter_mut().enumerate() {
        let ones: Vec<usize> = (0..n).filter(|&y| j.get(x, y).is_one()).collect();
        if ones.len() != 1 || hit[ones[0]] {
            return None;
        }
        hit[ones[0]] = true;
        *slot = ones[0];
    }
    Some(tau)
}

fn check_p1(
    a: &IntMatrix,
    j: &IntMatrix,
    r: usize,
    name: &dyn Fn(usize) -> String,
) -> Option<String> {
    let n = a.rows();
    if !a.is_square() || j.rows() != n || j.cols() != n {
        return Some(format!("shapes {:?} and {:?}", a.shape(), j.shape()));
    }
    for (label, m) in [("A", a), ("J", j)] {
        if let Some((x, y)) = m.first_non_zero_one() {
            return Some(format!("{label}({},{}) is not 0 or 1", name(x), name(y)));
        }
    }
    let Some(tau) = as_permutation(j) else {
        return Some("J is not a permutation matrix".into());
    };
    let pow = crate::sft::permutation_power(&tau, 2 * r);
    if let Some(x) = (0..n).find(|&x| pow[x] != x) {
        return Some(format!("J^{} moves {}", 2 * r, name(x)));
    }
    // AJ = JA^T  <=>  A(x, tau(y)) = A(y, tau(x))
    let aj = a.mul(j).expect("square");
    let jat = j.mul(&a.transpose()).expect("square");
    aj.first_difference(&jat)
        .map(|(x, y)| format!("AJ != JA^T at ({},{})", name(x), name(y)))
}

fn check_p2(
    j: &IntMatrix,
    labeling: &[usize],
    tau: &[usize],
    name: &dyn Fn(usize) -> String,
) -> Option<String> {
    let Some(tau_j) = as_permutation(j) else {
        return Some("J is not a permutation matrix".into());
    };
    if labeling.len() != tau_j.len() {
        return Some(format!(
            "{} labels for {} symbols",
            labeling.len(),
            tau_j.len()
        ));
    }
    if let Some(&bad) = labeling.iter().find(|&&l| l >= tau.len()) {
        return Some(format!("label index {bad} outside the label alphabet"));
    }
    (0..tau_j.len())
        .find(|&x| labeling[tau_j[x]] != tau[labeling[x]])
        .map(|x| format!("L(tau_J({})) != tau(L({}))", name(x), name(x)))
}

/// Two distinct equal-label blocks with the same first and last symbol,
/// found as a path in the graph of pairs of distinct equal-label symbols
/// from a pair with a common predecessor to one with a common successor.
pub(crate) fn find_diamond(a: &IntMatrix, labeling: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = a.rows();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| a.get(x, y).is_one()).collect())
        .collect();
    let common_successor =
        |u: usize, v: usize| succ[u].iter().copied().find(|s| succ[v].contains(s));
    // pair -> (previous pair or common predecessor)
    let mut parent: HashMap<(usize, usize), Result<(usize, usize), usize>> = HashMap::new();
    let mut queue = VecDeque::new();
    for p in 0..n {
        for (i, &u) in succ[p].iter().enumerate() {
            for &v in &succ[p][i + 1..] {
                if labeling[u] == labeling[v] && !parent.contains_key(&(u, v)) {
                    parent.insert((u, v), Err(p));
                    queue.push_back((u, v));
                }
            }
        }
    }
    while let Some((u, v)) = queue.pop_front() {
        if let Some(s) = common_successor(u, v) {
            let (mut left, mut right) = (vec![s], vec![s]);
            let mut cur = (u, v);
            loop {
                left.push(cur.0);
                right.push(cur.1);
                match parent[&cur] {
                    Ok(prev) => cur = prev,
                    Err(p) => {
                        left.push(p);
                        right.push(p);
                        break;
                    }
                }
            }
            left.reverse();
            right.reverse();
            return Some((left, right));
        }
        for &u2 in &succ[u] {
            for &v2 in &succ[v] {
                if u2 != v2 && labeling[u2] == labeling[v2] && !parent.contains_key(&(u2, v2)) {
                    parent.insert((u2, v2), Ok((u, v)));
                    queue.push_back((u2, v2));
                }
            }
        }
    }
    None
}

/// Checks (P1)-(P3) for `(A, J)` labeled by `labeling` into an alphabet with
/// symbol map `tau`. `names` is used for witnesses only (indices if empty).
pub fn check_properties(
    a: &IntMatrix,
    j: &IntMatrix,
    labeling: &[usize],
    tau: &[usize],
    r: usize,
    names: &[String],
) -> Certificate {
    let name = |x: usize| names.get(x).cloned().unwrap_or_else(|| x.to_string());
    let p1 = check_p1(a, j, r.max(1), &name);
    let p2 = check_p2(j, labeling, tau, &name);
    let p3 = if labeling.len() != a.rows() || !a.is_square() {
        Some("labeling does not match A".to_string())
    } else {
        find_diamond(a, labeling).map(|(b1, b2)| {
            let show = |b: &[usize]| b.iter().map(|&x| name(x)).collect::<Vec<_>>().join(" ");
            format!("diamond [{}] / [{}]", show(&b1), show(&b2))
        })
    };
    Certificate {
        p1: PropertyCheck::new("P1", p1),
        p2: PropertyCheck::new("P2", p2),
        p3: PropertyCheck::new("P3", p3),
    }
}
