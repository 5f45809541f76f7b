//! Window enumeration oracles. Nothing here uses matrix identities.

use crate::budget::{BudgetExceeded, WorkBudget};

use super::{permutation_inverse, permutation_power, ReversalSft};

/// Depth-first walk over paths `x_0 .. x_{len-1}` of the graph, calling
/// `visit` on each complete path. Every visited node costs one unit.
pub(crate) fn for_each_path<F>(
    succ: &[Vec<usize>],
    len: usize,
    budget: WorkBudget,
    task: &str,
    visit: F,
) -> Result<(), BudgetExceeded>
where
    F: FnMut(&[usize]),
{
    for_each_path_where(succ, len, budget, task, |_, _| true, visit)
}

/// Like [`for_each_path`], but a prefix is only extended by `sym` when
/// `keep(prefix, sym)` holds.
pub(crate) fn for_each_path_where<K, F>(
    succ: &[Vec<usize>],
    len: usize,
    budget: WorkBudget,
    task: &str,
    mut keep: K,
    mut visit: F,
) -> Result<(), BudgetExceeded>
where
    K: FnMut(&[usize], usize) -> bool,
    F: FnMut(&[usize]),
{
    let mut meter = budget.meter(task);
    let mut path = Vec::with_capacity(len);
    let mut stack: Vec<(usize, usize)> = Vec::new(); // (depth, symbol)
    for start in (0..succ.len()).rev() {
        stack.push((0, start));
    }
    while let Some((depth, sym)) = stack.pop() {
        path.truncate(depth);
        if !keep(&path, sym) {
            continue;
        }
        meter.charge(1)?;
        path.push(sym);
        if depth + 1 == len {
            visit(&path);
            continue;
        }
        for &next in succ[sym].iter().rev() {
            stack.push((depth + 1, next));
        }
    }
    Ok(())
}

/// Windows `x_0 .. x_{m-1}`, extended by `x_{m+i} = tau^{-2l}(x_i)` to one
/// full period `m * ord(tau^{2l})`, with every adjacency (wrap included) checked.
pub(crate) fn fixed_count(
    sys: &ReversalSft,
    m: usize,
    l: usize,
    budget: WorkBudget,
) -> Result<u64, BudgetExceeded> {
    let back = permutation_inverse(&permutation_power(sys.tau(), 2 * l));
    let reps = permutation_order(&back);
    let mut count = 0u64;
    let mut ext = vec![0usize; m * reps];
    for_each_path(
        &sys.succ,
        m,
        budget,
        "enumerating fixed-point windows",
        |w| {
            ext[..m].copy_from_slice(w);
            for i in m..m * reps {
                ext[i] = back[ext[i - m]];
            }
            let p = ext.len();
            if (0..p).all(|i| sys.allowed(ext[i], ext[(i + 1) % p])) {
                count += 1;
            }
        },
    )?;
    Ok(count)
}

/// `#{x : sigma^m x = x, sigma^n F x = x}` where `F(x)_i = f(x_{-i})`,
/// i.e. `x_i = f(x_{(-i-n) mod m})` on closed paths of length `m`.
pub(crate) fn flip_count(
    succ: &[Vec<usize>],
    f: &[usize],
    m: usize,
    n: usize,
    budget: WorkBudget,
) -> Result<u64, BudgetExceeded> {
    let mut count = 0u64;
    let n = n % m;
    // x_i is pinned once its partner (-i-n) mod m has been placed
    let keep = |prefix: &[usize], sym: usize| {
        let i = prefix.len();
        let p = (2 * m - i - n) % m;
        match p.cmp(&i) {
            std::cmp::Ordering::Less => sym == f[prefix[p]],
            std::cmp::Ordering::Equal => sym == f[sym],
            std::cmp::Ordering::Greater => true,
        }
    };
    for_each_path_where(succ, m, budget, "enumerating flip windows", keep, |w| {
        if !succ[w[m - 1]].contains(&w[0]) {
            return;
        }
        if (0..m).all(|i| w[i] == f[w[(2 * m - i - n) % m]]) {
            count += 1;
        }
    })?;
    Ok(count)
}

pub(crate) fn permutation_order(p: &[usize]) -> usize {
    let mut e = 1;
    let id: Vec<usize> = (0..p.len()).collect();
    while permutation_power(p, e) != id {
        e += 1;
    }
    e
}
