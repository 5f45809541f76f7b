//! Random reversal systems for property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::IntMatrix;
use crate::sft::{default_alphabet, ReversalSft};
use crate::sofic::{Edge, LabeledPresentation};

/// A random permutation of `0..n` whose order divides `2r`, built from
/// cycles whose lengths divide `2r`.
pub fn random_symbol_map<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> Vec<usize> {
    let divisors: Vec<usize> = (1..=2 * r).filter(|d| (2 * r).is_multiple_of(*d)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut tau = vec![0; n];
    let mut start = 0;
    while start < n {
        let fits: Vec<usize> = divisors
            .iter()
            .copied()
            .filter(|&d| d <= n - start)
            .collect();
        let len = *fits.choose(rng).expect("1 always fits");
        let cycle = &order[start..start + len];
        for i in 0..len {
            tau[cycle[i]] = cycle[(i + 1) % len];
        }
        start += len;
    }
    tau
}

/// A random reversal SFT on `n` symbols of order `2r`. Each orbit of
/// `(a, b) -> (tau(b), tau(a))` on transitions is allowed with probability
/// `density`, which makes `AJ = JA^T` hold by construction.
pub fn random_reversal_sft<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    density: f64,
) -> ReversalSft {
    let tau = random_symbol_map(rng, n, r);
    let mut a = vec![vec![None::<bool>; n]; n];
    for x in 0..n {
        for y in 0..n {
            if a[x][y].is_some() {
                continue;
            }
            let bit = rng.gen_bool(density);
            let (mut u, mut v) = (x, y);
            while a[u][v].is_none() {
                a[u][v] = Some(bit);
                (u, v) = (tau[v], tau[u]);
            }
        }
    }
    let rows: Vec<Vec<u8>> = a
        .iter()
        .map(|row| row.iter().map(|&b| b == Some(true)).map(u8::from).collect())
        .collect();
    let a = IntMatrix::from_rows(&rows).expect("square");
    ReversalSft::from_tau(default_alphabet(n), a, &tau, r).expect("orbit construction is symmetric")
}

/// A random presentation on `states` states and `labels` labels whose
/// language is closed under reversal followed by `tau`: edges are closed
/// under `(p, a, q) -> (s(q), tau(a), s(p))` for a random state permutation
/// `s`. Returns `None` when nothing essential is left.
pub fn random_presentation<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    labels: usize,
    r: usize,
    edge_probability: f64,
) -> Option<LabeledPresentation> {
    let tau = random_symbol_map(rng, labels, r);
    let mut s: Vec<usize> = (0..states).collect();
    s.shuffle(rng);
    let mut edges = Vec::new();
    for from in 0..states {
        for to in 0..states {
            for label in 0..labels {
                if rng.gen_bool(edge_probability) {
                    let (mut p, mut a, mut q) = (from, label, to);
                    loop {
                        let e = Edge {
                            from: p,
                            to: q,
                            label: a,
                        };
                        if edges.contains(&e) {
                            break;
                        }
                        edges.push(e);
                        (p, a, q) = (s[q], tau[a], s[p]);
                    }
                }
            }
        }
    }
    let names = |prefix: &str, n: usize| (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    let p = LabeledPresentation::new(names("q", states), names("x", labels), edges, tau, r).ok()?;
    p.trim_essential().ok()
}
