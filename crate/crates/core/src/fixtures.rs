//! Built-in systems used by the tests, the acceptance suite and the CLI.

use crate::algebra::IntMatrix;
use crate::document::SystemDocument;
use crate::sft::{default_alphabet, ReversalSft};
use crate::sofic::{Edge, LabeledPresentation};

/// Name under which the 7-symbol order-6 example is available in the CLI.
pub const EXAMPLE_6: &str = "paper-example-6";

pub const EXAMPLE_6_A: [[u8; 7]; 7] = [
    [0, 1, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 1],
    [1, 1, 1, 1, 1, 1, 1],
];

/// `tau` cycles `1 -> 2 -> ... -> 6 -> 1` and fixes `7`.
pub const EXAMPLE_6_TAU: [usize; 7] = [1, 2, 3, 4, 5, 0, 6];

fn matrix<const N: usize>(rows: &[[u8; N]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("rectangular")
}

/// The order-6 reversal system on 7 symbols.
pub fn paper_example_6() -> ReversalSft {
    ReversalSft::from_tau(default_alphabet(7), matrix(&EXAMPLE_6_A), &EXAMPLE_6_TAU, 3)
        .expect("example system is valid")
}

/// Full shift on `n` symbols with the plain time reversal (`tau = id`, order 2).
pub fn full_shift(n: usize) -> ReversalSft {
    full_shift_with_tau(&(0..n).collect::<Vec<_>>(), 1)
}

/// Full shift on `tau.len()` symbols, reversal `phi(x)_i = tau(x_{-i})` of order `2r`.
pub fn full_shift_with_tau(tau: &[usize], r: usize) -> ReversalSft {
    let n = tau.len();
    let a = IntMatrix::from_rows(&vec![vec![1u8; n]; n]).expect("square");
    let names = (0..n).map(|i| i.to_string()).collect();
    ReversalSft::from_tau(names, a, tau, r).expect("full shift admits any tau")
}

/// Golden mean shift (no `11`) with `tau = id`.
pub fn golden_mean() -> ReversalSft {
    let a = matrix(&[[1, 1], [1, 0]]);
    ReversalSft::from_tau(vec!["0".into(), "1".into()], a, &[0, 1], 1).expect("symmetric")
}

/// A single symbol with a self-loop: one fixed point.
pub fn single_loop() -> ReversalSft {
    ReversalSft::from_tau(vec!["0".into()], matrix(&[[1]]), &[0], 1).expect("trivial")
}

/// A named sofic presentation.
#[derive(Debug, Clone)]
pub struct SoficFixture {
    pub name: &'static str,
    pub presentation: LabeledPresentation,
}

fn presentation(
    states: &[&str],
    labels: &[&str],
    edges: &[(usize, usize, usize)],
    tau: &[usize],
    r: usize,
) -> LabeledPresentation {
    LabeledPresentation::new(
        states.iter().map(|s| s.to_string()).collect(),
        labels.iter().map(|s| s.to_string()).collect(),
        edges
            .iter()
            .map(|&(from, to, label)| Edge { from, to, label })
            .collect(),
        tau.to_vec(),
        r,
    )
    .expect("fixture presentation is valid")
}

/// Even shift (1-runs between 0s have even length), plain time reversal.
pub fn even_shift() -> SoficFixture {
    SoficFixture {
        name: "even-shift",
        presentation: presentation(
            &["q0", "q1"],
            &["0", "1"],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 1)],
            &[0, 1],
            1,
        ),
    }
}

/// Golden mean shift as a labeled graph, plain time reversal.
pub fn golden_mean_presentation() -> SoficFixture {
    SoficFixture {
        name: "golden-mean",
        presentation: presentation(
            &["q0", "q1"],
            &["0", "1"],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 0)],
            &[0, 1],
            1,
        ),
    }
}

/// Full 2-shift on one state, labels `0`, `1`, order-2 symbol map `tau`.
pub fn full_two_shift_presentation(tau: &[usize]) -> LabeledPresentation {
    presentation(&["q"], &["0", "1"], &[(0, 0, 0), (0, 0, 1)], tau, 1)
}

pub fn single_loop_presentation() -> SoficFixture {
    SoficFixture {
        name: "single-loop",
        presentation: presentation(&["q"], &["0"], &[(0, 0, 0)], &[0], 1),
    }
}

/// Even shift whose nonzero symbols come in four colors rotated by `tau`
/// (order 4).
pub fn colored_even_shift() -> SoficFixture {
    let mut edges = vec![(0, 0, 0)];
    for c in 1..=4 {
        edges.push((0, 1, c));
        edges.push((1, 0, c));
    }
    SoficFixture {
        name: "colored-even-shift",
        presentation: presentation(
            &["q0", "q1"],
            &["0", "a", "b", "c", "d"],
            &edges,
            &[0, 2, 3, 4, 1],
            2,
        ),
    }
}

/// Even shift with colors `a`, `b` swapped by the flip.
pub fn two_colored_even_shift() -> SoficFixture {
    SoficFixture {
        name: "two-colored-even-shift",
        presentation: presentation(
            &["q0", "q1"],
            &["0", "a", "b"],
            &[(0, 0, 0), (0, 1, 1), (0, 1, 2), (1, 0, 1), (1, 0, 2)],
            &[0, 2, 1],
            1,
        ),
    }
}

/// The order-6 example as a vertex-shift presentation.
pub fn example_6_presentation() -> SoficFixture {
    SoficFixture {
        name: EXAMPLE_6,
        presentation: LabeledPresentation::from_sft(&paper_example_6()).expect("valid"),
    }
}

/// Presentations small enough for the signed-subset counts. The vertex
/// presentation of the order-6 example is left out: its joint state chain
/// has 25 states with one label, far too many subsets.
pub fn sofic_fixtures() -> Vec<SoficFixture> {
    vec![
        even_shift(),
        golden_mean_presentation(),
        single_loop_presentation(),
        SoficFixture {
            name: "two-shift-swap",
            presentation: full_two_shift_presentation(&[1, 0]),
        },
        two_colored_even_shift(),
        colored_even_shift(),
    ]
}

/// Named SFT fixtures, the order-6 example first.
pub fn sft_fixtures() -> Vec<(&'static str, ReversalSft)> {
    vec![
        (EXAMPLE_6, paper_example_6()),
        ("full-shift-2", full_shift(2)),
        ("golden-mean-sft", golden_mean()),
        ("single-loop-sft", single_loop()),
        ("full-shift-3-rotation", full_shift_with_tau(&[1, 2, 0], 3)),
        ("full-shift-4-cycle", full_shift_with_tau(&[1, 2, 3, 0], 2)),
    ]
}

/// Every built-in system by name.
pub fn named_systems() -> Vec<(&'static str, SystemDocument)> {
    let mut out: Vec<(&'static str, SystemDocument)> = sft_fixtures()
        .into_iter()
        .map(|(n, s)| (n, SystemDocument::Sft(s)))
        .collect();
    out.extend(
        sofic_fixtures()
            .into_iter()
            .map(|f| (f.name, SystemDocument::Sofic(f.presentation))),
    );
    out
}

pub fn named_system(name: &str) -> Option<SystemDocument> {
    named_systems()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d)
}
