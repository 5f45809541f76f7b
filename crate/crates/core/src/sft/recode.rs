//! Recoding a sliding-block reversal into matrix form.
//!
//! A rule of odd width `w = 2h + 1` acts by `phi(x)_i = rule(x_{-i-h} .. x_{-i+h})`.
//! Every map of this shape satisfies `sigma phi = phi sigma^-1`, so the
//! properties left to check are that `phi` maps the shift into itself and
//! that `phi^{2r} = id`. The recoding then passes to the tuple alphabet
//! `(phi^0(x)_0, .., phi^{2r-1}(x)_0)`, where the reversal becomes one-block
//! with symbol map the left rotation, and finally to a centred `n`-block
//! presentation so that the result is a 1-step vertex shift.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::algebra::IntMatrix;
use crate::budget::{Meter, WorkBudget};

use super::brute::for_each_path;
use super::{ReversalSft, SftError};

/// A 1-step shift of finite type without a reversal attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexShift {
    alphabet: Vec<String>,
    a: IntMatrix,
    succ: Vec<Vec<usize>>,
}

impl VertexShift {
    pub fn new(alphabet: Vec<String>, a: IntMatrix) -> Result<Self, SftError> {
        let n = alphabet.len();
        if a.rows() != n || a.cols() != n {
            return Err(SftError::Dimensions {
                matrix: 'A',
                alphabet: n,
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if let Some((row, col)) = a.first_non_zero_one() {
            return Err(SftError::NotZeroOne {
                matrix: 'A',
                row: alphabet[row].clone(),
                col: alphabet[col].clone(),
                value: a.get(row, col).to_string(),
            });
        }
        let essential = essential_vertices(&a);
        let succ = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| essential[x] && essential[y] && a.get(x, y).is_one())
                    .collect()
            })
            .collect();
        Ok(VertexShift { alphabet, a, succ })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    fn blocks(&self, len: usize, budget: WorkBudget) -> Result<Vec<Vec<usize>>, SftError> {
        let mut out = Vec::new();
        for_each_path(&self.succ, len, budget, "enumerating blocks", |p| {
            out.push(p.to_vec())
        })?;
        Ok(out)
    }

    fn names(&self, block: &[usize]) -> Vec<String> {
        block.iter().map(|&s| self.alphabet[s].clone()).collect()
    }
}

fn essential_vertices(a: &IntMatrix) -> Vec<bool> {
    let n = a.rows();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for x in 0..n {
            if !alive[x] {
                continue;
            }
            let out = (0..n).any(|y| alive[y] && a.get(x, y).is_one());
            let inc = (0..n).any(|y| alive[y] && a.get(y, x).is_one());
            if !(out && inc) {
                alive[x] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// A reversal of order `2r` given by a sliding block rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReversalRule {
    window: usize,
    r: usize,
    /// Keyed by the block read as a base-`|alphabet|` number.
    table: HashMap<u64, usize>,
    /// The same table as a flat array when it is small enough.
    dense: Option<Vec<Option<usize>>>,
}

const DENSE_LIMIT: u64 = 1 << 20;

fn block_code(symbols: usize, block: &[usize]) -> u64 {
    block
        .iter()
        .fold(0u64, |acc, &s| acc.wrapping_mul(symbols as u64) + s as u64)
}

impl LocalReversalRule {
    /// Tabulates `rule` on every allowed `window`-block of `shift`.
    pub fn from_fn<F>(
        shift: &VertexShift,
        window: usize,
        r: usize,
        rule: F,
    ) -> Result<Self, SftError>
    where
        F: Fn(&[usize]) -> usize,
    {
        if window.is_multiple_of(2) {
            return Err(SftError::Recode(format!(
                "window width {window} is not odd"
            )));
        }
        if r == 0 {
            return Err(SftError::ZeroOrder);
        }
        let n = shift.alphabet.len() as f64;
        if window as f64 * n.max(1.0).log2() >= 64.0 {
            return Err(SftError::Recode(format!(
                "window width {window} is too wide for {} symbols",
                shift.alphabet.len()
            )));
        }
        let mut table = HashMap::new();
        for block in shift.blocks(window, WorkBudget::default())? {
            let value = rule(&block);
            if value >= shift.alphabet.len() {
                return Err(SftError::Recode(format!(
                    "rule maps {:?} to unknown symbol index {value}",
                    shift.names(&block)
                )));
            }
            table.insert(block_code(shift.alphabet.len(), &block), value);
        }
        let size = (shift.alphabet.len() as u64).checked_pow(window as u32);
        let dense = size.filter(|&s| s <= DENSE_LIMIT).map(|s| {
            let mut flat = vec![None; s as usize];
            for (&code, &value) in &table {
                flat[code as usize] = Some(value);
            }
            flat
        });
        Ok(LocalReversalRule {
            window,
            r,
            table,
            dense,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn radius(&self) -> usize {
        self.window / 2
    }

    pub fn r(&self) -> usize {
        self.r
    }

    fn lookup(&self, shift: &VertexShift, block: &[usize]) -> Result<usize, SftError> {
        let code = block_code(shift.alphabet.len(), block);
        let hit = match &self.dense {
            Some(flat) => flat.get(code as usize).copied().flatten(),
            None => self.table.get(&code).copied(),
        };
        hit.ok_or_else(|| {
            SftError::Recode(format!("rule undefined on block {:?}", shift.names(block)))
        })
    }

    /// Given `x_{-R} .. x_R`, returns `phi(x)_{-(R-h)} .. phi(x)_{R-h}`.
    fn apply_block(&self, shift: &VertexShift, block: &[usize]) -> Result<Vec<usize>, SftError> {
        let h = self.radius();
        let big_r = block.len() / 2;
        let small = big_r - h;
        (0..2 * small + 1)
            .map(|q| {
                // p = q - small; window x_{-p-h} .. x_{-p+h} starts at index -p-h+R
                let start = big_r + small - q - h;
                self.lookup(shift, &block[start..start + self.window])
            })
            .collect()
    }

    /// `phi` on the periodic point with period word `x`.
    fn apply_periodic(&self, shift: &VertexShift, x: &[usize]) -> Result<Vec<usize>, SftError> {
        let p = x.len() as isize;
        let h = self.radius() as isize;
        let mut win = vec![0; self.window];
        (0..p)
            .map(|i| {
                for (s, slot) in win.iter_mut().enumerate() {
                    *slot = x[(-i - h + s as isize).rem_euclid(p) as usize];
                }
                self.lookup(shift, &win)
            })
            .collect()
    }

    /// Checks that `phi` maps the shift into itself and that `phi^{2r} = id`.
    pub fn verify(&self, shift: &VertexShift, budget: WorkBudget) -> Result<(), SftError> {
        let h = self.radius();
        for block in shift.blocks(2 * h + 2, budget)? {
            let left = self.lookup(shift, &block[1..])?;
            let right = self.lookup(shift, &block[..2 * h + 1])?;
            if !shift.a.get(left, right).is_one() {
                return Err(SftError::Recode(format!(
                    "image leaves the shift on block {:?}",
                    shift.names(&block)
                )));
            }
        }
        for block in shift.blocks(4 * self.r * h + 1, budget)? {
            let mut cur = block.clone();
            for _ in 0..2 * self.r {
                cur = self.apply_block(shift, &cur)?;
            }
            if cur[0] != block[block.len() / 2] {
                return Err(SftError::Recode(format!(
                    "phi^{} is not the identity on block {:?}",
                    2 * self.r,
                    shift.names(&block)
                )));
            }
        }
        Ok(())
    }
}

/// Output of [`one_block_recode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecodedSystem {
    pub system: ReversalSft,
    /// Length `n` of the blocks forming the new alphabet.
    pub block_length: usize,
    /// The block map is centred: it differs from the usual `n`-block code
    /// by `sigma^shift` with `shift = (n - 1) / 2`.
    pub shift: usize,
}

/// Turns `(shift, rule)` into a conjugate reversal SFT in matrix form.
pub fn one_block_recode(
    shift: &VertexShift,
    rule: &LocalReversalRule,
    budget: WorkBudget,
) -> Result<RecodedSystem, SftError> {
    rule.verify(shift, budget)?;
    let r = rule.r;
    let h = rule.radius();
    let reach = (2 * r - 1) * h;
    let n = if h == 0 { 1 } else { 2 * h + 1 };

    let mut tuples: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut tuple_of = |block: &[usize]| -> Result<Vec<usize>, SftError> {
        if let Some(t) = tuples.get(block) {
            return Ok(t.clone());
        }
        let mut cur = block.to_vec();
        let mut t = vec![cur[reach]];
        for _ in 1..2 * r {
            cur = rule.apply_block(shift, &cur)?;
            t.push(cur[cur.len() / 2]);
        }
        tuples.insert(block.to_vec(), t.clone());
        Ok(t)
    };
    let mut glued: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    for xb in shift.blocks(n + 1 + 2 * reach, budget)? {
        let yb = (0..=n)
            .map(|s| tuple_of(&xb[s..s + 2 * reach + 1]))
            .collect::<Result<Vec<_>, _>>()?;
        glued.insert(yb);
    }
    let vertices: Vec<Vec<Vec<usize>>> = glued
        .iter()
        .flat_map(|g| [g[..n].to_vec(), g[1..].to_vec()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&Vec<Vec<usize>>, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let size = vertices.len();
    let mut a = IntMatrix::zeros(size, size);
    for g in &glued {
        a.set(
            index[&g[..n].to_vec()],
            index[&g[1..].to_vec()],
            BigInt::one(),
        );
    }
    let mut tau = Vec::with_capacity(size);
    for u in &vertices {
        let v: Vec<Vec<usize>> = u
            .iter()
            .rev()
            .map(|t| {
                let mut rot = t[1..].to_vec();
                rot.push(t[0]);
                rot
            })
            .collect();
        match index.get(&v) {
            Some(&i) => tau.push(i),
            None => {
                return Err(SftError::Recode(format!(
                    "reversed block {} missing from the recoded alphabet",
                    block_name(shift, &v)
                )))
            }
        }
    }
    let names = vertices.iter().map(|v| block_name(shift, v)).collect();
    let system = ReversalSft::from_tau(names, a, &tau, r)?;
    Ok(RecodedSystem {
        system,
        block_length: n,
        shift: (n - 1) / 2,
    })
}

fn block_name(shift: &VertexShift, block: &[Vec<usize>]) -> String {
    block
        .iter()
        .map(|t| shift.names(t).join("."))
        .collect::<Vec<_>>()
        .join("|")
}

/// Counts `x` with `sigma^m phi^{2l} x = x` directly on the original shift,
/// by enumerating periodic points of period `m * r / gcd(l, r)`.
pub fn fixed_count_original(
    shift: &VertexShift,
    rule: &LocalReversalRule,
    m: usize,
    l: usize,
    budget: WorkBudget,
) -> Result<BigInt, SftError> {
    if m == 0 {
        return Err(SftError::ZeroPeriod(m));
    }
    let r = rule.r;
    let reps = if l.is_multiple_of(r) {
        1
    } else {
        r / l.gcd(&r)
    };
    let period = m * reps;
    let mut meter: Meter = budget.meter("applying the reversal to periodic points");
    let mut count = 0u64;
    let mut failure = None;
    for_each_path(
        &shift.succ,
        period,
        budget,
        "enumerating periodic points",
        |x| {
            if failure.is_some() || !shift.succ[x[period - 1]].contains(&x[0]) {
                return;
            }
            let mut step = || -> Result<bool, SftError> {
                meter.charge((2 * l * period) as u64)?;
                let mut z = x.to_vec();
                for _ in 0..2 * l {
                    z = rule.apply_periodic(shift, &z)?;
                }
                Ok((0..period).all(|i| z[(i + m) % period] == x[i]))
            };
            match step() {
                Ok(true) => count += 1,
                Ok(false) => {}
                Err(err) => failure = Some(err),
            }
        },
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(count.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn budget() -> WorkBudget {
        WorkBudget::default()
    }

    #[test]
    fn one_block_input_is_reproduced() {
        let gm = fixtures::golden_mean();
        let shift = VertexShift::new(gm.alphabet().to_vec(), gm.a().clone()).unwrap();
        let rule = LocalReversalRule::from_fn(&shift, 1, 1, |b| b[0]).unwrap();
        let out = one_block_recode(&shift, &rule, budget()).unwrap();
        assert_eq!(out.block_length, 1);
        assert_eq!(out.shift, 0);
        assert_eq!(out.system.a(), gm.a());
        assert_eq!(out.system.j(), &IntMatrix::identity(2));
        for m in 1..=6 {
            assert_eq!(
                out.system.fixed_count_trace(m, 0).unwrap(),
                gm.fixed_count_trace(m, 0).unwrap()
            );
        }
    }

    #[test]
    fn wide_rule_is_recoded_and_preserves_counts() {
        // phi(x)_i = tau(x_{-i+1}) on the full 2-shift with tau swapping 0 and 1
        let full = fixtures::full_shift(2);
        let shift = VertexShift::new(full.alphabet().to_vec(), full.a().clone()).unwrap();
        let rule = LocalReversalRule::from_fn(&shift, 3, 1, |b| 1 - b[2]).unwrap();
        let out = one_block_recode(&shift, &rule, budget()).unwrap();
        assert_eq!(out.block_length, 3);
        assert_eq!(out.shift, 1);
        for m in 1..=5 {
            assert_eq!(
                out.system.fixed_count_trace(m, 0).unwrap(),
                fixed_count_original(&shift, &rule, m, 0, budget()).unwrap()
            );
        }
        // the flip counts, where the shifted window actually matters
        let fv = out.system.flip_view(1).unwrap();
        for m in 1..=3 {
            let tr = fv.flip_counts_trace(m).unwrap();
            assert_eq!(tr, fv.flip_counts_bruteforce(m, budget()).unwrap());
        }
    }

    #[test]
    fn non_reversals_are_rejected() {
        let full = fixtures::full_shift(2);
        let shift = VertexShift::new(full.alphabet().to_vec(), full.a().clone()).unwrap();
        // x_{-i} xor x_{-i+1} has infinite order
        let rule = LocalReversalRule::from_fn(&shift, 3, 1, |b| b[1] ^ b[2]).unwrap();
        let err = one_block_recode(&shift, &rule, budget()).unwrap_err();
        assert!(
            err.to_string().contains("not the identity on block"),
            "{err}"
        );

        let gm = fixtures::golden_mean();
        let shift = VertexShift::new(gm.alphabet().to_vec(), gm.a().clone()).unwrap();
        // swapping symbols leaves the golden mean shift
        let rule = LocalReversalRule::from_fn(&shift, 1, 1, |b| 1 - b[0]).unwrap();
        let err = one_block_recode(&shift, &rule, budget()).unwrap_err();
        assert!(err.to_string().contains("leaves the shift"), "{err}");

        assert!(LocalReversalRule::from_fn(&shift, 2, 1, |b| b[0]).is_err());
    }

    #[test]
    fn dangling_vertices_are_ignored() {
        // symbol 3 only has an outgoing edge
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        let shift = VertexShift::new(crate::sft::default_alphabet(3), a).unwrap();
        let rule = LocalReversalRule::from_fn(&shift, 1, 1, |b| b[0]).unwrap();
        let out = one_block_recode(&shift, &rule, budget()).unwrap();
        assert_eq!(out.system.len(), 2);
    }
}
