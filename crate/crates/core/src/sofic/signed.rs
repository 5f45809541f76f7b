//! Signed subset matrices `A_k`, `J_k` and the inclusion-exclusion counts
//! built from them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::chain::LabeledChain;
use super::SoficError;
use crate::algebra::reciprocal_char_poly;
use crate::algebra::{mat_pow_trace, IntMatrix, Polynomial};
use crate::budget::WorkBudget;
use crate::sft::FlipTriple;

/// `A_k`, `J_k` over the index set of `k`-subsets of symbols sharing one
/// label. Signs refer to the symbol order of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSubsetMatrices {
    pub k: usize,
    pub index_set: Vec<Vec<usize>>,
    pub a_k: IntMatrix,
    pub j_k: IntMatrix,
}

fn combinations(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), out);
}

/// Sign of the permutation given as a list of images.
pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fraction-free (Bareiss) determinant.
fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Builds `A_k` and `J_k`. `A_k(S1, S2)` sums the signs of the bijections
/// `S1 -> S2` along which every transition is allowed, which is the minor
/// `det A[S1, S2]`; `J_k(S1, S2) = sgn(tau_J|S1)` when `tau_J(S1) = S2`.
pub fn build_signed_matrices(
    a: &IntMatrix,
    tau_j: &[usize],
    labeling: &[usize],
    k: usize,
) -> Result<SignedSubsetMatrices, SoficError> {
    let n = a.rows();
    if k == 0 || k > n {
        return Err(SoficError::KOutOfRange { k, n });
    }
    let label_count = labeling.iter().max().map_or(0, |&l| l + 1);
    let mut index_set = Vec::new();
    for label in 0..label_count {
        let members: Vec<usize> = (0..n).filter(|&x| labeling[x] == label).collect();
        combinations(&members, k, &mut index_set);
    }
    let position: HashMap<&[usize], usize> = index_set
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let d = index_set.len();
    let small: Vec<Vec<i128>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| if a.get(x, y).is_one() { 1 } else { 0 })
                .collect()
        })
        .collect();
    let mut a_k = IntMatrix::zeros(d, d);
    for (i, s1) in index_set.iter().enumerate() {
        for (j, s2) in index_set.iter().enumerate() {
            // a symbol with no allowed target in S2 forces a zero minor
            if s1.iter().any(|&x| s2.iter().all(|&y| small[x][y] == 0)) {
                continue;
            }
            let minor: Vec<Vec<i128>> = s1
                .iter()
                .map(|&x| s2.iter().map(|&y| small[x][y]).collect())
                .collect();
            let det = determinant(minor);
            if det != 0 {
                a_k.set(i, j, BigInt::from(det));
            }
        }
    }
    let mut j_k = IntMatrix::zeros(d, d);
    for (i, s1) in index_set.iter().enumerate() {
        let images: Vec<usize> = s1.iter().map(|&x| tau_j[x]).collect();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        let Some(&j) = position.get(sorted.as_slice()) else {
            continue;
        };
        let perm: Vec<usize> = images
            .iter()
            .map(|y| sorted.binary_search(y).unwrap())
            .collect();
        j_k.set(i, j, BigInt::from(permutation_sign(&perm)));
    }
    Ok(SignedSubsetMatrices {
        k,
        index_set,
        a_k,
        j_k,
    })
}

/// Signed subset matrices of every layer of a labeled chain, over its essential part.
#[derive(Debug, Clone)]
pub struct TheoremC {
    r: usize,
    layers: Vec<SignedSubsetMatrices>,
}

impl TheoremC {
    pub fn new(chain: &LabeledChain, budget: WorkBudget) -> Result<Self, SoficError> {
        let core = chain.essential()?;
        let mut meter = budget.meter("building signed subset matrices");
        let mut layers = Vec::new();
        for k in 1..=core.len() {
            let layer =
                build_signed_matrices(core.system().a(), core.system().tau(), core.labeling(), k)?;
            if layer.index_set.is_empty() {
                break;
            }
            let d = layer.index_set.len() as u64;
            meter.charge(d * d * k as u64)?;
            layers.push(layer);
        }
        Ok(TheoremC {
            r: chain.r(),
            layers,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn layers(&self) -> &[SignedSubsetMatrices] {
        &self.layers
    }

    fn signed_total(&self, what: String, terms: Vec<BigInt>) -> Result<BigInt, SoficError> {
        let total = terms
            .iter()
            .enumerate()
            .fold(
                BigInt::zero(),
                |acc, (i, t)| if i % 2 == 0 { acc + t } else { acc - t },
            );
        if total.is_negative() {
            return Err(SoficError::NegativeCount { what, total, terms });
        }
        Ok(total)
    }

    /// `f(m, 2l) = sum_k (-1)^(k+1) tr(A_k^m J_k^(2l))`.
    pub fn fixed_count(&self, m: usize, l: usize) -> Result<BigInt, SoficError> {
        if m == 0 {
            return Err(SoficError::ZeroPeriod(m));
        }
        if l >= self.r {
            return Err(SoficError::LOutOfRange { l, r: self.r });
        }
        let terms = self
            .layers
            .iter()
            .map(|s| mat_pow_trace(&s.a_k, &s.j_k, m as u32, 2 * l as u32))
            .collect::<Result<Vec<_>, _>>()?;
        self.signed_total(format!("f({m}, {})", 2 * l), terms)
    }

    /// The per-layer terms `tr(A_k^m J_k^(2l))`, unsigned.
    pub fn fixed_count_terms(&self, m: usize, l: usize) -> Result<Vec<BigInt>, SoficError> {
        Ok(self
            .layers
            .iter()
            .map(|s| mat_pow_trace(&s.a_k, &s.j_k, m as u32, 2 * l as u32))
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Flip counts `(p(2m-1,0), p(2m,0), p(2m,1))` of a chain of order 2,
    /// by the alternating sums of `S[J^d A^(m-1) (AJ)^d]`, `S[J^d A^m J^d]`
    /// and `S[(JA)^d A^(m-1) (AJ)^d]` over the layers (`^d`: diagonal part).
    pub fn flip_counts(&self, m: usize) -> Result<FlipTriple, SoficError> {
        if m == 0 {
            return Err(SoficError::ZeroPeriod(m));
        }
        if self.r != 1 {
            return Err(SoficError::BadFlipPower {
                d: 2 * self.r,
                r: self.r,
            });
        }
        let (mut odd, mut even0, mut even1) = (Vec::new(), Vec::new(), Vec::new());
        for s in &self.layers {
            let (a, j) = (&s.a_k, &s.j_k);
            let jd = j.diagonal_part();
            let ajd = a.mul(j)?.diagonal_part();
            let jad = j.mul(a)?.diagonal_part();
            let am1 = a.pow(m as u32 - 1)?;
            let am = am1.mul(a)?;
            odd.push(jd.mul(&am1)?.mul(&ajd)?.entry_sum());
            even0.push(jd.mul(&am)?.mul(&jd)?.entry_sum());
            even1.push(jad.mul(&am1)?.mul(&ajd)?.entry_sum());
        }
        Ok((
            self.signed_total(format!("p({}, 0)", 2 * m - 1), odd)?,
            self.signed_total(format!("p({}, 0)", 2 * m), even0)?,
            self.signed_total(format!("p({}, 1)", 2 * m), even1)?,
        ))
    }

    /// Factors `det(I - t A_k)` with exponents `(-1)^k`; their product is
    /// the Artin-Mazur zeta function of the image. Each layer of dimension
    /// `d` costs `d^3` budget units.
    pub fn zeta_factors(&self, budget: WorkBudget) -> Result<Vec<(Polynomial, i32)>, SoficError> {
        let mut meter = budget.meter("expanding det(I - tA_k)");
        self.layers
            .iter()
            .map(|s| {
                let d = s.index_set.len() as u64;
                meter.charge(d.saturating_pow(3))?;
                let p = if s.index_set.is_empty() {
                    Polynomial::one()
                } else {
                    reciprocal_char_poly(&s.a_k)?
                };
                Ok((p, if s.k % 2 == 0 { 1 } else { -1 }))
            })
            .collect()
    }
}
