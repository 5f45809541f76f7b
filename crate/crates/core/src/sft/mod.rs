//! Reversal systems of finite type in matrix form.
//!
//! A system is a vertex shift `X_A` with the one-block reversal
//! `phi(x)_i = tau(x_{-i})`, where `tau` is the permutation encoded by the
//! zero-one matrix `J` (`J(a, b) = 1` iff `tau(a) = b`).

mod brute;
mod recode;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{mat_pow_trace, AlgebraError, IntMatrix};
use crate::budget::{BudgetExceeded, WorkBudget};

pub use recode::{
    fixed_count_original, one_block_recode, LocalReversalRule, RecodedSystem, VertexShift,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SftError {
    #[error("reversal order 2r needs r >= 1")]
    ZeroOrder,
    #[error("alphabet has {alphabet} symbols but {matrix} is {rows}x{cols}")]
    Dimensions {
        matrix: char,
        alphabet: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{matrix}({row},{col}) = {value} is not 0 or 1")]
    NotZeroOne {
        matrix: char,
        row: String,
        col: String,
        value: String,
    },
    #[error("J is not a permutation matrix: {0}")]
    NotPermutation(String),
    #[error("J^{order} != I, first differing cell ({row},{col})")]
    OrderViolation {
        order: usize,
        row: String,
        col: String,
    },
    #[error("AJ != JA^T, first differing cell ({row},{col})")]
    ReversalLaw { row: String, col: String },
    #[error("A J^2 != J^2 A at ({row},{col}) although AJ = JA^T holds")]
    Commutation { row: String, col: String },
    #[error("need m >= 1, got {0}")]
    ZeroPeriod(usize),
    #[error("l = {l} outside 0..{r}")]
    LOutOfRange { l: usize, r: usize },
    #[error("flip power {d} must be odd and divide r = {r}")]
    BadFlipPower { d: usize, r: usize },
    #[error("duplicate symbol name {0:?}")]
    DuplicateSymbol(String),
    #[error("recoding: {0}")]
    Recode(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A validated reversal system of finite type of order `2r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalSft {
    alphabet: Vec<String>,
    a: IntMatrix,
    j: IntMatrix,
    r: usize,
    tau: Vec<usize>,
    succ: Vec<Vec<usize>>,
}

/// Symbol names `1..=n`.
pub fn default_alphabet(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Validates `(A, J)` with symbols named `1..=n`.
pub fn validate(a: IntMatrix, j: IntMatrix, r: usize) -> Result<ReversalSft, SftError> {
    let n = a.rows();
    ReversalSft::validate(default_alphabet(n), a, j, r)
}

impl ReversalSft {
    pub fn validate(
        alphabet: Vec<String>,
        a: IntMatrix,
        j: IntMatrix,
        r: usize,
    ) -> Result<Self, SftError> {
        if r == 0 {
            return Err(SftError::ZeroOrder);
        }
        let n = alphabet.len();
        for (name, m) in [('A', &a), ('J', &j)] {
            if m.rows() != n || m.cols() != n {
                return Err(SftError::Dimensions {
                    matrix: name,
                    alphabet: n,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        for (i, s) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(s) {
                return Err(SftError::DuplicateSymbol(s.clone()));
            }
        }
        let sym = |i: usize| alphabet[i].clone();
        for (name, m) in [('A', &a), ('J', &j)] {
            if let Some((row, col)) = m.first_non_zero_one() {
                return Err(SftError::NotZeroOne {
                    matrix: name,
                    row: sym(row),
                    col: sym(col),
                    value: m.get(row, col).to_string(),
                });
            }
        }
        let mut tau = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for (row, slot) in tau.iter_mut().enumerate() {
            let ones: Vec<usize> = (0..n).filter(|&c| j.get(row, c).is_one()).collect();
            if ones.len() != 1 {
                return Err(SftError::NotPermutation(format!(
                    "row {} has {} nonzero entries",
                    sym(row),
                    ones.len()
                )));
            }
            if hit[ones[0]] {
                return Err(SftError::NotPermutation(format!(
                    "column {} is hit by more than one row",
                    sym(ones[0])
                )));
            }
            hit[ones[0]] = true;
            *slot = ones[0];
        }
        let j_order = j.pow(2 * r as u32)?;
        if let Some((row, col)) = j_order.first_difference(&IntMatrix::identity(n)) {
            return Err(SftError::OrderViolation {
                order: 2 * r,
                row: sym(row),
                col: sym(col),
            });
        }
        let aj = a.mul(&j)?;
        let jat = j.mul(&a.transpose())?;
        if let Some((row, col)) = aj.first_difference(&jat) {
            return Err(SftError::ReversalLaw {
                row: sym(row),
                col: sym(col),
            });
        }
        let j2 = j.mul(&j)?;
        if let Some((row, col)) = a.mul(&j2)?.first_difference(&j2.mul(&a)?) {
            return Err(SftError::Commutation {
                row: sym(row),
                col: sym(col),
            });
        }
        let succ = (0..n)
            .map(|x| (0..n).filter(|&y| a.get(x, y).is_one()).collect())
            .collect();
        Ok(ReversalSft {
            alphabet,
            a,
            j,
            r,
            tau,
            succ,
        })
    }

    /// Builds `J` from the permutation `tau` and validates.
    pub fn from_tau(
        alphabet: Vec<String>,
        a: IntMatrix,
        tau: &[usize],
        r: usize,
    ) -> Result<Self, SftError> {
        if tau.len() != alphabet.len() || tau.iter().any(|&t| t >= tau.len()) {
            return Err(SftError::NotPermutation(format!(
                "symbol map {tau:?} on {} symbols",
                alphabet.len()
            )));
        }
        Self::validate(alphabet, a, IntMatrix::permutation(tau), r)
    }

    /// The system on the empty alphabet: no points at all.
    pub fn empty(r: usize) -> Self {
        ReversalSft {
            alphabet: Vec::new(),
            a: IntMatrix::zeros(0, 0),
            j: IntMatrix::zeros(0, 0),
            r: r.max(1),
            tau: Vec::new(),
            succ: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn j(&self) -> &IntMatrix {
        &self.j
    }

    /// Half the reversal order.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        2 * self.r
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub(crate) fn allowed(&self, x: usize, y: usize) -> bool {
        self.a.get(x, y).is_one()
    }

    /// `tau^e` as a symbol map.
    pub fn tau_power(&self, e: usize) -> Vec<usize> {
        permutation_power(&self.tau, e)
    }

    /// Smallest `r'` with `tau^{2r'} = id`.
    pub fn minimal_half_order(&self) -> usize {
        (1..=self.r)
            .find(|&k| {
                self.tau_power(2 * k)
                    .iter()
                    .enumerate()
                    .all(|(i, &t)| i == t)
            })
            .unwrap_or(self.r)
    }

    /// `A(a, b) = A(tau(b), tau(a))` for every pair of symbols.
    pub fn satisfies_symmetry(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| self.a.get(x, y) == self.a.get(self.tau[y], self.tau[x])))
    }

    /// `f(m, 2l) = tr(A^m J^{2l})`.
    pub fn fixed_count_trace(&self, m: usize, l: usize) -> Result<BigInt, SftError> {
        self.check_ml(m, l)?;
        if self.is_empty() {
            return Ok(BigInt::zero());
        }
        Ok(mat_pow_trace(&self.a, &self.j, m as u32, 2 * l as u32)?)
    }

    /// Counts `x` with `sigma^m phi^{2l} x = x` by enumerating windows.
    pub fn fixed_count_bruteforce(
        &self,
        m: usize,
        l: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SftError> {
        self.check_ml(m, l)?;
        Ok(brute::fixed_count(self, m, l, budget)?.into())
    }

    /// Counts `x` with `sigma^m x = x` and `sigma^n phi^d x = x` (`d` odd).
    pub fn flip_count_bruteforce(
        &self,
        d: usize,
        m: usize,
        n: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SftError> {
        if m == 0 {
            return Err(SftError::ZeroPeriod(m));
        }
        if d.is_multiple_of(2) {
            return Err(SftError::BadFlipPower { d, r: self.r });
        }
        let flip = self.tau_power(d);
        Ok(brute::flip_count(&self.succ, &flip, m, n, budget)?.into())
    }

    fn check_ml(&self, m: usize, l: usize) -> Result<(), SftError> {
        if m == 0 {
            return Err(SftError::ZeroPeriod(m));
        }
        if l >= self.r {
            return Err(SftError::LOutOfRange { l, r: self.r });
        }
        Ok(())
    }

    /// `X_{2l}`: the subsystem on symbols fixed by `tau^{2l}`, as a reversal
    /// system of order `2l` (its `tau` may have smaller order; see
    /// [`ReversalSft::minimal_half_order`]). `l >= r` returns the whole system.
    pub fn restrict_fixed_subsystem(&self, l: usize) -> ReversalSft {
        let l = l.max(1);
        if l >= self.r {
            return self.clone();
        }
        let t = self.tau_power(2 * l);
        let keep: Vec<usize> = (0..self.len()).filter(|&i| t[i] == i).collect();
        if keep.is_empty() {
            return ReversalSft::empty(l);
        }
        let alphabet = keep.iter().map(|&i| self.alphabet[i].clone()).collect();
        let a = self.a.submatrix(&keep);
        let j = self.j.submatrix(&keep);
        // restricting to a tau-invariant set keeps every identity intact
        ReversalSft::validate(alphabet, a, j, l).expect("restriction of a valid system")
    }

    /// The sub-flip `(X_{2d}, sigma, phi^d)` for odd `d`.
    pub fn flip_view(&self, d: usize) -> Result<FlipView, SftError> {
        if d.is_multiple_of(2) || !self.r.is_multiple_of(d) {
            return Err(SftError::BadFlipPower { d, r: self.r });
        }
        let base = self.restrict_fixed_subsystem(d);
        let full = self.tau_power(d);
        let flip: Vec<usize> = base
            .alphabet
            .iter()
            .map(|name| {
                let i = self.alphabet.iter().position(|s| s == name).unwrap();
                let target = &self.alphabet[full[i]];
                base.alphabet.iter().position(|s| s == target).unwrap()
            })
            .collect();
        Ok(FlipView::new(base, flip, d))
    }
}

pub(crate) fn permutation_power(p: &[usize], e: usize) -> Vec<usize> {
    (0..p.len())
        .map(|mut x| {
            // orbit length bounds the work
            let mut orbit = vec![x];
            let mut y = p[x];
            while y != x {
                orbit.push(y);
                y = p[y];
            }
            x = orbit[e % orbit.len()];
            x
        })
        .collect()
}

pub(crate) fn permutation_inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (a, &b) in p.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// Counts for the flip `(X_{2d}, sigma, phi^d)` on the restricted alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipView {
    base: ReversalSft,
    flip: Vec<usize>,
    flip_matrix: IntMatrix,
    d: usize,
}

/// `(p(2m-1, 0), p(2m, 0), p(2m, 1))`.
pub type FlipTriple = (BigInt, BigInt, BigInt);

impl FlipView {
    fn new(base: ReversalSft, flip: Vec<usize>, d: usize) -> Self {
        debug_assert!(flip.iter().enumerate().all(|(i, &f)| flip[f] == i));
        let flip_matrix = IntMatrix::permutation(&flip);
        FlipView {
            base,
            flip,
            flip_matrix,
            d,
        }
    }

    pub fn base(&self) -> &ReversalSft {
        &self.base
    }

    /// The symbol map of the flip, an involution on the base alphabet.
    pub fn flip_symbol_map(&self) -> &[usize] {
        &self.flip
    }

    pub fn power(&self) -> usize {
        self.d
    }

    /// Trace formulas with `J` the flip permutation matrix:
    /// `S[J^d A^(m-1) (AJ)^d]`, `S[J^d A^m J^d]`, `S[(JA)^d A^(m-1) (AJ)^d]`
    /// where `^d` keeps the diagonal.
    pub fn flip_counts_trace(&self, m: usize) -> Result<FlipTriple, SftError> {
        if m == 0 {
            return Err(SftError::ZeroPeriod(m));
        }
        if self.base.is_empty() {
            return Ok((BigInt::zero(), BigInt::zero(), BigInt::zero()));
        }
        let a = self.base.a();
        let j = &self.flip_matrix;
        let jd = j.diagonal_part();
        let ajd = a.mul(j)?.diagonal_part();
        let jad = j.mul(a)?.diagonal_part();
        let am1 = a.pow(m as u32 - 1)?;
        let am = am1.mul(a)?;
        let odd = jd.mul(&am1)?.mul(&ajd)?.entry_sum();
        let even0 = jd.mul(&am)?.mul(&jd)?.entry_sum();
        let even1 = jad.mul(&am1)?.mul(&ajd)?.entry_sum();
        Ok((odd, even0, even1))
    }

    /// `p(m, n)`: points with `sigma^m x = x` and `sigma^n F x = x`.
    pub fn flip_count_bruteforce(
        &self,
        m: usize,
        n: usize,
        budget: WorkBudget,
    ) -> Result<BigInt, SftError> {
        if m == 0 {
            return Err(SftError::ZeroPeriod(m));
        }
        Ok(brute::flip_count(&self.base.succ, &self.flip, m, n, budget)?.into())
    }

    pub fn flip_counts_bruteforce(
        &self,
        m: usize,
        budget: WorkBudget,
    ) -> Result<FlipTriple, SftError> {
        Ok((
            self.flip_count_bruteforce(2 * m - 1, 0, budget)?,
            self.flip_count_bruteforce(2 * m, 0, budget)?,
            self.flip_count_bruteforce(2 * m, 1, budget)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn budget() -> WorkBudget {
        WorkBudget::default()
    }

    #[test]
    fn example_system_validates() {
        let sys = fixtures::paper_example_6();
        assert_eq!(sys.order(), 6);
        assert!(sys.satisfies_symmetry());
        assert_eq!(sys.a().entry_sum(), BigInt::from(19));
        assert_eq!(sys.a().trace().unwrap(), BigInt::from(1));
    }

    #[test]
    fn identity_flip_needs_symmetric_a() {
        let sym = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert!(validate(sym, IntMatrix::identity(2), 4).is_ok());
        let asym = IntMatrix::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(
            validate(asym, IntMatrix::identity(2), 1),
            Err(SftError::ReversalLaw { .. })
        ));
    }

    #[test]
    fn distinct_validation_errors() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let repeated = IntMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        let err = validate(a.clone(), repeated, 1).unwrap_err();
        assert!(err.to_string().contains("not a permutation"), "{err}");

        let two = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let err = validate(two, IntMatrix::identity(2), 1).unwrap_err();
        assert_eq!(
            err,
            SftError::NotZeroOne {
                matrix: 'A',
                row: "1".into(),
                col: "1".into(),
                value: "2".into()
            }
        );

        // a 3-cycle has order 3, so J^2 != I
        let full = IntMatrix::from_rows(&vec![vec![1; 3]; 3]).unwrap();
        let cycle = IntMatrix::permutation(&[1, 2, 0]);
        assert!(matches!(
            validate(full, cycle, 1),
            Err(SftError::OrderViolation { order: 2, .. })
        ));

        let wide = IntMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert!(matches!(
            validate(wide, IntMatrix::identity(2), 1),
            Err(SftError::Dimensions { .. })
        ));
    }

    #[test]
    fn example_traces() {
        let sys = fixtures::paper_example_6();
        assert_eq!(sys.fixed_count_trace(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(sys.fixed_count_trace(1, 0).unwrap(), BigInt::from(1));
        // tr(A^m J^2) = tr(A^m J^4) = tr(A^m): 1, 13, 37, 121, ...
        let tr = [1, 13, 37, 121, 421, 1369, 4621, 15361];
        for (m, &t) in (1..).zip(&tr) {
            for l in 0..3 {
                assert_eq!(
                    sys.fixed_count_trace(m, l).unwrap(),
                    BigInt::from(t),
                    "m={m} l={l}"
                );
            }
        }
        assert!(matches!(
            sys.fixed_count_trace(1, 3),
            Err(SftError::LOutOfRange { l: 3, r: 3 })
        ));
    }

    #[test]
    fn example_brute_force_agrees() {
        let sys = fixtures::paper_example_6();
        for m in 1..=8 {
            for l in 0..3 {
                assert_eq!(
                    sys.fixed_count_bruteforce(m, l, budget()).unwrap(),
                    sys.fixed_count_trace(m, l).unwrap(),
                    "m={m} l={l}"
                );
            }
        }
    }

    #[test]
    fn full_shift_and_single_loop() {
        let full = fixtures::full_shift(2);
        assert_eq!(full.fixed_count_trace(3, 0).unwrap(), BigInt::from(8));
        assert_eq!(
            full.fixed_count_bruteforce(3, 0, budget()).unwrap(),
            BigInt::from(8)
        );
        let x2 = fixtures::paper_example_6().restrict_fixed_subsystem(1);
        for m in 1..6 {
            assert_eq!(
                x2.fixed_count_bruteforce(m, 0, budget()).unwrap(),
                BigInt::from(1)
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = fixtures::full_shift(2);
        let err = sys
            .fixed_count_bruteforce(20, 0, WorkBudget::new(1000))
            .unwrap_err();
        assert!(matches!(err, SftError::Budget(_)));
    }

    #[test]
    fn restrictions() {
        let sys = fixtures::paper_example_6();
        let x2 = sys.restrict_fixed_subsystem(1);
        assert_eq!(x2.alphabet(), ["7"]);
        assert_eq!(x2.r(), 1);
        assert_eq!(sys.restrict_fixed_subsystem(3), sys);
        assert_eq!(x2.restrict_fixed_subsystem(1), x2);
        let empty = fixtures::full_shift_with_tau(&[1, 2, 3, 0], 2).restrict_fixed_subsystem(1);
        assert!(empty.is_empty());
        assert_eq!(empty.fixed_count_trace(3, 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn order_twelve_subsystems() {
        // tau with cycles of length 1, 2, 3, 4, 6 (12 divides 2r = 12)
        let lens = [1, 2, 3, 4, 6];
        let mut tau = Vec::new();
        let mut start = 0;
        for len in lens {
            for i in 0..len {
                tau.push(start + (i + 1) % len);
            }
            start += len;
        }
        let n = tau.len();
        let sys = fixtures::full_shift_with_tau(&tau, 6);
        assert_eq!(sys.len(), n);
        let sizes: Vec<usize> = [2, 3, 6]
            .iter()
            .map(|&k| sys.restrict_fixed_subsystem(k).len())
            .collect();
        // fixed by tau^4: cycles 1, 2, 4; by tau^6: 1, 2, 3, 6; by tau^12: all
        assert_eq!(sizes, [7, 12, n]);
        let flips: Vec<usize> = [1, 3]
            .iter()
            .map(|&d| sys.flip_view(d).unwrap().base().len())
            .collect();
        // fixed by tau^2: cycles 1, 2; by tau^6: 1, 2, 3, 6
        assert_eq!(flips, [3, 12]);
    }

    #[test]
    fn example_sub_flip_counts() {
        let sys = fixtures::paper_example_6();
        let fv = sys.flip_view(3).unwrap();
        let expected = [(1, 1, 1), (1, 7, 1), (7, 19, 7)];
        for (m, &(p0, p1, p2)) in (1..).zip(&expected) {
            let tr = fv.flip_counts_trace(m).unwrap();
            assert_eq!(tr, (p0.into(), p1.into(), p2.into()), "m={m}");
            assert_eq!(fv.flip_counts_bruteforce(m, budget()).unwrap(), tr);
        }
        let x2 = sys.flip_view(1).unwrap();
        for m in 1..5 {
            let one = BigInt::one();
            assert_eq!(
                x2.flip_counts_trace(m).unwrap(),
                (one.clone(), one.clone(), one)
            );
        }
    }

    #[test]
    fn golden_mean_flip_fixed_points() {
        let gm = fixtures::golden_mean();
        let fv = gm.flip_view(1).unwrap();
        assert_eq!(fv.flip_counts_trace(1).unwrap().0, BigInt::one());
        for m in 1..=4 {
            assert_eq!(
                fv.flip_counts_trace(m).unwrap(),
                fv.flip_counts_bruteforce(m, budget()).unwrap()
            );
        }
    }

    #[test]
    fn flip_power_must_be_odd_divisor() {
        let sys = fixtures::paper_example_6();
        assert!(sys.flip_view(2).is_err());
        assert!(sys.flip_view(5).is_err());
    }
}
