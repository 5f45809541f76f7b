//! Exact integer and rational arithmetic.
//!
//! Everything here is exact: matrices carry arbitrary-precision integers,
//! series carry reduced rationals, and the characteristic polynomial is
//! computed without division. There is no floating point anywhere in the
//! crate, and truncation order is always an explicit argument.

mod matrix;
mod poly;
mod rational_fn;
mod series;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use matrix::IntMatrix;
pub use poly::Polynomial;
pub use rational_fn::RationalFunction;
pub use series::TruncatedSeries;

/// Matrix shape, printed as `rows x cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape(pub usize, pub usize);

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{len} entries do not fill a {shape} matrix")]
    EntryCount { shape: Shape, len: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {left} against {right}")]
    DimensionMismatch { left: Shape, right: Shape },
    #[error("matrix is {0}, expected square")]
    NotSquare(Shape),
    #[error("{op} requires constant term {expected}, found coefficient c_0 = {found}")]
    ConstantTerm {
        op: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("denominator polynomial has zero constant term")]
    SingularDenominator,
    #[error("series is not P/Q with the given denominator: coefficient {index} of Q*s is {value}")]
    NotRational { index: usize, value: String },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

/// Renders a rational as `p/q` with `q > 0` and `gcd(p, q) = 1`.
pub fn format_rational(value: &BigRational) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::ParseRational(text.to_string());
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// `tr(A^m J^e)` for square matrices of equal dimension.
///
/// `m = e = 0` gives the dimension.
pub fn mat_pow_trace(a: &IntMatrix, j: &IntMatrix, m: u32, e: u32) -> Result<BigInt, AlgebraError> {
    a.require_square()?;
    j.require_square()?;
    if a.shape() != j.shape() {
        return Err(AlgebraError::DimensionMismatch {
            left: a.shape(),
            right: j.shape(),
        });
    }
    let am = a.pow(m)?;
    let je = j.pow(e)?;
    let n = a.rows();
    let mut trace = BigInt::zero();
    for i in 0..n {
        for k in 0..n {
            let x = am.get(i, k);
            if x.is_zero() {
                continue;
            }
            let y = je.get(k, i);
            if !y.is_zero() {
                trace += x * y;
            }
        }
    }
    Ok(trace)
}

/// `det(I - tA)` by Berkowitz's division-free algorithm.
///
/// The result has constant term 1 and degree at most `dim(A)`.
pub fn reciprocal_char_poly(a: &IntMatrix) -> Result<Polynomial, AlgebraError> {
    a.require_square()?;
    let n = a.rows();
    if n == 0 {
        return Ok(Polynomial::one());
    }
    // `vect` holds det(xI - A_r) for the leading r x r block, highest degree
    // first; reading it lowest-first gives det(I - tA_r).
    let mut vect: Vec<BigInt> = vec![BigInt::one(), -a.get(0, 0).clone()];
    for r in 1..n {
        let row: Vec<BigInt> = (0..r).map(|c| a.get(r, c).clone()).collect();
        let mut col: Vec<BigInt> = (0..r).map(|i| a.get(i, r).clone()).collect();
        // Toeplitz column: 1, -a_rr, -R C, -R A_r C, ..., -R A_r^{r-1} C
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-a.get(r, r).clone());
        for step in 0..r {
            let dot: BigInt = row.iter().zip(&col).map(|(x, y)| x * y).sum();
            toeplitz.push(-dot);
            if step + 1 < r {
                col = (0..r)
                    .map(|i| (0..r).map(|k| a.get(i, k) * &col[k]).sum())
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (jdx, v) in vect.iter().enumerate() {
                if i >= jdx {
                    *slot += &toeplitz[i - jdx] * v;
                }
            }
        }
        vect = next;
    }
    Ok(Polynomial::new(vect))
}

/// Returns `(M^△, S[M])`: the diagonal part of `M` and the sum of its entries.
pub fn diag_and_entry_sum(m: &IntMatrix) -> Result<(IntMatrix, BigInt), AlgebraError> {
    m.require_square()?;
    Ok((m.diagonal_part(), m.entry_sum()))
}

/// Power-series coefficients `c_0..c_N` of `f` at `t = 0`.
pub fn expand_rational(f: &RationalFunction, order: usize) -> TruncatedSeries {
    let den = f.denominator();
    let num = f.numerator();
    let d0 = BigRational::from_integer(den.coeff(0));
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = BigRational::from_integer(num.coeff(n));
        for k in 1..=n.min(den.len().saturating_sub(1)) {
            let dk = den.coeff(k);
            if !dk.is_zero() {
                acc -= &coeffs[n - k] * BigRational::from_integer(dk);
            }
        }
        coeffs.push(acc / &d0);
    }
    TruncatedSeries::from_coeffs(coeffs)
}
