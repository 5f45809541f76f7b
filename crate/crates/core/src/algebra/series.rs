use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, AlgebraError};

/// Power series `c_0 + c_1 t + ... + c_N t^N` with exact rational coefficients.
///
/// Products, exponentials and friends are all truncated at the smaller order
/// of their operands.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Takes `N + 1` coefficients. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_integers<T: Clone + Into<BigInt>>(coeffs: &[T]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .cloned()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn set_coeff(&mut self, i: usize, value: BigRational) {
        self.coeffs[i] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Self {
        let n = self.order().min(other.order());
        Self::from_coeffs(
            (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        )
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Self {
        let n = self.order().min(other.order());
        Self::from_coeffs(
            (0..=n)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// `s(t^k)` truncated at `order`.
    pub fn substitute_power(&self, k: usize, order: usize) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(k) {
                Some(p) if p <= order => out.coeffs[p] = c.clone(),
                _ => break,
            }
        }
        out
    }

    /// Multiplicative inverse; needs `c_0 != 0`.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.coeffs[0].is_zero() {
            return Err(self.constant_term_error("inverse", "nonzero"));
        }
        let c0_inv = self.coeffs[0].recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(c0_inv.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &c0_inv);
        }
        Ok(Self::from_coeffs(out))
    }

    /// `exp(s)`; needs `c_0 = 0`. Uses `n g_n = sum_k k s_k g_{n-k}`.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_zero() {
            return Err(self.constant_term_error("exp", "0"));
        }
        let mut g: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        g.push(BigRational::one());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &g[n - k] * BigRational::from_integer(k.into());
                }
            }
            g.push(acc / BigRational::from_integer(n.into()));
        }
        Ok(Self::from_coeffs(g))
    }

    /// `log(s)`; needs `c_0 = 1`. Uses `n f_n = n s_n - sum_{k<n} k f_k s_{n-k}`.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_one() {
            return Err(self.constant_term_error("log", "1"));
        }
        let mut f: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        f.push(BigRational::zero());
        for n in 1..self.coeffs.len() {
            let nn = BigRational::from_integer(n.into());
            let mut acc = &self.coeffs[n] * &nn;
            for k in 1..n {
                if !f[k].is_zero() {
                    acc -= &f[k] * &self.coeffs[n - k] * BigRational::from_integer(k.into());
                }
            }
            f.push(acc / nn);
        }
        Ok(Self::from_coeffs(f))
    }

    /// Square root with `c_0 = 1`; needs `c_0 = 1` on the input.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_one() {
            return Err(self.constant_term_error("sqrt", "1"));
        }
        let two = BigRational::from_integer(2.into());
        let mut g: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        g.push(BigRational::one());
        for n in 1..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc -= &g[k] * &g[n - k];
            }
            g.push(acc / &two);
        }
        Ok(Self::from_coeffs(g))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    fn constant_term_error(&self, op: &'static str, expected: &'static str) -> AlgebraError {
        AlgebraError::ConstantTerm {
            op,
            expected,
            found: format_rational(&self.coeffs[0]),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] + O(t^{})",
            self.to_strings().join(", "),
            self.order() + 1
        )
    }
}
