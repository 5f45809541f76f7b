use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, AlgebraError, Polynomial, TruncatedSeries};

/// `P(t) / Q(t)` with `Q(0) != 0`, kept in lowest terms.
///
/// Canonical form: no common polynomial factor, integer coefficients with
/// joint content 1, and `Q(0) > 0`. Two canonical rational functions are equal
/// iff they are equal as functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.coeff(0).is_zero() {
            return Err(AlgebraError::SingularDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::canonical(p, Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::canonical(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// `f(t^k)`.
    pub fn substitute_power(&self, k: usize) -> RationalFunction {
        Self::canonical(self.num.substitute_power(k), self.den.substitute_power(k))
    }

    /// Recovers `P/Q` from a series whose coefficients obey the recurrence of
    /// a known denominator `Q`.
    ///
    /// `P` is read off as `Q * s` up to `num_degree`; every coefficient of `Q * s`
    /// above that (up to the series order) must vanish, or the reconstruction is
    /// rejected. The caller is responsible for supplying enough terms.
    pub fn from_series(
        series: &TruncatedSeries,
        den: &Polynomial,
        num_degree: usize,
    ) -> Result<RationalFunction, AlgebraError> {
        if den.coeff(0).is_zero() {
            return Err(AlgebraError::SingularDenominator);
        }
        let order = series.order();
        let mut product = vec![BigRational::zero(); order + 1];
        for (n, slot) in product.iter_mut().enumerate() {
            for k in 0..=n.min(den.len().saturating_sub(1)) {
                let q = den.coeff(k);
                if !q.is_zero() {
                    *slot += series.coeff(n - k) * BigRational::from_integer(q);
                }
            }
        }
        if let Some((index, value)) = product
            .iter()
            .enumerate()
            .skip(num_degree + 1)
            .find(|(_, v)| !v.is_zero())
        {
            return Err(AlgebraError::NotRational {
                index,
                value: format_rational(value),
            });
        }
        product.truncate(num_degree + 1);
        let scale = product.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = to_z(&product, &scale);
        Ok(Self::canonical(num, den.scale(&scale)))
    }

    fn canonical(num: Polynomial, den: Polynomial) -> RationalFunction {
        debug_assert!(!den.coeff(0).is_zero());
        if num.is_zero() {
            return RationalFunction {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            };
        }
        let g = rational_gcd(&num, &den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            let nq = exact_quotient(&num, &g);
            let dq = exact_quotient(&den, &g);
            let scale = nq
                .iter()
                .chain(&dq)
                .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            (to_z(&nq, &scale), to_z(&dq, &scale))
        } else {
            (num, den)
        };
        let content = num.content().gcd(&den.content());
        if !content.is_one() {
            num = num.div_exact(&content);
            den = den.div_exact(&content);
        }
        if den.coeff(0).is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

type QPoly = Vec<BigRational>;

fn to_q(p: &Polynomial) -> QPoly {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn trim_q(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Remainder of `a` by `b` over Q; `b` nonzero.
fn rem_q(mut a: QPoly, b: &QPoly) -> QPoly {
    let lead = b.last().expect("nonzero divisor").clone();
    while a.len() >= b.len() {
        let factor = a.last().unwrap() / &lead;
        let shift = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            a[shift + i] -= &factor * c;
        }
        a.pop();
        trim_q(&mut a);
    }
    a
}

/// Primitive integer gcd of two integer polynomials (Euclid over Q).
fn rational_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut x = to_q(a);
    let mut y = to_q(b);
    trim_q(&mut x);
    trim_q(&mut y);
    while !y.is_empty() {
        let r = rem_q(x, &y);
        x = y;
        y = r;
    }
    let scale = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = to_z(&x, &scale);
    let content = ints.content();
    if content.is_zero() {
        return Polynomial::one();
    }
    ints.div_exact(&content)
}

fn to_z(p: &QPoly, scale: &BigInt) -> Polynomial {
    Polynomial::new(
        p.iter()
            .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
            .collect(),
    )
}

/// `a / g` over Q, where `g` divides `a`.
fn exact_quotient(a: &Polynomial, g: &Polynomial) -> QPoly {
    let mut rem = to_q(a);
    let gq = to_q(g);
    let lead = gq.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - gq.len() + 1];
    while rem.len() >= gq.len() {
        let factor = rem.last().unwrap() / &lead;
        let shift = rem.len() - gq.len();
        for (i, c) in gq.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        trim_q(&mut rem);
    }
    debug_assert!(rem.is_empty());
    quot
}
