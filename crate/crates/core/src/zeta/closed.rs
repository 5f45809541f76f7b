//! Rational closed forms: ordinary generating functions and Artin-Mazur zeta functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{ZetaError, ZetaFactor, ZetaResult};
use crate::algebra::{
    expand_rational, reciprocal_char_poly, IntMatrix, Polynomial, RationalFunction, TruncatedSeries,
};
use crate::budget::WorkBudget;
use crate::sft::ReversalSft;
use crate::sofic::{SoficError, TheoremC};

/// `sum_{m>=1} tr(A^m P) t^m` with `P = J^{2l}`, recovered from enough
/// terms against the denominator `det(I - tA)`.
fn trace_gf(a: &IntMatrix, j: &IntMatrix, l: usize) -> Result<RationalFunction, ZetaError> {
    let n = a.rows();
    if n == 0 {
        return Ok(RationalFunction::polynomial(Polynomial::zero()));
    }
    let den = reciprocal_char_poly(a)?;
    let p = j.pow(2 * l as u32)?;
    let order = 2 * n + 2;
    let mut coeffs = vec![BigRational::zero()];
    let mut power = IntMatrix::identity(n);
    for _ in 1..=order {
        power = power.mul(a)?;
        coeffs.push(BigRational::from_integer(power.mul(&p)?.trace()?));
    }
    Ok(RationalFunction::from_series(
        &TruncatedSeries::from_coeffs(coeffs),
        &den,
        n,
    )?)
}

/// `sum_{m>=1} f(m, 2l) t^m` in closed form.
pub fn ordinary_gf_rational(sys: &ReversalSft, l: usize) -> Result<RationalFunction, ZetaError> {
    if l >= sys.r() {
        return Err(SoficError::LOutOfRange { l, r: sys.r() }.into());
    }
    trace_gf(sys.a(), sys.j(), l)
}

/// The same generating function from signed subset matrices. A layer of
/// dimension `d` costs `2 d^3` budget units.
pub fn ordinary_gf_rational_sofic(
    tc: &TheoremC,
    l: usize,
    budget: WorkBudget,
) -> Result<RationalFunction, ZetaError> {
    if l >= tc.r() {
        return Err(SoficError::LOutOfRange { l, r: tc.r() }.into());
    }
    let mut meter = budget.meter("recovering layer generating functions");
    let mut acc = RationalFunction::polynomial(Polynomial::zero());
    for layer in tc.layers() {
        let d = layer.index_set.len() as u64;
        meter.charge(2 * d.saturating_pow(3))?;
        let term = trace_gf(&layer.a_k, &layer.j_k, l)?;
        acc = if layer.k % 2 == 1 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// `1 / det(I - tA)`.
pub fn artin_mazur(sys: &ReversalSft, order: usize) -> Result<ZetaResult, ZetaError> {
    let det = if sys.is_empty() {
        Polynomial::one()
    } else {
        reciprocal_char_poly(sys.a())?
    };
    let closed = RationalFunction::new(Polynomial::one(), det.clone())?;
    Ok(ZetaResult {
        series: expand_rational(&closed, order),
        factors: vec![ZetaFactor::Power {
            base: RationalFunction::polynomial(det),
            exponent: BigRational::from_integer(BigInt::from(-1)),
        }],
        provenance: "Artin-Mazur zeta of an SFT".into(),
    })
}

/// `prod_k det(I - t A_k)^((-1)^k)`, kept as separate factors.
pub fn artin_mazur_sofic(
    tc: &TheoremC,
    order: usize,
    budget: WorkBudget,
) -> Result<ZetaResult, ZetaError> {
    let mut series = TruncatedSeries::one(order);
    let mut factors = Vec::new();
    for (det, sign) in tc.zeta_factors(budget)? {
        let base = RationalFunction::polynomial(det.clone());
        let expanded = if sign > 0 {
            expand_rational(&base, order)
        } else {
            expand_rational(&RationalFunction::new(Polynomial::one(), det)?, order)
        };
        series = series.mul(&expanded);
        factors.push(ZetaFactor::Power {
            base,
            exponent: BigRational::from_integer(BigInt::from(sign)),
        });
    }
    Ok(ZetaResult {
        series,
        factors,
        provenance: "Artin-Mazur zeta of a sofic shift".into(),
    })
}

/// The factors of [`artin_mazur_sofic`] multiplied out and reduced.
pub fn artin_mazur_sofic_closed(
    tc: &TheoremC,
    budget: WorkBudget,
) -> Result<RationalFunction, ZetaError> {
    let (mut num, mut den) = (Polynomial::one(), Polynomial::one());
    for (det, sign) in tc.zeta_factors(budget)? {
        if sign > 0 {
            num = num.mul(&det);
        } else {
            den = den.mul(&det);
        }
    }
    Ok(RationalFunction::new(num, den)?)
}
