//! Generating functions, Artin-Mazur zeta functions, flip zeta functions and
//! Lind zeta functions of reversal systems.

mod closed;
mod providers;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    expand_rational, format_rational, AlgebraError, RationalFunction, TruncatedSeries,
};
use crate::budget::BudgetExceeded;
use crate::group::{enumerate_subgroups, Family, SubgroupDescriptor};
use crate::sft::SftError;
use crate::sofic::SoficError;

pub use closed::{
    artin_mazur, artin_mazur_sofic, artin_mazur_sofic_closed, ordinary_gf_rational,
    ordinary_gf_rational_sofic,
};
pub use providers::{
    CountProvider, FixedPointOracle, SftBruteForce, SftTrace, SoficBruteForce, SoficTheoremC,
};

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Sofic(#[from] SoficError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("k = {k} does not give a subsystem of a system of order 2*{r}")]
    BadSubsystem { k: usize, r: usize },
    #[error("flip zeta functions need a system of order 2, got order 2*{r}")]
    NotFlip { r: usize },
}

/// Whether `g` carries the `1/m` weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Log,
    Ordinary,
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log" => Ok(Convention::Log),
            "ordinary" => Ok(Convention::Ordinary),
            other => Err(format!(
                "unknown convention '{other}' (expected log or ordinary)"
            )),
        }
    }
}

/// One multiplicative piece of a zeta function.
#[derive(Debug, Clone, PartialEq)]
pub enum ZetaFactor {
    /// `base^exponent`; `base` has constant term 1.
    Power {
        base: RationalFunction,
        exponent: BigRational,
    },
    /// `exp(argument)`.
    Exp {
        label: String,
        argument: TruncatedSeries,
    },
}

impl ZetaFactor {
    pub fn expand(&self, order: usize) -> Result<TruncatedSeries, ZetaError> {
        match self {
            ZetaFactor::Power { base, exponent } => {
                let b = expand_rational(base, order);
                Ok(b.log()?.scale(exponent).exp()?)
            }
            ZetaFactor::Exp { argument, .. } => Ok(argument.truncate(order).exp()?),
        }
    }
}

impl fmt::Display for ZetaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaFactor::Power { base, exponent } => {
                write!(f, "({base})^({})", format_rational(exponent))
            }
            ZetaFactor::Exp { label, .. } => write!(f, "exp({label})"),
        }
    }
}

/// A truncated zeta function with its factor decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaResult {
    pub series: TruncatedSeries,
    pub factors: Vec<ZetaFactor>,
    pub provenance: String,
}

impl ZetaResult {
    /// Expands the product of the factors to the series order.
    pub fn expand_factors(&self) -> Result<TruncatedSeries, ZetaError> {
        let order = self.series.order();
        let mut acc = TruncatedSeries::one(order);
        for factor in &self.factors {
            acc = acc.mul(&factor.expand(order)?);
        }
        Ok(acc)
    }

    pub fn factors_match(&self) -> Result<bool, ZetaError> {
        Ok(self.expand_factors()? == self.series)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Factor {
            kind: &'static str,
            text: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            exponent: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            argument: Option<Vec<String>>,
        }
        let factors: Vec<Factor> = self
            .factors
            .iter()
            .map(|f| match f {
                ZetaFactor::Power { base, exponent } => Factor {
                    kind: "power",
                    text: base.to_string(),
                    exponent: Some(format_rational(exponent)),
                    argument: None,
                },
                ZetaFactor::Exp { label, argument } => Factor {
                    kind: "exp",
                    text: label.clone(),
                    exponent: None,
                    argument: Some(argument.to_strings()),
                },
            })
            .collect();
        serde_json::json!({
            "provenance": self.provenance,
            "factors": factors,
            "coefficients": self.series.to_strings(),
        })
    }
}

fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `g_{2k}` of the subsystem `X_{2k}`: coefficient of `t^m` is
/// `sum_{l<k} f(m, 2l)`, divided by `m` under [`Convention::Log`].
pub fn generating_g(
    cp: &dyn CountProvider,
    k: usize,
    order: usize,
    convention: Convention,
) -> Result<TruncatedSeries, ZetaError> {
    let mut s = TruncatedSeries::zero(order);
    for m in 1..=order {
        let mut total = BigInt::zero();
        for l in 0..k {
            total += cp.automorphism_count(k, m, l)?;
        }
        let c = match convention {
            Convention::Log => BigRational::new(total, BigInt::from(m)),
            Convention::Ordinary => rational(total),
        };
        s.set_coeff(m, c);
    }
    Ok(s)
}

/// `h_{2d}` of the sub-flip `(X_{2d}, sigma, phi^d)`: `p(2m-1, 0)` on odd
/// powers and `(p(2m, 0) + p(2m, 1)) / 2` on even ones.
pub fn generating_h(
    cp: &dyn CountProvider,
    d: usize,
    order: usize,
) -> Result<TruncatedSeries, ZetaError> {
    let mut s = TruncatedSeries::zero(order);
    for m in 1..=order.div_ceil(2) {
        let (odd, even0, even1) = cp.flip_triple(d, m)?;
        s.set_coeff(2 * m - 1, rational(odd));
        if 2 * m <= order {
            s.set_coeff(2 * m, BigRational::new(even0 + even1, BigInt::from(2)));
        }
    }
    Ok(s)
}

/// Product decomposition of the Lind zeta function:
/// `prod_{k|r} exp(g_{2k}(t^{2k}) / 2k) * prod_{d|r, d odd} exp(h_{2d}(t^d) / d)`.
pub fn lind_zeta_product(cp: &dyn CountProvider, order: usize) -> Result<ZetaResult, ZetaError> {
    let r = cp.half_order();
    let mut factors = Vec::new();
    let mut exponent = TruncatedSeries::zero(order);
    for k in (1..=r).filter(|k| r.is_multiple_of(*k)) {
        let inner = order / (2 * k);
        let g = generating_g(cp, k, inner, Convention::Log)?;
        let arg = g
            .substitute_power(2 * k, order)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(2 * k)));
        exponent = exponent.add(&arg);
        factors.push(ZetaFactor::Exp {
            label: format!("g_{}(t^{})/{}", 2 * k, 2 * k, 2 * k),
            argument: arg,
        });
    }
    for d in (1..=r).filter(|d| r.is_multiple_of(*d) && d % 2 == 1) {
        let inner = order / d;
        let h = generating_h(cp, d, inner)?;
        let arg = h
            .substitute_power(d, order)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(d)));
        exponent = exponent.add(&arg);
        factors.push(ZetaFactor::Exp {
            label: format!("h_{}(t^{})/{}", 2 * d, d, d),
            argument: arg,
        });
    }
    Ok(ZetaResult {
        series: exponent.exp()?,
        factors,
        provenance: format!("product over subsystems ({})", cp.backend()),
    })
}

/// `f(H) / [G : H]` for one subgroup, as used by [`lind_zeta_direct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupTerm {
    pub subgroup: SubgroupDescriptor,
    pub index: usize,
    pub fixed_points: BigInt,
}

/// Fixed-point counts of every subgroup of index at most `order`.
pub fn subgroup_terms(
    oracle: &dyn FixedPointOracle,
    order: usize,
) -> Result<Vec<SubgroupTerm>, ZetaError> {
    let r = oracle.half_order();
    let mut memo: BTreeMap<(u8, usize, usize, usize), BigInt> = BTreeMap::new();
    let mut out = Vec::new();
    for (subgroup, index) in enumerate_subgroups(r, order) {
        let key = match subgroup.family() {
            Family::F1 { m, l, k } => (1, k, m, l),
            Family::F2 { m, j, k } => (2, 2 * k - 1, m, j),
        };
        let fixed_points = match memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let (fam, a, m, b) = key;
                let v = if fam == 1 {
                    oracle.automorphism_count(a, m, b)?
                } else {
                    oracle.flip_count(a, m, b)?
                };
                memo.insert(key, v.clone());
                v
            }
        };
        out.push(SubgroupTerm {
            subgroup,
            index,
            fixed_points,
        });
    }
    Ok(out)
}

/// `exp(sum_H f(H) / [G : H] t^[G : H])` over subgroups of index at most `order`.
pub fn lind_zeta_direct(
    oracle: &dyn FixedPointOracle,
    order: usize,
) -> Result<TruncatedSeries, ZetaError> {
    let mut s = TruncatedSeries::zero(order);
    for term in subgroup_terms(oracle, order)? {
        let c = s.coeff(term.index) + BigRational::new(term.fixed_points, BigInt::from(term.index));
        s.set_coeff(term.index, c);
    }
    Ok(s.exp()?)
}

/// `sqrt(zeta_T(t^2)) exp(h(t))` for a system of order 2.
pub fn flip_zeta(cp: &dyn CountProvider, order: usize) -> Result<ZetaResult, ZetaError> {
    if cp.half_order() != 1 {
        return Err(ZetaError::NotFlip { r: cp.half_order() });
    }
    let g = generating_g(cp, 1, order / 2, Convention::Log)?.substitute_power(2, order);
    let h = generating_h(cp, 1, order)?;
    let series = g.exp()?.sqrt()?.mul(&h.exp()?);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    Ok(ZetaResult {
        series,
        factors: vec![
            ZetaFactor::Exp {
                label: "log(zeta_T(t^2))/2".into(),
                argument: g.scale(&half),
            },
            ZetaFactor::Exp {
                label: "h(t)".into(),
                argument: h,
            },
        ],
        provenance: format!("flip zeta ({})", cp.backend()),
    })
}

/// True when every coefficient of `2 s` is a non-negative integer.
pub fn is_nonneg_half_integral(s: &TruncatedSeries) -> bool {
    s.coeffs().iter().all(|c| {
        let twice = c * BigRational::from_integer(BigInt::from(2));
        twice.is_integer() && !twice.is_negative()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::budget::WorkBudget;
    use crate::fixtures;
    use crate::sofic::{build_joint_state_chain, LabeledPresentation};
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn budget() -> WorkBudget {
        WorkBudget::default()
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_i64s(num), Polynomial::from_i64s(den)).unwrap()
    }

    #[test]
    fn g_of_a_single_fixed_point() {
        let x2 = fixtures::paper_example_6().restrict_fixed_subsystem(1);
        let cp = SftTrace::new(x2);
        let ord = generating_g(&cp, 1, 5, Convention::Ordinary).unwrap();
        assert_eq!(ord, TruncatedSeries::from_integers(&[0, 1, 1, 1, 1, 1]));
        let log = generating_g(&cp, 1, 5, Convention::Log).unwrap();
        for m in 1..=5 {
            assert_eq!(log.coeff(m), q(1, m as i64));
        }
    }

    #[test]
    fn g_of_the_order_six_example_is_three_traces() {
        let sys = fixtures::paper_example_6();
        let cp = SftTrace::new(sys.clone());
        let g = generating_g(&cp, 3, 8, Convention::Ordinary).unwrap();
        for m in 1..=8 {
            let tr = sys.fixed_count_trace(m, 0).unwrap();
            assert_eq!(g.coeff(m), rational(tr * 3));
        }
    }

    #[test]
    fn h_values_of_the_order_six_example() {
        let sys = fixtures::paper_example_6();
        let cp = SftTrace::new(sys.clone());
        let h2 = generating_h(&cp, 1, 20).unwrap();
        assert_eq!(h2, expand_rational(&rf(&[0, 1], &[1, -1]), 20));
        let h6 = generating_h(&cp, 3, 20).unwrap();
        let closed = rf(&[0, 1, 1, 0, 3, 0, 3], &[1, 0, -1, 0, -6, 0, -6]);
        assert_eq!(h6, expand_rational(&closed, 20));
        assert_eq!(
            h6.truncate(4),
            TruncatedSeries::from_integers(&[0, 1, 1, 1, 4])
        );
        assert!(is_nonneg_half_integral(&h6));
        let brute = SftBruteForce::new(sys, budget());
        assert_eq!(generating_h(&brute, 3, 10).unwrap(), h6.truncate(10));
    }

    #[test]
    fn empty_system() {
        let cp = SftTrace::new(crate::sft::ReversalSft::empty(1));
        assert_eq!(generating_h(&cp, 1, 6).unwrap(), TruncatedSeries::zero(6));
        assert_eq!(flip_zeta(&cp, 6).unwrap().series, TruncatedSeries::one(6));
        assert_eq!(
            lind_zeta_product(&cp, 6).unwrap().series,
            TruncatedSeries::one(6)
        );
        let oracle = SftBruteForce::new(crate::sft::ReversalSft::empty(2), budget());
        assert_eq!(
            lind_zeta_direct(&oracle, 6).unwrap(),
            TruncatedSeries::one(6)
        );
    }

    #[test]
    fn direct_with_no_subgroups_is_one() {
        let oracle = SftBruteForce::new(fixtures::golden_mean(), budget());
        assert_eq!(
            lind_zeta_direct(&oracle, 0).unwrap(),
            TruncatedSeries::one(0)
        );
    }

    // (1-t^2)^(-1/2) exp(t/(1-t)), assembled independently
    fn single_point_flip_zeta(order: usize) -> TruncatedSeries {
        let inv = expand_rational(&rf(&[1], &[1, 0, -1]), order);
        let root = inv.log().unwrap().scale(&q(1, 2)).exp().unwrap();
        root.mul(
            &expand_rational(&rf(&[0, 1], &[1, -1]), order)
                .exp()
                .unwrap(),
        )
    }

    #[test]
    fn flip_zeta_of_a_single_fixed_point() {
        let sys = fixtures::single_loop();
        let want = single_point_flip_zeta(8);
        let z = flip_zeta(&SftTrace::new(sys.clone()), 8).unwrap();
        assert_eq!(z.series, want);
        assert!(z.factors_match().unwrap());
        let direct = lind_zeta_direct(&SftBruteForce::new(sys, budget()), 4).unwrap();
        assert_eq!(direct, want.truncate(4));
    }

    #[test]
    fn flip_zeta_matches_direct_on_golden_mean() {
        let sys = fixtures::golden_mean();
        let z = flip_zeta(&SftTrace::new(sys.clone()), 10).unwrap();
        let direct = lind_zeta_direct(&SftBruteForce::new(sys, budget()), 10).unwrap();
        assert_eq!(z.series, direct);
    }

    #[test]
    fn product_matches_direct_on_the_order_six_example() {
        let sys = fixtures::paper_example_6();
        let product = lind_zeta_product(&SftTrace::new(sys.clone()), 12).unwrap();
        assert!(product.factors_match().unwrap());
        let direct = lind_zeta_direct(&SftBruteForce::new(sys, budget()), 12).unwrap();
        assert_eq!(product.series, direct);
    }

    #[test]
    fn product_matches_direct_on_small_fixtures() {
        for sys in [
            fixtures::full_shift(2),
            fixtures::golden_mean(),
            fixtures::full_shift_with_tau(&[1, 2, 0], 3),
        ] {
            let product = lind_zeta_product(&SftTrace::new(sys.clone()), 8).unwrap();
            let direct = lind_zeta_direct(&SftBruteForce::new(sys, budget()), 8).unwrap();
            assert_eq!(product.series, direct);
        }
    }

    #[test]
    fn parity_reduction_of_flip_terms() {
        // summing F2 terms at fixed m over j equals m times the h coefficient
        let sys = fixtures::golden_mean();
        let oracle = SftBruteForce::new(sys, budget());
        let terms = subgroup_terms(&oracle, 8).unwrap();
        let h = generating_h(&oracle, 1, 8).unwrap();
        for m in 1..=8 {
            let total: BigInt = terms
                .iter()
                .filter(
                    |t| matches!(t.subgroup.family(), Family::F2 { m: mm, k: 1, .. } if mm == m),
                )
                .map(|t| t.fixed_points.clone())
                .sum();
            assert_eq!(rational(total), h.coeff(m) * rational(m as i64));
        }
    }

    #[test]
    fn sofic_product_matches_sofic_direct() {
        for fx in [
            fixtures::even_shift(),
            fixtures::colored_even_shift(),
            fixtures::two_colored_even_shift(),
        ] {
            let p: LabeledPresentation = fx.presentation;
            let jsc = build_joint_state_chain(&p, budget()).unwrap();
            let cp = SoficTheoremC::new(jsc.chain(), budget()).unwrap();
            let product = lind_zeta_product(&cp, 8).unwrap();
            let direct = lind_zeta_direct(&SoficBruteForce::new(p, budget()), 8).unwrap();
            assert_eq!(product.series, direct, "{}", fx.name);
        }
    }

    #[test]
    fn backends_agree_on_counts() {
        let sys = fixtures::full_shift_with_tau(&[1, 2, 3, 0], 2);
        let t = SftTrace::new(sys.clone());
        let b = SftBruteForce::new(sys, budget());
        for k in [1, 2] {
            for m in 1..=5 {
                for l in 0..k {
                    assert_eq!(
                        t.automorphism_count(k, m, l).unwrap(),
                        b.automorphism_count(k, m, l).unwrap()
                    );
                }
            }
        }
        assert_eq!(t.flip_triple(1, 3).unwrap(), b.flip_triple(1, 3).unwrap());
        assert!(matches!(
            t.automorphism_count(3, 1, 0),
            Err(ZetaError::BadSubsystem { .. })
        ));
    }

    #[test]
    fn flip_zeta_needs_order_two() {
        let cp = SftTrace::new(fixtures::paper_example_6());
        assert!(matches!(
            flip_zeta(&cp, 4),
            Err(ZetaError::NotFlip { r: 3 })
        ));
    }

    #[test]
    fn h_is_half_integral_on_small_systems() {
        for sys in [
            fixtures::golden_mean(),
            fixtures::full_shift_with_tau(&[1, 0], 1),
        ] {
            let h = generating_h(&SftTrace::new(sys), 1, 12).unwrap();
            assert!(is_nonneg_half_integral(&h));
            assert!(h.coeffs().iter().all(|c| c.to_integer().to_i64().is_some()));
        }
    }
}
