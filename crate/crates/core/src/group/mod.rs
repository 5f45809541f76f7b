//! The group `G_2r = <a, b | ab = ba^-1, b^2r = 1>`.
//!
//! Elements are kept in the normal form `a^n b^k` with `0 <= k < 2r`. Every
//! finite-index subgroup is described by one of two parameter families, which
//! doubles as its identity; an independent Todd-Coxeter enumerator checks
//! the index formulas and the uniqueness of descriptors.

mod coset;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub use coset::{coset_enumeration_index, coset_table, CosetIndex, CosetTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("elements live in different groups: r = {0} and r = {1}")]
    MismatchedOrder(usize, usize),
    #[error("r must be positive")]
    ZeroOrder,
    #[error("exponent of b must lie in 0..{bound}, got {got}")]
    BExponent { got: usize, bound: usize },
    #[error("invalid descriptor parameters: {0}")]
    BadDescriptor(String),
    #[error("cannot parse descriptor {0:?}")]
    ParseDescriptor(String),
}

/// `a^n b^k` in `G_2r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    exp_a: BigInt,
    exp_b: usize,
    r: usize,
}

impl GroupElement {
    pub fn new(exp_a: impl Into<BigInt>, exp_b: usize, r: usize) -> Result<Self, GroupError> {
        if r == 0 {
            return Err(GroupError::ZeroOrder);
        }
        if exp_b >= 2 * r {
            return Err(GroupError::BExponent {
                got: exp_b,
                bound: 2 * r,
            });
        }
        Ok(GroupElement {
            exp_a: exp_a.into(),
            exp_b,
            r,
        })
    }

    pub fn identity(r: usize) -> Self {
        GroupElement {
            exp_a: BigInt::zero(),
            exp_b: 0,
            r,
        }
    }

    pub fn a(r: usize) -> Self {
        GroupElement {
            exp_a: 1.into(),
            exp_b: 0,
            r,
        }
    }

    pub fn b(r: usize) -> Self {
        GroupElement {
            exp_a: BigInt::zero(),
            exp_b: 1 % (2 * r),
            r,
        }
    }

    pub fn exp_a(&self) -> &BigInt {
        &self.exp_a
    }

    pub fn exp_b(&self) -> usize {
        self.exp_b
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_identity(&self) -> bool {
        self.exp_a.is_zero() && self.exp_b == 0
    }

    /// `(a^n b^k)(a^m b^j) = a^(n + (-1)^k m) b^(k + j mod 2r)`.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.r != other.r {
            return Err(GroupError::MismatchedOrder(self.r, other.r));
        }
        let exp_a = if self.exp_b.is_multiple_of(2) {
            &self.exp_a + &other.exp_a
        } else {
            &self.exp_a - &other.exp_a
        };
        Ok(GroupElement {
            exp_a,
            exp_b: (self.exp_b + other.exp_b) % (2 * self.r),
            r: self.r,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        // (a^n b^k)^-1 = b^-k a^-n = a^(-(-1)^k n) b^-k
        let exp_a = if self.exp_b.is_multiple_of(2) {
            -&self.exp_a
        } else {
            self.exp_a.clone()
        };
        GroupElement {
            exp_a,
            exp_b: (2 * self.r - self.exp_b) % (2 * self.r),
            r: self.r,
        }
    }

    pub fn pow(&self, e: u32) -> GroupElement {
        (0..e).fold(GroupElement::identity(self.r), |acc, _| {
            acc.mul(self).expect("same group")
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exp_a.is_zero(), self.exp_b) {
            (true, 0) => write!(f, "e"),
            (true, k) => write!(f, "b^{k}"),
            (false, 0) => write!(f, "a^{}", self.exp_a),
            (false, k) => write!(f, "a^{}b^{k}", self.exp_a),
        }
    }
}

/// Order of `b^i` in `G_2r`: `2r / gcd(i, 2r)`, and 1 for `i = 0`.
pub fn order_of_b_power(i: usize, r: usize) -> usize {
    if i == 0 {
        return 1;
    }
    2 * r / i.gcd(&(2 * r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `<a^m b^2l, b^2k>` with `0 <= l < k <= r`, `k | r`.
    F1 { m: usize, l: usize, k: usize },
    /// `<a^m, a^j b^(2k-1)>` with `0 <= j < m`, `(2k-1) | r`.
    F2 { m: usize, j: usize, k: usize },
}

/// A finite-index subgroup of `G_2r`, identified by its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgroupDescriptor {
    r: usize,
    family: Family,
}

impl SubgroupDescriptor {
    pub fn new(r: usize, family: Family) -> Result<Self, GroupError> {
        if r == 0 {
            return Err(GroupError::ZeroOrder);
        }
        let bad = |why: &str| {
            Err(GroupError::BadDescriptor(format!(
                "{family:?} at r={r}: {why}"
            )))
        };
        match family {
            Family::F1 { m, l, k } => {
                if m == 0 {
                    return bad("m must be positive");
                }
                if !(l < k && k <= r) {
                    return bad("need 0 <= l < k <= r");
                }
                if !r.is_multiple_of(k) {
                    return bad("k must divide r");
                }
            }
            Family::F2 { m, j, k } => {
                if m == 0 {
                    return bad("m must be positive");
                }
                if j >= m {
                    return bad("need 0 <= j < m");
                }
                if k == 0 || !r.is_multiple_of(2 * k - 1) {
                    return bad("2k-1 must divide r");
                }
            }
        }
        Ok(SubgroupDescriptor { r, family })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> usize {
        match self.family {
            Family::F1 { m, k, .. } => 2 * k * m,
            Family::F2 { m, k, .. } => (2 * k - 1) * m,
        }
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        let r = self.r;
        let el = |n: usize, b: usize| GroupElement::new(n, b % (2 * r), r).expect("in range");
        match self.family {
            Family::F1 { m, l, k } => vec![el(m, 2 * l), el(0, 2 * k)],
            Family::F2 { m, j, k } => vec![el(m, 0), el(j, 2 * k - 1)],
        }
    }

    pub fn fixed_spec(&self) -> FixedPointSpec {
        subgroup_fixed_spec(self)
    }

    fn sort_key(&self) -> (usize, u8, usize, usize, usize) {
        match self.family {
            Family::F1 { m, l, k } => (self.index(), 1, m, l, k),
            Family::F2 { m, j, k } => (self.index(), 2, m, j, k),
        }
    }
}

impl PartialOrd for SubgroupDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubgroupDescriptor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.r, self.sort_key()).cmp(&(other.r, other.sort_key()))
    }
}

impl fmt::Display for SubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::F1 { m, l, k } => write!(f, "F1(m={m},l={l},k={k})@r={}", self.r),
            Family::F2 { m, j, k } => write!(f, "F2(m={m},j={j},k={k})@r={}", self.r),
        }
    }
}

impl FromStr for SubgroupDescriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::ParseDescriptor(s.to_string());
        let (body, r) = s.split_once("@r=").ok_or_else(bad)?;
        let r: usize = r.trim().parse().map_err(|_| bad())?;
        let (fam, params) = body.split_once('(').ok_or_else(bad)?;
        let params = params.strip_suffix(')').ok_or_else(bad)?;
        let values: Vec<(&str, usize)> = params
            .split(',')
            .map(|kv| {
                let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                Ok((k.trim(), v.trim().parse().map_err(|_| bad())?))
            })
            .collect::<Result<_, GroupError>>()?;
        let family = match (fam.trim(), values.as_slice()) {
            ("F1", [("m", m), ("l", l), ("k", k)]) => Family::F1 {
                m: *m,
                l: *l,
                k: *k,
            },
            ("F2", [("m", m), ("j", j), ("k", k)]) => Family::F2 {
                m: *m,
                j: *j,
                k: *k,
            },
            _ => return Err(bad()),
        };
        SubgroupDescriptor::new(r, family)
    }
}

/// All finite-index subgroups of `G_2r` of index at most `index_max`,
/// sorted by index, then family, then parameters.
pub fn enumerate_subgroups(r: usize, index_max: usize) -> Vec<(SubgroupDescriptor, usize)> {
    let mut out: Vec<SubgroupDescriptor> = Vec::new();
    if r == 0 {
        return Vec::new();
    }
    for k in (1..=r).filter(|k| r.is_multiple_of(*k)) {
        for m in (1..).take_while(|m| 2 * k * m <= index_max) {
            for l in 0..k {
                out.push(SubgroupDescriptor {
                    r,
                    family: Family::F1 { m, l, k },
                });
            }
        }
    }
    for k in (1..=r.div_ceil(2) + 1).filter(|k| r.is_multiple_of(2 * k - 1)) {
        for m in (1..).take_while(|m| (2 * k - 1) * m <= index_max) {
            for j in 0..m {
                out.push(SubgroupDescriptor {
                    r,
                    family: Family::F2 { m, j, k },
                });
            }
        }
    }
    out.sort();
    out.into_iter().map(|d| (d, d.index())).collect()
}

/// `T^shift R^reversal x = x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FixedCondition {
    pub shift: usize,
    pub reversal: usize,
}

/// The points fixed by a subgroup are those fixed by its generators.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FixedPointSpec {
    /// Conditions on `x`, trivial ones (`T^0 R^0`) omitted.
    pub conditions: Vec<FixedCondition>,
    /// Every fixed point lies in `X_{2h}` where `h` is this value.
    pub subsystem: usize,
}

pub fn subgroup_fixed_spec(d: &SubgroupDescriptor) -> FixedPointSpec {
    let r = d.r;
    let conds = match d.family {
        Family::F1 { m, l, k } => [(m, 2 * l), (0, 2 * k)],
        Family::F2 { m, j, k } => [(m, 0), (j, 2 * k - 1)],
    };
    let conditions = conds
        .into_iter()
        .map(|(shift, rev)| FixedCondition {
            shift,
            reversal: rev % (2 * r),
        })
        .filter(|c| c.shift != 0 || c.reversal != 0)
        .collect();
    let subsystem = match d.family {
        Family::F1 { k, .. } => k,
        Family::F2 { k, .. } => 2 * k - 1,
    };
    FixedPointSpec {
        conditions,
        subsystem,
    }
}

/// Generator word for `a^n b^k`: letters 0 = a, 1 = a^-1, 2 = b, 3 = b^-1.
pub(crate) fn element_word(g: &GroupElement) -> Option<Vec<usize>> {
    let n = g.exp_a.abs().to_usize()?;
    let letter = if g.exp_a.is_negative() { 1 } else { 0 };
    let mut w = vec![letter; n];
    w.extend(std::iter::repeat_n(2, g.exp_b));
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(n: i64, k: usize, r: usize) -> GroupElement {
        GroupElement::new(n, k, r).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let r = 3;
        let ab = el(1, 1, r);
        assert_eq!(ab.mul(&ab).unwrap(), el(0, 2, r));
        assert_eq!(el(2, 0, r).mul(&el(3, 0, r)).unwrap(), el(5, 0, r));
        assert_eq!(
            GroupElement::b(r).mul(&GroupElement::a(r)).unwrap(),
            el(-1, 1, r)
        );
        assert_eq!(
            el(1, 0, 2).mul(&el(1, 0, 3)),
            Err(GroupError::MismatchedOrder(2, 3))
        );
    }

    #[test]
    fn b_power_orders() {
        assert_eq!(order_of_b_power(2, 3), 3);
        assert_eq!(order_of_b_power(3, 3), 2);
        assert_eq!(order_of_b_power(0, 5), 1);
        assert_eq!(order_of_b_power(1, 4), 8);
    }

    #[test]
    fn small_enumerations() {
        let r1 = enumerate_subgroups(1, 2);
        let text: Vec<String> = r1.iter().map(|(d, _)| d.to_string()).collect();
        assert_eq!(
            text,
            [
                "F2(m=1,j=0,k=1)@r=1",
                "F1(m=1,l=0,k=1)@r=1",
                "F2(m=2,j=0,k=1)@r=1",
                "F2(m=2,j=1,k=1)@r=1",
            ]
        );
        let six = enumerate_subgroups(3, 6)
            .into_iter()
            .filter(|(_, i)| *i == 6)
            .count();
        assert_eq!(six, 12);
        assert!(enumerate_subgroups(4, 0).is_empty());
    }

    /// Independent count of parameter solutions: scan a generous box and
    /// keep whatever the constructor accepts.
    #[test]
    fn enumeration_matches_parameter_box() {
        for r in 1..=5 {
            for n in 0..=14 {
                let mut expect = 0;
                for m in 1..=n {
                    for x in 0..=n {
                        for k in 1..=2 * r {
                            for fam in [Family::F1 { m, l: x, k }, Family::F2 { m, j: x, k }] {
                                if let Ok(d) = SubgroupDescriptor::new(r, fam) {
                                    if d.index() <= n {
                                        expect += 1;
                                    }
                                }
                            }
                        }
                    }
                }
                assert_eq!(enumerate_subgroups(r, n).len(), expect, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn descriptor_text_round_trip() {
        for text in ["F1(m=3,l=0,k=1)@r=3", "F2(m=2,j=1,k=2)@r=3"] {
            let d: SubgroupDescriptor = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
        assert!("F1(m=3,l=1,k=1)@r=3".parse::<SubgroupDescriptor>().is_err());
        assert!("F2(m=2,j=1,k=2)@r=4".parse::<SubgroupDescriptor>().is_err());
        assert!("F3(m=1)@r=1".parse::<SubgroupDescriptor>().is_err());
    }

    #[test]
    fn fixed_specs() {
        let whole = SubgroupDescriptor::new(3, Family::F2 { m: 1, j: 0, k: 1 }).unwrap();
        let spec = whole.fixed_spec();
        assert_eq!(
            spec.conditions,
            [
                FixedCondition {
                    shift: 1,
                    reversal: 0
                },
                FixedCondition {
                    shift: 0,
                    reversal: 1
                }
            ]
        );
        let top = SubgroupDescriptor::new(3, Family::F1 { m: 4, l: 0, k: 3 }).unwrap();
        assert_eq!(
            top.fixed_spec().conditions,
            [FixedCondition {
                shift: 4,
                reversal: 0
            }]
        );
        let flip = SubgroupDescriptor::new(3, Family::F2 { m: 2, j: 1, k: 2 }).unwrap();
        // x lies in X_{4k-2} = X_6
        assert_eq!(flip.fixed_spec().subsystem * 2, 6);
    }

    proptest! {
        #[test]
        fn associativity_and_b_order(
            r in 1usize..5,
            xs in proptest::collection::vec((-20i64..20, 0usize..10), 3)
        ) {
            let e: Vec<GroupElement> = xs.iter().map(|&(n, k)| el(n, k % (2 * r), r)).collect();
            let left = e[0].mul(&e[1]).unwrap().mul(&e[2]).unwrap();
            let right = e[0].mul(&e[1].mul(&e[2]).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert!(GroupElement::b(r).pow(2 * r as u32).is_identity());
            prop_assert!(e[0].mul(&e[0].inverse()).unwrap().is_identity());
        }
    }
}
