//! Symbolic abelian groups in a decidable fragment, plus output-only
//! extended forms (p-adics, formal quotients, prime-indexed families).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::baer::{BaerType, Exp};
use crate::error::Error;
use crate::primes::{factorize, is_prime, pow, PrimeSet};

/// The per-prime factor of a prime-indexed product or sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeFamily {
    /// `Z/p^k`
    Cyclic(u32),
    /// `Z(p^inf)`
    Prufer,
    /// `Zhat(p)`
    Padic,
    /// `Qhat(p)`
    PadicField,
}

impl PrimeFamily {
    fn at(&self, p: u64) -> GroupExpr {
        match self {
            PrimeFamily::Cyclic(k) => GroupExpr::Cyclic { p, k: *k },
            PrimeFamily::Prufer => GroupExpr::Prufer(p),
            PrimeFamily::Padic => GroupExpr::Padic(p),
            PrimeFamily::PadicField => GroupExpr::PadicField(p),
        }
    }
}

impl fmt::Display for PrimeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeFamily::Cyclic(1) => write!(f, "Z/p"),
            PrimeFamily::Cyclic(k) => write!(f, "Z/p^{k}"),
            PrimeFamily::Prufer => write!(f, "Z(p^inf)"),
            PrimeFamily::Padic => write!(f, "Zhat(p)"),
            PrimeFamily::PadicField => write!(f, "Qhat(p)"),
        }
    }
}

/// A symbolic group.
///
/// Variant order is the canonical summand order:
/// `Trivial < Int < Cyclic < Prufer < RankOne`, with composite and extended
/// forms after the primitives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupExpr {
    Trivial,
    Int,
    /// `Z/p^k`, `k >= 1`.
    Cyclic {
        p: u64,
        k: u32,
    },
    /// The Prüfer group `Z(p^inf)`.
    Prufer(u64),
    /// The subgroup of `Q` containing 1 with the given type.
    RankOne(BaerType),
    Sum(Vec<GroupExpr>),
    /// Only as a fundamental-group input, and only at the outermost level.
    FreeProduct(Vec<GroupExpr>),
    // output-only forms
    Padic(u64),
    PadicField(u64),
    FormalProduct {
        factor: PrimeFamily,
        primes: PrimeSet,
    },
    PrimeSum {
        factor: PrimeFamily,
        primes: PrimeSet,
    },
    FormalQuotient {
        num: Box<GroupExpr>,
        den: Box<GroupExpr>,
    },
    FormalColimit {
        tag: String,
        index: Box<GroupExpr>,
        base: Box<GroupExpr>,
    },
}

impl GroupExpr {
    pub fn cyclic_pp(p: u64, k: u32) -> Result<GroupExpr, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(if k == 0 { GroupExpr::Trivial } else { GroupExpr::Cyclic { p, k } })
    }

    /// `Z/n` in primary form; `Z/1` is trivial.
    pub fn cyclic(n: u64) -> GroupExpr {
        assert!(n > 0, "Z/0 is not a finite cyclic group");
        let parts: Vec<_> = factorize(n).into_iter().map(|(p, k)| GroupExpr::Cyclic { p, k }).collect();
        match parts.len() {
            0 => GroupExpr::Trivial,
            1 => parts.into_iter().next().unwrap(),
            _ => GroupExpr::Sum(parts),
        }
    }

    pub fn prufer(p: u64) -> Result<GroupExpr, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GroupExpr::Prufer(p))
    }

    pub fn rank_one(t: BaerType) -> GroupExpr {
        if t.is_zero() {
            GroupExpr::Int
        } else {
            GroupExpr::RankOne(t)
        }
    }

    pub fn rationals() -> GroupExpr {
        GroupExpr::RankOne(BaerType::rationals())
    }

    /// `Z[1/p1, ..., 1/pn]`
    pub fn localization(ps: &[u64]) -> Result<GroupExpr, Error> {
        let t = BaerType::new(Exp::ZERO, ps.iter().map(|&p| (p, Exp::Inf)))?;
        Ok(GroupExpr::rank_one(t))
    }

    pub fn sum<I: IntoIterator<Item = GroupExpr>>(parts: I) -> GroupExpr {
        GroupExpr::Sum(parts.into_iter().collect()).normalize()
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.clone().normalize(), GroupExpr::Trivial)
    }

    /// True for constructors that may only appear in outputs.
    pub fn is_extended(&self) -> bool {
        match self {
            GroupExpr::Padic(_)
            | GroupExpr::PadicField(_)
            | GroupExpr::FormalProduct { .. }
            | GroupExpr::PrimeSum { .. }
            | GroupExpr::FormalQuotient { .. }
            | GroupExpr::FormalColimit { .. } => true,
            GroupExpr::Sum(xs) | GroupExpr::FreeProduct(xs) => xs.iter().any(GroupExpr::is_extended),
            _ => false,
        }
    }

    pub fn has_free_product(&self) -> bool {
        match self {
            GroupExpr::FreeProduct(_) => true,
            GroupExpr::Sum(xs) => xs.iter().any(GroupExpr::has_free_product),
            _ => false,
        }
    }

    /// Reject extended constructors in an input position.
    pub fn require_fragment(&self) -> Result<(), Error> {
        if self.is_extended() {
            Err(Error::ExtendedInput(self.to_string()))
        } else {
            Ok(())
        }
    }

    /// Input fragment and abelian.
    pub fn require_abelian_fragment(&self) -> Result<(), Error> {
        self.require_fragment()?;
        if self.has_free_product() {
            return Err(Error::NotAbelian(self.to_string()));
        }
        Ok(())
    }

    /// Summands of the canonical form (empty for the trivial group).
    pub fn summands(&self) -> Vec<GroupExpr> {
        match self.clone().normalize() {
            GroupExpr::Trivial => vec![],
            GroupExpr::Sum(xs) => xs,
            g => vec![g],
        }
    }

    /// Canonical form: sums flattened, sorted, trivial parts removed; rank-one
    /// groups of zero type become `Z`; finite prime-indexed families are expanded.
    /// Idempotent and isomorphism-preserving.
    pub fn normalize(self) -> GroupExpr {
        match self {
            GroupExpr::RankOne(t) => GroupExpr::rank_one(t),
            GroupExpr::Sum(xs) => {
                let mut flat = Vec::new();
                for x in xs {
                    match x.normalize() {
                        GroupExpr::Trivial => {}
                        GroupExpr::Sum(ys) => flat.extend(ys),
                        y => flat.push(y),
                    }
                }
                collapse(flat, GroupExpr::Sum)
            }
            GroupExpr::FreeProduct(xs) => {
                let mut flat = Vec::new();
                for x in xs {
                    match x.normalize() {
                        GroupExpr::Trivial => {}
                        GroupExpr::FreeProduct(ys) => flat.extend(ys),
                        y => flat.push(y),
                    }
                }
                collapse(flat, GroupExpr::FreeProduct)
            }
            GroupExpr::FormalProduct { factor, primes } | GroupExpr::PrimeSum { factor, primes }
                if primes.is_finite() =>
            {
                let parts: Vec<_> = primes.members().unwrap().iter().map(|&p| factor.at(p)).collect();
                GroupExpr::Sum(parts).normalize()
            }
            GroupExpr::FormalQuotient { num, den } => {
                let num = num.normalize();
                let den = den.normalize();
                if den == GroupExpr::Trivial {
                    num
                } else {
                    GroupExpr::FormalQuotient { num: Box::new(num), den: Box::new(den) }
                }
            }
            GroupExpr::FormalColimit { tag, index, base } => {
                GroupExpr::FormalColimit { tag, index: Box::new(index.normalize()), base: Box::new(base.normalize()) }
            }
            g => g,
        }
    }

    /// Free products become direct sums; abelian inputs come back normalized.
    pub fn abelianize(&self) -> GroupExpr {
        match self {
            GroupExpr::FreeProduct(xs) | GroupExpr::Sum(xs) => {
                GroupExpr::Sum(xs.iter().map(GroupExpr::abelianize).collect()).normalize()
            }
            g => g.clone().normalize(),
        }
    }

    /// Order of a finite group in the fragment; `None` if infinite or not a finite sum of cyclics.
    pub fn finite_order(&self) -> Option<u64> {
        self.summands().iter().try_fold(1u64, |acc, s| match s {
            GroupExpr::Cyclic { p, k } => acc.checked_mul(pow(*p, *k)),
            _ => None,
        })
    }

    fn is_atom(&self) -> bool {
        !matches!(self, GroupExpr::Sum(_) | GroupExpr::FreeProduct(_) | GroupExpr::FormalQuotient { .. })
    }
}

fn collapse(mut xs: Vec<GroupExpr>, wrap: fn(Vec<GroupExpr>) -> GroupExpr) -> GroupExpr {
    xs.sort();
    match xs.len() {
        0 => GroupExpr::Trivial,
        1 => xs.pop().unwrap(),
        _ => wrap(xs),
    }
}

fn fmt_rank_one(t: &BaerType, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if t.is_divisible() {
        return write!(f, "Q");
    }
    if t.tail() == Exp::ZERO && !t.exceptions().is_empty() && t.exceptions().values().all(|k| k.is_inf()) {
        let ps: Vec<String> = t.exceptions().keys().map(u64::to_string).collect();
        return write!(f, "Z[1/{}]", ps.join(","));
    }
    if t.is_zero() {
        return write!(f, "Z");
    }
    write!(f, "{t}")
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => write!(f, "0"),
            GroupExpr::Int => write!(f, "Z"),
            GroupExpr::Cyclic { p, k } => write!(f, "Z/{}", pow(*p, *k)),
            GroupExpr::Prufer(p) => write!(f, "Z({p}^inf)"),
            GroupExpr::RankOne(t) => fmt_rank_one(t, f),
            GroupExpr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    match x {
                        GroupExpr::Sum(_) | GroupExpr::FreeProduct(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            GroupExpr::FreeProduct(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    match x {
                        GroupExpr::FreeProduct(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            GroupExpr::Padic(p) => write!(f, "Zhat({p})"),
            GroupExpr::PadicField(p) => write!(f, "Qhat({p})"),
            GroupExpr::FormalProduct { factor, primes } => {
                write!(f, "Prod_{{p in {}}} {factor}", primes.index_symbol())
            }
            GroupExpr::PrimeSum { factor, primes } => {
                write!(f, "Sum_{{p in {}}} {factor}", primes.index_symbol())
            }
            GroupExpr::FormalQuotient { num, den } => {
                if num.is_atom() && !matches!(**num, GroupExpr::FormalProduct { .. }) {
                    write!(f, "{num}/")?;
                } else {
                    write!(f, "({num})/")?;
                }
                if den.is_atom() {
                    write!(f, "{den}")
                } else {
                    write!(f, "({den})")
                }
            }
            GroupExpr::FormalColimit { tag, index, base } => {
                write!(f, "colim[{tag}; {index}; {base}]")
            }
        }
    }
}

impl Serialize for GroupExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
