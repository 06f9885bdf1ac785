//! Structural predicates on fragment groups, computed summand by summand.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::baer::Exp;
use crate::error::Error;
use crate::group::GroupExpr;
use crate::primes::PrimeSet;

/// Summary of the torsion and divisibility structure of an abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub group: GroupExpr,
    pub is_torsion: bool,
    pub torsion_subgroup: GroupExpr,
    pub torsion_free_quotient: GroupExpr,
    /// Rank of `G/T` over `Q`.
    pub rank: usize,
    pub is_divisible: bool,
    /// Primes with a nonzero primary component.
    pub torsion_primes: BTreeSet<u64>,
    /// Primes `p` for which multiplication by `p` is bijective.
    pub uniquely_divisible: PrimeSet,
    #[serde(skip)]
    summands: Vec<GroupExpr>,
}

impl StructureReport {
    pub fn primary_component(&self, p: u64) -> GroupExpr {
        GroupExpr::sum(self.summands.iter().filter(|s| primary_prime(s) == Some(p)).cloned())
    }

    pub fn is_p_divisible(&self, p: u64) -> bool {
        self.summands.iter().all(|s| summand_p_divisible(s, p))
    }

    pub fn is_uniquely_p_divisible(&self, p: u64) -> bool {
        self.uniquely_divisible.contains(p)
    }

    /// Largest `p`-exponent among the summands: `k` for `Z/p^k`, infinity for
    /// `Z(p^inf)`, `k_p` for a rank-one group.
    pub fn exponent_at(&self, p: u64) -> Exp {
        self.summands.iter().map(|s| summand_exponent(s, p)).max().unwrap_or(Exp::ZERO)
    }

    pub fn summands(&self) -> &[GroupExpr] {
        &self.summands
    }
}

fn primary_prime(s: &GroupExpr) -> Option<u64> {
    match s {
        GroupExpr::Cyclic { p, .. } | GroupExpr::Prufer(p) => Some(*p),
        _ => None,
    }
}

fn is_torsion_summand(s: &GroupExpr) -> bool {
    primary_prime(s).is_some()
}

fn summand_p_divisible(s: &GroupExpr, p: u64) -> bool {
    match s {
        GroupExpr::Int => false,
        GroupExpr::Cyclic { p: q, .. } => *q != p,
        GroupExpr::Prufer(_) => true,
        GroupExpr::RankOne(t) => t.value_at(p).is_inf(),
        _ => unreachable!("summand outside the abelian fragment"),
    }
}

fn summand_exponent(s: &GroupExpr, p: u64) -> Exp {
    match s {
        GroupExpr::Cyclic { p: q, k } if *q == p => Exp::Fin(*k),
        GroupExpr::Prufer(q) if *q == p => Exp::Inf,
        GroupExpr::RankOne(t) => t.value_at(p),
        _ => Exp::ZERO,
    }
}

/// Primes at which a single summand is uniquely divisible.
fn summand_uniquely_divisible(s: &GroupExpr) -> PrimeSet {
    match s {
        GroupExpr::Int => PrimeSet::empty(),
        GroupExpr::Cyclic { p, .. } | GroupExpr::Prufer(p) => PrimeSet::all_except([*p]),
        GroupExpr::RankOne(t) => t.infinite_primes(),
        _ => unreachable!("summand outside the abelian fragment"),
    }
}

/// The set of primes `p` for which `g` is uniquely `p`-divisible.
pub fn uniquely_divisible_primes(g: &GroupExpr) -> Result<PrimeSet, Error> {
    g.require_abelian_fragment()?;
    Ok(g.summands().iter().fold(PrimeSet::all(), |acc, s| acc.intersect(&summand_uniquely_divisible(s))))
}

pub fn classify(g: &GroupExpr) -> Result<StructureReport, Error> {
    g.require_abelian_fragment()?;
    let summands = g.summands();
    let (tors, free): (Vec<_>, Vec<_>) = summands.iter().cloned().partition(is_torsion_summand);
    let uniquely_divisible =
        summands.iter().fold(PrimeSet::all(), |acc, s| acc.intersect(&summand_uniquely_divisible(s)));
    Ok(StructureReport {
        group: g.clone().normalize(),
        is_torsion: free.is_empty(),
        rank: free.len(),
        torsion_primes: tors.iter().filter_map(primary_prime).collect(),
        torsion_subgroup: GroupExpr::sum(tors),
        torsion_free_quotient: GroupExpr::sum(free),
        is_divisible: summands.iter().all(|s| match s {
            GroupExpr::Prufer(_) => true,
            GroupExpr::RankOne(t) => t.is_divisible(),
            _ => false,
        }),
        uniquely_divisible,
        summands,
    })
}
