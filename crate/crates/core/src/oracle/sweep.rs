//! Conformance sweep: symbolic rules against the finite oracle over every pair
//! of finite abelian groups up to a given order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Bounds, FiniteAb, Prepared};
use crate::error::Error;
use crate::group::GroupExpr;
use crate::homalg::{bifunctor, Kind};
use crate::primes::factorize;
use crate::radical::{radical, Stages};

/// Partitions of `n` into positive parts, each in non-increasing order.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every finite abelian group of order `n`, up to isomorphism.
pub fn groups_of_order(n: u64) -> Vec<FiniteAb> {
    let mut acc = vec![Vec::<u64>::new()];
    for (p, k) in factorize(n) {
        let mut next = Vec::new();
        for orders in &acc {
            for part in partitions(k) {
                let mut o = orders.clone();
                o.extend(part.iter().map(|&e| p.pow(e)));
                next.push(o);
            }
        }
        acc = next;
    }
    acc.into_iter().map(|o| FiniteAb::new(o).unwrap()).collect()
}

/// Every finite abelian group of order at most `bound`, sorted.
pub fn groups_up_to(bound: u64) -> Vec<FiniteAb> {
    let mut gs: Vec<FiniteAb> = (1..=bound).flat_map(groups_of_order).collect();
    gs.sort();
    gs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub a: String,
    pub b: String,
    pub symbolic: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub bound: u64,
    pub groups: usize,
    pub pairs: usize,
    /// Comparisons performed per check.
    pub checks: BTreeMap<String, usize>,
    pub mismatch_count: usize,
    /// The first mismatches in deterministic order.
    pub mismatches: Vec<Mismatch>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

const REPORTED_MISMATCHES: usize = 20;

fn check_pair(
    a: &(FiniteAb, GroupExpr),
    b: &(FiniteAb, GroupExpr),
    prep: &mut Prepared,
) -> Result<Vec<Mismatch>, Error> {
    let mut out = Vec::new();
    let mut record = |check: &str, sym: String, ora: String| {
        if sym != ora {
            out.push(Mismatch {
                check: check.into(),
                a: a.1.to_string(),
                b: b.1.to_string(),
                symbolic: sym,
                oracle: ora,
            });
        }
    };
    for kind in Kind::ALL {
        let sym = bifunctor(kind, &a.1, &b.1)?.to_string();
        let ora = prep.bifunctor(kind, &a.0).to_string();
        record(&kind.to_string(), sym, ora);
    }
    let sym = radical(&a.1, &b.1)?;
    let ora = prep.radical(&a.0);
    record("radical", sym.radical_subgroup.to_string(), ora.radical.to_string());
    record("reduction", sym.reduction.to_string(), ora.reduction.to_string());
    record("stages", sym.stages.to_string(), Stages::Finite(ora.stages).to_string());
    if let Some(min) = ora.minimal {
        record("minimal", "true".into(), min.to_string());
    }
    Ok(out)
}

/// Compare every symbolic bifunctor and radical with the oracle over all
/// ordered pairs of groups of order at most `bound`.
pub fn sweep(bound: u64) -> Result<SweepReport, Error> {
    let bounds = Bounds::with_per_argument(bound.max(1));
    let groups: Vec<(FiniteAb, GroupExpr)> = groups_up_to(bound)
        .into_iter()
        .map(|g| {
            let e = g.to_group();
            (g, e)
        })
        .collect();
    for (g, _) in &groups {
        bounds.check(g, g)?;
    }
    let per_column: Vec<Vec<Vec<Mismatch>>> = groups
        .par_iter()
        .map(|b| {
            let mut prep = Prepared::new(&b.0);
            groups.iter().map(|a| check_pair(a, b, &mut prep)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let pairs = per_column.iter().map(Vec::len).sum();
    let mut mismatches: Vec<Mismatch> = per_column.into_iter().flatten().flatten().collect();
    let mismatch_count = mismatches.len();
    mismatches.truncate(REPORTED_MISMATCHES);
    let small = groups.iter().filter(|g| g.0.order() <= super::MINIMALITY_LIMIT).count();
    let mut checks = BTreeMap::new();
    for name in ["hom", "tensor", "tor", "ext", "radical", "reduction", "stages"] {
        checks.insert(name.to_string(), pairs);
    }
    checks.insert("minimal".to_string(), groups.len() * small);
    Ok(SweepReport { bound, groups: groups.len(), pairs, checks, mismatch_count, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts() {
        assert_eq!(groups_of_order(16).len(), 5);
        assert_eq!(groups_of_order(72).len(), 6);
        assert_eq!(groups_of_order(1), vec![FiniteAb::trivial()]);
        assert_eq!(groups_up_to(8).len(), 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3);
    }

    #[test]
    fn small_sweep_agrees() {
        let r = sweep(16).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.pairs, r.groups * r.groups);
    }
}
