//! Prime arithmetic and finite/cofinite sets of primes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Iterator over all primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    std::iter::successors(Some(2u64), |&p| Some(next_prime(p)))
}

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `Some((p, j))` when `n = p^j` with `j >= 1`.
pub fn as_prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, j)] => Some((*p, *j)),
        _ => None,
    }
}

pub fn pow(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("prime power overflows u64")
}

/// A set of primes that is either finite or has finite complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::Finite(BTreeSet::new())
    }

    pub fn all() -> Self {
        PrimeSet::Cofinite(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        PrimeSet::Finite(ps.into_iter().collect())
    }

    pub fn all_except<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        PrimeSet::Cofinite(ps.into_iter().collect())
    }

    pub fn singleton(p: u64) -> Self {
        Self::finite([p])
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::Cofinite(s) => is_prime(p) && !s.contains(&p),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSet::Finite(s) if s.is_empty())
    }

    pub fn is_all(&self) -> bool {
        matches!(self, PrimeSet::Cofinite(s) if s.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrimeSet::Finite(_))
    }

    pub fn complement(&self) -> Self {
        match self {
            PrimeSet::Finite(s) => PrimeSet::Cofinite(s.clone()),
            PrimeSet::Cofinite(s) => PrimeSet::Finite(s.clone()),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        use PrimeSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.intersection(b).copied().collect()),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Finite(a.difference(b).copied().collect()),
            (Cofinite(a), Cofinite(b)) => Cofinite(a.union(b).copied().collect()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.complement().intersect(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Smallest member, if any.
    pub fn min_member(&self) -> Option<u64> {
        match self {
            PrimeSet::Finite(s) => s.iter().next().copied(),
            PrimeSet::Cofinite(s) => primes().find(|p| !s.contains(p)),
        }
    }

    /// Members of a finite set; `None` for cofinite sets.
    pub fn members(&self) -> Option<&BTreeSet<u64>> {
        match self {
            PrimeSet::Finite(s) => Some(s),
            PrimeSet::Cofinite(_) => None,
        }
    }

    /// Compact symbol used inside indexed products and sums: `P`, `P\{2,3}` or `{2,3}`.
    pub fn index_symbol(&self) -> String {
        match self {
            PrimeSet::Cofinite(s) if s.is_empty() => "P".to_string(),
            PrimeSet::Cofinite(s) => format!("P\\{{{}}}", join(s)),
            PrimeSet::Finite(s) => format!("{{{}}}", join(s)),
        }
    }
}

fn join(s: &BTreeSet<u64>) -> String {
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSet::Finite(s) if s.is_empty() => write!(f, "{{}}"),
            PrimeSet::Finite(s) => write!(f, "{{{}}}", join(s)),
            PrimeSet::Cofinite(s) if s.is_empty() => write!(f, "all primes"),
            PrimeSet::Cofinite(s) => write!(f, "all primes except {{{}}}", join(s)),
        }
    }
}

impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
