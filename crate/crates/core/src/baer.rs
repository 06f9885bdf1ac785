//! Baer types of rank-one torsion-free groups, restricted to eventually
//! constant sequences: finitely many exceptions over a constant tail.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::primes::{is_prime, primes, PrimeSet};

/// A natural number or infinity. `Fin` sorts below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exp {
    Fin(u32),
    Inf,
}

impl Exp {
    pub const ZERO: Exp = Exp::Fin(0);

    pub fn is_inf(self) -> bool {
        self == Exp::Inf
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Exp::Fin(k) => Some(k),
            Exp::Inf => None,
        }
    }

    pub fn saturating_add(self, other: Exp) -> Exp {
        match (self, other) {
            (Exp::Fin(a), Exp::Fin(b)) => Exp::Fin(a + b),
            _ => Exp::Inf,
        }
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exp::Fin(k) => write!(f, "{k}"),
            Exp::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Exp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exp::Fin(k) => s.serialize_u32(*k),
            Exp::Inf => s.serialize_str("inf"),
        }
    }
}

/// The type `(k_2, k_3, k_5, ...)` of a subgroup of the rationals containing 1:
/// `k_p` is the largest power of `p` dividing 1 in the group.
///
/// Stored minimally: no exception equals the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaerType {
    exceptions: BTreeMap<u64, Exp>,
    tail: Exp,
}

impl BaerType {
    pub fn new<I: IntoIterator<Item = (u64, Exp)>>(tail: Exp, exceptions: I) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (p, k) in exceptions {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            map.insert(p, k);
        }
        map.retain(|_, k| *k != tail);
        Ok(BaerType { exceptions: map, tail })
    }

    /// The type of `Z`.
    pub fn zero() -> Self {
        BaerType { exceptions: BTreeMap::new(), tail: Exp::ZERO }
    }

    /// The type of `Q`.
    pub fn rationals() -> Self {
        BaerType { exceptions: BTreeMap::new(), tail: Exp::Inf }
    }

    pub fn constant(tail: Exp) -> Self {
        BaerType { exceptions: BTreeMap::new(), tail }
    }

    /// The type of `Z[J^-1]`: infinite exactly on `J`, zero elsewhere.
    pub fn subring(j: &PrimeSet) -> Self {
        match j {
            PrimeSet::Finite(s) => BaerType { exceptions: s.iter().map(|&p| (p, Exp::Inf)).collect(), tail: Exp::ZERO },
            PrimeSet::Cofinite(s) => {
                BaerType { exceptions: s.iter().map(|&p| (p, Exp::ZERO)).collect(), tail: Exp::Inf }
            }
        }
    }

    pub fn tail(&self) -> Exp {
        self.tail
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Exp> {
        &self.exceptions
    }

    pub fn value_at(&self, p: u64) -> Exp {
        self.exceptions.get(&p).copied().unwrap_or(self.tail)
    }

    pub fn is_zero(&self) -> bool {
        self.exceptions.is_empty() && self.tail == Exp::ZERO
    }

    /// Every prime divides 1 infinitely often: the group is `Q`.
    pub fn is_divisible(&self) -> bool {
        self.exceptions.is_empty() && self.tail == Exp::Inf
    }

    /// Primes with infinite exponent.
    pub fn infinite_primes(&self) -> PrimeSet {
        match self.tail {
            Exp::Inf => PrimeSet::all_except(self.exceptions.keys().copied()),
            Exp::Fin(_) => PrimeSet::finite(self.exceptions.iter().filter(|(_, k)| k.is_inf()).map(|(p, _)| *p)),
        }
    }

    /// Total number of prime powers `p^j` with `j <= k_p`; `None` when infinite.
    pub fn prime_power_count(&self) -> Option<u64> {
        if self.tail != Exp::ZERO {
            return None;
        }
        self.exceptions.values().try_fold(0u64, |acc, k| k.finite().map(|k| acc + k as u64))
    }

    /// The group is free of rank one (isomorphic to `Z`): all exponents finite
    /// and only finitely many nonzero.
    pub fn is_free(&self) -> bool {
        self.prime_power_count().is_some()
    }

    /// All exponents lie in `{0, inf}`: the group is a subring `Z[J^-1]`.
    pub fn subring_primes(&self) -> Option<PrimeSet> {
        let ok = |k: &Exp| *k == Exp::ZERO || k.is_inf();
        if ok(&self.tail) && self.exceptions.values().all(ok) {
            Some(self.infinite_primes())
        } else {
            None
        }
    }

    /// Pointwise sum of exponents (the type of a tensor product).
    pub fn add(&self, other: &BaerType) -> BaerType {
        let keys = self.exceptions.keys().chain(other.exceptions.keys());
        let tail = self.tail.saturating_add(other.tail);
        let ex: Vec<_> = keys.map(|&p| (p, self.value_at(p).saturating_add(other.value_at(p)))).collect();
        BaerType::new(tail, ex).expect("primes already validated")
    }

    /// Primes at which either type has an exception, in increasing order.
    pub fn exception_union(&self, other: &BaerType) -> Vec<u64> {
        let mut ks: Vec<u64> = self.exceptions.keys().chain(other.exceptions.keys()).copied().collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// Baer equivalence: agree at all but finitely many primes, and differ only
    /// by finite amounts where they differ.
    pub fn baer_equiv(&self, other: &BaerType) -> bool {
        if self.tail != other.tail {
            return false;
        }
        self.exception_union(other).into_iter().all(|p| self.value_at(p).is_inf() == other.value_at(p).is_inf())
    }
}

/// Lexicographic order on the sequences `(k_2, k_3, k_5, ...)`.
impl Ord for BaerType {
    fn cmp(&self, other: &Self) -> Ordering {
        let keys = self.exception_union(other);
        // smallest prime outside both exception sets: both sequences equal their tails there
        let free = primes().find(|p| keys.binary_search(p).is_err()).expect("infinitely many primes");
        for &p in keys.iter().take_while(|&&p| p < free) {
            match self.value_at(p).cmp(&other.value_at(p)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match self.tail.cmp(&other.tail) {
            Ordering::Equal => {}
            o => return o,
        }
        for &p in keys.iter().filter(|&&p| p > free) {
            match self.value_at(p).cmp(&other.value_at(p)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BaerType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BaerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type({}", self.tail)?;
        for (p, k) in &self.exceptions {
            write!(f, "; {p}:{k}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for BaerType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
