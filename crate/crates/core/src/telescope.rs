//! Telescopes of circles realizing rank-one groups, and the cokernel of the
//! unit inclusion `Z -> S`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::baer::{BaerType, Exp};
use crate::group::{GroupExpr, PrimeFamily};
use crate::primes::{next_prime, PrimeSet};

/// The first `n` stages of `Z --a1--> Z --a2--> ...` whose colimit has a given type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelescopePrefix {
    /// `alpha_i`: the prime dividing `m_i`.
    pub multipliers: Vec<u64>,
    /// Prime powers `m_1 < m_2 < ...` with `m_i = p^j`, `j <= k_p`.
    #[serde(serialize_with = "ser_big")]
    pub mseq: Vec<BigUint>,
    /// The type has fewer prime powers than requested; the whole finite telescope was returned.
    pub exhausted: bool,
}

fn ser_big<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|m| m.to_string()))
}

impl TelescopePrefix {
    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    /// `alpha_1 * ... * alpha_n`.
    pub fn product(&self) -> BigUint {
        self.multipliers.iter().fold(BigUint::one(), |acc, &a| acc * a)
    }
}

impl fmt::Display for TelescopePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^1")?;
        for (i, a) in self.multipliers.iter().enumerate() {
            if i + 1 == self.multipliers.len() && !self.exhausted {
                write!(f, " --{a}--> ...")?;
            } else {
                write!(f, " --{a}--> S^1")?;
            }
        }
        if self.multipliers.is_empty() && !self.exhausted {
            write!(f, " --> ...")?;
        }
        Ok(())
    }
}

/// Entry of the merge heap: next power `p^j` of a prime still below its cap.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Next {
    value: BigUint,
    p: u64,
    j: u32,
}

/// Lists the prime powers `p^j`, `1 <= j <= k_p`, in increasing order and
/// keeps the first `n`.
pub fn telescope_prefix(t: &BaerType, n: usize) -> TelescopePrefix {
    let allowed = |p: u64, j: u32| match t.value_at(p) {
        Exp::Inf => true,
        Exp::Fin(k) => j <= k,
    };
    let mut heap = BinaryHeap::new();
    for &p in t.exceptions().keys() {
        if allowed(p, 1) {
            heap.push(Reverse(Next { value: BigUint::from(p), p, j: 1 }));
        }
    }
    // primes outside the exceptions all follow the tail; they enter one at a time
    let fresh_after = |mut p: u64| loop {
        p = next_prime(p);
        if !t.exceptions().contains_key(&p) {
            return p;
        }
    };
    let mut fresh = if t.tail() == Exp::ZERO { None } else { Some(fresh_after(1)) };
    if let Some(p) = fresh {
        heap.push(Reverse(Next { value: BigUint::from(p), p, j: 1 }));
    }

    let mut multipliers = Vec::with_capacity(n);
    let mut mseq = Vec::with_capacity(n);
    while multipliers.len() < n {
        let Some(Reverse(Next { value, p, j })) = heap.pop() else {
            return TelescopePrefix { multipliers, mseq, exhausted: true };
        };
        if allowed(p, j + 1) {
            heap.push(Reverse(Next { value: &value * p, p, j: j + 1 }));
        }
        if fresh == Some(p) && j == 1 {
            let q = fresh_after(p);
            fresh = Some(q);
            heap.push(Reverse(Next { value: BigUint::from(q), p: q, j: 1 }));
        }
        multipliers.push(p);
        mseq.push(value);
    }
    let exhausted = heap.is_empty();
    TelescopePrefix { multipliers, mseq, exhausted }
}

/// `S/Z = (+)_{k_p = inf} Z(p^inf) (+) (+)_{0 < k_q < inf} Z/q^{k_q}`, with
/// infinite families written as prime-indexed sums.
pub fn cokernel_of_unit_inclusion(t: &BaerType) -> GroupExpr {
    let mut parts = Vec::new();
    for (&p, &k) in t.exceptions() {
        match k {
            Exp::Inf => parts.push(GroupExpr::Prufer(p)),
            Exp::Fin(0) => {}
            Exp::Fin(k) => parts.push(GroupExpr::Cyclic { p, k }),
        }
    }
    let rest = PrimeSet::all_except(t.exceptions().keys().copied());
    match t.tail() {
        Exp::Fin(0) => {}
        Exp::Fin(k) => parts.push(GroupExpr::PrimeSum { factor: PrimeFamily::Cyclic(k), primes: rest }),
        Exp::Inf => parts.push(GroupExpr::PrimeSum { factor: PrimeFamily::Prufer, primes: rest }),
    }
    GroupExpr::sum(parts)
}

/// Baer equivalence of types; see [`BaerType::baer_equiv`].
pub fn baer_equiv(t1: &BaerType, t2: &BaerType) -> bool {
    t1.baer_equiv(t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(tail: Exp, ex: &[(u64, Exp)]) -> BaerType {
        BaerType::new(tail, ex.iter().copied()).unwrap()
    }

    fn m(pre: &TelescopePrefix) -> Vec<u64> {
        pre.mseq.iter().map(|v| v.to_string().parse().unwrap()).collect()
    }

    #[test]
    fn single_prime_localization() {
        let pre = telescope_prefix(&t(Exp::ZERO, &[(5, Exp::Inf)]), 4);
        assert_eq!(pre.multipliers, vec![5, 5, 5, 5]);
        assert_eq!(m(&pre), vec![5, 25, 125, 625]);
        assert!(!pre.exhausted);
    }

    #[test]
    fn tail_one() {
        let pre = telescope_prefix(&BaerType::constant(Exp::Fin(1)), 5);
        assert_eq!(pre.multipliers, vec![2, 3, 5, 7, 11]);
        assert_eq!(m(&pre), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn rationals() {
        let pre = telescope_prefix(&BaerType::rationals(), 6);
        assert_eq!(m(&pre), vec![2, 3, 4, 5, 7, 8]);
        assert_eq!(pre.multipliers, vec![2, 3, 2, 5, 7, 2]);
    }

    #[test]
    fn finite_types_exhaust() {
        let pre = telescope_prefix(&t(Exp::ZERO, &[(2, Exp::Fin(2)), (3, Exp::Fin(1))]), 10);
        assert_eq!(m(&pre), vec![2, 3, 4]);
        assert!(pre.exhausted);
        assert_eq!(pre.to_string(), "S^1 --2--> S^1 --3--> S^1 --2--> S^1");
        let z = telescope_prefix(&BaerType::zero(), 3);
        assert!(z.is_empty() && z.exhausted);
    }

    #[test]
    fn exceptions_interleave_with_tail() {
        // k_2 = 0, k_3 = inf, others 1
        let pre = telescope_prefix(&t(Exp::Fin(1), &[(2, Exp::ZERO), (3, Exp::Inf)]), 6);
        assert_eq!(m(&pre), vec![3, 5, 7, 9, 11, 13]);
        assert_eq!(pre.to_string(), "S^1 --3--> S^1 --5--> S^1 --7--> S^1 --3--> S^1 --11--> S^1 --13--> ...");
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel_of_unit_inclusion(&t(Exp::ZERO, &[(3, Exp::Inf)])), GroupExpr::Prufer(3));
        assert_eq!(cokernel_of_unit_inclusion(&BaerType::zero()), GroupExpr::Trivial);
        assert_eq!(cokernel_of_unit_inclusion(&t(Exp::ZERO, &[(2, Exp::Fin(3))])).to_string(), "Z/8");
        assert_eq!(cokernel_of_unit_inclusion(&BaerType::rationals()).to_string(), "Sum_{p in P} Z(p^inf)");
        assert_eq!(
            cokernel_of_unit_inclusion(&t(Exp::Fin(1), &[(2, Exp::Inf)])).to_string(),
            "Z(2^inf) + Sum_{p in P\\{2}} Z/p"
        );
    }
}
