//! `G`-radicals `T_G N`, radical and quasi-radical predicates, and the
//! universal extension of `A` by copies of `G_ab`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::baer::{BaerType, Exp};
use crate::coeffs::derive_coeffs;
use crate::error::Error;
use crate::group::GroupExpr;
use crate::homalg::{ext, hom};
use crate::primes::PrimeSet;
use crate::verdict::{Answer, Verdict};

/// Number of image-sum iterations needed to reach the radical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stages {
    Finite(u32),
    /// The chain of image sums only stabilizes at the first infinite ordinal.
    Omega,
}

impl fmt::Display for Stages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stages::Finite(n) => write!(f, "{n}"),
            Stages::Omega => write!(f, "omega"),
        }
    }
}

impl Serialize for Stages {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Stages::Finite(n) => s.serialize_u32(*n),
            Stages::Omega => s.serialize_str("omega"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalResult {
    pub radical_subgroup: GroupExpr,
    /// `N / T_G N`.
    pub reduction: GroupExpr,
    pub stages: Stages,
}

/// Largest `q`-exponent among the finite summands of `h`, or `None` if `h`
/// has an infinite summand.
fn max_finite_exponent(h: &GroupExpr) -> Option<u32> {
    h.summands().iter().try_fold(0, |acc, s| match s {
        GroupExpr::Cyclic { k, .. } => Some(acc.max(*k)),
        _ => None,
    })
}

/// `T_G N` for a primitive `N`: all of `N` if some map `G -> N` is nonzero, else 0.
fn primitive_radical(gab: &GroupExpr, n: &GroupExpr) -> Result<(bool, Stages), Error> {
    let h = hom(gab, n)?.into_result()?;
    if h == GroupExpr::Trivial {
        return Ok((false, Stages::Finite(0)));
    }
    let stages = match n {
        // each pass kills the largest image, of order q^e with e the top exponent of Hom(G, Z/q^b)
        GroupExpr::Cyclic { k, .. } => {
            let e = max_finite_exponent(&h).expect("homs into a finite group form a finite group");
            Stages::Finite(k.div_ceil(e))
        }
        // proper subgroups of Z(q^inf) are finite with quotient Z(q^inf) again
        GroupExpr::Prufer(_) => match max_finite_exponent(&h) {
            Some(_) => Stages::Omega,
            None => Stages::Finite(1),
        },
        // the images x S_t over x in Hom(S_t, S_u) sum to S_u
        _ => Stages::Finite(1),
    };
    Ok((true, stages))
}

/// The smallest subgroup `T` of `N` with `Hom(G_ab, N/T) = 0`, computed summand by summand.
pub fn radical(g: &GroupExpr, n: &GroupExpr) -> Result<RadicalResult, Error> {
    g.require_fragment()?;
    n.require_abelian_fragment()?;
    let gab = g.abelianize();
    let mut rad = Vec::new();
    let mut red = Vec::new();
    let mut stages = Stages::Finite(0);
    for s in n.summands() {
        let (full, st) = primitive_radical(&gab, &s)?;
        stages = stages.max(st);
        if full {
            rad.push(s);
        } else {
            red.push(s);
        }
    }
    Ok(RadicalResult { radical_subgroup: GroupExpr::sum(rad), reduction: GroupExpr::sum(red), stages })
}

pub fn is_radical(g: &GroupExpr, n: &GroupExpr) -> Verdict {
    match radical(g, n) {
        Ok(r) => {
            let ans = Answer::from_bool(r.reduction == GroupExpr::Trivial);
            let mut v = Verdict::new(ans).cite("radical", "G-radical", ans);
            v.add_witness("radical", &r.radical_subgroup);
            v.add_witness("reduction", &r.reduction);
            v.add_witness("stages", r.stages);
            v
        }
        Err(e) => Verdict::unknown().cite("radical", "G-radical", Answer::Unknown).witness("unsupported", e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalExtension {
    /// `A`.
    pub base: GroupExpr,
    /// `Ext(G_ab, A)`, the index set of the summands of the quotient.
    pub index: GroupExpr,
    /// `(+)_{Ext(G_ab, A)} G_ab`.
    pub quotient: GroupExpr,
    /// The middle term `E`.
    pub total: GroupExpr,
    /// Whether `A` is `H`-radical; quasi-radicality is defined only in that case.
    pub h_radical: bool,
    /// A summand of `A` receiving no nonzero map from `H`, when `h_radical` fails.
    pub h_radical_failure: Option<GroupExpr>,
    /// Whether `E` is known to be `G_ab`-radical.
    pub total_radical: Answer,
}

/// Entries certified by worked examples: `(G_ab, A, answer, citation)`.
fn certified(gab: &GroupExpr, a: &GroupExpr) -> Option<(Answer, &'static str)> {
    let a = a.clone().normalize();
    match (gab, &a) {
        (GroupExpr::Prufer(p), GroupExpr::Cyclic { p: q, k: 1 }) if p == q => Some((Answer::Yes, "Remark 1.7")),
        (GroupExpr::RankOne(t), GroupExpr::Int) if *t == BaerType::constant(Exp::Fin(1)) => {
            Some((Answer::Yes, "Example 2.6"))
        }
        (GroupExpr::Sum(xs), GroupExpr::Int) => match xs.as_slice() {
            [GroupExpr::Cyclic { p, k: 1 }, GroupExpr::RankOne(t)]
                if *t == BaerType::subring(&PrimeSet::singleton(*p)) =>
            {
                Some((Answer::No, "Theorem 3.2"))
            }
            _ => None,
        },
        _ => None,
    }
}

pub fn universal_extension(g: &GroupExpr, a: &GroupExpr) -> Result<UniversalExtension, Error> {
    g.require_fragment()?;
    a.require_abelian_fragment()?;
    let gab = g.abelianize();
    let base = a.clone().normalize();
    let c = derive_coeffs(g)?;
    let hr = radical(&c.h, &base)?;
    let h_radical_failure = hr.reduction.summands().into_iter().next();
    let index = ext(&gab, &base)?.into_result()?;
    let trivial = index == GroupExpr::Trivial;
    let (quotient, total) = if trivial {
        (GroupExpr::Trivial, base.clone())
    } else {
        (
            GroupExpr::FormalColimit {
                tag: "direct-sum".into(),
                index: Box::new(index.clone()),
                base: Box::new(gab.clone()),
            },
            GroupExpr::FormalColimit {
                tag: "universal-extension".into(),
                index: Box::new(index.clone()),
                base: Box::new(base.clone()),
            },
        )
    };
    let base_radical = is_radical(&gab, &base).answer;
    // an extension of G_ab-radical groups is G_ab-radical
    let total_radical = if trivial || base_radical == Answer::Yes {
        base_radical
    } else {
        certified(&gab, &base).map(|(ans, _)| ans).unwrap_or(Answer::Unknown)
    };
    Ok(UniversalExtension {
        base,
        index,
        quotient,
        total,
        h_radical: h_radical_failure.is_none(),
        h_radical_failure,
        total_radical,
    })
}

/// Whether `A` is quasi `G`-radical. Unknown unless a radical argument or a
/// certified worked example decides it.
pub fn is_quasi_radical(g: &GroupExpr, a: &GroupExpr) -> Result<Verdict, Error> {
    let ue = universal_extension(g, a)?;
    let gab = g.abelianize();
    let mut v = Verdict::unknown();
    v.add_witness("index", &ue.index);
    v.add_witness("h_radical", ue.h_radical);
    if let Some(f) = &ue.h_radical_failure {
        v.add_witness("h_radical_failure", f);
    }

    let rad = is_radical(&gab, &ue.base);
    if rad.is_yes() {
        v.answer = Answer::Yes;
        v.push("Q1", "Remark 1.7", Answer::Yes);
        v.add_witness("reason", "A is G_ab-radical");
        return Ok(v);
    }
    v.push("Q1", "Remark 1.7", Answer::Unknown);
    if ue.index == GroupExpr::Trivial {
        // E = A
        v.answer = rad.answer;
        v.push("Q2", "Definition 1.6", rad.answer);
        return Ok(v);
    }
    v.push("Q2", "Definition 1.6", Answer::Unknown);
    if let Some((ans, cite)) = certified(&gab, &ue.base) {
        v.answer = ans;
        v.push("Q3", cite, ans);
        if cite == "Theorem 3.2" {
            v.push("Q3", "Proposition K(A,2)", ans);
        }
        return Ok(v);
    }
    v.push("Q3", "Question 3.3", Answer::Unknown);
    Ok(v)
}

/// `hom(g_ab, reduction) = 0`, the defining property of the radical.
pub fn reduction_is_g_free(g: &GroupExpr, r: &RadicalResult) -> Result<bool, Error> {
    Ok(hom(&g.abelianize(), &r.reduction)?.into_result()? == GroupExpr::Trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn g(s: &str) -> GroupExpr {
        parse(s).unwrap()
    }

    #[test]
    fn radical_examples() {
        let r = radical(&g("Z(3^inf)"), &g("Z/3")).unwrap();
        assert_eq!((r.radical_subgroup, r.reduction), (GroupExpr::Trivial, g("Z/3")));
        let r = radical(&g("Z/2"), &g("Z/8")).unwrap();
        assert_eq!(r.radical_subgroup, g("Z/8"));
        assert_eq!(r.stages, Stages::Finite(3));
        let r = radical(&g("Z[1/5]"), &GroupExpr::Int).unwrap();
        assert_eq!(r.reduction, GroupExpr::Int);
        let r = radical(&g("Z/2 + Z/3"), &g("Z/6")).unwrap();
        assert_eq!(r.reduction, GroupExpr::Trivial);
        let r = radical(&g("Z/2"), &g("Z(2^inf)")).unwrap();
        assert_eq!((r.reduction, r.stages), (GroupExpr::Trivial, Stages::Omega));
    }

    #[test]
    fn radical_predicate() {
        assert!(is_radical(&g("Z/5"), &g("Z/125")).is_yes());
        assert!(is_radical(&g("Z(5^inf)"), &g("Z/5")).is_no());
        assert!(is_radical(&g("Z[1/5]"), &g("Z[1/5]")).is_yes());
    }

    #[test]
    fn universal_extensions() {
        let u = universal_extension(&g("Z/3"), &g("Q")).unwrap();
        assert_eq!((u.index.clone(), u.total.clone()), (GroupExpr::Trivial, g("Q")));
        assert!(!u.h_radical);
        let u = universal_extension(&g("type(1)"), &GroupExpr::Int).unwrap();
        assert_eq!(u.index.to_string(), "(Prod_{p in P} Z/p)/Z");
        assert!(matches!(u.total, GroupExpr::FormalColimit { .. }));
        assert_eq!(u.total_radical, Answer::Yes);
        let u = universal_extension(&g("Z/7 + Z"), &GroupExpr::Trivial).unwrap();
        assert_eq!((u.index, u.total), (GroupExpr::Trivial, GroupExpr::Trivial));
    }

    #[test]
    fn quasi_radical_cascade() {
        assert!(is_quasi_radical(&g("Z(3^inf)"), &g("Z/3")).unwrap().is_yes());
        assert!(is_quasi_radical(&g("Z/3"), &g("Z/3")).unwrap().is_yes());
        assert_eq!(is_quasi_radical(&g("Z(2^inf) + Z(3^inf)"), &GroupExpr::Int).unwrap().answer, Answer::Unknown);
        assert!(is_quasi_radical(&g("type(1)"), &GroupExpr::Int).unwrap().is_yes());
        let v = is_quasi_radical(&g("Z[1/2] * Z/2"), &GroupExpr::Int).unwrap();
        assert!(v.is_no() && v.cites("Theorem 3.2"));
    }
}
