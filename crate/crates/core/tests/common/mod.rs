#![allow(dead_code)]

use moorecell::space::SpaceDesc;
use moorecell::{BaerType, Exp, GroupExpr};
use proptest::prelude::*;

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

pub fn exp(max: u32) -> impl Strategy<Value = Exp> {
    prop_oneof![4 => (0..=max).prop_map(Exp::Fin), 1 => Just(Exp::Inf)]
}

/// Eventually constant types with a few exceptional primes.
pub fn baer_type() -> impl Strategy<Value = BaerType> {
    (exp(2), prop::collection::vec((prime(), exp(6)), 0..4))
        .prop_map(|(tail, ex)| BaerType::new(tail, ex).expect("primes"))
}

pub fn primitive() -> impl Strategy<Value = GroupExpr> {
    prop_oneof![
        Just(GroupExpr::Trivial),
        Just(GroupExpr::Int),
        (prime(), 1..4u32).prop_map(|(p, k)| GroupExpr::Cyclic { p, k }),
        prime().prop_map(GroupExpr::Prufer),
        baer_type().prop_map(GroupExpr::rank_one),
        (2..60u64).prop_map(GroupExpr::cyclic),
    ]
}

/// Abelian fragment expressions, possibly nested and unnormalized.
pub fn abelian() -> impl Strategy<Value = GroupExpr> {
    primitive().prop_recursive(2, 8, 3, |inner| prop::collection::vec(inner, 2..4).prop_map(GroupExpr::Sum))
}

/// Fragment expressions, free products only at the outermost level.
pub fn fragment() -> impl Strategy<Value = GroupExpr> {
    prop_oneof![4 => abelian(), 1 => prop::collection::vec(abelian(), 2..4).prop_map(GroupExpr::FreeProduct)]
}

/// Groups admitting a two-dimensional recipe, the `G` of a model `M(G,1)`.
pub fn model_group() -> impl Strategy<Value = GroupExpr> {
    let single = prop_oneof![
        Just(GroupExpr::Int),
        (prime(), 1..4u32).prop_map(|(p, k)| GroupExpr::Cyclic { p, k }),
        prime().prop_map(GroupExpr::Prufer),
        baer_type().prop_map(GroupExpr::rank_one),
        (2..60u64).prop_map(GroupExpr::cyclic),
        (prime(), prime(), 1..3u32)
            .prop_map(|(p, q, k)| GroupExpr::sum([GroupExpr::Prufer(p), GroupExpr::Cyclic { p: q, k }])),
    ];
    prop_oneof![4 => single.clone(), 1 => prop::collection::vec(single, 2..3).prop_map(GroupExpr::FreeProduct)]
}

fn homology() -> impl Strategy<Value = Vec<GroupExpr>> {
    prop::collection::vec(abelian(), 1..4)
}

pub fn space() -> impl Strategy<Value = SpaceDesc> {
    let leaf = prop_oneof![
        Just(SpaceDesc::Point),
        (1..5u32).prop_map(SpaceDesc::Sphere),
        (abelian(), 1..4u32).prop_map(|(group, n)| SpaceDesc::EM { group, n }),
        fragment().prop_map(|group| SpaceDesc::EM { group, n: 1 }),
        (abelian(), 2..4u32).prop_map(|(group, n)| SpaceDesc::MooreSpace { group, n }),
        (homology(), prop::option::of(abelian()), any::<bool>()).prop_map(|(h, pi2, nilp)| SpaceDesc::Generic {
            pi1: GroupExpr::Trivial,
            simply_connected: true,
            nilpotent: nilp,
            homology: std::iter::once(GroupExpr::Trivial).chain(h).collect(),
            pi2,
        }),
        (fragment(), homology(), any::<bool>()).prop_map(|(pi1, mut h, nilp)| {
            h[0] = pi1.abelianize();
            SpaceDesc::Generic { simply_connected: pi1.is_trivial(), pi1, nilpotent: nilp, homology: h, pi2: None }
        }),
    ];
    prop_oneof![5 => leaf.clone(), 1 => prop::collection::vec(leaf, 2..3).prop_map(SpaceDesc::Product)]
}

use moorecell::cellularity::full_cascade;
use moorecell::homalg::hom_vanishes;
use moorecell::moore::{moore_model, presentation_check, MooreModel};
use moorecell::parse;
use moorecell::primes::factorize;
use moorecell::radical::radical;
use moorecell::telescope::telescope_prefix;
use moorecell::verdict::Answer;
use moorecell::Error;
use proptest::test_runner::TestCaseError;

/// Display, parse and normalize commute, and normalization is idempotent.
pub fn check_round_trip(g: &GroupExpr) -> Result<(), TestCaseError> {
    let n = g.clone().normalize();
    prop_assert_eq!(n.clone().normalize(), n.clone());
    let reparsed = parse(&g.to_string()).map_err(|e| TestCaseError::fail(format!("{g}: {e}")))?;
    prop_assert_eq!(reparsed.normalize(), n.clone());
    let again = parse(&n.to_string()).map_err(|e| TestCaseError::fail(format!("{n}: {e}")))?;
    prop_assert_eq!(again.normalize().to_string(), n.to_string());
    Ok(())
}

/// `Z/n` reads as the sum of its primary components.
pub fn check_primary(n: u64) -> Result<(), TestCaseError> {
    let g = parse(&format!("Z/{n}")).map_err(|e| TestCaseError::fail(e.to_string()))?.normalize();
    let expected: Vec<GroupExpr> = factorize(n).into_iter().map(|(p, k)| GroupExpr::Cyclic { p, k }).collect();
    prop_assert_eq!(g.summands(), expected);
    Ok(())
}

/// `Hom(G_ab, N/T_G N) = 0` and `T_G T_G N = T_G N`, where supported.
pub fn check_radical(g: &GroupExpr, n: &GroupExpr) -> Result<bool, TestCaseError> {
    let r = match radical(g, n) {
        Ok(r) => r,
        Err(Error::Unsupported(_)) => return Ok(false),
        Err(e) => return Err(TestCaseError::fail(format!("radical({g}, {n}): {e}"))),
    };
    match hom_vanishes(&g.abelianize(), &r.reduction) {
        Ok(Some(z)) => prop_assert!(z, "Hom({}, {}) != 0", g, r.reduction),
        _ => return Ok(false),
    }
    let t = radical(g, &r.radical_subgroup).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&t.radical_subgroup, &r.radical_subgroup);
    prop_assert_eq!(t.reduction, GroupExpr::Trivial);
    Ok(true)
}

/// Prefix bookkeeping: `m_i = p_i^{v}` where `v` counts `p_i` among the first `i`
/// multipliers, `v <= k_p`, and every `p^j` with `j <= k_p <= 6` below the last
/// stage is reached. The truncated presentation is injective at every length.
pub fn check_telescope(t: &BaerType, n: usize) -> Result<(), TestCaseError> {
    use num_bigint::BigUint;
    let pre = telescope_prefix(t, n);
    prop_assert!(pre.len() == n || pre.exhausted);
    let mut counts = std::collections::BTreeMap::<u64, u32>::new();
    for (i, (&p, m)) in pre.multipliers.iter().zip(&pre.mseq).enumerate() {
        let v = counts.entry(p).or_insert(0);
        *v += 1;
        prop_assert_eq!(m, &BigUint::from(p).pow(*v), "stage {}", i);
        if let Exp::Fin(k) = t.value_at(p) {
            prop_assert!(*v <= k);
        }
        if i > 0 {
            prop_assert!(pre.mseq[i - 1] < *m);
        }
    }
    let last = pre.mseq.last().cloned();
    let product = pre.product();
    let mut candidates: Vec<u64> = PRIMES.to_vec();
    candidates.extend(t.exceptions().keys());
    for p in candidates {
        let Exp::Fin(k) = t.value_at(p) else { continue };
        if k > 6 {
            continue;
        }
        for j in 1..=k {
            let q = BigUint::from(p).pow(j);
            if pre.exhausted || last.as_ref().is_some_and(|l| q <= *l) {
                prop_assert!(&product % &q == BigUint::from(0u32), "{} not reached in {}", q, pre);
            }
        }
    }
    let model = moore_model(&GroupExpr::rank_one(t.clone())).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for len in 1..=n {
        match presentation_check(&model, len) {
            Ok(r) => prop_assert!(r.passed(), "truncation {} of {}", len, model),
            Err(Error::TruncationExceeded { available, .. }) => {
                prop_assert!(pre.exhausted && available == pre.len());
                break;
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
    Ok(())
}

/// No two applicable rules disagree, and the overlapping characterizations coincide.
pub fn check_coherence(m: &MooreModel, x: &SpaceDesc) -> Result<bool, TestCaseError> {
    let Ok(c) = full_cascade(m, x) else { return Ok(false) };
    prop_assert!(!c.conflict(), "{} on {}: {:?}", m, x, c.outcomes);
    for (a, b) in [("R1", "R3"), ("R2", "R4")] {
        if let (Some(u), Some(v)) = (c.answer_of(a), c.answer_of(b)) {
            if u != Answer::Unknown && v != Answer::Unknown {
                prop_assert_eq!(u, v, "{} vs {} for {} on {}", a, b, m, x);
            }
        }
    }
    Ok(true)
}
