//! Hom, tensor, Tor and Ext on the fragment: bilinear extension of a primitive
//! rule table shipped in `rules/bifunctor.rules`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use std::sync::LazyLock;

use crate::baer::{BaerType, Exp};
use crate::error::Error;
use crate::group::{GroupExpr, PrimeFamily};
use crate::primes::PrimeSet;

const RULES_SRC: &str = include_str!("../rules/bifunctor.rules");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hom,
    Tensor,
    Tor,
    Ext,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Hom, Kind::Tensor, Kind::Tor, Kind::Ext];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Hom => "hom",
            Kind::Tensor => "tensor",
            Kind::Tor => "tor",
            Kind::Ext => "ext",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind, Error> {
        match s {
            "hom" => Ok(Kind::Hom),
            "tensor" => Ok(Kind::Tensor),
            "tor" => Ok(Kind::Tor),
            "ext" => Ok(Kind::Ext),
            _ => Err(Error::Unsupported(format!("unknown bifunctor '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pat {
    Cyclic,
    Prufer,
    RankOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Guard {
    Always,
    SamePrime,
    OtherPrime,
    RhsInfAtP,
    RhsFinAtP,
    LhsInfAtQ,
    LhsFinAtQ,
    LhsFree,
    LhsNotFree,
    RhsFree,
    RhsDivisible,
    HomZero,
    HomNonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Template {
    Zero,
    CyclicMin,
    CyclicA,
    CyclicB,
    PruferP,
    PruferQ,
    PadicP,
    PadicFieldQ,
    TypeSum,
    TypeDiff,
    ExtQuotient,
}

/// One row of the primitive rule table.
#[derive(Clone, Debug)]
pub struct Rule {
    pub kind: Kind,
    pub line: usize,
    pub provenance: String,
    lhs: Pat,
    rhs: Pat,
    guard: Guard,
    result: Template,
}

impl Rule {
    pub fn is_verified(&self) -> bool {
        self.provenance.starts_with("verified")
    }
}

fn parse_rules(src: &str) -> Vec<Rule> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        assert_eq!(cols.len(), 6, "rule line {}: expected 6 columns", i + 1);
        let kind = Kind::from_str(cols[0]).unwrap_or_else(|_| panic!("rule line {}: bad kind", i + 1));
        let pat = |s: &str, side: &str| match (s, side) {
            ("Z/p^a", "l") | ("Z/q^b", "r") => Pat::Cyclic,
            ("Z(p^inf)", "l") | ("Z(q^inf)", "r") => Pat::Prufer,
            ("S(t)", "l") | ("S(u)", "r") => Pat::RankOne,
            _ => panic!("rule line {}: bad pattern '{s}'", i + 1),
        };
        let guard = match cols[3] {
            "*" => Guard::Always,
            "p=q" => Guard::SamePrime,
            "p!=q" => Guard::OtherPrime,
            "u_p=inf" => Guard::RhsInfAtP,
            "u_p<inf" => Guard::RhsFinAtP,
            "t_q=inf" => Guard::LhsInfAtQ,
            "t_q<inf" => Guard::LhsFinAtQ,
            "t free" => Guard::LhsFree,
            "t not free" => Guard::LhsNotFree,
            "u free" => Guard::RhsFree,
            "u divisible" => Guard::RhsDivisible,
            "hom(t,u)=0" => Guard::HomZero,
            "hom(t,u)!=0" => Guard::HomNonzero,
            g => panic!("rule line {}: bad guard '{g}'", i + 1),
        };
        let result = match cols[4] {
            "0" => Template::Zero,
            "Z/p^min(a,b)" => Template::CyclicMin,
            "Z/p^a" => Template::CyclicA,
            "Z/q^b" => Template::CyclicB,
            "Z(p^inf)" => Template::PruferP,
            "Z(q^inf)" => Template::PruferQ,
            "Zhat(p)" => Template::PadicP,
            "Qhat(q)" => Template::PadicFieldQ,
            "S(t+u)" => Template::TypeSum,
            "S(u-t)" => Template::TypeDiff,
            "ProdExt(t)/Z" => Template::ExtQuotient,
            r => panic!("rule line {}: bad result '{r}'", i + 1),
        };
        out.push(Rule {
            kind,
            line: i + 1,
            provenance: cols[5].to_string(),
            lhs: pat(cols[1], "l"),
            rhs: pat(cols[2], "r"),
            guard,
            result,
        });
    }
    out
}

static RULES: LazyLock<Vec<Rule>> = LazyLock::new(|| parse_rules(RULES_SRC));

pub fn rules() -> &'static [Rule] {
    &RULES
}

/// A primitive summand with its bound variables.
#[derive(Clone, Debug)]
enum Prim {
    Cyclic(u64, u32),
    Prufer(u64),
    RankOne(BaerType),
}

impl Prim {
    fn of(g: &GroupExpr) -> Prim {
        match g {
            GroupExpr::Int => Prim::RankOne(BaerType::zero()),
            GroupExpr::Cyclic { p, k } => Prim::Cyclic(*p, *k),
            GroupExpr::Prufer(p) => Prim::Prufer(*p),
            GroupExpr::RankOne(t) => Prim::RankOne(t.clone()),
            _ => unreachable!("not a primitive summand"),
        }
    }

    fn pat(&self) -> Pat {
        match self {
            Prim::Cyclic(..) => Pat::Cyclic,
            Prim::Prufer(_) => Pat::Prufer,
            Prim::RankOne(_) => Pat::RankOne,
        }
    }

    fn prime(&self) -> Option<u64> {
        match self {
            Prim::Cyclic(p, _) | Prim::Prufer(p) => Some(*p),
            Prim::RankOne(_) => None,
        }
    }

    fn exp(&self) -> u32 {
        match self {
            Prim::Cyclic(_, k) => *k,
            _ => 0,
        }
    }

    fn ty(&self) -> Option<&BaerType> {
        match self {
            Prim::RankOne(t) => Some(t),
            _ => None,
        }
    }
}

/// Whether `Hom(S_t, S_u)` vanishes.
fn rank_one_hom_vanishes(t: &BaerType, u: &BaerType) -> bool {
    if !t.infinite_primes().difference(&u.infinite_primes()).is_empty() {
        return true;
    }
    matches!((t.tail(), u.tail()), (Exp::Fin(a), Exp::Fin(b)) if a > b)
}

/// Type of `Hom(S_t, S_u)` when it is nonzero: infinite where `u` is, else `max(u_p - t_p, 0)`.
fn rank_one_hom_type(t: &BaerType, u: &BaerType) -> BaerType {
    let diff = |a: Exp, b: Exp| match (a, b) {
        (_, Exp::Inf) => Exp::Inf,
        (Exp::Fin(a), Exp::Fin(b)) => Exp::Fin(b.saturating_sub(a)),
        (Exp::Inf, Exp::Fin(_)) => unreachable!("vanishing case"),
    };
    let keys = t.exception_union(u);
    let ex: Vec<_> = keys.into_iter().map(|p| (p, diff(t.value_at(p), u.value_at(p)))).collect();
    BaerType::new(diff(t.tail(), u.tail()), ex).expect("primes already validated")
}

/// `Prod_{k_p = inf} Zhat(p) x Prod_{0 < k_p < inf} Z/p^{k_p}`, which is `Ext(S_t/Z, Z)`.
fn ext_product(t: &BaerType) -> GroupExpr {
    let mut parts = Vec::new();
    for (&p, &k) in t.exceptions() {
        match k {
            Exp::Inf => parts.push(GroupExpr::Padic(p)),
            Exp::Fin(0) => {}
            Exp::Fin(k) => parts.push(GroupExpr::Cyclic { p, k }),
        }
    }
    let rest = PrimeSet::all_except(t.exceptions().keys().copied());
    match t.tail() {
        Exp::Fin(0) => {}
        Exp::Fin(k) => parts.push(GroupExpr::FormalProduct { factor: PrimeFamily::Cyclic(k), primes: rest }),
        Exp::Inf => parts.push(GroupExpr::FormalProduct { factor: PrimeFamily::Padic, primes: rest }),
    }
    GroupExpr::sum(parts)
}

fn guard_holds(g: Guard, l: &Prim, r: &Prim) -> bool {
    match g {
        Guard::Always => true,
        Guard::SamePrime => l.prime() == r.prime(),
        Guard::OtherPrime => l.prime() != r.prime(),
        Guard::RhsInfAtP => r.ty().unwrap().value_at(l.prime().unwrap()).is_inf(),
        Guard::RhsFinAtP => !r.ty().unwrap().value_at(l.prime().unwrap()).is_inf(),
        Guard::LhsInfAtQ => l.ty().unwrap().value_at(r.prime().unwrap()).is_inf(),
        Guard::LhsFinAtQ => !l.ty().unwrap().value_at(r.prime().unwrap()).is_inf(),
        Guard::LhsFree => l.ty().unwrap().is_free(),
        Guard::LhsNotFree => !l.ty().unwrap().is_free(),
        Guard::RhsFree => r.ty().unwrap().is_free(),
        Guard::RhsDivisible => r.ty().unwrap().is_divisible(),
        Guard::HomZero => rank_one_hom_vanishes(l.ty().unwrap(), r.ty().unwrap()),
        Guard::HomNonzero => !rank_one_hom_vanishes(l.ty().unwrap(), r.ty().unwrap()),
    }
}

fn instantiate(t: Template, l: &Prim, r: &Prim) -> GroupExpr {
    let (p, q) = (l.prime(), r.prime());
    match t {
        Template::Zero => GroupExpr::Trivial,
        Template::CyclicMin => GroupExpr::Cyclic { p: p.unwrap(), k: l.exp().min(r.exp()) },
        Template::CyclicA => GroupExpr::Cyclic { p: p.unwrap(), k: l.exp() },
        Template::CyclicB => GroupExpr::Cyclic { p: q.unwrap(), k: r.exp() },
        Template::PruferP => GroupExpr::Prufer(p.unwrap()),
        Template::PruferQ => GroupExpr::Prufer(q.unwrap()),
        Template::PadicP => GroupExpr::Padic(p.unwrap()),
        Template::PadicFieldQ => GroupExpr::PadicField(q.unwrap()),
        Template::TypeSum => GroupExpr::rank_one(l.ty().unwrap().add(r.ty().unwrap())),
        Template::TypeDiff => GroupExpr::rank_one(rank_one_hom_type(l.ty().unwrap(), r.ty().unwrap())),
        Template::ExtQuotient => {
            GroupExpr::FormalQuotient { num: Box::new(ext_product(l.ty().unwrap())), den: Box::new(GroupExpr::Int) }
                .normalize()
        }
    }
}

fn lookup(kind: Kind, l: &Prim, r: &Prim) -> Option<&'static Rule> {
    rules()
        .iter()
        .find(|rule| rule.kind == kind && rule.lhs == l.pat() && rule.rhs == r.pat() && guard_holds(rule.guard, l, r))
}

/// Result of a bifunctor evaluation. `Unsupported` is an ordinary value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Outcome {
    Group(GroupExpr),
    Unsupported(String),
}

impl Outcome {
    pub fn group(&self) -> Option<&GroupExpr> {
        match self {
            Outcome::Group(g) => Some(g),
            Outcome::Unsupported(_) => None,
        }
    }

    pub fn into_result(self) -> Result<GroupExpr, Error> {
        match self {
            Outcome::Group(g) => Ok(g),
            Outcome::Unsupported(m) => Err(Error::Unsupported(m)),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Group(g) => write!(f, "{g}"),
            Outcome::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

/// A bifunctor value together with the rule rows that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub outcome: Outcome,
    /// True when every row used is checked against the finite oracle.
    pub verified: bool,
    /// `(line, provenance)` of each distinct row used, in order of first use.
    pub rules: Vec<(usize, String)>,
}

pub fn evaluate(kind: Kind, a: &GroupExpr, b: &GroupExpr) -> Result<Evaluation, Error> {
    a.require_abelian_fragment()?;
    b.require_abelian_fragment()?;
    let mut parts = Vec::new();
    let mut used: Vec<&'static Rule> = Vec::new();
    for x in a.summands() {
        let l = Prim::of(&x);
        for y in b.summands() {
            let r = Prim::of(&y);
            let Some(rule) = lookup(kind, &l, &r) else {
                return Ok(Evaluation {
                    outcome: Outcome::Unsupported(format!("{kind}({x}, {y}) is outside the rule table")),
                    verified: false,
                    rules: used.iter().map(|r| (r.line, r.provenance.clone())).collect(),
                });
            };
            if !used.iter().any(|u| u.line == rule.line) {
                used.push(rule);
            }
            parts.push(instantiate(rule.result, &l, &r));
        }
    }
    Ok(Evaluation {
        outcome: Outcome::Group(GroupExpr::sum(parts)),
        verified: used.iter().all(|r| r.is_verified()),
        rules: used.iter().map(|r| (r.line, r.provenance.clone())).collect(),
    })
}

/// `kind(a, b)` by bilinearity over direct sums and the primitive rule table.
pub fn bifunctor(kind: Kind, a: &GroupExpr, b: &GroupExpr) -> Result<Outcome, Error> {
    Ok(evaluate(kind, a, b)?.outcome)
}

pub fn hom(a: &GroupExpr, b: &GroupExpr) -> Result<Outcome, Error> {
    bifunctor(Kind::Hom, a, b)
}

pub fn ext(a: &GroupExpr, b: &GroupExpr) -> Result<Outcome, Error> {
    bifunctor(Kind::Ext, a, b)
}

pub fn tensor(a: &GroupExpr, b: &GroupExpr) -> Result<Outcome, Error> {
    bifunctor(Kind::Tensor, a, b)
}

pub fn tor(a: &GroupExpr, b: &GroupExpr) -> Result<Outcome, Error> {
    bifunctor(Kind::Tor, a, b)
}

/// `hom(a, b) = 0`; `None` when unsupported.
pub fn hom_vanishes(a: &GroupExpr, b: &GroupExpr) -> Result<Option<bool>, Error> {
    Ok(hom(a, b)?.group().map(|g| *g == GroupExpr::Trivial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn run(kind: Kind, a: &str, b: &str) -> String {
        bifunctor(kind, &parse(a).unwrap(), &parse(b).unwrap()).unwrap().to_string()
    }

    #[test]
    fn table_loads_and_is_total_for_tensor_and_tor() {
        assert!(rules().len() > 40);
        let samples = ["Z/2", "Z/4", "Z/3", "Z(2^inf)", "Z(3^inf)", "Z", "Q", "Z[1/2]", "type(1)", "type(1; 2:inf)"];
        for kind in [Kind::Tensor, Kind::Tor, Kind::Hom] {
            for a in samples {
                for b in samples {
                    let out = bifunctor(kind, &parse(a).unwrap(), &parse(b).unwrap()).unwrap();
                    assert!(out.group().is_some(), "{kind}({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn hom_from_integers_is_identity() {
        for a in ["Z/12", "Z(5^inf)", "Q", "Z[1/2,3]", "type(2; 3:inf)", "Z + Z/2"] {
            assert_eq!(run(Kind::Hom, "Z", a), parse(a).unwrap().normalize().to_string());
        }
    }

    #[test]
    fn named_values() {
        assert_eq!(run(Kind::Ext, "type(1)", "Z"), "(Prod_{p in P} Z/p)/Z");
        assert_eq!(run(Kind::Ext, "Q", "Z"), "(Prod_{p in P} Zhat(p))/Z");
        assert_eq!(run(Kind::Ext, "Z[1/3]", "Z"), "Zhat(3)/Z");
        assert_eq!(run(Kind::Ext, "Z/8", "Z/4"), "Z/4");
        assert_eq!(run(Kind::Tensor, "Z/3", "Z[1/3]"), "0");
        assert_eq!(run(Kind::Ext, "Z(2^inf)", "Z"), "Zhat(2)");
        assert_eq!(run(Kind::Hom, "Z(2^inf)", "Z(2^inf)"), "Zhat(2)");
        assert_eq!(run(Kind::Hom, "Z[1/2]", "Z(2^inf)"), "Qhat(2)");
        assert_eq!(run(Kind::Ext, "Z/2", "Q"), "0");
        assert_eq!(run(Kind::Tor, "Z(2^inf)", "Z/4 + Z/3"), "Z/4");
        assert_eq!(run(Kind::Tensor, "Z[1/2]", "Z[1/3]"), "Z[1/2,3]");
    }

    #[test]
    fn rank_one_homs() {
        assert_eq!(run(Kind::Hom, "Z[1/2]", "Z"), "0");
        assert_eq!(run(Kind::Hom, "Z[1/2]", "Q"), "Q");
        assert_eq!(run(Kind::Hom, "Z[1/2]", "Z[1/2,3]"), "Z[1/2,3]");
        assert_eq!(run(Kind::Hom, "type(1)", "type(0)"), "0");
        assert_eq!(run(Kind::Hom, "type(1)", "type(2)"), "type(1)");
        assert_eq!(run(Kind::Hom, "type(0; 2:3)", "Z"), "Z");
        assert_eq!(run(Kind::Hom, "Q", "Z[1/2]"), "0");
    }

    #[test]
    fn unsupported_is_a_value() {
        let out = ext(&parse("type(1)").unwrap(), &parse("Z[1/2]").unwrap()).unwrap();
        assert!(matches!(out, Outcome::Unsupported(_)));
        assert!(ext(&GroupExpr::Padic(2), &GroupExpr::Int).is_err());
    }

    #[test]
    fn verified_flag_tracks_provenance() {
        let e = evaluate(Kind::Hom, &parse("Z/4").unwrap(), &parse("Z/2 + Z/3").unwrap()).unwrap();
        assert!(e.verified);
        let e = evaluate(Kind::Ext, &parse("type(1)").unwrap(), &GroupExpr::Int).unwrap();
        assert!(!e.verified);
    }
}
