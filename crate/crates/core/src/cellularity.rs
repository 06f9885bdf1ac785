//! Three-valued decisions of `M`-cellularity for a two-dimensional Moore
//! space `M = M(G,1)`, and symbolic cellularization on covered inputs.

use serde::Serialize;

use crate::baer::BaerType;
use crate::classify::classify;
use crate::coeffs::{derive_coeffs, hr_acyclic, CoeffSystem};
use crate::error::Error;
use crate::group::{GroupExpr, PrimeFamily};
use crate::homalg::tensor;
use crate::moore::{exists_moore, MooreModel};
use crate::primes::PrimeSet;
use crate::radical::{is_quasi_radical, is_radical, radical, universal_extension};
use crate::space::SpaceDesc;
use crate::verdict::{Answer, TrailEntry, Verdict};

/// Invariants of a space that the rules consult; `None` when not derivable.
#[derive(Clone, Debug)]
struct Facts {
    pi1: Option<GroupExpr>,
    simply_connected: Option<bool>,
    nilpotent: Option<bool>,
    pi2: Option<GroupExpr>,
    h2: Option<GroupExpr>,
    hr: Verdict,
}

struct Context {
    g: GroupExpr,
    gab: GroupExpr,
    c: CoeffSystem,
}

impl Context {
    fn new(m: &MooreModel) -> Result<Context, Error> {
        let g = m.group.clone().normalize();
        let gab = g.abelianize();
        let c = derive_coeffs(&g)?;
        Ok(Context { g, gab, c })
    }

    /// `J` when `G = Z[J^-1]`.
    fn subring(&self) -> Option<PrimeSet> {
        match &self.g {
            GroupExpr::Int => Some(PrimeSet::empty()),
            GroupExpr::RankOne(t) => t.subring_primes(),
            _ => None,
        }
    }

    fn is_rank_one(&self) -> bool {
        matches!(self.g, GroupExpr::Int | GroupExpr::RankOne(_))
    }

    fn is_torsion_abelian(&self) -> bool {
        !self.g.has_free_product() && classify(&self.g).is_ok_and(|r| r.is_torsion)
    }

    fn is_finite(&self) -> bool {
        !self.g.has_free_product() && self.g.finite_order().is_some()
    }

    /// `p` when `G = Z[1/p] * Z/p`.
    fn counterexample_prime(&self) -> Option<u64> {
        match &self.g {
            GroupExpr::FreeProduct(xs) => match xs.as_slice() {
                [GroupExpr::Cyclic { p, k: 1 }, GroupExpr::RankOne(t)]
                    if *t == BaerType::subring(&PrimeSet::singleton(*p)) =>
                {
                    Some(*p)
                }
                _ => None,
            },
            _ => None,
        }
    }
}

fn hr_of(groups: &[GroupExpr], c: &CoeffSystem) -> Result<Verdict, Error> {
    hr_acyclic(groups, c)
}

/// `H_2 K(A,1) = Lambda^2 A`, which for a sum of fragment summands is the sum of
/// pairwise tensor products.
fn h2_of_abelian_k1(a: &GroupExpr) -> Result<Option<GroupExpr>, Error> {
    let xs = a.summands();
    let mut parts = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            match tensor(&xs[i], &xs[j])?.into_result() {
                Ok(t) => parts.push(t),
                Err(_) => return Ok(None),
            }
        }
    }
    Ok(Some(GroupExpr::sum(parts).normalize()))
}

fn facts(x: &SpaceDesc, c: &CoeffSystem) -> Result<Facts, Error> {
    let z = GroupExpr::Trivial;
    Ok(match x {
        SpaceDesc::Point => Facts {
            pi1: Some(z.clone()),
            simply_connected: Some(true),
            nilpotent: Some(true),
            pi2: Some(z.clone()),
            h2: Some(z),
            hr: hr_of(&[], c)?,
        },
        SpaceDesc::Sphere(n) => {
            let mut h = vec![GroupExpr::Trivial; *n as usize];
            h[*n as usize - 1] = GroupExpr::Int;
            let deg2 = if *n == 2 { GroupExpr::Int } else { GroupExpr::Trivial };
            Facts {
                pi1: Some(if *n == 1 { GroupExpr::Int } else { GroupExpr::Trivial }),
                simply_connected: Some(*n >= 2),
                nilpotent: Some(true),
                pi2: Some(deg2.clone()),
                h2: Some(deg2),
                hr: hr_of(&h, c)?,
            }
        }
        SpaceDesc::EM { group, n: 1 } => {
            group.require_fragment()?;
            let a = group.clone().normalize();
            let (hr, h2, nilpotent) = match &a {
                GroupExpr::FreeProduct(fs) => {
                    let mut hr = Verdict::new(Answer::Yes);
                    let mut h2 = Some(Vec::new());
                    for f in fs {
                        let v = hr_of(std::slice::from_ref(f), c)?;
                        if v.answer != Answer::Yes {
                            hr = v;
                        }
                        h2 = match (h2, h2_of_abelian_k1(f)?) {
                            (Some(mut acc), Some(x)) => {
                                acc.push(x);
                                Some(acc)
                            }
                            _ => None,
                        };
                    }
                    (hr, h2.map(|v| GroupExpr::sum(v).normalize()), false)
                }
                _ => (hr_of(std::slice::from_ref(&a), c)?, h2_of_abelian_k1(&a)?, true),
            };
            Facts {
                simply_connected: Some(a == GroupExpr::Trivial),
                pi1: Some(a),
                nilpotent: Some(nilpotent),
                pi2: Some(GroupExpr::Trivial),
                h2,
                hr,
            }
        }
        SpaceDesc::EM { group, n } => {
            group.require_abelian_fragment()?;
            let a = group.clone().normalize();
            let deg2 = if *n == 2 { a.clone() } else { GroupExpr::Trivial };
            Facts {
                pi1: Some(GroupExpr::Trivial),
                simply_connected: Some(true),
                nilpotent: Some(true),
                pi2: Some(deg2.clone()),
                h2: Some(deg2),
                hr: hr_of(&[a], c)?,
            }
        }
        SpaceDesc::MooreSpace { group, n } => {
            group.require_fragment()?;
            let g = group.clone().normalize();
            if *n == 1 {
                if !exists_moore(&g)?.is_yes() {
                    return Err(Error::NoMooreSpace(g.to_string()));
                }
                let trivial = g == GroupExpr::Trivial;
                Facts {
                    hr: hr_of(&[g.abelianize()], c)?,
                    pi1: Some(g),
                    simply_connected: Some(trivial),
                    nilpotent: trivial.then_some(true),
                    pi2: trivial.then_some(GroupExpr::Trivial),
                    h2: Some(GroupExpr::Trivial),
                }
            } else {
                g.require_abelian_fragment()?;
                let mut h = vec![GroupExpr::Trivial; *n as usize];
                h[*n as usize - 1] = g.clone();
                let deg2 = if *n == 2 { g } else { GroupExpr::Trivial };
                Facts {
                    pi1: Some(GroupExpr::Trivial),
                    simply_connected: Some(true),
                    nilpotent: Some(true),
                    pi2: Some(deg2.clone()),
                    h2: Some(deg2),
                    hr: hr_of(&h, c)?,
                }
            }
        }
        SpaceDesc::Generic { pi1, simply_connected, nilpotent, homology, pi2 } => {
            pi1.require_fragment()?;
            for h in homology.iter().chain(pi2) {
                h.require_abelian_fragment()?;
            }
            Facts {
                pi1: Some(pi1.clone().normalize()),
                simply_connected: Some(*simply_connected),
                nilpotent: Some(*nilpotent),
                pi2: pi2.clone().map(GroupExpr::normalize),
                h2: homology.get(1).cloned().map(GroupExpr::normalize).or(Some(GroupExpr::Trivial)),
                hr: hr_of(homology, c)?,
            }
        }
        SpaceDesc::Product(xs) => {
            let fs: Vec<Facts> = xs.iter().map(|x| facts(x, c)).collect::<Result<_, _>>()?;
            let abelian_sum = |get: fn(&Facts) -> Option<GroupExpr>| -> Option<GroupExpr> {
                let parts: Option<Vec<GroupExpr>> = fs.iter().map(get).collect();
                parts.filter(|ps| ps.iter().all(|p| !p.has_free_product())).map(|ps| GroupExpr::sum(ps).normalize())
            };
            let all = |get: fn(&Facts) -> Option<bool>| -> Option<bool> {
                fs.iter().map(get).try_fold(true, |acc, b| b.map(|b| acc && b))
            };
            let mut hr = Verdict::new(Answer::Yes);
            for f in &fs {
                if f.hr.answer != Answer::Yes && hr.answer != Answer::No {
                    hr = f.hr.clone();
                }
            }
            Facts {
                pi1: abelian_sum(|f| f.pi1.clone()),
                simply_connected: all(|f| f.simply_connected),
                nilpotent: all(|f| f.nilpotent),
                pi2: abelian_sum(|f| f.pi2.clone()),
                h2: None,
                hr,
            }
        }
        SpaceDesc::TwoStage { pi1, pi2 } => {
            pi1.require_abelian_fragment()?;
            pi2.require_abelian_fragment()?;
            // acyclic base and fibre give an acyclic total space
            let h1 = hr_of(std::slice::from_ref(pi1), c)?;
            let hr = if h1.is_yes() && hr_of(std::slice::from_ref(pi2), c)?.is_yes() { h1 } else { Verdict::unknown() };
            Facts {
                simply_connected: Some(pi1.is_trivial()),
                pi1: Some(pi1.clone()),
                nilpotent: None,
                pi2: Some(pi2.clone()),
                h2: None,
                hr,
            }
        }
        SpaceDesc::FormalFiber { .. } | SpaceDesc::Completion { .. } => {
            return Err(Error::Unsupported(format!("no invariants are derivable for {x}")));
        }
    })
}

/// Conservative `G`-cellularity of `pi_1`: Yes for recorded constructions,
/// No when an abelian `pi_1` is not `G_ab`-radical, Unknown otherwise.
fn pi1_cellular(ctx: &Context, pi1: &Option<GroupExpr>) -> (Answer, String) {
    let Some(n) = pi1 else {
        return (Answer::Unknown, "pi1 not derivable".into());
    };
    if *n == GroupExpr::Trivial {
        return (Answer::Yes, "trivial".into());
    }
    if ctx.g == GroupExpr::Int {
        return (Answer::Yes, "every group is Z-cellular".into());
    }
    if *n == ctx.g {
        return (Answer::Yes, "pi1 = G".into());
    }
    if let GroupExpr::FreeProduct(fs) = n {
        if fs.iter().all(|f| *f == ctx.g) {
            return (Answer::Yes, "free product of copies of G".into());
        }
    }
    if !n.has_free_product() {
        let v = is_radical(&ctx.gab, n);
        if v.is_no() {
            return (Answer::No, format!("pi1 has nonzero G-reduction {}", v.witnesses["reduction"]));
        }
    }
    (Answer::Unknown, "no recorded construction from G".into())
}

/// Whether `pi_1` is generated by elements of order `p^l` with `l <= k_p`,
/// decided on the abelianization, which is exact for free products of abelian groups.
fn generated_by_bounded_orders(ctx: &Context, pi1: &Option<GroupExpr>) -> Result<(Answer, String), Error> {
    let Some(n) = pi1 else {
        return Ok((Answer::Unknown, "pi1 not derivable".into()));
    };
    let report = classify(&ctx.g)?;
    for s in n.abelianize().summands() {
        let ok = match &s {
            GroupExpr::Cyclic { p, k } => report.exponent_at(*p) >= crate::baer::Exp::Fin(*k),
            _ => false,
        };
        if !ok {
            return Ok((Answer::No, format!("summand {s} of pi1 is not generated by elements of the allowed orders")));
        }
    }
    Ok((Answer::Yes, "generated by elements of the allowed orders".into()))
}

/// One rule's contribution to the cascade.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOutcome {
    pub rule: String,
    pub citation: String,
    /// Full characterizations may answer No; partial rules only Yes.
    pub full: bool,
    pub answer: Answer,
    pub notes: Vec<(String, String)>,
    pub sub_trail: Vec<TrailEntry>,
}

impl RuleOutcome {
    fn new(rule: &str, citation: &str, full: bool, answer: Answer) -> RuleOutcome {
        RuleOutcome {
            rule: rule.into(),
            citation: citation.into(),
            full,
            answer,
            notes: Vec::new(),
            sub_trail: Vec::new(),
        }
    }

    fn note(mut self, k: &str, v: impl ToString) -> RuleOutcome {
        self.notes.push((k.into(), v.to_string()));
        self
    }
}

/// Every applicable rule evaluated, in priority order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cascade {
    pub outcomes: Vec<RuleOutcome>,
    pub context: Vec<(String, String)>,
}

impl Cascade {
    /// The first full rule with a known answer decides; otherwise a partial Yes.
    pub fn decision(&self) -> Option<&RuleOutcome> {
        self.outcomes
            .iter()
            .find(|o| o.full && o.answer.is_known())
            .or_else(|| self.outcomes.iter().find(|o| !o.full && o.answer == Answer::Yes))
    }

    /// Two applicable rules returned opposite known answers.
    pub fn conflict(&self) -> bool {
        let yes = self.outcomes.iter().any(|o| o.answer == Answer::Yes);
        let no = self.outcomes.iter().any(|o| o.answer == Answer::No);
        yes && no
    }

    pub fn answer_of(&self, rule: &str) -> Option<Answer> {
        self.outcomes.iter().find(|o| o.rule == rule).map(|o| o.answer)
    }

    pub fn verdict(&self) -> Verdict {
        let mut v = Verdict::unknown();
        for o in &self.outcomes {
            v.push(&o.rule, &o.citation, o.answer);
            for e in &o.sub_trail {
                v.trail.push(TrailEntry { rule: format!("{}/{}", o.rule, e.rule), ..e.clone() });
            }
            for (k, w) in &o.notes {
                v.add_witness(&format!("{}.{k}", o.rule), w);
            }
        }
        for (k, w) in &self.context {
            v.add_witness(k, w);
        }
        if let Some(d) = self.decision() {
            v.answer = d.answer;
            v.add_witness("decided_by", &d.rule);
        }
        if self.conflict() {
            v.add_witness("conflict", "true");
        }
        v
    }
}

fn prod_padic_over_z(j: &PrimeSet) -> GroupExpr {
    GroupExpr::FormalQuotient {
        num: Box::new(GroupExpr::FormalProduct { factor: PrimeFamily::Padic, primes: j.clone() }),
        den: Box::new(GroupExpr::Int),
    }
    .normalize()
}

/// `CW_M K(Z,2)` for `G = Z[1/p] * Z/p`.
fn counterexample_output(p: u64) -> SpaceDesc {
    let quotient = GroupExpr::FormalQuotient { num: Box::new(GroupExpr::Padic(p)), den: Box::new(GroupExpr::Int) };
    SpaceDesc::EM { group: GroupExpr::sum([quotient, GroupExpr::Cyclic { p, k: 1 }]).normalize(), n: 1 }
}

fn rationals_sphere_output() -> SpaceDesc {
    let g = prod_padic_over_z(&PrimeSet::all());
    SpaceDesc::TwoStage { pi1: g.clone(), pi2: g }
}

/// Spaces produced by the cellularization goldens; each is `M`-cellular.
fn certified_output(ctx: &Context, x: &SpaceDesc) -> Option<&'static str> {
    if let Some(p) = ctx.counterexample_prime() {
        if *x == counterexample_output(p) {
            return Some("Theorem 3.2");
        }
    }
    let j = ctx.subring().filter(|j| !j.is_empty())?;
    if let (Some(ps), SpaceDesc::EM { group: GroupExpr::PadicField(p), n: 1 }) = (j.members(), x) {
        if ps.len() == 1 && ps.contains(p) {
            return Some("Example 2.8");
        }
    }
    if *x == (SpaceDesc::EM { group: prod_padic_over_z(&j), n: 1 }) {
        return Some("Proposition 2.9");
    }
    if j.is_all() && *x == rationals_sphere_output() {
        return Some("Example 2.7");
    }
    if let SpaceDesc::FormalFiber { source, target } = x {
        if **target == (SpaceDesc::Completion { space: source.clone(), primes: j }) {
            return Some("Proposition 2.9");
        }
    }
    None
}

fn run_cascade(ctx: &Context, x: &SpaceDesc) -> Result<Cascade, Error> {
    let mut outcomes = Vec::new();
    let mut context = vec![("R".to_string(), ctx.c.r.to_string()), ("J".to_string(), ctx.c.j.index_symbol())];
    if *x == SpaceDesc::Point {
        outcomes
            .push(RuleOutcome::new("R0", "Engine", true, Answer::Yes).note("reason", "the point is the empty colimit"));
    }
    if let Some(cite) = certified_output(ctx, x) {
        outcomes.push(
            RuleOutcome::new("Rcert", cite, true, Answer::Yes).note("reason", "output of a recorded cellularization"),
        );
        return Ok(Cascade { outcomes, context });
    }
    for g in x.groups() {
        g.require_fragment()?;
    }
    let f = facts(x, &ctx.c)?;
    let hr = f.hr.answer;
    let (pc, pc_reason) = pi1_cellular(ctx, &f.pi1);
    context.push(("hr_acyclic".into(), hr.to_string()));
    context.push(("pi1_cellular".into(), format!("{pc} ({pc_reason})")));
    for (k, w) in &f.hr.witnesses {
        if k != "R" {
            context.push((format!("hr.{k}"), w.clone()));
        }
    }
    let sc = f.simply_connected == Some(true);

    if let Some(j) = ctx.subring() {
        outcomes.push(
            RuleOutcome::new("R1", "Theorem 2.8", true, pc.and(hr))
                .note("J", j.index_symbol())
                .note("pi1_cellular", &pc_reason),
        );
    }
    if ctx.is_finite() {
        let (gen, why) = generated_by_bounded_orders(ctx, &f.pi1)?;
        outcomes.push(RuleOutcome::new("R2", "Theorem 2.10", true, gen.and(hr)).note("pi1_generated", why));
    }
    if sc && ctx.is_rank_one() {
        outcomes.push(RuleOutcome::new("R3", "Theorem 2.5", true, hr));
    }
    if sc && ctx.is_torsion_abelian() {
        let cite = if matches!(ctx.g, GroupExpr::Prufer(_)) { "Theorem 2.12" } else { "Theorem 2.14" };
        outcomes.push(RuleOutcome::new("R4", cite, true, hr));
    }
    if let (true, Some(a), Answer::Yes) = (sc, &f.pi2, hr) {
        let cite = if matches!(x, SpaceDesc::EM { n: 2, .. }) { "Proposition K(A,2)" } else { "Corollary 1.9" };
        let q = is_quasi_radical(&ctx.g, a)?;
        let mut o = RuleOutcome::new("R5", cite, true, q.answer).note("pi2", a);
        o.sub_trail = q.trail.clone();
        outcomes.push(o);
    }
    if let Some(h2) = &f.h2 {
        if is_radical(&ctx.gab, h2).is_yes() {
            let ans = if pc.and(hr) == Answer::Yes { Answer::Yes } else { Answer::Unknown };
            outcomes.push(RuleOutcome::new("R6", "Theorem 1.8", false, ans).note("H2", h2));
        }
    }
    if let Some(a) = &f.pi2 {
        let both = pc.and(hr) == Answer::Yes;
        if is_radical(&ctx.gab, a).is_yes() {
            let ans = if both { Answer::Yes } else { Answer::Unknown };
            outcomes.push(RuleOutcome::new("R7", "Corollary 1.10", false, ans).note("pi2", a));
        } else if hr == Answer::Yes && is_quasi_radical(&ctx.g, a)?.is_yes() {
            let ans = if both { Answer::Yes } else { Answer::Unknown };
            outcomes.push(RuleOutcome::new("R7", "Proposition 1.11", false, ans).note("pi2", a));
        }
    }
    let cond3 = match (&f.h2, sc) {
        (Some(h2), true) => universal_extension(&ctx.g, h2)?.total_radical,
        _ => Answer::Unknown,
    };
    outcomes.push(RuleOutcome::new("R8", "Theorem 1.5", true, pc.and(hr).and(cond3)).note("E_radical", cond3));
    Ok(Cascade { outcomes, context })
}

/// Every applicable rule on `(m, x)`, without stopping at the first decision.
pub fn full_cascade(m: &MooreModel, x: &SpaceDesc) -> Result<Cascade, Error> {
    let ctx = Context::new(m)?;
    run_cascade(&ctx, &x.clone().normalize())
}

/// Whether `x` is `M`-cellular.
pub fn is_cellular(m: &MooreModel, x: &SpaceDesc) -> Result<Verdict, Error> {
    let cascade = full_cascade(m, x)?;
    debug_assert!(!cascade.conflict(), "rules disagree on {x}: {:?}", cascade.outcomes);
    Ok(cascade.verdict())
}

/// Outcome of a cellularization request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cellularization {
    /// `CW_M x`, or `None` when no rule covers the input.
    pub result: Option<SpaceDesc>,
    pub verdict: Verdict,
}

fn computed(x: SpaceDesc, rule: &str, cite: &str) -> Cellularization {
    let mut v = Verdict::new(Answer::Yes);
    v.push(rule, cite, Answer::Yes);
    Cellularization { result: Some(x.normalize()), verdict: v }
}

/// `CW_M x` on the covered inputs.
pub fn cw(m: &MooreModel, x: &SpaceDesc) -> Result<Cellularization, Error> {
    let ctx = Context::new(m)?;
    let x = x.clone().normalize();
    let cascade = run_cascade(&ctx, &x)?;
    if cascade.decision().is_some_and(|d| d.answer == Answer::Yes) {
        let mut out = computed(x, "C0", "Engine");
        out.verdict.add_witness("reason", "x is already M-cellular");
        out.verdict.trail.extend(cascade.verdict().trail);
        return Ok(out);
    }
    if let (Some(p), SpaceDesc::EM { group: GroupExpr::Int, n: 2 }) = (ctx.counterexample_prime(), &x) {
        return Ok(computed(counterexample_output(p), "C3", "Theorem 3.2"));
    }
    if let Some(j) = ctx.subring().filter(|j| !j.is_empty()) {
        let f = facts(&x, &ctx.c)?;
        let radical_pi1 = f.pi1.as_ref().is_some_and(|n| !n.has_free_product() && is_radical(&ctx.g, n).is_yes());
        if f.nilpotent == Some(true) && radical_pi1 {
            let single = j.members().filter(|s| s.len() == 1).and_then(|s| s.first().copied());
            return Ok(match (&x, single) {
                (SpaceDesc::EM { group: GroupExpr::Prufer(p), n: 1 }, Some(q)) if *p == q => {
                    computed(SpaceDesc::EM { group: GroupExpr::PadicField(q), n: 1 }, "C2", "Example 2.8")
                }
                (SpaceDesc::EM { group: GroupExpr::Int, n: 2 }, _) => {
                    computed(SpaceDesc::EM { group: prod_padic_over_z(&j), n: 1 }, "C2", "Proposition 2.9")
                }
                (SpaceDesc::Sphere(2), _) if j.is_all() => computed(rationals_sphere_output(), "C2", "Example 2.7"),
                _ => computed(
                    SpaceDesc::FormalFiber {
                        source: Box::new(x.clone()),
                        target: Box::new(SpaceDesc::Completion { space: Box::new(x.clone()), primes: j }),
                    },
                    "C2",
                    "Proposition 2.9",
                ),
            });
        }
    }
    if let SpaceDesc::EM { group: a, n: 2 } = &x {
        let hr = hr_acyclic(std::slice::from_ref(a), &ctx.c)?;
        if hr.is_no() {
            return Err(Error::Precondition(format!("K({a},2) is not HR-acyclic for R = {}", ctx.c.r)));
        }
        let ue = universal_extension(&ctx.g, a)?;
        if ue.index == GroupExpr::Trivial {
            // E = A, so phi is the quotient by the radical: Ker = T_G A, Coker = 0
            let t = radical(&ctx.gab, a)?.radical_subgroup;
            let out = if t == GroupExpr::Trivial { SpaceDesc::Point } else { SpaceDesc::EM { group: t, n: 2 } };
            let mut c = computed(out, "C1", "Theorem 3.1");
            c.verdict.add_witness("Ker", c.result.as_ref().map_or(String::new(), ToString::to_string));
            c.verdict.add_witness("Coker", GroupExpr::Trivial);
            return Ok(c);
        }
    }
    let mut v = cascade.verdict();
    v.answer = Answer::Unknown;
    v.push("C?", "Engine", Answer::Unknown);
    Ok(Cellularization { result: None, verdict: v })
}

/// Whether `M(a,1)` is `M`-cellular.
pub fn moore_on_moore(m: &MooreModel, a: &GroupExpr) -> Result<Verdict, Error> {
    a.require_fragment()?;
    let a = a.clone().normalize();
    if !exists_moore(&a)?.is_yes() {
        return Err(Error::NoMooreSpace(a.to_string()));
    }
    let ctx = Context::new(m)?;
    if let (GroupExpr::Int | GroupExpr::RankOne(_), Some(n)) = (&ctx.g, a.finite_order()) {
        let t = match &ctx.g {
            GroupExpr::RankOne(t) => t.clone(),
            _ => BaerType::zero(),
        };
        let primes = crate::primes::factorize(n);
        if primes.iter().all(|&(p, _)| !t.value_at(p).is_inf()) {
            return Ok(Verdict::new(Answer::Yes).cite("L1", "Lemma 2.3", Answer::Yes).witness("n", n));
        }
    }
    if !ctx.g.has_free_product() {
        let mut rest = ctx.g.summands();
        let summand = a.summands().iter().all(|s| match rest.iter().position(|r| r == s) {
            Some(i) => {
                rest.remove(i);
                true
            }
            None => false,
        });
        if summand {
            return Ok(Verdict::new(Answer::Yes)
                .cite("L2", "Lemma 2.13", Answer::Yes)
                .witness("complement", GroupExpr::sum(rest).normalize()));
        }
    }
    is_cellular(m, &SpaceDesc::MooreSpace { group: a, n: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moore::moore_model;
    use crate::parse::parse;
    use crate::space::parse_space;

    fn m(s: &str) -> MooreModel {
        moore_model(&parse(s).unwrap()).unwrap()
    }

    fn x(s: &str) -> SpaceDesc {
        parse_space(s).unwrap()
    }

    #[test]
    fn counterexample() {
        let v = is_cellular(&m("Z[1/3] * Z/3"), &x("K(Z,2)")).unwrap();
        assert!(v.is_no(), "{v:?}");
        assert_eq!(v.witnesses["R"], "0");
        assert!(v.witnesses["pi1_cellular"].starts_with("Yes"));
        assert!(v.cites("Theorem 3.2"));
        let c = cw(&m("Z[1/3] * Z/3"), &x("K(Z,2)")).unwrap();
        assert_eq!(c.result.unwrap().to_string(), "K(Z/3 + Zhat(3)/Z,1)");
    }

    #[test]
    fn finite_generation_rule() {
        let v = is_cellular(&m("Z/3"), &x("space{pi1=Z/9; H=[Z/9]}")).unwrap();
        assert!(v.is_no());
        assert_eq!(v.witnesses["decided_by"], "R2");
        assert!(v.witnesses["R2.pi1_generated"].contains("Z/9"));
        assert!(is_cellular(&m("Z/3"), &x("space{pi1=Z/3 + Z/3; H=[Z/3 + Z/3, Z/3]}")).unwrap().is_yes());
    }

    #[test]
    fn point_and_sphere() {
        assert!(is_cellular(&m("Z(5^inf)"), &SpaceDesc::Point).unwrap().is_yes());
        let v = is_cellular(&m("type(1)"), &SpaceDesc::Sphere(2)).unwrap();
        assert!(v.is_yes() && v.cites("Theorem 2.5"));
        assert!(is_cellular(&m("Q"), &SpaceDesc::Sphere(2)).unwrap().is_no());
    }

    #[test]
    fn goldens() {
        let c = cw(&m("Z[1/2]"), &x("K(Z(2^inf),1)")).unwrap();
        assert_eq!(c.result.clone().unwrap().to_string(), "K(Qhat(2),1)");
        assert!(is_cellular(&m("Z[1/2]"), &c.result.unwrap()).unwrap().is_yes());
        let c = cw(&m("Q"), &SpaceDesc::Sphere(2)).unwrap();
        let SpaceDesc::TwoStage { pi1, pi2 } = c.result.unwrap() else { panic!() };
        assert_eq!(pi1, pi2);
        assert_eq!(pi1.to_string(), "(Prod_{p in P} Zhat(p))/Z");
        let c = cw(&m("Z/5"), &x("K(Z/5,2)")).unwrap();
        assert_eq!(c.result.unwrap(), x("K(Z/5,2)"));
    }

    #[test]
    fn prufer_localization() {
        let v = is_cellular(&m("Z(3^inf)"), &x("K(Z/3,2)")).unwrap();
        assert!(v.is_yes());
        assert!(is_radical(&parse("Z(3^inf)").unwrap(), &parse("Z/3").unwrap()).is_no());
    }

    #[test]
    fn moore_on_moore_rules() {
        let v = moore_on_moore(&m("type(0; 2:1; 3:inf)"), &parse("Z/2").unwrap()).unwrap();
        assert!(v.cites("Lemma 2.3") && v.is_yes());
        let v = moore_on_moore(&m("Z/2 + Z/9"), &parse("Z/9").unwrap()).unwrap();
        assert!(v.cites("Lemma 2.13") && v.is_yes());
        let v = moore_on_moore(&m("Z/5"), &parse("Z/25").unwrap()).unwrap();
        assert!(v.is_no(), "{v:?}");
        assert!(matches!(moore_on_moore(&m("Z/5"), &parse("Z/5 + Z/5").unwrap()), Err(Error::NoMooreSpace(_))));
    }
}
