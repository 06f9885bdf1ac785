mod common;

use std::time::{Duration, Instant};

use common::*;
use moorecell::cellularity::{cw, full_cascade, is_cellular};
use moorecell::cli::run_command;
use moorecell::coeffs::derive_coeffs;
use moorecell::homalg::ext;
use moorecell::moore::{exists_moore, moore_model};
use moorecell::oracle::sweep::{groups_up_to, sweep};
use moorecell::oracle::{finite_radicals, Bounds, MINIMALITY_LIMIT};
use moorecell::radical::{is_quasi_radical, is_radical};
use moorecell::space::{parse_space, SpaceDesc};
use moorecell::verdict::Answer;
use moorecell::{parse, GroupExpr};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn g(s: &str) -> GroupExpr {
    parse(s).unwrap().normalize()
}

fn x(s: &str) -> SpaceDesc {
    parse_space(s).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<(), String>) -> Result<(), String> {
    let start = Instant::now();
    f().map_err(|e| format!("{name}: {e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("{name} took {elapsed:?}"))
}

fn golden_cases() -> Vec<(&'static str, &'static str)> {
    vec![
        ("type(1)", "S^2"),
        ("Q", "S^2"),
        ("Z[1/2]", "K(Z(2^inf),1)"),
        ("Z[1/3]", "K(Z(3^inf),1)"),
        ("Z[1/2]", "K(Z,2)"),
        ("Z(2^inf)", "K(Z/2,2)"),
        ("Z[1/2] * Z/2", "K(Z,2)"),
        ("Z[1/3] * Z/3", "K(Z,2)"),
        ("Z/5", "space{pi1=Z/25; H=[Z/25]}"),
        ("Z/5", "K(Z/5,2)"),
        ("Z/2 + Z/9", "M(Z/9,1)"),
        ("Z", "S^3"),
    ]
}

fn golden() -> Outcome {
    let mut n = 0;
    timed("Ext of type (1,1,...) with Z", || {
        let s = g("type(1)");
        let e = ext(&s, &GroupExpr::Int).map_err(|e| e.to_string())?.to_string();
        ensure(e == "(Prod_{p in P} Z/p)/Z", format!("Ext(S,Z) = {e}"))?;
        let q = is_quasi_radical(&s, &GroupExpr::Int).map_err(|e| e.to_string())?;
        ensure(q.is_yes() && q.cites("Example 2.6"), format!("quasi-radical {}", q.answer))?;
        let v = is_cellular(&moore_model(&s).unwrap(), &SpaceDesc::Sphere(2)).map_err(|e| e.to_string())?;
        ensure(v.is_yes(), format!("S^2 gave {}", v.answer))
    })?;
    n += 1;
    timed("rationals on S^2", || {
        let c = cw(&moore_model(&g("Q")).unwrap(), &SpaceDesc::Sphere(2)).map_err(|e| e.to_string())?;
        match c.result {
            Some(SpaceDesc::TwoStage { pi1, pi2 }) => {
                ensure(pi1 == pi2, "pi1 != pi2")?;
                ensure(pi1.to_string() == "(Prod_{p in P} Zhat(p))/Z", format!("pi1 = {pi1}"))
            }
            other => Err(format!("{other:?}")),
        }
    })?;
    n += 1;
    for p in [2, 3, 5, 7] {
        timed("localization on a Pruefer K(-,1)", || {
            let m = moore_model(&g(&format!("Z[1/{p}]"))).unwrap();
            let c = cw(&m, &x(&format!("K(Z({p}^inf),1)"))).map_err(|e| e.to_string())?;
            let out = c.result.map(|s| s.to_string()).unwrap_or_default();
            ensure(out == format!("K(Qhat({p}),1)"), out)
        })?;
        n += 1;
    }
    for p in [2, 3, 5] {
        timed("Pruefer radical versus quasi-radical", || {
            let (gp, a) = (g(&format!("Z({p}^inf)")), g(&format!("Z/{p}")));
            ensure(is_radical(&gp, &a).is_no(), "radical")?;
            ensure(is_quasi_radical(&gp, &a).map_err(|e| e.to_string())?.is_yes(), "quasi-radical")
        })?;
        n += 1;
    }
    for p in [2, 3, 5] {
        timed("free product counterexample", || {
            let gp = g(&format!("Z[1/{p}] * Z/{p}"));
            let c = derive_coeffs(&gp).map_err(|e| e.to_string())?;
            ensure(c.r.to_string() == "0" && c.j.is_empty() && c.h == GroupExpr::Int, "coefficients")?;
            let m = moore_model(&gp).unwrap();
            let v = is_cellular(&m, &x("K(Z,2)")).map_err(|e| e.to_string())?;
            ensure(v.is_no() && v.cites("Theorem 3.2"), format!("verdict {}", v.answer))?;
            let out = cw(&m, &x("K(Z,2)")).map_err(|e| e.to_string())?.result.map(|s| s.to_string());
            ensure(out == Some(format!("K(Z/{p} + Zhat({p})/Z,1)")), format!("{out:?}"))
        })?;
        n += 1;
    }
    timed("cli", || {
        let r = run_command(&["moorecell", "analyze", "Z(2^inf)"]);
        let p = &r.payload;
        ensure(
            p["J"] == "all primes except {2}" && p["H"] == "Z/2" && p["R"] == "Z[1/2]" && p["moore"] == "Yes",
            p.to_string(),
        )?;
        let r = run_command(&["moorecell", "cw", "--moore", "Z[1/2]", "--space", "K(Z(2^inf),1)"]);
        ensure(r.payload["result"] == "K(Qhat(2),1)", r.payload.to_string())?;
        let r = run_command(&["moorecell", "cellular", "--moore", "Z[1/2] * Z/2", "--space", "K(Z,2)"]);
        ensure(
            r.payload["answer"] == "No" && r.trail.iter().any(|e| e.citation == "Theorem 3.2"),
            r.payload.to_string(),
        )
    })?;
    n += 1;
    Ok(format!("{n} worked examples"))
}

fn conformance() -> Outcome {
    let start = Instant::now();
    let r = sweep(256).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.passed(), format!("{} mismatches, first {:?}", r.mismatch_count, r.mismatches.first()))?;
    ensure(elapsed < Duration::from_secs(300), format!("sweep took {elapsed:?}"))?;
    Ok(format!("{} groups, {} pairs, 0 mismatches in {:.1}s", r.groups, r.pairs, elapsed.as_secs_f64()))
}

fn radical_soundness() -> Outcome {
    let mut run = runner(500);
    let strategy = (abelian(), abelian());
    let mut supported = 0;
    for _ in 0..500 {
        let (a, b) = strategy.new_tree(&mut run).map_err(|e| e.to_string())?.current();
        if check_radical(&a, &b).map_err(|e| e.to_string())? {
            supported += 1;
        }
    }
    let small: Vec<_> = groups_up_to(MINIMALITY_LIMIT);
    let bounds = Bounds::default();
    for n in &small {
        let rs = finite_radicals(&small, n, bounds).map_err(|e| e.to_string())?;
        for (gg, r) in small.iter().zip(rs) {
            ensure(r.minimal == Some(true), format!("T_{gg} {n} is not minimal"))?;
        }
    }
    Ok(format!("{supported} symbolic pairs, {} finite pairs checked for minimality", small.len() * small.len()))
}

fn telescope_contract() -> Outcome {
    let mut run = runner(50);
    run.run(&(baer_type(), 1..=64usize), |(t, n)| check_telescope(&t, n)).map_err(|e| e.to_string())?;
    Ok("50 types".into())
}

fn varadarajan() -> Outcome {
    let expected = [true, true, true, false, false, true, true, true, true, true];
    let mut rows = 0;
    for (p, q) in [(2, 3), (3, 5), (5, 2)] {
        let battery = [
            "Z".to_string(),
            "Q".into(),
            format!("Z/{p}"),
            format!("Z/{p} + Z/{p}"),
            format!("Z + Z/{p}"),
            format!("Z[1/{p}]"),
            format!("Z[1/{p}] + Z/{p}"),
            format!("Z({p}^inf)"),
            format!("Z({p}^inf) + Z/{q}"),
            "type(1)".into(),
        ];
        for (s, want) in battery.iter().zip(expected) {
            let v = exists_moore(&g(s)).map_err(|e| e.to_string())?;
            ensure(v.answer == Answer::from_bool(want), format!("{s}: {}", v.answer))?;
            if !want {
                ensure(v.witnesses.contains_key("clause"), format!("{s}: no clause witness"))?;
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} rows over three prime pairs"))
}

fn coherence() -> Outcome {
    for (gs, xs) in golden_cases() {
        let m = moore_model(&g(gs)).unwrap();
        let y = x(xs);
        check_coherence(&m, &y).map_err(|e| e.to_string())?;
        if let Ok(c) = cw(&m, &y) {
            if let Some(out) = c.result {
                let v = full_cascade(&m, &out).map_err(|e| format!("{gs} on {out}: {e}"))?;
                ensure(
                    v.decision().is_some_and(|d| d.answer == Answer::Yes),
                    format!("cw output {out} is not certified"),
                )?;
            }
        }
    }
    let mut run = runner(200);
    let strategy = (model_group(), space());
    let mut evaluated = 0;
    let mut attempts = 0;
    while evaluated < 200 && attempts < 5000 {
        attempts += 1;
        let (gg, y) = strategy.new_tree(&mut run).map_err(|e| e.to_string())?.current();
        let Ok(m) = moore_model(&gg) else { continue };
        if check_coherence(&m, &y).map_err(|e| e.to_string())? {
            evaluated += 1;
        }
    }
    ensure(evaluated == 200, format!("only {evaluated} random inputs were evaluable"))?;
    Ok(format!("{} golden and {evaluated} random inputs", golden_cases().len()))
}

fn parser() -> Outcome {
    let mut run = runner(1000);
    run.run(&fragment(), |e| check_round_trip(&e)).map_err(|e| e.to_string())?;
    for n in 1..=1000 {
        check_primary(n).map_err(|e| e.to_string())?;
    }
    Ok("1000 expressions, Z/1..Z/1000".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden corpus", golden),
        ("oracle conformance", conformance),
        ("radical soundness", radical_soundness),
        ("telescope contract", telescope_contract),
        ("moore existence table", varadarajan),
        ("engine coherence", coherence),
        ("parser and normalizer", parser),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
