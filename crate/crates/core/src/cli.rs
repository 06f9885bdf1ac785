//! Command-line front end. Every command builds one JSON document; the text
//! rendering is derived from it.

use std::collections::BTreeMap;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cellularity::{cw, is_cellular, moore_on_moore};
use crate::classify::classify;
use crate::coeffs::derive_coeffs;
use crate::error::Error;
use crate::group::GroupExpr;
use crate::homalg::{evaluate, Kind, Outcome};
use crate::moore::{exists_moore, moore_model, presentation_check, Recipe};
use crate::oracle::sweep::sweep;
use crate::oracle::{finite_bifunctor, finite_radical, generated_by_bounded_orders, Bounds, FiniteAb};
use crate::parse::parse;
use crate::radical::{is_quasi_radical, is_radical, radical, universal_extension};
use crate::space::{parse_space, SpaceDesc};
use crate::telescope::telescope_prefix;
use crate::verdict::{Answer, TrailEntry, Verdict};

const DEFAULT_TRUNCATION: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "moorecell", version, about = "Cellularity with respect to two-dimensional Moore spaces")]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Exit with code 3 when the answer is Unknown.
    #[arg(long, global = true)]
    strict_known: bool,
    /// Telescope truncation for `moore`.
    #[arg(long, global = true)]
    prefix_length: Option<usize>,
    /// Per-argument order cap for the finite oracle.
    #[arg(long, global = true)]
    oracle_bound: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure, coefficient system and Moore space of a group.
    Analyze {
        group: String,
    },
    /// Moore space existence and the two-dimensional model.
    Moore {
        group: String,
        /// Check the truncated relation matrix with a Smith normal form.
        #[arg(long)]
        check_presentation: bool,
        /// Number of telescope stages to check.
        #[arg(short = 'n', long = "stages")]
        stages: Option<usize>,
    },
    Hom {
        a: String,
        b: String,
    },
    Ext {
        a: String,
        b: String,
    },
    Tensor {
        a: String,
        b: String,
    },
    Tor {
        a: String,
        b: String,
    },
    /// `T_G N`.
    Radical {
        g: String,
        n: String,
    },
    /// Whether `A` is quasi `G`-radical.
    Quasiradical {
        g: String,
        a: String,
    },
    /// Whether a space is `M(G,1)`-cellular.
    Cellular {
        #[arg(long)]
        moore: String,
        #[arg(long)]
        space: String,
    },
    /// The `M(G,1)`-cellularization of a space.
    Cw {
        #[arg(long)]
        moore: String,
        #[arg(long)]
        space: String,
    },
    /// Brute-force computations on finite abelian groups.
    Oracle {
        /// Compare the symbolic rules with the oracle up to this order.
        #[arg(long)]
        sweep: Option<u64>,
        /// hom, ext, tensor, tor, radical or genby.
        op: Option<String>,
        args: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    InputError,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub trail: Vec<TrailEntry>,
    #[serde(skip)]
    pub exit_code: i32,
    #[serde(skip)]
    pub format: Format,
}

struct Reply {
    payload: Value,
    trail: Vec<TrailEntry>,
    unknown: bool,
    unsupported: bool,
}

impl Reply {
    fn new(payload: Value) -> Reply {
        Reply { payload, trail: Vec::new(), unknown: false, unsupported: false }
    }

    fn verdict(mut payload: Value, v: &Verdict) -> Reply {
        payload["answer"] = json!(v.answer);
        payload["witnesses"] = json!(v.witnesses);
        Reply { payload, trail: v.trail.clone(), unknown: v.answer == Answer::Unknown, unsupported: false }
    }
}

fn scan_format(argv: &[String]) -> Format {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--format=structured" || (a == "--format" && it.next().is_some_and(|v| v == "structured")) {
            return Format::Structured;
        }
    }
    Format::Text
}

fn group(text: &str) -> Result<GroupExpr, Error> {
    Ok(parse(text)?.normalize())
}

fn error_result(e: &Error, format: Format) -> CommandResult {
    let (status, exit_code) = match e {
        Error::Unsupported(_) | Error::NoRecipe(_) => (Status::Unsupported, 3),
        _ => (Status::InputError, 2),
    };
    let mut payload = json!({ "error": e.to_string() });
    if let Error::Parse(p) = e {
        payload["position"] = json!(p.position);
    }
    CommandResult { status, payload, trail: Vec::new(), exit_code, format }
}

/// Parse `argv` (including the program name), run the command, and report.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> CommandResult {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let format = scan_format(&argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return CommandResult {
                status: if ok { Status::Ok } else { Status::InputError },
                payload: json!({ if ok { "help" } else { "error" }: e.render().to_string().trim_start_matches("error: ").trim_end() }),
                trail: Vec::new(),
                exit_code: if ok { 0 } else { 2 },
                format,
            };
        }
    };
    match dispatch(&cli) {
        Ok(r) => {
            let (status, exit_code) = if r.unsupported {
                (Status::Unsupported, 3)
            } else if r.unknown && cli.strict_known {
                (Status::Ok, 3)
            } else {
                (Status::Ok, 0)
            };
            CommandResult { status, payload: r.payload, trail: r.trail, exit_code, format }
        }
        Err(e) => error_result(&e, format),
    }
}

fn dispatch(cli: &Cli) -> Result<Reply, Error> {
    let bounds = cli.oracle_bound.map(Bounds::with_per_argument).unwrap_or_default();
    match &cli.command {
        Command::Analyze { group: g } => analyze(&group(g)?),
        Command::Moore { group: g, check_presentation, stages } => {
            moore(&group(g)?, *check_presentation, stages.or(cli.prefix_length))
        }
        Command::Hom { a, b } => bifunctor(Kind::Hom, a, b),
        Command::Ext { a, b } => bifunctor(Kind::Ext, a, b),
        Command::Tensor { a, b } => bifunctor(Kind::Tensor, a, b),
        Command::Tor { a, b } => bifunctor(Kind::Tor, a, b),
        Command::Radical { g, n } => {
            let (g, n) = (group(g)?, group(n)?);
            let r = radical(&g, &n)?;
            let v = is_radical(&g, &n);
            let payload =
                json!({ "g": g, "n": n, "radical": r.radical_subgroup, "reduction": r.reduction, "stages": r.stages });
            Ok(Reply::verdict(payload, &v))
        }
        Command::Quasiradical { g, a } => {
            let (g, a) = (group(g)?, group(a)?);
            let v = is_quasi_radical(&g, &a)?;
            let ue = universal_extension(&g, &a)?;
            let mut payload = json!({ "g": g, "a": a, "extension": ue });
            payload["extension"]["total_radical"] = json!(ue.total_radical);
            Ok(Reply::verdict(payload, &v))
        }
        Command::Cellular { moore, space } => {
            let m = moore_model(&group(moore)?)?;
            let x = parse_space(space)?.normalize();
            let v = match &x {
                SpaceDesc::MooreSpace { group: a, n: 1 } => moore_on_moore(&m, a)?,
                _ => is_cellular(&m, &x)?,
            };
            Ok(Reply::verdict(json!({ "moore": m.to_string(), "space": x }), &v))
        }
        Command::Cw { moore, space } => {
            let m = moore_model(&group(moore)?)?;
            let x = parse_space(space)?.normalize();
            let c = cw(&m, &x)?;
            let payload =
                json!({ "moore": m.to_string(), "space": x, "result": c.result, "witnesses": c.verdict.witnesses });
            Ok(Reply { payload, trail: c.verdict.trail, unknown: c.result.is_none(), unsupported: false })
        }
        Command::Oracle { sweep: Some(b), .. } => {
            let report = sweep(*b)?;
            Ok(Reply::new(json!(report)))
        }
        Command::Oracle { op: Some(op), args, .. } => oracle(op, args, bounds),
        Command::Oracle { .. } => Err(Error::Unsupported("oracle needs an operation or --sweep".into())),
    }
}

fn analyze(g: &GroupExpr) -> Result<Reply, Error> {
    g.require_fragment()?;
    let gab = g.abelianize();
    let structure = classify(&gab)?;
    let c = derive_coeffs(g)?;
    let v = exists_moore(g)?;
    let model = match moore_model(g) {
        Ok(m) => json!(m.to_string()),
        Err(e) => json!(e.to_string()),
    };
    let payload = json!({
        "group": g,
        "abelianization": gab,
        "structure": {
            "torsion": structure.is_torsion,
            "torsion_subgroup": structure.torsion_subgroup,
            "torsion_free_quotient": structure.torsion_free_quotient,
            "rank": structure.rank,
            "divisible": structure.is_divisible,
        },
        "J": c.j.to_string(),
        "H": c.h,
        "R": c.r,
        "moore": v.answer,
        "moore_witnesses": v.witnesses,
        "model": model,
    });
    Ok(Reply { payload, trail: v.trail, unknown: v.answer == Answer::Unknown, unsupported: false })
}

fn moore(g: &GroupExpr, check: bool, stages: Option<usize>) -> Result<Reply, Error> {
    g.require_fragment()?;
    let v = exists_moore(g)?;
    let mut payload = json!({ "group": g, "exists": v.answer, "witnesses": v.witnesses });
    if v.is_yes() {
        let m = moore_model(g)?;
        payload["model"] = json!(m.to_string());
        payload["recipe"] = json!(m.recipe);
        payload["realized_group"] = json!(m.realized_group());
        let n = stages.unwrap_or(DEFAULT_TRUNCATION);
        if let Recipe::Telescope(t) | Recipe::CofiberOfUnit(t) = &m.recipe {
            if stages.is_some() {
                payload["telescope"] = json!(telescope_prefix(t, n));
            }
        }
        if check {
            let report = match presentation_check(&m, n) {
                Err(Error::TruncationExceeded { available, .. }) => presentation_check(&m, available)?,
                r => r?,
            };
            payload["presentation"] = json!(report);
            payload["presentation"]["passed"] = json!(report.passed());
        }
    }
    Ok(Reply { payload, trail: v.trail, unknown: v.answer == Answer::Unknown, unsupported: false })
}

fn bifunctor(kind: Kind, a: &str, b: &str) -> Result<Reply, Error> {
    let (a, b) = (group(a)?, group(b)?);
    let e = evaluate(kind, &a, &b)?;
    let unsupported = matches!(e.outcome, Outcome::Unsupported(_));
    let rules: Vec<Value> = e.rules.iter().map(|(line, prov)| json!({ "line": line, "provenance": prov })).collect();
    let payload = json!({
        "kind": kind.to_string(),
        "a": a,
        "b": b,
        "result": e.outcome.to_string(),
        "verified": e.verified,
        "rules": rules,
    });
    Ok(Reply { payload, trail: Vec::new(), unknown: false, unsupported })
}

fn finite(text: &str) -> Result<FiniteAb, Error> {
    FiniteAb::from_group(&group(text)?)
}

/// `p:k,q:l` exponent bounds.
fn exponent_bounds(text: &str) -> Result<BTreeMap<u64, u32>, Error> {
    let bad = || Error::Unsupported(format!("exponent bounds must look like 2:1,3:2, got {text}"));
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (p, k) = part.split_once(':').ok_or_else(bad)?;
            Ok((p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn oracle(op: &str, args: &[String], bounds: Bounds) -> Result<Reply, Error> {
    let arity = |n: usize| -> Result<(), Error> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("oracle {op} takes {n} arguments, got {}", args.len())))
        }
    };
    match op {
        "radical" => {
            arity(2)?;
            let (g, n) = (finite(&args[0])?, finite(&args[1])?);
            Ok(Reply::new(json!({ "g": g, "n": n, "result": finite_radical(&g, &n, bounds)? })))
        }
        "genby" => {
            arity(2)?;
            let n = finite(&args[0])?;
            let b = exponent_bounds(&args[1])?;
            Ok(Reply::new(json!({ "n": n, "bounds": b, "generated": generated_by_bounded_orders(&n, &b, bounds)? })))
        }
        _ => {
            let kind: Kind = op.parse().map_err(|_| Error::Unsupported(format!("unknown oracle operation {op}")))?;
            arity(2)?;
            let (a, b) = (finite(&args[0])?, finite(&args[1])?);
            Ok(Reply::new(
                json!({ "kind": kind.to_string(), "a": a, "b": b, "result": finite_bifunctor(kind, &a, &b, bounds)? }),
            ))
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render_value(out, k, x, depth + 1);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                render_value(out, &format!("- {i}"), x, depth + 1);
            }
        }
        _ => {}
    }
}

impl CommandResult {
    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        if let Some(h) = self.payload.get("help").and_then(Value::as_str) {
            return format!("{h}\n");
        }
        let mut out = String::new();
        if self.status != Status::Ok {
            out.push_str(&format!("status: {}\n", json!(self.status).as_str().unwrap_or_default()));
        }
        if let Value::Object(m) = &self.payload {
            for (k, v) in m {
                render_value(&mut out, k, v, 0);
            }
        } else {
            render_value(&mut out, "result", &self.payload, 0);
        }
        if !self.trail.is_empty() {
            out.push_str("trail:\n");
            for e in &self.trail {
                out.push_str(&format!("  [{}] {} -> {}", e.rule, e.citation, e.outcome));
                if !e.statement.is_empty() {
                    out.push_str(&format!(": {}", e.statement));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Text => self.text(),
            Format::Structured => self.structured(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandResult {
        let mut argv = vec!["moorecell"];
        argv.extend_from_slice(args);
        run_command(&argv)
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["analyze", "Z"]).exit_code, 0);
        assert_eq!(run(&["frobnicate"]).exit_code, 2);
        let r = run(&["analyze", "Z/0"]);
        assert_eq!((r.exit_code, r.status), (2, Status::InputError));
        assert_eq!(r.payload["position"], 2);
        assert_eq!(run(&["moore", "Z(2^inf) + Z(2^inf)"]).exit_code, 3);
        assert_eq!(run(&["moore", "Z + Z"]).exit_code, 0);
        assert_eq!(run(&["hom", "Zhat(2)", "Z"]).exit_code, 2);
    }

    #[test]
    fn strict_known() {
        let args = ["cellular", "--moore", "Z/3 * Z/3", "--space", "space{pi1=Z/3 + Z/3; H=[Z/3 + Z/3]}"];
        let r = run(&args);
        assert_eq!(r.payload["answer"], "Unknown");
        assert_eq!(r.exit_code, 0);
        let mut strict = args.to_vec();
        strict.push("--strict-known");
        assert_eq!(run(&strict).exit_code, 3);
    }

    #[test]
    fn text_is_derived_from_payload() {
        let r = run(&["radical", "Z/2", "Z/8"]);
        let t = r.text();
        assert!(t.contains("radical: Z/8\n"), "{t}");
        assert!(t.contains("answer: Yes\n"));
        assert!(t.contains("[radical] G-radical -> Yes"));
    }

    #[test]
    fn oracle_commands() {
        assert_eq!(run(&["oracle", "hom", "Z/4", "Z/6"]).payload["result"], "Z/2");
        assert_eq!(run(&["oracle", "genby", "Z/9", "3:1"]).payload["generated"], false);
        assert_eq!(run(&["oracle", "radical", "Z/2", "Z/8"]).payload["result"]["radical"], "Z/8");
        assert_eq!(run(&["--oracle-bound", "4", "oracle", "hom", "Z/8", "Z/2"]).exit_code, 2);
    }
}
