//! Descriptors of the spaces fed to the cellularity engine, and their parser.
//!
//! Grammar: `K(<group>,<n>)`, `S^<n>`, `M(<group>,<n>)`, `pt`,
//! `space{pi1=<group>; H=[<group>, ...]; sc=<bool>; nilp=<bool>; pi2=<group>}`,
//! and products `X x Y`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, ParseError};
use crate::group::GroupExpr;
use crate::parse::parse_at;
use crate::primes::PrimeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceDesc {
    Point,
    Sphere(u32),
    /// `K(group, n)`.
    EM {
        group: GroupExpr,
        n: u32,
    },
    /// `M(group, n)`.
    MooreSpace {
        group: GroupExpr,
        n: u32,
    },
    /// A space known through its invariants; `homology[i]` is `H_{i+1}`.
    Generic {
        pi1: GroupExpr,
        simply_connected: bool,
        nilpotent: bool,
        homology: Vec<GroupExpr>,
        pi2: Option<GroupExpr>,
    },
    /// Homotopy fibre of a map `source -> target`.
    FormalFiber {
        source: Box<SpaceDesc>,
        target: Box<SpaceDesc>,
    },
    Product(Vec<SpaceDesc>),
    /// Two-stage Postnikov space with the given homotopy groups.
    TwoStage {
        pi1: GroupExpr,
        pi2: GroupExpr,
    },
    /// `Prod_{p in primes} (space)^_p`.
    Completion {
        space: Box<SpaceDesc>,
        primes: PrimeSet,
    },
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDesc::Point => write!(f, "pt"),
            SpaceDesc::Sphere(n) => write!(f, "S^{n}"),
            SpaceDesc::EM { group, n } => write!(f, "K({group},{n})"),
            SpaceDesc::MooreSpace { group, n } => write!(f, "M({group},{n})"),
            SpaceDesc::Generic { pi1, simply_connected, nilpotent, homology, pi2 } => {
                let h: Vec<String> = homology.iter().map(ToString::to_string).collect();
                write!(f, "space{{pi1={pi1}; H=[{}]; sc={simply_connected}; nilp={nilpotent}", h.join(", "))?;
                if let Some(p) = pi2 {
                    write!(f, "; pi2={p}")?;
                }
                write!(f, "}}")
            }
            SpaceDesc::FormalFiber { source, target } => write!(f, "Fib({source} -> {target})"),
            SpaceDesc::Product(xs) => {
                let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" x "))
            }
            SpaceDesc::TwoStage { pi1, pi2 } => write!(f, "P2{{pi1={pi1}; pi2={pi2}}}"),
            SpaceDesc::Completion { space, primes } => {
                write!(f, "Prod_{{p in {}}} ({space})^_p", primes.index_symbol())
            }
        }
    }
}

impl Serialize for SpaceDesc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl SpaceDesc {
    /// Every group mentioned by the descriptor.
    pub fn groups(&self) -> Vec<&GroupExpr> {
        match self {
            SpaceDesc::Point | SpaceDesc::Sphere(_) => vec![],
            SpaceDesc::EM { group, .. } | SpaceDesc::MooreSpace { group, .. } => vec![group],
            SpaceDesc::Generic { pi1, homology, pi2, .. } => {
                let mut v = vec![pi1];
                v.extend(homology);
                v.extend(pi2);
                v
            }
            SpaceDesc::FormalFiber { source, target } => {
                let mut v = source.groups();
                v.extend(target.groups());
                v
            }
            SpaceDesc::Product(xs) => xs.iter().flat_map(SpaceDesc::groups).collect(),
            SpaceDesc::TwoStage { pi1, pi2 } => vec![pi1, pi2],
            SpaceDesc::Completion { space, .. } => space.groups(),
        }
    }

    /// Canonical form: groups normalized, one-factor products unwrapped.
    pub fn normalize(self) -> SpaceDesc {
        let n = |g: GroupExpr| g.normalize();
        match self {
            SpaceDesc::EM { group, n: k } => SpaceDesc::EM { group: n(group), n: k },
            SpaceDesc::MooreSpace { group, n: k } => SpaceDesc::MooreSpace { group: n(group), n: k },
            SpaceDesc::Generic { pi1, simply_connected, nilpotent, homology, pi2 } => SpaceDesc::Generic {
                pi1: n(pi1),
                simply_connected,
                nilpotent: nilpotent || simply_connected,
                homology: homology.into_iter().map(n).collect(),
                pi2: pi2.map(n),
            },
            SpaceDesc::FormalFiber { source, target } => {
                SpaceDesc::FormalFiber { source: Box::new(source.normalize()), target: Box::new(target.normalize()) }
            }
            SpaceDesc::Product(xs) => {
                let mut xs: Vec<SpaceDesc> =
                    xs.into_iter().map(SpaceDesc::normalize).filter(|x| *x != SpaceDesc::Point).collect();
                match xs.len() {
                    0 => SpaceDesc::Point,
                    1 => xs.pop().unwrap(),
                    _ => SpaceDesc::Product(xs),
                }
            }
            SpaceDesc::TwoStage { pi1, pi2 } => SpaceDesc::TwoStage { pi1: n(pi1), pi2: n(pi2) },
            SpaceDesc::Completion { space, primes } => {
                SpaceDesc::Completion { space: Box::new(space.normalize()), primes }
            }
            x => x,
        }
    }
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::Parse(ParseError::new(pos, msg)))
}

/// Byte offsets of top-level occurrences of `sep`, outside any bracket pair.
fn top_level(text: &str, sep: char) -> Vec<usize> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => out.push(i),
            _ => {}
        }
    }
    out
}

fn parse_degree(text: &str, pos: usize) -> Result<u32, Error> {
    let t = text.trim();
    match t.parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => perr(pos + (text.len() - text.trim_start().len()), format!("expected a degree >= 1, found '{t}'")),
    }
}

fn parse_bool(text: &str, pos: usize) -> Result<bool, Error> {
    match text.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        t => perr(pos, format!("expected true or false, found '{t}'")),
    }
}

/// `(<group>,<n>)` after a `K` or `M`, starting at byte `pos` of the input.
fn group_and_degree(body: &str, pos: usize) -> Result<(GroupExpr, u32), Error> {
    if !body.starts_with('(') || !body.ends_with(')') {
        return perr(pos, "expected '(<group>,<n>)'");
    }
    let inner = &body[1..body.len() - 1];
    let Some(&comma) = top_level(inner, ',').last() else {
        return perr(pos + body.len() - 1, "expected ',<degree>'");
    };
    let group = parse_at(&inner[..comma], pos + 1)?;
    let n = parse_degree(&inner[comma + 1..], pos + 2 + comma)?;
    Ok((group, n))
}

fn parse_generic(body: &str, pos: usize) -> Result<SpaceDesc, Error> {
    let mut pi1 = GroupExpr::Trivial;
    let mut homology = Vec::new();
    let mut sc = None;
    let mut nilp = false;
    let mut pi2 = None;
    let mut start = 0;
    let mut cuts = top_level(body, ';');
    cuts.push(body.len());
    for cut in cuts {
        let field = &body[start..cut];
        let fpos = pos + start;
        start = cut + 1;
        if field.trim().is_empty() {
            continue;
        }
        let Some(eq) = field.find('=') else {
            return perr(fpos, "expected 'key=value'");
        };
        let vpos = fpos + eq + 1;
        let value = &field[eq + 1..];
        match field[..eq].trim() {
            "pi1" => pi1 = parse_at(value, vpos)?,
            "pi2" => pi2 = Some(parse_at(value, vpos)?),
            "sc" => sc = Some(parse_bool(value, vpos)?),
            "nilp" => nilp = parse_bool(value, vpos)?,
            "H" => {
                let v = value.trim();
                let lead = value.len() - value.trim_start().len();
                if !v.starts_with('[') || !v.ends_with(']') {
                    return perr(vpos + lead, "expected '[<group>, ...]'");
                }
                let list = &v[1..v.len() - 1];
                let lpos = vpos + lead + 1;
                if !list.trim().is_empty() {
                    let mut s = 0;
                    let mut commas = top_level(list, ',');
                    commas.push(list.len());
                    for c in commas {
                        homology.push(parse_at(&list[s..c], lpos + s)?);
                        s = c + 1;
                    }
                }
            }
            k => return perr(fpos, format!("unknown field '{k}'")),
        }
    }
    let pi1 = pi1.normalize();
    let simply_connected = match sc {
        Some(true) if pi1 != GroupExpr::Trivial => return perr(pos, "sc=true requires pi1=0"),
        Some(b) => b,
        None => pi1 == GroupExpr::Trivial,
    };
    Ok(SpaceDesc::Generic { pi1, simply_connected, nilpotent: nilp || simply_connected, homology, pi2 })
}

pub fn parse_space(text: &str) -> Result<SpaceDesc, Error> {
    parse_space_at(text, 0)
}

fn parse_space_at(text: &str, offset: usize) -> Result<SpaceDesc, Error> {
    let crosses: Vec<usize> = top_level(text, 'x')
        .into_iter()
        .filter(|&i| text[..i].ends_with(' ') && text[i + 1..].starts_with(' '))
        .collect();
    if !crosses.is_empty() {
        let mut start = 0;
        let mut factors = Vec::new();
        for cut in crosses.into_iter().chain([text.len()]) {
            factors.push(parse_space_at(&text[start..cut], offset + start)?);
            start = cut + 1;
        }
        return Ok(SpaceDesc::Product(factors));
    }
    let lead = offset + text.len() - text.trim_start().len();
    let t = text.trim();
    if t == "pt" {
        return Ok(SpaceDesc::Point);
    }
    if let Some(rest) = t.strip_prefix("S^") {
        return Ok(SpaceDesc::Sphere(parse_degree(rest, lead + 2)?));
    }
    if let Some(rest) = t.strip_prefix('K') {
        let (group, n) = group_and_degree(rest, lead + 1)?;
        return Ok(SpaceDesc::EM { group, n });
    }
    if let Some(rest) = t.strip_prefix('M') {
        let (group, n) = group_and_degree(rest, lead + 1)?;
        return Ok(SpaceDesc::MooreSpace { group, n });
    }
    if let Some(rest) = t.strip_prefix("space{") {
        let Some(body) = rest.strip_suffix('}') else {
            return perr(lead + t.len(), "expected '}'");
        };
        return parse_generic(body, lead + 6);
    }
    perr(lead, "expected K(..), M(..), S^n, pt or space{..}")
}

impl std::str::FromStr for SpaceDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse_space(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_space("pt").unwrap(), SpaceDesc::Point);
        assert_eq!(parse_space(" S^2").unwrap(), SpaceDesc::Sphere(2));
        let k = parse_space("K(Z[1/2,3],2)").unwrap();
        assert_eq!(k, SpaceDesc::EM { group: parse("Z[1/2,3]").unwrap(), n: 2 });
        assert_eq!(k.to_string(), "K(Z[1/2,3],2)");
        let p = parse_space("S^1 x K(Z/2,3)").unwrap();
        assert_eq!(
            p,
            SpaceDesc::Product(vec![SpaceDesc::Sphere(1), SpaceDesc::EM { group: parse("Z/2").unwrap(), n: 3 }])
        );
        let m = parse_space("M(type(1; 2:0),1)").unwrap();
        assert!(matches!(m, SpaceDesc::MooreSpace { n: 1, .. }));
    }

    #[test]
    fn generic_fields() {
        let x = parse_space("space{pi1=Z/9; H=[Z/9, Z/3 + Z/3]; nilp=true}").unwrap();
        let SpaceDesc::Generic { pi1, simply_connected, homology, pi2, .. } = &x else { panic!() };
        assert_eq!(pi1, &parse("Z/9").unwrap());
        assert!(!simply_connected && pi2.is_none());
        assert_eq!(homology.len(), 2);
        let y = parse_space(&x.to_string()).unwrap();
        assert_eq!(y, x);
        let s = parse_space("space{H=[0, Z]; pi2=Z}").unwrap();
        assert!(matches!(s, SpaceDesc::Generic { simply_connected: true, nilpotent: true, .. }));
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match parse_space(s) {
            Err(Error::Parse(e)) => e.position,
            other => panic!("{other:?}"),
        };
        assert_eq!(pos("K(Z,0)"), 4);
        assert_eq!(pos("K(Z/0,2)"), 4);
        assert_eq!(pos("space{pi1=Z; sc=true}"), 6);
        assert_eq!(pos("space{foo=Z}"), 6);
        assert_eq!(pos("T^2"), 0);
        assert_eq!(pos("S^1 x K(Z,0)"), 10);
    }
}
