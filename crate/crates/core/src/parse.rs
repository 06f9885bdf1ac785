//! Recursive-descent parser for the group expression grammar:
//!
//! ```text
//! group := "0" | "Z" | "Z/" NAT | "Z(" PRIME "^inf)" | "Z[1/" PRIME ("," PRIME)* "]"
//!        | "Q" | "type(" tail (";" PRIME ":" exp)* ")" | group "+" group | group "*" group
//!        | "(" group ")"
//! exp, tail := NAT | "inf"
//! ```
//!
//! `+` binds tighter than `*`. Whitespace is ignored. The result is not normalized,
//! except that `Z/n` for composite `n` is read directly in primary form.

use crate::baer::{BaerType, Exp};
use crate::error::ParseError;
use crate::group::GroupExpr;
use crate::primes::is_prime;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
}

fn lex(src: &str, offset: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let pos = pos + offset;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                let d = bytes[i].1.to_digit(10).unwrap() as u64;
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d))
                    .ok_or_else(|| ParseError::new(pos, "number too large"))?;
                i += 1;
            }
            out.push((pos, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < bytes.len() && (bytes[i].1.is_ascii_alphabetic() || bytes[i].1 == '_') {
                s.push(bytes[i].1);
                i += 1;
            }
            out.push((pos, Tok::Ident(s)));
        } else if "+*/()[],;:^{}".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::new(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos(), msg))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(d)) if *d == c => {
                self.at += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{c}'")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(d)) if *d == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn num(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn prime(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos();
        let p = self.num()?;
        if !is_prime(p) {
            return Err(ParseError::new(pos, format!("{p} is not a prime")));
        }
        Ok(p)
    }

    fn exp(&mut self) -> Result<Exp, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "inf" => {
                self.at += 1;
                Ok(Exp::Inf)
            }
            Some(Tok::Num(n)) => {
                let pos = self.pos();
                let n = *n;
                self.at += 1;
                u32::try_from(n).map(Exp::Fin).map_err(|_| ParseError::new(pos, "exponent too large"))
            }
            _ => self.err("expected an exponent (natural number or 'inf')"),
        }
    }

    fn product(&mut self) -> Result<GroupExpr, ParseError> {
        let first = self.sum()?;
        let mut factors = vec![first];
        while self.eat_sym('*') {
            factors.push(self.sum()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { GroupExpr::FreeProduct(factors) })
    }

    fn sum(&mut self) -> Result<GroupExpr, ParseError> {
        let start = self.pos();
        let mut parts = vec![self.atom()?];
        while self.eat_sym('+') {
            parts.push(self.atom()?);
        }
        if parts.len() > 1 && parts.iter().any(GroupExpr::has_free_product) {
            return Err(ParseError::new(start, "free products may only appear at the outermost level"));
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { GroupExpr::Sum(parts) })
    }

    fn atom(&mut self) -> Result<GroupExpr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Sym('(')) => {
                let g = self.product()?;
                self.expect_sym(')')?;
                Ok(g)
            }
            Some(Tok::Num(0)) => Ok(GroupExpr::Trivial),
            Some(Tok::Num(n)) => Err(ParseError::new(pos, format!("unexpected number {n}; only 0 denotes a group"))),
            Some(Tok::Ident(s)) => match s.as_str() {
                "Z" => self.after_z(),
                "Q" => Ok(GroupExpr::rationals()),
                "type" => self.type_expr(),
                "Zhat" | "Qhat" | "colim" | "Prod_" | "Sum_" => {
                    Err(ParseError::new(pos, format!("extended form '{s}' is output-only and not accepted as input")))
                }
                _ => Err(ParseError::new(pos, format!("unknown identifier '{s}'"))),
            },
            Some(Tok::Sym(c)) => Err(ParseError::new(pos, format!("unexpected '{c}'"))),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }

    fn after_z(&mut self) -> Result<GroupExpr, ParseError> {
        match self.peek() {
            Some(Tok::Sym('/')) => {
                self.at += 1;
                let pos = self.pos();
                let n = self.num()?;
                if n == 0 {
                    return Err(ParseError::new(pos, "invalid order 0 in Z/n"));
                }
                Ok(GroupExpr::cyclic(n))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let p = self.prime()?;
                self.expect_sym('^')?;
                match self.bump() {
                    Some(Tok::Ident(s)) if s == "inf" => {}
                    _ => return self.err("expected 'inf'"),
                }
                self.expect_sym(')')?;
                Ok(GroupExpr::Prufer(p))
            }
            Some(Tok::Sym('[')) => {
                self.at += 1;
                let pos = self.pos();
                if self.num()? != 1 {
                    return Err(ParseError::new(pos, "expected '1/' in Z[1/p]"));
                }
                self.expect_sym('/')?;
                let mut ps = vec![self.prime()?];
                while self.eat_sym(',') {
                    ps.push(self.prime()?);
                }
                self.expect_sym(']')?;
                let t = BaerType::new(Exp::ZERO, ps.into_iter().map(|p| (p, Exp::Inf))).expect("primes checked");
                Ok(GroupExpr::RankOne(t))
            }
            _ => Ok(GroupExpr::Int),
        }
    }

    fn type_expr(&mut self) -> Result<GroupExpr, ParseError> {
        self.expect_sym('(')?;
        let tail = self.exp()?;
        let mut ex = Vec::new();
        while self.eat_sym(';') {
            let p = self.prime()?;
            self.expect_sym(':')?;
            ex.push((p, self.exp()?));
        }
        self.expect_sym(')')?;
        let t = BaerType::new(tail, ex).expect("primes checked");
        Ok(GroupExpr::RankOne(t))
    }
}

/// Parse a group expression. The result is not normalized.
pub fn parse(text: &str) -> Result<GroupExpr, ParseError> {
    parse_at(text, 0)
}

/// Parse a substring whose first byte sits at `offset` in a larger input, so
/// that error positions refer to the larger input.
pub(crate) fn parse_at(text: &str, offset: usize) -> Result<GroupExpr, ParseError> {
    let toks = lex(text, offset)?;
    let mut p = Parser { toks, at: 0, end: offset + text.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let g = p.product()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(g)
}

impl std::str::FromStr for GroupExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
