//! The coefficient system `(J, J', H, R)` attached to a group, and
//! `HR`-acyclicity of homology profiles.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::baer::BaerType;
use crate::classify::{classify, uniquely_divisible_primes};
use crate::error::Error;
use crate::group::{GroupExpr, PrimeFamily};
use crate::primes::PrimeSet;
use crate::verdict::{Answer, Verdict};

/// The coefficient ring `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingExpr {
    /// `Z_(J)`: the integers with every prime outside `J` inverted.
    Localized(PrimeSet),
    /// `(+)_{p in J} Z/p`, `J` nonempty.
    PrimeFieldSum(PrimeSet),
    Zero,
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zero => write!(f, "0"),
            RingExpr::Localized(j) => match j.complement() {
                PrimeSet::Finite(s) if s.is_empty() => write!(f, "Z"),
                PrimeSet::Finite(s) => {
                    let ps: Vec<String> = s.iter().map(u64::to_string).collect();
                    write!(f, "Z[1/{}]", ps.join(","))
                }
                PrimeSet::Cofinite(_) => write!(f, "Z_({})", j.index_symbol()),
            },
            RingExpr::PrimeFieldSum(j) => {
                let g = GroupExpr::PrimeSum { factor: PrimeFamily::Cyclic(1), primes: j.clone() }.normalize();
                write!(f, "{g}")
            }
        }
    }
}

impl Serialize for RingExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffSystem {
    pub j: PrimeSet,
    pub j_prime: PrimeSet,
    pub h: GroupExpr,
    pub r: RingExpr,
    /// Whether `G_ab` is torsion, which selects the shape of `H` and `R`.
    pub torsion: bool,
}

pub fn derive_coeffs(g: &GroupExpr) -> Result<CoeffSystem, Error> {
    g.require_fragment()?;
    let gab = g.abelianize();
    let j = uniquely_divisible_primes(&gab)?;
    let j_prime = j.complement();
    let torsion = classify(&gab)?.is_torsion;
    let (h, r) = if torsion {
        let h = GroupExpr::PrimeSum { factor: PrimeFamily::Cyclic(1), primes: j_prime.clone() }.normalize();
        (h, RingExpr::Localized(j.clone()))
    } else {
        let h = GroupExpr::rank_one(BaerType::subring(&j));
        let r = if j.is_empty() { RingExpr::Zero } else { RingExpr::PrimeFieldSum(j.clone()) };
        (h, r)
    };
    Ok(CoeffSystem { j, j_prime, h, r, torsion })
}

/// Whether reduced homology with coefficients in `R` vanishes, given integral
/// homology in degrees `1, 2, ...`.
pub fn hr_acyclic(homology: &[GroupExpr], c: &CoeffSystem) -> Result<Verdict, Error> {
    for h in homology {
        h.require_abelian_fragment()?;
    }
    let mut v = Verdict::new(Answer::Yes);
    match &c.r {
        RingExpr::Zero => {}
        RingExpr::PrimeFieldSum(j) => {
            for (i, h) in homology.iter().enumerate() {
                let bad = j.difference(&uniquely_divisible_primes(h)?);
                if let Some(p) = bad.min_member() {
                    v = Verdict::new(Answer::No).witness("degree", i + 1).witness("prime", p);
                    break;
                }
            }
        }
        RingExpr::Localized(j) => {
            // H (x) Z_(J) = 0 iff H is torsion with support outside J
            for (i, h) in homology.iter().enumerate() {
                let rep = classify(h)?;
                let bad = rep.torsion_primes.iter().find(|&&p| j.contains(p));
                if !rep.is_torsion || bad.is_some() {
                    v = Verdict::new(Answer::No).witness("degree", i + 1);
                    if let Some(p) = bad {
                        v.add_witness("prime", p);
                    } else {
                        v.add_witness("reason", "non-torsion homology");
                    }
                    break;
                }
            }
        }
    }
    v.add_witness("R", &c.r);
    let outcome = v.answer;
    Ok(v.cite("HR", "Notation 1.3", outcome))
}
