//! Three-valued answers with a trail of the rules that produced them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_known(self) -> bool {
        self != Answer::Unknown
    }

    /// Kleene conjunction.
    pub fn and(self, other: Answer) -> Answer {
        match (self, other) {
            (Answer::No, _) | (_, Answer::No) => Answer::No,
            (Answer::Yes, Answer::Yes) => Answer::Yes,
            _ => Answer::Unknown,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Source results an engine rule is taken from, with a short restatement.
pub const CITATIONS: &[(&str, &str)] = &[
    ("G-radical", "T_G N is the smallest subgroup of N with Hom(G, N/T_G N) = 0; N is G-radical when T_G N = N"),
    ("Notation 1.3", "J is the set of primes p with G_ab uniquely p-divisible; H and R are read off from J and whether G_ab is torsion"),
    ("Theorem 1.5", "X is M-cellular iff pi_1 X is G-cellular, X is HR-acyclic, and the universal extension E of H_2 X is G_ab-radical"),
    ("Definition 1.6", "A is quasi G-radical when the universal extension of A by a sum of copies of G_ab indexed by Ext(G_ab, A) is G_ab-radical"),
    ("Remark 1.7", "G_ab-radical groups are quasi G-radical, and the inclusion is strict: for G = Z(p^inf) the group Z/p is quasi G-radical but not G-radical"),
    ("Theorem 1.8", "if H_2 X is G_ab-radical, X is M-cellular iff pi_1 X is G-cellular and X is HR-acyclic"),
    ("Corollary 1.9", "a simply connected X is M-cellular iff pi_2 X is quasi G-radical and X is HR-acyclic"),
    ("Corollary 1.10", "if pi_1 X is G-cellular, X is HR-acyclic and pi_2 X is G_ab-radical, then X is M-cellular"),
    ("Proposition 1.11", "if pi_2 X is quasi G-radical, X is M-cellular iff pi_1 X is G-cellular and X is HR-acyclic"),
    ("Proposition K(A,2)", "for HR-acyclic K(A,2), M-cellularity is equivalent to A being quasi G-radical"),
    ("Theorem 2.1", "M(G,1) exists for abelian G iff G/T has rank at most 1, each T(p) is divisible or divisible plus cyclic, and T(p) (x) G/T = 0"),
    ("Lemma 2.3", "M(Z/n,1) is M-cellular when every prime dividing n divides 1 in S only finitely often"),
    ("Theorem 2.5", "for G < Q and simply connected X, X is M-cellular iff X is HR-acyclic"),
    ("Example 2.6", "for S of type (1,1,1,...) one has Ext(S,Z) = (Prod_p Z/p)/Z, and S^2 is M(S,1)-cellular"),
    ("Example 2.7", "for G = Q the cellularization of S^2 has pi_1 = pi_2 = (Prod_p Zhat(p))/Z"),
    ("Example 2.8", "for G = Z[1/p] the cellularization of K(Z(p^inf),1) is K(Qhat(p),1)"),
    ("Theorem 2.8", "for G = Z[J^-1], X is M-cellular iff pi_1 X is G-cellular and X is HR-acyclic"),
    ("Proposition 2.9", "for G = Z[J^-1] and nilpotent X, CW_M X is the homotopy fibre of X -> Prod_J (X)^_p"),
    ("Theorem 2.10", "for G a finite sum of cyclic groups, X is M-cellular iff pi_1 X is generated by elements of order p^l with l <= k_p and X is HZ_(J)-acyclic"),
    ("Theorem 2.12", "for simply connected X, X is M(Z(p^inf),1)-cellular iff X is HZ[1/p]-acyclic"),
    ("Lemma 2.13", "if M(A + B,1) exists then M(A,1) and M(B,1) are M(A + B,1)-cellular"),
    ("Theorem 2.14", "for G torsion abelian admitting M(G,1) and simply connected X, X is M-cellular iff X is HZ_(J)-acyclic"),
    ("Theorem 3.1", "for HR-acyclic K(A,2), CW_M K(A,2) = K(Ker phi,2) x K(Coker phi,1) with phi: A -> E -> E/T_G E"),
    ("Theorem 3.2", "for G = Z[1/p] * Z/p one has R = 0, so K(Z,2) is HR-acyclic with G-cellular (trivial) pi_1, but K(Z,2) is not M-cellular"),
    ("Question 2.4", "whether further two-dimensional Moore spaces with abelian pi_1 exist is open"),
    ("Question 3.3", "whether the naive characterization holds for abelian G is open"),
    ("Engine", "rule internal to the engine; no external source"),
];

pub fn statement(citation: &str) -> &'static str {
    CITATIONS.iter().find(|(c, _)| *c == citation).map(|(_, s)| *s).unwrap_or("")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailEntry {
    pub rule: String,
    pub citation: String,
    pub statement: String,
    /// What the rule concluded on this input.
    pub outcome: Answer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub trail: Vec<TrailEntry>,
    pub witnesses: BTreeMap<String, String>,
}

impl Verdict {
    pub fn new(answer: Answer) -> Verdict {
        Verdict { answer, trail: Vec::new(), witnesses: BTreeMap::new() }
    }

    pub fn unknown() -> Verdict {
        Verdict::new(Answer::Unknown)
    }

    pub fn cite(mut self, rule: &str, citation: &str, outcome: Answer) -> Verdict {
        self.push(rule, citation, outcome);
        self
    }

    pub fn push(&mut self, rule: &str, citation: &str, outcome: Answer) {
        self.trail.push(TrailEntry {
            rule: rule.to_string(),
            citation: citation.to_string(),
            statement: statement(citation).to_string(),
            outcome,
        });
    }

    pub fn witness(mut self, key: &str, value: impl fmt::Display) -> Verdict {
        self.witnesses.insert(key.to_string(), value.to_string());
        self
    }

    pub fn add_witness(&mut self, key: &str, value: impl fmt::Display) {
        self.witnesses.insert(key.to_string(), value.to_string());
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }

    pub fn cites(&self, citation: &str) -> bool {
        self.trail.iter().any(|e| e.citation == citation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kleene_conjunction() {
        assert_eq!(Answer::Yes.and(Answer::Unknown), Answer::Unknown);
        assert_eq!(Answer::Unknown.and(Answer::No), Answer::No);
        assert_eq!(Answer::Yes.and(Answer::Yes), Answer::Yes);
    }

    #[test]
    fn every_citation_has_a_statement() {
        for (c, s) in CITATIONS {
            assert!(!s.is_empty(), "{c}");
        }
        let v = Verdict::new(Answer::No).cite("R1", "Theorem 3.2", Answer::No).witness("prime", 2);
        assert!(v.cites("Theorem 3.2"));
        assert_eq!(v.witnesses["prime"], "2");
    }
}
