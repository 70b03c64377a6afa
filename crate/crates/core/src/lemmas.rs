//! Registry of identities that hold in every algebra of a hypothesis class.
//!
//! Each clause names a base variety, optional premise identities and a
//! conclusion. Running the suite on an algebra checks the conclusion when
//! the algebra meets the hypothesis and marks the clause vacuous otherwise.
//! The clauses are data; nothing here derives them.

use serde::Serialize;

use crate::algebra::{member_of, satisfies, variety, FiniteZroupoid, SatisfactionReport, VarietyDescriptor};
use crate::identity::{ident, Identity};

#[derive(Clone, Debug)]
pub enum Conclusion {
    Holds(Identity),
    /// All of these hold or none of them does.
    Equivalent(Vec<Identity>),
}

#[derive(Clone, Debug)]
pub struct LemmaClause {
    pub id: String,
    pub base: VarietyDescriptor,
    pub premises: Vec<Identity>,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Vacuous,
    Fail { detail: String, report: Option<SatisfactionReport> },
}

impl Outcome {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Outcome::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaEntry {
    pub clause: String,
    pub statement: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub algebra: String,
    pub entries: Vec<LemmaEntry>,
}

impl LemmaReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.outcome.is_ok())
    }

    pub fn count(&self, f: impl Fn(&Outcome) -> bool) -> usize {
        self.entries.iter().filter(|e| f(&e.outcome)).count()
    }
}

// (clause id, base variety, premises, conclusion)
type Row = (&'static str, &'static str, &'static [&'static str], &'static str);

const ROWS: &[Row] = &[
    ("semilattice/mc-commutes", "MC", &["x' = x"], "x -> y = y -> x"),
    ("semilattice/associative", "C", &["x' = x"], "(x -> y) -> z = x -> (y -> z)"),
    ("semilattice/idempotent", "C", &["x' = x"], "x -> x = x"),
    ("semilattice/zero-unit", "C", &["x' = x"], "0 -> x = x"),
    ("involutive-negation/1", "I20", &[], "x' -> 0' = 0 -> x"),
    ("involutive-negation/2", "I20", &[], "0 -> x' = x -> 0'"),
    ("involutive/01", "I20", &[], "(x -> 0') -> y = (x -> y') -> y"),
    ("involutive/02", "I20", &[], "((0 -> x) -> y) -> x = y -> x"),
    ("involutive/03", "I20", &[], "(x -> (y -> x)')' = (x -> y) -> x"),
    ("involutive/04", "I20", &[], "(y -> x) -> y = (0 -> x) -> y"),
    ("involutive/05", "I20", &[], "(0 -> x) -> (x -> y) = x -> (x -> y)"),
    ("involutive/06", "I20", &[], "(0 -> x) -> (0 -> y) = x -> (0 -> y)"),
    ("involutive/07", "I20", &[], "x -> y = x -> (x -> y)"),
    ("involutive/08", "I20", &[], "0 -> (0 -> x)' = 0 -> x'"),
    ("involutive/09", "I20", &[], "0 -> (x -> y) = x -> (0 -> y)"),
    ("involutive/10", "I20", &[], "0 -> (x -> y')' = 0 -> (x' -> y)"),
    ("involutive/11", "I20", &[], "x -> (y -> x') = y -> x'"),
    ("involutive/12", "I20", &[], "(x -> y) -> (y -> x) = y -> x"),
    ("involutive/13", "I20", &[], "(x -> y) -> (y -> z) = (0 -> x') -> (y -> z)"),
    ("involutive/14", "I20", &[], "(x -> y)' -> y = x -> y"),
    ("involutive/15", "I20", &[], "(x -> y) -> ((0 -> y) -> z) = (x -> y) -> z"),
    ("involutive/16", "I20", &[], "(x -> y) -> ((z -> y) -> (u -> z)) = (x -> y) -> (u -> z)"),
    ("zero-fixed", "I20", &["0 = 0'"], "0 -> x = x"),
    ("left-unit-negation", "I20", &["0 -> x = x"], "(x -> y)' = x' -> y'"),
    ("symmetric/exchange", "S", &[], "x -> (y -> z) = y -> (x -> z)"),
    ("symmetric/contraposition", "S", &[], "x' -> y = y' -> x"),
    ("zero-self-arrow/1", "S", &["0 -> x = x -> x"], "0 -> (x -> x) = x -> x"),
    ("zero-self-arrow/2", "S", &["0 -> x = x -> x"], "0 -> x' = 0 -> x"),
    ("unit-self-arrow/1", "S", &["0 -> (x -> x) = x -> x"], "(x -> x) -> y' = ((x -> x) -> y)'"),
    (
        "unit-self-arrow/2",
        "S",
        &["0 -> (x -> x) = x -> x"],
        "(x -> x) -> (y -> z) = ((x -> x) -> y) -> z",
    ),
    (
        "unit-self-arrow/3",
        "S",
        &["0 -> (x -> x) = x -> x"],
        "(x -> y) -> (x -> y) = (x -> x) -> (y -> y)",
    ),
    ("unit-self-arrow/4", "S", &["0 -> (x -> x) = x -> x"], "(x -> x) -> (0 -> x') = x -> x"),
    (
        "unit-self-arrow/5",
        "S",
        &["0 -> (x -> x) = x -> x"],
        "(x -> y) -> (x -> y) = (y -> y) -> (x -> x)",
    ),
    ("idempotent", "S", &["x -> x = x"], "x' = x"),
    ("left-unit/alternative", "S", &["0 -> x = x"], "x -> (x -> x) = (x -> x) -> x"),
    ("left-unit/terms-1-2", "S", &["0 -> x = x"], "((x -> y) -> z) -> t = z -> ((y -> x) -> t)"),
    ("left-unit/terms-1-3", "S", &["0 -> x = x"], "((x -> y) -> z) -> t = (y -> x) -> (z -> t)"),
    ("left-unit/terms-1-4", "S", &["0 -> x = x"], "((x -> y) -> z) -> t = ((z -> y) -> x) -> t"),
    ("left-unit/terms-1-5", "S", &["0 -> x = x"], "((x -> y) -> z) -> t = (y -> z) -> (x -> t)"),
    ("left-unit/terms-2-3", "S", &["0 -> x = x"], "z -> ((y -> x) -> t) = (y -> x) -> (z -> t)"),
    ("left-unit/terms-2-4", "S", &["0 -> x = x"], "z -> ((y -> x) -> t) = ((z -> y) -> x) -> t"),
    ("left-unit/terms-2-5", "S", &["0 -> x = x"], "z -> ((y -> x) -> t) = (y -> z) -> (x -> t)"),
    ("left-unit/terms-3-4", "S", &["0 -> x = x"], "(y -> x) -> (z -> t) = ((z -> y) -> x) -> t"),
    ("left-unit/terms-3-5", "S", &["0 -> x = x"], "(y -> x) -> (z -> t) = (y -> z) -> (x -> t)"),
    ("left-unit/terms-4-5", "S", &["0 -> x = x"], "((z -> y) -> x) -> t = (y -> z) -> (x -> t)"),
    (
        "left-unit/square-assoc",
        "S",
        &["0 -> x = x"],
        "x -> ((x -> x) -> y) = (x -> (x -> x)) -> y",
    ),
    ("one-variable/1", "S", &[], "(x -> x) -> (x -> x) = x -> (x -> (x -> x))"),
    ("one-variable/2", "S", &[], "((x -> x) -> x) -> x = x -> (x -> (x -> x))"),
    ("one-variable/3", "S", &[], "(x -> y) -> (y -> z) = ((y -> x) -> y) -> z"),
    ("one-variable/4", "S", &[], "y -> ((x -> y) -> z) = ((y -> x) -> y) -> z"),
    ("one-variable/5", "S", &[], "(x -> x) -> (x -> y) = x -> ((x -> x) -> y)"),
    ("one-variable/6", "S", &[], "x -> ((x -> x) -> y) = ((x -> x) -> x) -> y"),
    ("one-variable/7", "S", &[], "x -> ((y -> x) -> x) = ((x -> y) -> x) -> x"),
    ("one-variable/8", "S", &[], "x -> ((y -> x) -> y) = ((x -> y) -> x) -> y"),
];

const INVOLUTION_EQUIVALENTS: [&str; 4] = ["0' -> x = x", "x'' = x", "(x -> x')' = x", "x' -> x = x"];

/// The identities whose equivalence over `I` characterizes involutive algebras.
pub fn involution_equivalents() -> Vec<Identity> {
    INVOLUTION_EQUIVALENTS
        .iter()
        .enumerate()
        .map(|(i, s)| ident(&format!("involution-equivalence/{}", i + 1), s))
        .collect()
}

pub fn lemma_clauses() -> Vec<LemmaClause> {
    let mut out = vec![LemmaClause {
        id: "involution-equivalence".to_string(),
        base: variety("I").unwrap(),
        premises: Vec::new(),
        conclusion: Conclusion::Equivalent(involution_equivalents()),
    }];
    for &(id, base, premises, conclusion) in ROWS {
        out.push(LemmaClause {
            id: id.to_string(),
            base: variety(base).unwrap_or_else(|| panic!("unknown base {base}")),
            premises: premises.iter().map(|p| ident(&format!("{id}:premise"), p)).collect(),
            conclusion: Conclusion::Holds(ident(id, conclusion)),
        });
    }
    out
}

impl LemmaClause {
    pub fn statement(&self) -> String {
        let mut hyp = vec![self.base.name.clone()];
        hyp.extend(self.premises.iter().map(|p| p.to_string()));
        let concl = match &self.conclusion {
            Conclusion::Holds(id) => id.to_string(),
            Conclusion::Equivalent(ids) => {
                ids.iter().map(|i| format!("[{i}]")).collect::<Vec<_>>().join(" <=> ")
            }
        };
        format!("{} |= {concl}", hyp.join(" & "))
    }

    pub fn check(&self, alg: &FiniteZroupoid) -> Outcome {
        if !member_of(alg, &self.base).holds || !self.premises.iter().all(|p| satisfies(alg, p).holds) {
            return Outcome::Vacuous;
        }
        match &self.conclusion {
            Conclusion::Holds(id) => {
                let r = satisfies(alg, id);
                if r.holds {
                    Outcome::Pass
                } else {
                    Outcome::Fail { detail: format!("{id} fails at {}", r.witness_text()), report: Some(r) }
                }
            }
            Conclusion::Equivalent(ids) => {
                let held: Vec<bool> = ids.iter().map(|i| satisfies(alg, i).holds).collect();
                if held.iter().all(|&h| h) || held.iter().all(|&h| !h) {
                    Outcome::Pass
                } else {
                    let pattern: String = held.iter().map(|&h| if h { '1' } else { '0' }).collect();
                    Outcome::Fail { detail: format!("mixed satisfaction pattern {pattern}"), report: None }
                }
            }
        }
    }
}

pub fn lemma_suite(alg: &FiniteZroupoid) -> LemmaReport {
    let entries = lemma_clauses()
        .iter()
        .map(|c| LemmaEntry { clause: c.id.clone(), statement: c.statement(), outcome: c.check(alg) })
        .collect();
    LemmaReport { algebra: alg.name().to_string(), entries }
}
