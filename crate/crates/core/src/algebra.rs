//! Finite zroupoids, identity satisfaction and variety membership.
//!
//! Element `0` of every carrier interprets the constant `0`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compiled::{for_each_assignment, CompiledIdentity};
use crate::identity::{ident, Identity};
use crate::term::Var;
use crate::waid;

/// Largest carrier the flat `u8` table can hold.
pub const MAX_CARRIER: usize = 254;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one element")]
    Empty,
    #[error("carrier size {0} exceeds {MAX_CARRIER}")]
    TooLarge(usize),
    #[error("row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for size {size}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, size: usize },
    #[error("declared size {declared} does not match table size {actual}")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read algebra file: {0}")]
    Io(#[from] std::io::Error),
}

/// A finite zroupoid on `{0, …, n-1}` with `table[i][j] = i -> j`.
///
/// Equality, ordering and hashing ignore the name.
#[derive(Clone, Debug)]
pub struct FiniteZroupoid {
    size: usize,
    table: Vec<u8>,
    name: String,
}

impl PartialEq for FiniteZroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table
    }
}

impl Eq for FiniteZroupoid {}

impl Hash for FiniteZroupoid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.size.hash(state);
        self.table.hash(state);
    }
}

impl PartialOrd for FiniteZroupoid {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteZroupoid {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.size, &self.table).cmp(&(other.size, &other.table))
    }
}

/// On-disk form: `{"name": str, "size": n, "table": [[int; n]; n]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default)]
    pub name: String,
    pub size: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteZroupoid {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let size = rows.len();
        if size == 0 {
            return Err(AlgebraError::Empty);
        }
        if size > MAX_CARRIER {
            return Err(AlgebraError::TooLarge(size));
        }
        let mut table = Vec::with_capacity(size * size);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != size {
                return Err(AlgebraError::NotSquare { row, len: r.len(), size });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= size {
                    return Err(AlgebraError::EntryOutOfRange { row, col, value, size });
                }
                table.push(value as u8);
            }
        }
        Ok(FiniteZroupoid { size, table, name: String::new() })
    }

    pub(crate) fn from_flat(size: usize, table: Vec<u8>) -> Self {
        debug_assert_eq!(table.len(), size * size);
        FiniteZroupoid { size, table, name: String::new() }
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        FiniteZroupoid::from_flat(1, vec![0])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub(crate) fn flat(&self) -> &[u8] {
        &self.table
    }

    /// Image of this algebra under the bijection `perm` (`perm[0]` must be 0).
    pub fn relabel(&self, perm: &[usize]) -> FiniteZroupoid {
        assert_eq!(perm.len(), self.size);
        let n = self.size;
        let mut table = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.op(a, b)] as u8;
            }
        }
        FiniteZroupoid { size: n, table, name: self.name.clone() }
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile { name: self.name.clone(), size: self.size, table: self.rows() }
    }

    pub fn from_file(file: AlgebraFile) -> Result<Self, AlgebraError> {
        if file.size != file.table.len() {
            return Err(AlgebraError::SizeMismatch { declared: file.size, actual: file.table.len() });
        }
        Ok(FiniteZroupoid::new(file.table)?.with_name(file.name))
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        FiniteZroupoid::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("algebra serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AlgebraError> {
        let text = std::fs::read_to_string(path)?;
        FiniteZroupoid::from_json(&text)
    }
}

impl fmt::Display for FiniteZroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.size.to_string().len().max(2);
        write!(f, "{:>w$} |", "->")?;
        for j in 0..self.size {
            write!(f, " {j:>w$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(w + 2 + (w + 1) * self.size))?;
        for i in 0..self.size {
            write!(f, "{i:>w$} |")?;
            for j in 0..self.size {
                write!(f, " {:>w$}", self.op(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Algebras used as landmarks and separating examples.
pub fn catalog() -> BTreeMap<String, FiniteZroupoid> {
    let entries: [(&str, Vec<Vec<usize>>); 5] = [
        ("2_s", vec![vec![0, 1], vec![1, 1]]),
        ("2_b", vec![vec![1, 1], vec![0, 1]]),
        ("A3", vec![vec![2, 2, 2], vec![1, 1, 2], vec![0, 1, 2]]),
        (
            "A4",
            vec![vec![0, 1, 2, 3], vec![2, 3, 2, 3], vec![1, 1, 3, 3], vec![3, 3, 3, 3]],
        ),
        ("T1", vec![vec![0]]),
    ];
    entries
        .into_iter()
        .map(|(name, rows)| {
            (name.to_string(), FiniteZroupoid::new(rows).expect("catalog table").with_name(name))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatisfactionReport {
    pub holds: bool,
    /// Name of the identity that failed, if any.
    pub failed: Option<String>,
    pub witness: Option<Vec<(Var, usize)>>,
    pub lhs_value: Option<usize>,
    pub rhs_value: Option<usize>,
}

impl SatisfactionReport {
    pub fn pass() -> Self {
        SatisfactionReport { holds: true, failed: None, witness: None, lhs_value: None, rhs_value: None }
    }

    pub fn witness_text(&self) -> String {
        match &self.witness {
            None => String::new(),
            Some(w) if w.is_empty() => "(no variables)".to_string(),
            Some(w) => w.iter().map(|(v, a)| format!("{v}={a}")).collect::<Vec<_>>().join(", "),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

pub(crate) fn check_compiled(alg: &FiniteZroupoid, name: &str, c: &CompiledIdentity) -> SatisfactionReport {
    let n = alg.size;
    let mut report = SatisfactionReport::pass();
    for_each_assignment(n, c.arity(), |env| {
        let (l, r) = c.eval(&alg.table, n, env).expect("complete table");
        if l != r {
            report = SatisfactionReport {
                holds: false,
                failed: Some(name.to_string()),
                witness: Some(c.vars().iter().zip(env).map(|(v, &a)| (*v, a as usize)).collect()),
                lhs_value: Some(l as usize),
                rhs_value: Some(r as usize),
            };
            return false;
        }
        true
    });
    report
}

/// Checks `id` over every assignment; the witness is the first failing
/// assignment in lexicographic order.
pub fn satisfies(alg: &FiniteZroupoid, id: &Identity) -> SatisfactionReport {
    check_compiled(alg, id.display_name(), &CompiledIdentity::new(id))
}

/// A variety given by defining identities relative to a parent variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyDescriptor {
    pub name: String,
    pub parent: Option<Box<VarietyDescriptor>>,
    pub defining: Vec<Identity>,
}

impl VarietyDescriptor {
    pub fn new(name: impl Into<String>, parent: Option<VarietyDescriptor>, defining: Vec<Identity>) -> Self {
        VarietyDescriptor { name: name.into(), parent: parent.map(Box::new), defining }
    }

    /// Base name: `absolute` or the parent's name.
    pub fn base(&self) -> &str {
        self.parent.as_ref().map(|p| p.name.as_str()).unwrap_or("absolute")
    }

    /// Every identity, ancestors first.
    pub fn all_identities(&self) -> Vec<Identity> {
        let mut out = self.parent.as_ref().map(|p| p.all_identities()).unwrap_or_default();
        out.extend(self.defining.iter().cloned());
        out
    }

    /// Is `other` an ancestor (or this variety itself)?
    pub fn is_within(&self, other: &str) -> bool {
        self.name == other || self.parent.as_ref().is_some_and(|p| p.is_within(other))
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.defining.iter().map(|i| i.to_string()).collect();
        write!(f, "{} = {{{}}} relative to {}", self.name, ids.join(", "), self.base())
    }
}

/// Base ancestors first, then the defining identities.
pub fn member_of(alg: &FiniteZroupoid, v: &VarietyDescriptor) -> SatisfactionReport {
    for id in v.all_identities() {
        let r = satisfies(alg, &id);
        if !r.holds {
            return r;
        }
    }
    SatisfactionReport::pass()
}

pub fn implication_zroupoids() -> VarietyDescriptor {
    VarietyDescriptor::new(
        "I",
        None,
        vec![ident("I", "(x -> y) -> z = ((z' -> x) -> (y -> z)')'"), ident("I0", "0'' = 0")],
    )
}

pub fn involutive() -> VarietyDescriptor {
    VarietyDescriptor::new("I20", Some(implication_zroupoids()), vec![ident("I20", "x'' = x")])
}

pub fn meet_commutative() -> VarietyDescriptor {
    VarietyDescriptor::new("MC", Some(implication_zroupoids()), vec![ident("MC", "x ^ y = y ^ x")])
}

pub fn symmetric() -> VarietyDescriptor {
    VarietyDescriptor::new(
        "S",
        Some(implication_zroupoids()),
        vec![ident("I20", "x'' = x"), ident("MC", "x ^ y = y ^ x")],
    )
}

pub fn de_morgan() -> VarietyDescriptor {
    VarietyDescriptor::new("DM", Some(implication_zroupoids()), vec![ident("DM", "(x -> y) -> x = x")])
}

/// Names accepted by [`variety`] besides identity names.
pub const NAMED_VARIETIES: [&str; 11] = ["I", "I20", "MC", "S", "SL", "DM", "KL", "BA", "C", "I10", "T"];

/// Looks up a registered variety, or the subvariety of `S` defined by a
/// weak associative identity name or alias.
pub fn variety(name: &str) -> Option<VarietyDescriptor> {
    let i = implication_zroupoids;
    Some(match name {
        "I" => i(),
        "I20" => involutive(),
        "MC" => meet_commutative(),
        "S" => symmetric(),
        "SL" => VarietyDescriptor::new(
            "SL",
            Some(i()),
            vec![ident("SL1", "x' = x"), ident("SL2", "x -> y = y -> x")],
        ),
        "DM" => de_morgan(),
        "KL" => VarietyDescriptor::new(
            "KL",
            Some(de_morgan()),
            vec![ident("KL", "(x -> x) -> (y -> y) = y -> y")],
        ),
        "BA" => VarietyDescriptor::new("BA", Some(de_morgan()), vec![ident("BA", "x -> x = 0'")]),
        "C" => VarietyDescriptor::new("C", Some(i()), vec![ident("C", "x -> y = y -> x")]),
        "I10" => VarietyDescriptor::new("I10", Some(i()), vec![ident("I10", "x' = x")]),
        "T" => VarietyDescriptor::new("T", None, vec![ident("T", "x = y")]),
        _ => {
            let id = waid::identity_from_name(name).ok()?;
            VarietyDescriptor::new(id.display_name().to_string(), Some(symmetric()), vec![id])
        }
    })
}
