//! Partitioning identities by the models that satisfy them.
//!
//! Two identities fall in the same block when exactly the same models
//! satisfy them. Over finitely many small models this can only merge
//! varieties that are really distinct, never split equal ones, so the
//! report always records which models were used.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{check_compiled, member_of, symmetric, variety, FiniteZroupoid};
use crate::compiled::CompiledIdentity;
use crate::identity::Identity;
use crate::search::{enumerate_models, SearchError, SearchSpec};
use crate::waid::{enumerate_waids, identity_from_name};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("model {0} is not a symmetric implication zroupoid")]
    NotSymmetric(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Labels of the six distinct varieties, bottom to top.
pub const LABELS: [&str; 6] = ["SL", "43A12", "43A23", "42A12", "43F25", "S"];

/// Known equalities, one list per distinct variety. Identities of length 4
/// with 3 variables other than the three listed representatives are not
/// enumerated here; they only have to join one of these six blocks.
const EXPECTED: [(&str, &[&str]); 6] = [
    (
        "SL",
        &[
            "LALT", "FLEX", "RALT", "33A12", "42A14", "42B14", "42B24", "42B34", "42B45", "42C14",
            "42C24", "42C34", "42C45", "42D14", "42D34", "42E12", "42E14", "42E23", "42E24",
            "42E34", "42E35", "42E45", "42F15", "42F23", "42F24", "42F45", "42G23", "42G24",
            "42G35", "42G45", "42E15", "42G14", "42F13", "42F14", "42F34", "44A12", "44A13",
            "44A14", "44A15", "44A23", "44A24", "44A34", "44A35", "44A45",
        ],
    ),
    (
        "43A12",
        &["43A12", "42C12", "42C13", "42C15", "42D12", "42F35", "42D15", "42E13", "42F12", "42G13"],
    ),
    (
        "43A23",
        &[
            "43A23", "31A12", "41A14", "41A34", "41A45", "41A24", "44A25", "42A24", "42A34",
            "42A45", "42B13", "42B15", "42B23", "42B25", "42D24", "42D45", "42F25", "42G15",
            "42G34", "42G12",
        ],
    ),
    ("42A12", &["42A12", "42A13", "42A15", "42D23", "42D35"]),
    ("43F25", &["43F25", "42B35", "42B12", "42C23", "42C25", "42C35", "42G25", "42D13"]),
    (
        "S",
        &[
            "41A23", "41A13", "41A15", "41A35", "41A25", "41A12", "42A23", "42A25", "42A35",
            "42D25", "42E25",
        ],
    ),
];

/// Covering pairs of the expected poset, including the trivial variety
/// `T` and Boolean algebras `BA`.
pub const EXPECTED_HASSE: [(&str, &str); 10] = [
    ("T", "BA"),
    ("T", "SL"),
    ("BA", "43A12"),
    ("SL", "43A12"),
    ("SL", "43A23"),
    ("43A12", "42A12"),
    ("43A12", "43F25"),
    ("43A23", "43F25"),
    ("42A12", "S"),
    ("43F25", "S"),
];

#[derive(Clone, Debug)]
pub struct ExpectedClassification {
    /// Canonical name to label, for every transcribed identity.
    pub label_of: BTreeMap<String, &'static str>,
}

impl ExpectedClassification {
    pub fn load() -> Self {
        let mut label_of = BTreeMap::new();
        for (label, members) in EXPECTED {
            for m in members {
                let id = identity_from_name(m).expect("transcribed name");
                let prev = label_of.insert(id.name, label);
                assert!(prev.is_none(), "{m} listed twice");
            }
        }
        ExpectedClassification { label_of }
    }

    /// Transcribed names (canonical) carrying `label`.
    pub fn members(&self, label: &str) -> Vec<&str> {
        self.label_of.iter().filter(|(_, l)| **l == label).map(|(n, _)| n.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Least member name.
    pub representative: String,
    /// Expected label, when the block's transcribed members agree on one.
    pub label: Option<String>,
    pub members: Vec<String>,
    /// One character per model, `1` where the model satisfies the block.
    pub fingerprint: String,
}

impl Block {
    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.representative)
    }

    fn satisfied_by(&self) -> Vec<bool> {
        self.fingerprint.chars().map(|c| c == '1').collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelInfo {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Discrepancy {
    /// Identities expected equal ended up in different blocks.
    Split { label: String, blocks: Vec<String> },
    /// One block holds identities of several expected varieties.
    Merged { block: String, labels: Vec<String> },
    /// A block contains no transcribed identity.
    Unexpected { block: String },
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Discrepancy::Split { label, blocks } => {
                write!(f, "{label} is split across blocks {}", blocks.join(", "))
            }
            Discrepancy::Merged { block, labels } => {
                write!(f, "block {block} merges {}", labels.join(", "))
            }
            Discrepancy::Unexpected { block } => write!(f, "block {block} matches no expected variety"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub blocks: Vec<Block>,
    pub models: Vec<ModelInfo>,
    /// Comparison with the expected table; `None` unless the identities
    /// cover the whole inventory.
    pub diff: Option<Vec<Discrepancy>>,
    /// Identities absent from the expected table, grouped by the label of
    /// the block they joined.
    pub placed: BTreeMap<String, Vec<String>>,
}

impl PartitionReport {
    pub fn diff_is_empty(&self) -> bool {
        self.diff.as_ref().is_some_and(|d| d.is_empty())
    }

    pub fn block_of(&self, name: &str) -> Option<&Block> {
        let canonical = identity_from_name(name).map(|i| i.name).unwrap_or_else(|_| name.to_string());
        self.blocks.iter().find(|b| b.members.contains(&canonical))
    }

    /// Does every block of `self` sit inside a block of `coarser`?
    pub fn refines(&self, coarser: &PartitionReport) -> bool {
        self.blocks.iter().all(|b| {
            coarser.blocks.iter().any(|c| b.members.iter().all(|m| c.members.contains(m)))
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let models: Vec<String> = self.models.iter().map(|m| format!("{} ({})", m.name, m.size)).collect();
        let _ = writeln!(s, "models: {}", models.join(", "));
        for b in &self.blocks {
            let _ = writeln!(
                s,
                "{:<6} rep {:<6} fp {} [{}] {}",
                b.label.as_deref().unwrap_or("-"),
                b.representative,
                b.fingerprint,
                b.members.len(),
                b.members.join(" ")
            );
        }
        let diff = match &self.diff {
            None => "not applicable".to_string(),
            Some(d) if d.is_empty() => "none".to_string(),
            Some(d) => d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        };
        let _ = writeln!(s, "{} blocks, diff: {diff}", self.blocks.len());
        s
    }
}

/// Groups `ids` by their satisfaction pattern over `models`.
pub fn induced_partition(ids: &[Identity], models: &[FiniteZroupoid]) -> Result<PartitionReport, ClassifyError> {
    let s = symmetric();
    for (i, m) in models.iter().enumerate() {
        if !member_of(m, &s).holds {
            return Err(ClassifyError::NotSymmetric(model_name(m, i)));
        }
    }
    let compiled: Vec<CompiledIdentity> = ids.iter().map(CompiledIdentity::new).collect();
    let patterns: Vec<String> = compiled
        .par_iter()
        .map(|c| {
            models.iter().map(|m| if check_compiled(m, "", c).holds { '1' } else { '0' }).collect()
        })
        .collect();

    let mut groups: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (id, p) in ids.iter().zip(&patterns) {
        groups.entry(p.as_str()).or_default().push(id.name.clone());
    }
    let expected = ExpectedClassification::load();
    let mut blocks: Vec<Block> = groups
        .into_iter()
        .map(|(fp, mut members)| {
            members.sort();
            members.dedup();
            let labels: BTreeSet<&str> =
                members.iter().filter_map(|m| expected.label_of.get(m).copied()).collect();
            Block {
                representative: members[0].clone(),
                label: (labels.len() == 1).then(|| labels.into_iter().next().unwrap().to_string()),
                members,
                fingerprint: fp.to_string(),
            }
        })
        .collect();
    blocks.sort_by(|a, b| a.representative.cmp(&b.representative));

    let names: BTreeSet<&str> = ids.iter().map(|i| i.name.as_str()).collect();
    let full = enumerate_waids(4).expect("inventory").iter().all(|i| names.contains(i.name.as_str()));
    let diff = full.then(|| compare(&blocks, &expected));
    let mut placed: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for b in &blocks {
        for m in b.members.iter().filter(|m| !expected.label_of.contains_key(*m)) {
            placed.entry(b.name().to_string()).or_default().push(m.clone());
        }
    }
    Ok(PartitionReport {
        blocks,
        models: models.iter().enumerate().map(|(i, m)| ModelInfo { name: model_name(m, i), size: m.size() }).collect(),
        diff,
        placed,
    })
}

fn model_name(m: &FiniteZroupoid, i: usize) -> String {
    if m.name().is_empty() {
        format!("#{i}")
    } else {
        m.name().to_string()
    }
}

fn compare(blocks: &[Block], expected: &ExpectedClassification) -> Vec<Discrepancy> {
    let mut diff = Vec::new();
    for label in LABELS {
        let holders: BTreeSet<&str> = blocks
            .iter()
            .filter(|b| b.members.iter().any(|m| expected.label_of.get(m) == Some(&label)))
            .map(|b| b.representative.as_str())
            .collect();
        if holders.len() > 1 {
            diff.push(Discrepancy::Split {
                label: label.to_string(),
                blocks: holders.into_iter().map(str::to_string).collect(),
            });
        }
    }
    for b in blocks {
        let labels: BTreeSet<&str> = b.members.iter().filter_map(|m| expected.label_of.get(m).copied()).collect();
        match labels.len() {
            0 => diff.push(Discrepancy::Unexpected { block: b.representative.clone() }),
            1 => {}
            _ => diff.push(Discrepancy::Merged {
                block: b.representative.clone(),
                labels: labels.into_iter().map(str::to_string).collect(),
            }),
        }
    }
    diff
}

/// One representative per isomorphism class of symmetric models of each
/// size up to `max_size`, named `S<size>.<index>`.
pub fn symmetric_models_up_to(max_size: usize, size_cap: usize) -> Result<Vec<FiniteZroupoid>, SearchError> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        let spec = SearchSpec::new(size).size_cap(size_cap).satisfy(symmetric());
        for (k, m) in enumerate_models(&spec)?.into_iter().enumerate() {
            out.push(m.with_name(format!("S{size}.{}", k + 1)));
        }
    }
    Ok(out)
}

/// Partition of `ids` over every symmetric model up to `max_size`.
pub fn classify_up_to(max_size: usize, ids: &[Identity], size_cap: usize) -> Result<PartitionReport, ClassifyError> {
    let models = symmetric_models_up_to(max_size, size_cap)?;
    induced_partition(ids, &models)
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetNode {
    pub name: String,
    pub landmark: bool,
    pub fingerprint: String,
    /// Length of the longest chain below this node.
    pub level: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Poset {
    pub nodes: Vec<PosetNode>,
    /// `leq[i][j]`: every model of node `i` is a model of node `j`.
    pub leq: Vec<Vec<bool>>,
    /// Covering pairs `(lower, upper)` as node indices.
    pub hasse: Vec<(usize, usize)>,
}

impl Poset {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn le(&self, a: &str, b: &str) -> Option<bool> {
        Some(self.leq[self.index(a)?][self.index(b)?])
    }

    /// Covering pairs by node name, sorted.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut e: Vec<_> =
            self.hasse.iter().map(|&(a, b)| (self.nodes[a].name.clone(), self.nodes[b].name.clone())).collect();
        e.sort();
        e
    }

    /// Greatest common lower bound, if unique.
    pub fn meet(&self, a: &str, b: &str) -> Option<&str> {
        let (a, b) = (self.index(a)?, self.index(b)?);
        let lower: Vec<usize> = (0..self.nodes.len()).filter(|&c| self.leq[c][a] && self.leq[c][b]).collect();
        let greatest: Vec<usize> =
            lower.iter().copied().filter(|&c| lower.iter().all(|&d| self.leq[d][c])).collect();
        match greatest.as_slice() {
            [g] => Some(&self.nodes[*g].name),
            _ => None,
        }
    }

    pub fn to_dot(&self) -> String {
        hasse_dot(self)
    }
}

/// Inclusion order between blocks (and optionally the landmarks `T` and
/// `BA`), judged by which of `models` satisfy each node.
pub fn inclusion_poset(report: &PartitionReport, models: &[FiniteZroupoid], with_landmarks: bool) -> Poset {
    let mut raw: Vec<(String, bool, Vec<bool>)> =
        report.blocks.iter().map(|b| (b.name().to_string(), false, b.satisfied_by())).collect();
    if with_landmarks {
        for name in ["T", "BA"] {
            let v = variety(name).expect("landmark variety");
            raw.push((name.to_string(), true, models.iter().map(|m| member_of(m, &v).holds).collect()));
        }
    }
    raw.sort_by(|a, b| a.0.cmp(&b.0));
    let k = raw.len();
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| !*x || *y);
    let leq: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| subset(&raw[i].2, &raw[j].2)).collect()).collect();
    let lt = |i: usize, j: usize| leq[i][j] && !leq[j][i];
    let mut hasse = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if lt(i, j) && !(0..k).any(|c| lt(i, c) && lt(c, j)) {
                hasse.push((i, j));
            }
        }
    }
    let mut level = vec![0usize; k];
    // longest chain from below; k rounds suffice for a strict order on k nodes
    for _ in 0..k {
        for &(a, b) in &hasse {
            level[b] = level[b].max(level[a] + 1);
        }
    }
    let nodes = raw
        .into_iter()
        .zip(level)
        .map(|((name, landmark, fp), level)| PosetNode {
            name,
            landmark,
            fingerprint: fp.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            level,
        })
        .collect();
    Poset { nodes, leq, hasse }
}

/// DOT digraph of the covering relation, drawn bottom to top.
pub fn hasse_dot(poset: &Poset) -> String {
    let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for n in &poset.nodes {
        let _ = writeln!(s, "  \"{}\";", n.name);
    }
    let mut levels: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for n in &poset.nodes {
        levels.entry(n.level).or_default().push(&n.name);
    }
    for names in levels.values() {
        let list: Vec<String> = names.iter().map(|n| format!("\"{n}\";")).collect();
        let _ = writeln!(s, "  {{ rank=same; {} }}", list.join(" "));
    }
    for (a, b) in poset.edges() {
        let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
    }
    s.push_str("}\n");
    s
}
