//! Exhaustive finite model search.
//!
//! Cells are filled row-major. Every identity is ground once per search
//! (one instance per variable assignment) and each instance is evaluated
//! against the partial table until it hits an unassigned cell; it then
//! waits on that cell and is re-evaluated the moment the cell gets a
//! value. An instance whose two sides are both defined and differ prunes
//! the branch. Identities that must fail are checked on complete tables.
//!
//! Isomorphism reduction happens after the search: each model is replaced
//! by its canonical form (the lexicographically least table over all
//! relabelings fixing `0`) and duplicates are dropped.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{check_compiled, symmetric, FiniteZroupoid, VarietyDescriptor};
use crate::compiled::{for_each_assignment, CompiledIdentity, UNSET};
use crate::identity::Identity;

/// Largest size searched without an explicit override.
pub const DEFAULT_SIZE_CAP: usize = 4;
/// Largest size permitted with the large-search flag.
pub const LARGE_SIZE_CAP: usize = 5;

const MAX_VARS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("size {size} exceeds the search cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("model size must be at least 1")]
    ZeroSize,
    #[error("identity {0} is required both to hold and to fail")]
    Overlap(String),
    #[error("identity {0} has more than {MAX_VARS} variables")]
    TooManyVariables(String),
}

#[derive(Clone, Debug)]
pub enum Constraint {
    Variety(VarietyDescriptor),
    Identity(Identity),
}

impl Constraint {
    fn identities(&self) -> Vec<Identity> {
        match self {
            Constraint::Variety(v) => v.all_identities(),
            Constraint::Identity(id) => vec![id.clone()],
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Constraint::Variety(v) => &v.name,
            Constraint::Identity(id) => id.display_name(),
        }
    }
}

impl From<VarietyDescriptor> for Constraint {
    fn from(v: VarietyDescriptor) -> Self {
        Constraint::Variety(v)
    }
}

impl From<Identity> for Constraint {
    fn from(id: Identity) -> Self {
        Constraint::Identity(id)
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub size: usize,
    pub must_satisfy: Vec<Constraint>,
    pub must_fail: Vec<Identity>,
    pub iso_reduce: bool,
    pub limit: Option<usize>,
    pub size_cap: usize,
}

impl SearchSpec {
    pub fn new(size: usize) -> Self {
        SearchSpec {
            size,
            must_satisfy: Vec::new(),
            must_fail: Vec::new(),
            iso_reduce: true,
            limit: None,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }

    pub fn satisfy(mut self, c: impl Into<Constraint>) -> Self {
        self.must_satisfy.push(c.into());
        self
    }

    pub fn fail(mut self, id: Identity) -> Self {
        self.must_fail.push(id);
        self
    }

    pub fn iso_reduce(mut self, on: bool) -> Self {
        self.iso_reduce = on;
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    /// Permits size 5.
    pub fn allow_large(mut self) -> Self {
        self.size_cap = self.size_cap.max(LARGE_SIZE_CAP);
        self
    }

    pub fn size_cap(mut self, cap: usize) -> Self {
        self.size_cap = cap;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.size == 0 {
            return Err(SearchError::ZeroSize);
        }
        if self.size > self.size_cap {
            return Err(SearchError::SizeCap { size: self.size, cap: self.size_cap });
        }
        let required: Vec<Identity> = self.must_satisfy.iter().flat_map(|c| c.identities()).collect();
        for f in &self.must_fail {
            if required.iter().any(|r| r.lhs == f.lhs && r.rhs == f.rhs) {
                return Err(SearchError::Overlap(f.display_name().to_string()));
            }
        }
        for id in required.iter().chain(&self.must_fail) {
            if id.variables().len() > MAX_VARS {
                return Err(SearchError::TooManyVariables(id.display_name().to_string()));
            }
        }
        Ok(())
    }
}

/// Lexicographically least row-major table over all relabelings fixing 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub size: usize,
    pub table: Vec<u8>,
}

impl CanonicalForm {
    pub fn to_algebra(&self) -> FiniteZroupoid {
        FiniteZroupoid::from_flat(self.size, self.table.clone())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.size)?;
        for v in &self.table {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn relabel_flat(table: &[u8], n: usize, perm: &[usize], out: &mut [u8]) {
    for a in 0..n {
        for b in 0..n {
            out[perm[a] * n + perm[b]] = perm[table[a * n + b] as usize] as u8;
        }
    }
}

fn zero_fixing_perms(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..n).permutations(n.saturating_sub(1)).map(|rest| {
        let mut p = Vec::with_capacity(rest.len() + 1);
        p.push(0);
        p.extend(rest);
        p
    })
}

pub fn canonical_form(alg: &FiniteZroupoid) -> CanonicalForm {
    let n = alg.size();
    let table = alg.flat();
    let mut best = table.to_vec();
    let mut buf = vec![0u8; n * n];
    for perm in zero_fixing_perms(n) {
        relabel_flat(table, n, &perm, &mut buf);
        if buf < best {
            best.copy_from_slice(&buf);
        }
    }
    CanonicalForm { size: n, table: best }
}

/// Is there a bijection fixing 0 that carries `a`'s table onto `b`'s?
pub fn are_isomorphic(a: &FiniteZroupoid, b: &FiniteZroupoid) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let n = a.size();
    // partial map a -> b, extended element by element
    fn extend(a: &FiniteZroupoid, b: &FiniteZroupoid, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, k: usize) -> bool {
        let n = a.size();
        if k == n {
            return (0..n).all(|i| (0..n).all(|j| map[a.op(i, j)] == Some(b.op(map[i].unwrap(), map[j].unwrap()))));
        }
        for target in 1..n {
            if used[target] {
                continue;
            }
            map[k] = Some(target);
            used[target] = true;
            let consistent = (0..=k).all(|i| {
                (0..=k).all(|j| match map[a.op(i, j)] {
                    Some(img) => img == b.op(map[i].unwrap(), map[j].unwrap()),
                    None => true,
                })
            });
            if consistent && extend(a, b, map, used, k + 1) {
                return true;
            }
            map[k] = None;
            used[target] = false;
        }
        false
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    map[0] = Some(0);
    used[0] = true;
    extend(a, b, &mut map, &mut used, 1)
}

#[derive(Clone, Copy)]
struct Instance {
    id: u32,
    env: [u8; MAX_VARS],
}

struct Engine<'a> {
    n: usize,
    ids: &'a [CompiledIdentity],
    fails: &'a [(String, CompiledIdentity)],
    instances: &'a [Instance],
    table: Vec<u8>,
    watches: Vec<Vec<u32>>,
    trail: Vec<usize>,
    found: Vec<Vec<u8>>,
}

enum Check {
    Ok,
    Violated,
}

impl<'a> Engine<'a> {
    fn new(
        n: usize,
        ids: &'a [CompiledIdentity],
        fails: &'a [(String, CompiledIdentity)],
        instances: &'a [Instance],
    ) -> Option<Self> {
        let mut e = Engine {
            n,
            ids,
            fails,
            instances,
            table: vec![UNSET; n * n],
            watches: vec![Vec::new(); n * n],
            trail: Vec::new(),
            found: Vec::new(),
        };
        for i in 0..instances.len() as u32 {
            if let Check::Violated = e.evaluate(i) {
                return None;
            }
        }
        e.trail.clear();
        Some(e)
    }

    #[inline]
    fn evaluate(&mut self, inst: u32) -> Check {
        let Instance { id, env } = self.instances[inst as usize];
        match self.ids[id as usize].eval(&self.table, self.n, &env) {
            Ok((l, r)) if l != r => Check::Violated,
            Ok(_) => Check::Ok,
            Err(cell) => {
                self.watches[cell].push(inst);
                self.trail.push(cell);
                Check::Ok
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let cell = self.trail.pop().unwrap();
            self.watches[cell].pop();
        }
    }

    fn dfs(&mut self, cell: usize, prefix: &[u8]) {
        let cells = self.n * self.n;
        if cell == cells {
            self.accept();
            return;
        }
        let waiting = std::mem::take(&mut self.watches[cell]);
        let values: Vec<u8> = match prefix.get(cell) {
            Some(&v) => vec![v],
            None => (0..self.n as u8).collect(),
        };
        for v in values {
            self.table[cell] = v;
            let mark = self.trail.len();
            let ok = waiting.iter().all(|&inst| matches!(self.evaluate(inst), Check::Ok));
            if ok {
                self.dfs(cell + 1, prefix);
            }
            self.undo_to(mark);
        }
        self.table[cell] = UNSET;
        self.watches[cell] = waiting;
    }

    fn accept(&mut self) {
        let alg = FiniteZroupoid::from_flat(self.n, self.table.clone());
        if self.fails.iter().all(|(name, c)| !check_compiled(&alg, name, c).holds) {
            self.found.push(self.table.clone());
        }
    }
}

fn ground(ids: &[CompiledIdentity], n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, c) in ids.iter().enumerate() {
        for_each_assignment(n, c.arity(), |env| {
            let mut e = [0u8; MAX_VARS];
            e[..env.len()].copy_from_slice(env);
            out.push(Instance { id: i as u32, env: e });
            true
        });
    }
    out
}

/// All models of `spec`, sorted by canonical form (then by table).
pub fn enumerate_models(spec: &SearchSpec) -> Result<Vec<FiniteZroupoid>, SearchError> {
    spec.validate()?;
    let n = spec.size;
    let mut required: Vec<Identity> = Vec::new();
    for id in spec.must_satisfy.iter().flat_map(|c| c.identities()) {
        if !required.iter().any(|r| r.lhs == id.lhs && r.rhs == id.rhs) {
            required.push(id);
        }
    }
    let ids: Vec<CompiledIdentity> = required.iter().map(CompiledIdentity::new).collect();
    let fails: Vec<(String, CompiledIdentity)> = spec
        .must_fail
        .iter()
        .map(|id| (id.display_name().to_string(), CompiledIdentity::new(id)))
        .collect();
    let instances = ground(&ids, n);

    let split = (n * n).min(3);
    let mut prefixes = Vec::new();
    for_each_assignment(n, split, |p| {
        prefixes.push(p.to_vec());
        true
    });
    let tables: Vec<Vec<u8>> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let Some(mut engine) = Engine::new(n, &ids, &fails, &instances) else {
                return Vec::new();
            };
            engine.dfs(0, prefix);
            engine.found
        })
        .collect();

    let mut models: Vec<(CanonicalForm, FiniteZroupoid)> = tables
        .into_par_iter()
        .map(|t| {
            let alg = FiniteZroupoid::from_flat(n, t);
            (canonical_form(&alg), alg)
        })
        .collect();
    let mut out: Vec<FiniteZroupoid> = if spec.iso_reduce {
        let forms: BTreeSet<CanonicalForm> = models.into_iter().map(|(c, _)| c).collect();
        forms.into_iter().map(|c| c.to_algebra()).collect()
    } else {
        models.sort();
        models.into_iter().map(|(_, a)| a).collect()
    };
    if let Some(limit) = spec.limit {
        out.truncate(limit);
    }
    Ok(out)
}

/// Smallest symmetric model of `id_in` violating `id_out`, up to `max_size`.
pub fn find_separator(
    id_in: &Identity,
    id_out: &Identity,
    max_size: usize,
) -> Result<Option<FiniteZroupoid>, SearchError> {
    find_separator_capped(id_in, id_out, max_size, DEFAULT_SIZE_CAP)
}

pub fn find_separator_capped(
    id_in: &Identity,
    id_out: &Identity,
    max_size: usize,
    cap: usize,
) -> Result<Option<FiniteZroupoid>, SearchError> {
    if max_size > cap {
        return Err(SearchError::SizeCap { size: max_size, cap });
    }
    if id_in.lhs == id_out.lhs && id_in.rhs == id_out.rhs {
        return Ok(None);
    }
    for size in 1..=max_size {
        let spec = SearchSpec::new(size)
            .size_cap(cap)
            .satisfy(symmetric())
            .satisfy(id_in.clone())
            .fail(id_out.clone());
        if let Some(m) = enumerate_models(&spec)?.into_iter().next() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, implication_zroupoids, member_of};
    use crate::waid::identity_from_name;

    #[test]
    fn size_one_is_trivial() {
        let models = enumerate_models(&SearchSpec::new(1).satisfy(symmetric())).unwrap();
        assert_eq!(models, vec![FiniteZroupoid::trivial()]);
    }

    #[test]
    fn size_two_symmetric_models() {
        let models = enumerate_models(&SearchSpec::new(2).satisfy(symmetric())).unwrap();
        let cat = catalog();
        let mut expected = vec![cat["2_s"].clone(), cat["2_b"].clone()];
        expected.sort_by_key(canonical_form);
        assert_eq!(models, expected);
    }

    #[test]
    fn a3_separates_42a12_from_43a12() {
        let spec = SearchSpec::new(3)
            .satisfy(symmetric())
            .satisfy(identity_from_name("42A12").unwrap())
            .fail(identity_from_name("43A12").unwrap());
        let models = enumerate_models(&spec).unwrap();
        let a3 = &catalog()["A3"];
        assert!(models.iter().any(|m| are_isomorphic(m, a3)));
    }

    #[test]
    fn canonical_forms_and_isomorphism() {
        let cat = catalog();
        assert_ne!(canonical_form(&cat["2_s"]), canonical_form(&cat["2_b"]));
        assert!(are_isomorphic(&cat["2_s"], &cat["2_s"]));
        assert!(!are_isomorphic(&cat["2_s"], &cat["2_b"]));
        let a3 = &cat["A3"];
        let swapped = a3.relabel(&[0, 2, 1]);
        assert!(are_isomorphic(a3, &swapped));
        assert_eq!(canonical_form(a3), canonical_form(&swapped));
        let a4 = &cat["A4"];
        for perm in zero_fixing_perms(4) {
            assert_eq!(canonical_form(&a4.relabel(&perm)), canonical_form(a4));
        }
    }

    #[test]
    fn separator_examples() {
        let a12 = identity_from_name("43A12").unwrap();
        let a23 = identity_from_name("43A23").unwrap();
        let sep = find_separator(&a12, &a23, 2).unwrap().unwrap();
        assert!(are_isomorphic(&sep, &catalog()["2_b"]));
        assert_eq!(find_separator(&a23, &a23, 3).unwrap(), None);
        assert!(matches!(find_separator(&a12, &a23, 5), Err(SearchError::SizeCap { .. })));
    }

    #[test]
    fn validation() {
        let a12 = identity_from_name("43A12").unwrap();
        assert_eq!(enumerate_models(&SearchSpec::new(0)), Err(SearchError::ZeroSize));
        assert_eq!(
            enumerate_models(&SearchSpec::new(5)),
            Err(SearchError::SizeCap { size: 5, cap: DEFAULT_SIZE_CAP })
        );
        let spec = SearchSpec::new(2).satisfy(a12.clone()).fail(a12);
        assert!(matches!(enumerate_models(&spec), Err(SearchError::Overlap(_))));
    }

    #[test]
    fn returned_models_reverify() {
        let spec = SearchSpec::new(3).satisfy(implication_zroupoids()).iso_reduce(false);
        for m in enumerate_models(&spec).unwrap() {
            assert!(member_of(&m, &implication_zroupoids()).holds);
        }
    }

    #[test]
    fn limit_truncates() {
        let spec = SearchSpec::new(2).satisfy(symmetric()).limit(1);
        assert_eq!(enumerate_models(&spec).unwrap().len(), 1);
    }
}
