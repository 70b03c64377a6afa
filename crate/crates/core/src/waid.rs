//! Words, bracketings and the inventory of weak associative identities.
//!
//! An identity is named `nmXpq`: length `n`, `m` distinct variables, word
//! letter `X` (the rank of the word among restricted-growth strings of the
//! same `(n, m)`), and bracketing numbers `p < q`.
//!
//! Bracketings are listed by the size of the root's left subtree
//! (smallest first), then by the left subtree's own listing, then by the
//! right subtree's. At arity 3 and 4 this is exactly the printed order;
//! beyond that it is a convention.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::identity::Identity;
use crate::term::{Term, Var};

pub const MAX_ARITY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("arity {0} is out of range 1..={MAX_ARITY}")]
    ArityOutOfRange(usize),
    #[error("cannot form words of length {n} with {m} variables")]
    BadWordShape { n: usize, m: usize },
    #[error("malformed identity name {0:?}")]
    Malformed(String),
    #[error("bracketing numbers must satisfy p < q in {0:?}")]
    NotIncreasing(String),
    #[error("word letter {letter} does not exist for length {n} with {m} variables")]
    LetterOutOfRange { letter: char, n: usize, m: usize },
    #[error("bracketing number {index} does not exist for length {n}")]
    BracketOutOfRange { index: usize, n: usize },
    #[error("identity is not a weak associative law of length 3 or 4")]
    NotWeakAssociative,
    #[error("both sides use the same bracketing")]
    Trivial,
    #[error("inventory length {0} is out of range 3..=4")]
    LengthOutOfRange(usize),
}

/// A full binary tree; leaves are placeholders for word letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Fills the leaves left to right with `vars`.
    pub fn instantiate(&self, vars: &[Var]) -> Term {
        fn go(s: &Shape, vars: &[Var], next: &mut usize) -> Term {
            match s {
                Shape::Leaf => {
                    let v = vars[*next];
                    *next += 1;
                    Term::Var(v)
                }
                Shape::Node(l, r) => {
                    let left = go(l, vars, next);
                    Term::arrow(left, go(r, vars, next))
                }
            }
        }
        go(self, vars, &mut 0)
    }

    /// Shape of a term built from variables and `->` only.
    pub fn of_term(t: &Term) -> Option<Shape> {
        match t {
            Term::Var(_) => Some(Shape::Leaf),
            Term::Zero => None,
            Term::Arrow(l, r) => {
                Some(Shape::Node(Box::new(Shape::of_term(l)?), Box::new(Shape::of_term(r)?)))
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(s: &Shape, top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match s {
                Shape::Leaf => f.write_str("a"),
                Shape::Node(l, r) => {
                    if !top {
                        f.write_str("(")?;
                    }
                    go(l, false, f)?;
                    f.write_str(" -> ")?;
                    go(r, false, f)?;
                    if !top {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, true, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketShape {
    pub arity: usize,
    pub shape: Shape,
    /// 1-based position in the listing for this arity.
    pub index: usize,
}

fn shapes(n: usize) -> Vec<Shape> {
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for left in 1..n {
        let rights = shapes(n - left);
        for l in shapes(left) {
            for r in &rights {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
    out
}

pub fn bracketings(n: usize) -> Result<Vec<BracketShape>, NameError> {
    if !(1..=MAX_ARITY).contains(&n) {
        return Err(NameError::ArityOutOfRange(n));
    }
    Ok(shapes(n)
        .into_iter()
        .enumerate()
        .map(|(i, shape)| BracketShape { arity: n, shape, index: i + 1 })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    /// Restricted-growth string: 0-based variable index per position.
    pub letters: Vec<u8>,
    pub distinct: usize,
    pub label: String,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Variable at each position, using [`variable_names`].
    pub fn variables(&self) -> Vec<Var> {
        let names = variable_names(self.distinct);
        self.letters.iter().map(|&i| names[i as usize]).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.variables().iter().map(|v| v.name()).collect();
        write!(f, "{}: <{}>", self.label, names.join(", "))
    }
}

/// Letters used for a word with `m` distinct variables: `x, y, z` up to
/// three, `t, x, y, z` for four, alphabet order beyond that.
pub fn variable_names(m: usize) -> Vec<Var> {
    if m == 4 {
        vec![Var::T, Var::X, Var::Y, Var::Z]
    } else {
        (0..m as u8).map(Var).collect()
    }
}

fn label(rank: usize) -> String {
    let mut rank = rank;
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (rank % 26) as u8);
        if rank < 26 {
            break;
        }
        rank = rank / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// Restricted-growth strings of length `n` using exactly `m` symbols, in
/// lexicographic order.
pub fn words(n: usize, m: usize) -> Result<Vec<Word>, NameError> {
    if !(1..=MAX_ARITY).contains(&n) {
        return Err(NameError::ArityOutOfRange(n));
    }
    if m == 0 || m > n {
        return Err(NameError::BadWordShape { n, m });
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, m: usize, cur: &mut Vec<u8>, used: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            if used == m {
                out.push(cur.clone());
            }
            return;
        }
        // not enough positions left to introduce the missing symbols
        if m - used > n - cur.len() {
            return;
        }
        for s in 0..=used.min(m - 1) {
            cur.push(s as u8);
            go(n, m, cur, used.max(s + 1), out);
            cur.pop();
        }
    }
    go(n, m, &mut cur, 0, &mut out);
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, letters)| Word { letters, distinct: m, label: label(i) })
        .collect())
}

/// Names conventionally written instead of the canonical one.
const ALIASES: [(&str, &str); 3] = [("LALT", "32A12"), ("FLEX", "32B12"), ("RALT", "32C12")];

pub fn alias_of(canonical: &str) -> Option<&'static str> {
    ALIASES.iter().find(|(_, c)| *c == canonical).map(|(a, _)| *a)
}

fn resolve_alias(name: &str) -> Option<String> {
    if let Some((_, c)) = ALIASES.iter().find(|(a, _)| *a == name) {
        return Some(c.to_string());
    }
    // Bol-Moufang short form, e.g. "A23" for 43A23
    let b = name.as_bytes();
    if b.len() == 3 && b[0].is_ascii_uppercase() && b[1].is_ascii_digit() && b[2].is_ascii_digit() {
        return Some(format!("43{name}"));
    }
    None
}

/// Builds the identity called `name` (canonical `nmXpq`, or an alias).
pub fn identity_from_name(name: &str) -> Result<Identity, NameError> {
    let canonical = resolve_alias(name).unwrap_or_else(|| name.to_string());
    let b = canonical.as_bytes();
    let malformed = || NameError::Malformed(name.to_string());
    if b.len() != 5
        || !b[0].is_ascii_digit()
        || !b[1].is_ascii_digit()
        || !b[2].is_ascii_uppercase()
        || !b[3].is_ascii_digit()
        || !b[4].is_ascii_digit()
    {
        return Err(malformed());
    }
    let digit = |i: usize| (b[i] - b'0') as usize;
    let (n, m, letter, p, q) = (digit(0), digit(1), b[2] as char, digit(3), digit(4));
    if !(3..=4).contains(&n) || m == 0 || m > n {
        return Err(malformed());
    }
    if p >= q {
        return Err(NameError::NotIncreasing(name.to_string()));
    }
    let shapes = bracketings(n)?;
    for idx in [p, q] {
        if idx == 0 || idx > shapes.len() {
            return Err(NameError::BracketOutOfRange { index: idx, n });
        }
    }
    let rank = (letter as u8 - b'A') as usize;
    let words = words(n, m)?;
    let word = words.get(rank).ok_or(NameError::LetterOutOfRange { letter, n, m })?;
    let vars = word.variables();
    let lhs = shapes[p - 1].shape.instantiate(&vars);
    let rhs = shapes[q - 1].shape.instantiate(&vars);
    Ok(Identity {
        lhs,
        rhs,
        alias: alias_of(&canonical).map(str::to_string),
        name: canonical,
        length: n,
        var_count: m,
        word_letter: Some(letter),
        bracketing: Some((p, q)),
        hand_entered: false,
    })
}

/// Canonical name of a weak associative identity of length 3 or 4.
///
/// Variables are matched by first occurrence, so any letters work; the
/// two sides may come in either order.
pub fn name_of(id: &Identity) -> Result<String, NameError> {
    if !id.is_weak_associative() {
        return Err(NameError::NotWeakAssociative);
    }
    let occ = id.lhs.occurrences();
    let n = occ.len();
    if !(3..=4).contains(&n) {
        return Err(NameError::NotWeakAssociative);
    }
    let mut firsts: Vec<Var> = Vec::new();
    let letters: Vec<u8> = occ
        .iter()
        .map(|v| match firsts.iter().position(|w| w == v) {
            Some(i) => i as u8,
            None => {
                firsts.push(*v);
                (firsts.len() - 1) as u8
            }
        })
        .collect();
    let m = firsts.len();
    let word = words(n, m)?
        .into_iter()
        .find(|w| w.letters == letters)
        .expect("restricted-growth string is always listed");
    let shapes = bracketings(n)?;
    let index_of = |t: &Term| {
        let s = Shape::of_term(t).expect("weak associative sides contain no constant");
        shapes.iter().find(|b| b.shape == s).map(|b| b.index).unwrap()
    };
    let (a, b) = (index_of(&id.lhs), index_of(&id.rhs));
    if a == b {
        return Err(NameError::Trivial);
    }
    let (p, q) = (a.min(b), a.max(b));
    Ok(format!("{n}{m}{}{p}{q}", word.label))
}

/// All weak associative identities of length 3 up to `max_len`, ordered by
/// `(n, m, letter, p, q)`.
pub fn enumerate_waids(max_len: usize) -> Result<Vec<Identity>, NameError> {
    if !(3..=4).contains(&max_len) {
        return Err(NameError::LengthOutOfRange(max_len));
    }
    let mut out = Vec::new();
    for n in 3..=max_len {
        let count = bracketings(n)?.len();
        for m in 1..=n {
            for w in words(n, m)? {
                for p in 1..=count {
                    for q in p + 1..=count {
                        out.push(identity_from_name(&format!("{n}{m}{}{p}{q}", w.label))?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Identity counts keyed by the `nm` prefix.
pub fn category_counts(ids: &[Identity]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for id in ids {
        *counts.entry(format!("{}{}", id.length, id.var_count)).or_insert(0) += 1;
    }
    counts
}
