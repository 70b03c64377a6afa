use std::fmt;

use crate::term::{ParseError, Style, Term, Var};

/// An identity `lhs ≈ rhs` together with its naming metadata.
///
/// Identities produced by the weak associative enumerator carry a word
/// letter and a bracketing pair; hand-entered ones (axioms, lemma
/// clauses) have neither and are flagged with `hand_entered`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub name: String,
    pub alias: Option<String>,
    /// Variable occurrences in `lhs`.
    pub length: usize,
    /// Distinct variables across both sides.
    pub var_count: usize,
    pub word_letter: Option<char>,
    pub bracketing: Option<(usize, usize)>,
    pub hand_entered: bool,
}

impl Identity {
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Identity {
        let length = lhs.occurrences().len();
        let mut id = Identity {
            lhs,
            rhs,
            name: name.into(),
            alias: None,
            length,
            var_count: 0,
            word_letter: None,
            bracketing: None,
            hand_entered: true,
        };
        id.var_count = id.variables().len();
        id
    }

    /// Parses `"lhs ≈ rhs"` (or `=`, `~`) into a hand-entered identity.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Identity, ParseError> {
        let (l, r, off) = split_sides(text).ok_or(ParseError::UnexpectedEnd { pos: text.len() })?;
        let lhs = Term::parse(l)?;
        let rhs = Term::parse(r).map_err(|e| shift(e, off))?;
        Ok(Identity::new(name, lhs, rhs))
    }

    /// Distinct variables, first occurrence in `lhs` then `rhs`.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    /// Alias if one exists, otherwise the canonical name.
    pub fn display_name(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.name)
    }

    /// Same variables in the same order on both sides.
    pub fn is_weak_associative(&self) -> bool {
        !self.lhs.contains_zero()
            && !self.rhs.contains_zero()
            && self.lhs.occurrences() == self.rhs.occurrences()
    }

    pub fn render(&self, style: Style) -> String {
        format!("{} ≈ {}", self.lhs.render(style), self.rhs.render(style))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Sugared))
    }
}

fn split_sides(text: &str) -> Option<(&str, &str, usize)> {
    for sep in ["≈", "="] {
        if let Some(i) = text.find(sep) {
            return Some((&text[..i], &text[i + sep.len()..], i + sep.len()));
        }
    }
    None
}

fn shift(e: ParseError, off: usize) -> ParseError {
    match e {
        ParseError::UnexpectedEnd { pos } => ParseError::UnexpectedEnd { pos: pos + off },
        ParseError::UnexpectedSymbol { pos, found } => {
            ParseError::UnexpectedSymbol { pos: pos + off, found }
        }
        ParseError::UnknownSymbol { pos, name } => ParseError::UnknownSymbol { pos: pos + off, name },
        ParseError::Unbalanced { pos } => ParseError::Unbalanced { pos: pos + off },
        ParseError::Ambiguous { pos } => ParseError::Ambiguous { pos: pos + off },
    }
}

/// Builds a hand-entered identity from source text; panics on malformed input.
pub(crate) fn ident(name: &str, text: &str) -> Identity {
    Identity::parse(name, text).unwrap_or_else(|e| panic!("bad built-in identity {name}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_identity_sides() {
        let id = Identity::parse("I", "(x -> y) -> z ≈ ((z' -> x) -> (y -> z)')'").unwrap();
        assert_eq!(id.variables(), vec![Var::X, Var::Y, Var::Z]);
        assert_eq!(id.length, 3);
        assert!(id.hand_entered);
        assert!(!id.is_weak_associative());
        let e = Identity::parse("bad", "x = y -> ").unwrap_err();
        assert!(matches!(e, ParseError::UnexpectedEnd { .. }));
    }

    #[test]
    fn ground_identity() {
        let id = Identity::parse("zero", "0 = 0'").unwrap();
        assert_eq!(id.var_count, 0);
        assert_eq!(id.to_string(), "0 ≈ 0'");
    }
}
