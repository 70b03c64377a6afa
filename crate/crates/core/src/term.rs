//! Terms over the signature `<->, 0>`.
//!
//! Stored terms only ever contain variables, the constant `0` and the
//! binary operation. The derived operations `x'` (`x -> 0`) and
//! `x ^ y` (`(x -> y')'`) exist only at the surface: the parser expands
//! them and the sugared printer folds them back.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::FiniteZroupoid;

/// Variable names in alphabet order. `Var(i)` is the i-th entry.
pub const ALPHABET: [&str; 11] = ["x", "y", "z", "t", "u", "v", "w", "s", "r", "q", "p"];

/// A variable, ordered by its position in [`ALPHABET`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u8);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    pub const Z: Var = Var(2);
    pub const T: Var = Var(3);

    pub fn from_name(name: &str) -> Option<Var> {
        ALPHABET.iter().position(|&n| n == name).map(|i| Var(i as u8))
    }

    pub fn name(self) -> &'static str {
        ALPHABET[self.0 as usize]
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Zero,
    Arrow(Box<Term>, Box<Term>),
}

/// Printing style for [`Term::render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Only `->`, `0` and variables.
    Expanded,
    /// Folds `s -> 0` into `s'` and `(s -> t')'` into `s ^ t`.
    Sugared,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("unexpected symbol {found:?} at position {pos}")]
    UnexpectedSymbol { pos: usize, found: char },
    #[error("unknown symbol {name:?} at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("unbalanced parenthesis at position {pos}")]
    Unbalanced { pos: usize },
    #[error("ambiguous chain at position {pos}: binary operators must be parenthesized")]
    Ambiguous { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is not bound")]
    Unbound(Var),
    #[error("element {value} is out of range for an algebra of size {size}")]
    OutOfRange { value: usize, size: usize },
}

/// Variable assignment used by [`Term::eval`].
pub type Assignment = BTreeMap<Var, usize>;

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn arrow(left: Term, right: Term) -> Term {
        Term::Arrow(Box::new(left), Box::new(right))
    }

    /// `t'`, i.e. `t -> 0`.
    pub fn prime(t: Term) -> Term {
        Term::arrow(t, Term::Zero)
    }

    /// `s ^ t`, i.e. `(s -> (t -> 0)) -> 0`.
    pub fn meet(s: Term, t: Term) -> Term {
        Term::prime(Term::arrow(s, Term::prime(t)))
    }

    pub fn parse(text: &str) -> Result<Term, ParseError> {
        Parser::new(text).parse_all()
    }

    pub fn render(&self, style: Style) -> String {
        match style {
            Style::Expanded => self.render_expanded(true),
            Style::Sugared => render_sugared(&fold(self), true),
        }
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = Vec::new();
        for v in self.occurrences() {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    /// Every variable occurrence, left to right.
    pub fn occurrences(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_occurrences(&mut out);
        out
    }

    fn collect_occurrences(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Zero => {}
            Term::Arrow(l, r) => {
                l.collect_occurrences(out);
                r.collect_occurrences(out);
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero => true,
            Term::Arrow(l, r) => l.contains_zero() || r.contains_zero(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero => 0,
            Term::Arrow(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Replaces every occurrence of `var` by `with`.
    pub fn substitute(&self, var: Var, with: &Term) -> Term {
        match self {
            Term::Var(v) if *v == var => with.clone(),
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Arrow(l, r) => Term::arrow(l.substitute(var, with), r.substitute(var, with)),
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.get(v).unwrap_or(v)),
            Term::Zero => Term::Zero,
            Term::Arrow(l, r) => Term::arrow(l.rename(map), r.rename(map)),
        }
    }

    pub fn eval(&self, alg: &FiniteZroupoid, env: &Assignment) -> Result<usize, EvalError> {
        match self {
            Term::Var(v) => {
                let value = *env.get(v).ok_or(EvalError::Unbound(*v))?;
                if value >= alg.size() {
                    return Err(EvalError::OutOfRange { value, size: alg.size() });
                }
                Ok(value)
            }
            Term::Zero => Ok(0),
            Term::Arrow(l, r) => {
                let a = l.eval(alg, env)?;
                let b = r.eval(alg, env)?;
                Ok(alg.op(a, b))
            }
        }
    }

    fn render_expanded(&self, top: bool) -> String {
        match self {
            Term::Var(v) => v.name().to_string(),
            Term::Zero => "0".to_string(),
            Term::Arrow(l, r) => {
                let s = format!("{} -> {}", l.render_expanded(false), r.render_expanded(false));
                if top {
                    s
                } else {
                    format!("({s})")
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Sugared))
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Term::parse(s)
    }
}

// Surface tree for the sugared printer.
enum Sugar<'a> {
    Atom(&'a Term),
    Prime(Box<Sugar<'a>>),
    Meet(Box<Sugar<'a>>, Box<Sugar<'a>>),
    Arrow(Box<Sugar<'a>>, Box<Sugar<'a>>),
}

fn fold(t: &Term) -> Sugar<'_> {
    match t {
        Term::Var(_) | Term::Zero => Sugar::Atom(t),
        Term::Arrow(l, r) => {
            if **r == Term::Zero {
                if let Term::Arrow(s, inner) = &**l {
                    if let Term::Arrow(u, z) = &**inner {
                        if **z == Term::Zero {
                            return Sugar::Meet(Box::new(fold(s)), Box::new(fold(u)));
                        }
                    }
                }
                Sugar::Prime(Box::new(fold(l)))
            } else {
                Sugar::Arrow(Box::new(fold(l)), Box::new(fold(r)))
            }
        }
    }
}

fn render_sugared(s: &Sugar<'_>, top: bool) -> String {
    match s {
        Sugar::Atom(t) => t.render_expanded(true),
        // binary bodies come back parenthesized since they are not at top level
        Sugar::Prime(inner) => format!("{}'", render_sugared(inner, false)),
        Sugar::Meet(a, b) | Sugar::Arrow(a, b) => {
            let op = if matches!(s, Sugar::Meet(..)) { "^" } else { "->" };
            let text = format!("{} {op} {}", render_sugared(a, false), render_sugared(b, false));
            if top {
                text
            } else {
                format!("({text})")
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Arrow,
    Meet,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.char_indices().collect(), pos: 0, _src: src }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or_else(|| {
            self.chars.last().map(|&(i, c)| i + c.len_utf8()).unwrap_or(0)
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn parse_all(mut self) -> Result<Term, ParseError> {
        let t = self.parse_expr()?;
        match self.peek() {
            None => Ok(t),
            Some(')') => Err(ParseError::Unbalanced { pos: self.offset() }),
            Some(c) => Err(ParseError::UnexpectedSymbol { pos: self.offset(), found: c }),
        }
    }

    fn binop(&mut self) -> Option<BinOp> {
        match self.peek() {
            Some('^') | Some('∧') => Some(BinOp::Meet),
            Some('→') => Some(BinOp::Arrow),
            Some('-') if self.chars.get(self.pos + 1).map(|p| p.1) == Some('>') => {
                Some(BinOp::Arrow)
            }
            _ => None,
        }
    }

    fn consume_binop(&mut self, op: BinOp) {
        let two = op == BinOp::Arrow && self.chars[self.pos].1 == '-';
        self.pos += if two { 2 } else { 1 };
    }

    // expr := postfix [binop postfix]
    fn parse_expr(&mut self) -> Result<Term, ParseError> {
        let lhs = self.parse_postfix()?;
        let Some(op) = self.binop() else {
            return Ok(lhs);
        };
        self.consume_binop(op);
        let rhs = self.parse_postfix()?;
        if self.binop().is_some() {
            return Err(ParseError::Ambiguous { pos: self.offset() });
        }
        Ok(match op {
            BinOp::Arrow => Term::arrow(lhs, rhs),
            BinOp::Meet => Term::meet(lhs, rhs),
        })
    }

    fn parse_postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.parse_primary()?;
        while matches!(self.peek(), Some('\'') | Some('′')) {
            self.pos += 1;
            t = Term::prime(t);
        }
        Ok(t)
    }

    fn parse_primary(&mut self) -> Result<Term, ParseError> {
        let next = self.peek();
        let start = self.offset();
        match next {
            None => Err(ParseError::UnexpectedEnd { pos: start }),
            Some('(') => {
                self.pos += 1;
                let t = self.parse_expr()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(t)
                    }
                    None => Err(ParseError::Unbalanced { pos: start }),
                    Some(c) => Err(ParseError::UnexpectedSymbol { pos: self.offset(), found: c }),
                }
            }
            Some(')') => Err(ParseError::Unbalanced { pos: start }),
            Some('0') => {
                self.pos += 1;
                if matches!(self.chars.get(self.pos), Some((_, c)) if c.is_alphanumeric()) {
                    return Err(ParseError::UnknownSymbol { pos: start, name: self.word() });
                }
                Ok(Term::Zero)
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.word();
                Var::from_name(&name)
                    .map(Term::Var)
                    .ok_or(ParseError::UnknownSymbol { pos: start, name })
            }
            Some(c) => Err(ParseError::UnexpectedSymbol { pos: start, found: c }),
        }
    }

    fn word(&mut self) -> String {
        let mut name = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_alphanumeric() || c == '_' {
                name.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        name
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    fn x() -> Term {
        Term::Var(Var::X)
    }
    fn y() -> Term {
        Term::Var(Var::Y)
    }

    #[test]
    fn prime_expands_to_arrow_zero() {
        assert_eq!(Term::parse("x'").unwrap(), Term::arrow(x(), Term::Zero));
        assert_eq!(Term::parse("0").unwrap(), Term::Zero);
    }

    #[test]
    fn meet_expands() {
        let expected = Term::arrow(Term::arrow(x(), Term::arrow(y(), Term::Zero)), Term::Zero);
        assert_eq!(Term::parse("x ^ y").unwrap(), expected);
        assert_eq!(Term::parse("(x -> y')'").unwrap(), expected);
    }

    #[test]
    fn render_styles() {
        let xp = Term::arrow(x(), Term::Zero);
        assert_eq!(xp.render(Style::Sugared), "x'");
        assert_eq!(xp.render(Style::Expanded), "x -> 0");
        let m = Term::meet(x(), y());
        assert_eq!(m.render(Style::Sugared), "x ^ y");
        assert_eq!(Term::parse(&m.render(Style::Expanded)).unwrap(), m);
        let p = Term::parse("(x -> y)''").unwrap();
        assert_eq!(p.render(Style::Sugared), "(x -> y)''");
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(Term::parse("  ( x->y )  ->z").unwrap(), Term::parse("(x -> y) -> z").unwrap());
    }

    #[test]
    fn rejects_ambiguous_chains() {
        assert!(matches!(Term::parse("x -> y -> z"), Err(ParseError::Ambiguous { .. })));
        assert!(matches!(Term::parse("x ^ y -> z"), Err(ParseError::Ambiguous { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(Term::parse("(x -> y"), Err(ParseError::Unbalanced { pos: 0 }));
        assert_eq!(Term::parse("x -> y)"), Err(ParseError::Unbalanced { pos: 6 }));
        assert_eq!(
            Term::parse("x -> foo"),
            Err(ParseError::UnknownSymbol { pos: 5, name: "foo".into() })
        );
        assert!(matches!(Term::parse("x -> "), Err(ParseError::UnexpectedEnd { .. })));
        assert!(matches!(Term::parse("x + y"), Err(ParseError::UnexpectedSymbol { found: '+', .. })));
    }

    #[test]
    fn variables_in_first_occurrence_order() {
        let t = Term::parse("x -> ((y -> x) -> z)").unwrap();
        assert_eq!(t.variables(), vec![Var::X, Var::Y, Var::Z]);
        assert!(Term::Zero.variables().is_empty());
        let t = Term::parse("(x -> x) -> y").unwrap();
        assert_eq!(t.variables(), vec![Var::X, Var::Y]);
        assert_eq!(t.occurrences(), vec![Var::X, Var::X, Var::Y]);
    }

    #[test]
    fn evaluation_in_catalog_algebras() {
        let cat = catalog();
        let a3 = &cat["A3"];
        let empty = Assignment::new();
        assert_eq!(Term::parse("0'").unwrap().eval(a3, &empty), Ok(2));
        assert_eq!(Term::parse("0''").unwrap().eval(a3, &empty), Ok(0));
        let env: Assignment = [(Var::X, 1)].into_iter().collect();
        assert_eq!(Term::parse("x -> x").unwrap().eval(&cat["2_b"], &env), Ok(1));
    }

    #[test]
    fn evaluation_errors() {
        let cat = catalog();
        let t = Term::parse("x -> y").unwrap();
        let env: Assignment = [(Var::X, 0)].into_iter().collect();
        assert_eq!(t.eval(&cat["2_s"], &env), Err(EvalError::Unbound(Var::Y)));
        let env: Assignment = [(Var::X, 0), (Var::Y, 2)].into_iter().collect();
        assert_eq!(t.eval(&cat["2_s"], &env), Err(EvalError::OutOfRange { value: 2, size: 2 }));
    }
}
