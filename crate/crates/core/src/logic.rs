//! Prenex existential sentences over `≤` and `=`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! sentence := ("E" ident ".")* or
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "!" unary | "(" or ")" | ident ("<=" | "=") ident
//! ```
//!
//! `A x.` is recognised only to be rejected. Negations anywhere in the input
//! are pushed onto the atoms, so a parsed [`Sentence`] is always in negation
//! normal form.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::poset::{ElementId, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("universal quantifier on `{variable}` is not supported")]
    UnsupportedQuantifier { variable: String },
    #[error("variable `{variable}` is not bound by the quantifier prefix")]
    FreeVariable { variable: String },
    #[error("no element assigned to variable #{index}")]
    UnboundVariable { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Leq,
    Eq,
}

impl AtomKind {
    fn symbol(self) -> &'static str {
        match self {
            AtomKind::Leq => "<=",
            AtomKind::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    /// Position in the quantifier prefix.
    pub index: usize,
}

/// Atom over variable indices into the owning sentence's prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub left: usize,
    pub right: usize,
}

/// Quantifier-free matrix in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matrix {
    Literal { atom: Atom, negated: bool },
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub vars: Vec<Variable>,
    pub matrix: Matrix,
}

/// Unnormalised quantifier-free formula over variable names, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom {
        kind: AtomKind,
        left: String,
        right: String,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Pushes negations to the atoms with De Morgan; double negations cancel.
    pub fn nnf(&self) -> Formula {
        self.push(false)
    }

    fn push(&self, negate: bool) -> Formula {
        match self {
            Formula::Atom { .. } if negate => Formula::Not(Box::new(self.clone())),
            Formula::Atom { .. } => self.clone(),
            Formula::Not(inner) => inner.push(!negate),
            Formula::And(l, r) if negate => {
                Formula::Or(Box::new(l.push(true)), Box::new(r.push(true)))
            }
            Formula::Or(l, r) if negate => {
                Formula::And(Box::new(l.push(true)), Box::new(r.push(true)))
            }
            Formula::And(l, r) => Formula::And(Box::new(l.push(false)), Box::new(r.push(false))),
            Formula::Or(l, r) => Formula::Or(Box::new(l.push(false)), Box::new(r.push(false))),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom { .. } => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom { .. }),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf() && r.is_nnf(),
        }
    }

    /// Evaluates with variables looked up by name.
    pub fn eval(&self, p: &Poset, env: &HashMap<String, ElementId>) -> Result<bool, LogicError> {
        let lookup = |name: &String| {
            env.get(name)
                .copied()
                .ok_or_else(|| LogicError::FreeVariable {
                    variable: name.clone(),
                })
        };
        Ok(match self {
            Formula::Atom { kind, left, right } => {
                let (a, b) = (lookup(left)?, lookup(right)?);
                match kind {
                    AtomKind::Leq => p.leq(a, b),
                    AtomKind::Eq => a == b,
                }
            }
            Formula::Not(inner) => !inner.eval(p, env)?,
            Formula::And(l, r) => l.eval(p, env)? && r.eval(p, env)?,
            Formula::Or(l, r) => l.eval(p, env)? || r.eval(p, env)?,
        })
    }

    /// Resolves names against `vars`. The formula must be in NNF.
    fn resolve(&self, vars: &[Variable]) -> Result<Matrix, LogicError> {
        let index = |name: &String| {
            vars.iter()
                .position(|v| &v.name == name)
                .ok_or_else(|| LogicError::FreeVariable {
                    variable: name.clone(),
                })
        };
        let literal = |f: &Formula, negated: bool| -> Result<Matrix, LogicError> {
            match f {
                Formula::Atom { kind, left, right } => Ok(Matrix::Literal {
                    atom: Atom {
                        kind: *kind,
                        left: index(left)?,
                        right: index(right)?,
                    },
                    negated,
                }),
                _ => unreachable!("resolve expects negation normal form"),
            }
        };
        match self {
            Formula::Atom { .. } => literal(self, false),
            Formula::Not(inner) => literal(inner, true),
            Formula::And(l, r) => Ok(Matrix::And(
                Box::new(l.resolve(vars)?),
                Box::new(r.resolve(vars)?),
            )),
            Formula::Or(l, r) => Ok(Matrix::Or(
                Box::new(l.resolve(vars)?),
                Box::new(r.resolve(vars)?),
            )),
        }
    }
}

impl Matrix {
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Matrix::Literal { atom, .. } => out.push(*atom),
            Matrix::And(l, r) | Matrix::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Node count; a negated literal counts the negation as its own node.
    pub fn size(&self) -> usize {
        match self {
            Matrix::Literal { negated, .. } => 1 + usize::from(*negated),
            Matrix::And(l, r) | Matrix::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Evaluates under an atom oracle; used by both the concrete evaluator and
    /// the three-valued evaluator in the reduction.
    pub(crate) fn eval_with<F: FnMut(&Atom) -> bool>(&self, atom: &mut F) -> bool {
        match self {
            Matrix::Literal { atom: a, negated } => atom(a) != *negated,
            Matrix::And(l, r) => l.eval_with(atom) && r.eval_with(atom),
            Matrix::Or(l, r) => l.eval_with(atom) || r.eval_with(atom),
        }
    }

    fn fmt_with(&self, vars: &[Variable], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |m: &Matrix, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            match m {
                Matrix::Literal { .. } => m.fmt_with(vars, f),
                _ => {
                    write!(f, "(")?;
                    m.fmt_with(vars, f)?;
                    write!(f, ")")
                }
            }
        };
        match self {
            Matrix::Literal { atom, negated } => {
                let body = format!(
                    "{} {} {}",
                    vars[atom.left].name,
                    atom.kind.symbol(),
                    vars[atom.right].name
                );
                if *negated {
                    write!(f, "!({body})")
                } else {
                    write!(f, "{body}")
                }
            }
            Matrix::And(l, r) => {
                child(l, f)?;
                write!(f, " & ")?;
                child(r, f)
            }
            Matrix::Or(l, r) => {
                child(l, f)?;
                write!(f, " | ")?;
                child(r, f)
            }
        }
    }
}

impl Sentence {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// `|φ|`: quantifier nodes plus matrix nodes.
    pub fn size(&self) -> usize {
        self.vars.len() + self.matrix.size()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vars {
            write!(f, "E {}. ", v.name)?;
        }
        self.matrix.fmt_with(&self.vars, f)
    }
}

/// Evaluates `m` with variable `i` bound to `assignment[i]`.
pub fn eval_matrix(m: &Matrix, p: &Poset, assignment: &[ElementId]) -> Result<bool, LogicError> {
    for atom in m.atoms() {
        for index in [atom.left, atom.right] {
            if index >= assignment.len() {
                return Err(LogicError::UnboundVariable { index });
            }
        }
    }
    Ok(m.eval_with(&mut |a: &Atom| {
        let (x, y) = (assignment[a.left], assignment[a.right]);
        match a.kind {
            AtomKind::Leq => p.leq(x, y),
            AtomKind::Eq => x == y,
        }
    }))
}

/// Parses a sentence and normalises its matrix.
pub fn parse(text: &str) -> Result<Sentence, LogicError> {
    let (prefix, formula) = parse_raw(text)?;
    let vars: Vec<Variable> = prefix
        .into_iter()
        .enumerate()
        .map(|(index, name)| Variable { name, index })
        .collect();
    let matrix = formula.nnf().resolve(&vars)?;
    Ok(Sentence { vars, matrix })
}

/// Parses without normalising; returns the quantified names and the matrix as
/// written.
pub fn parse_raw(text: &str) -> Result<(Vec<String>, Formula), LogicError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let prefix = parser.prefix()?;
    let formula = parser.or()?;
    if let Some(t) = parser.peek() {
        return Err(parser.error_at(t.at, format!("unexpected {}", t.tok.describe())));
    }
    Ok((prefix, formula))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Dot,
    Not,
    And,
    Or,
    LParen,
    RParen,
    Leq,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Dot => "`.`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    at: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, LogicError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        let single = match c {
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token { tok, at });
        } else if c.is_whitespace() {
            chars.next();
        } else if c == '<' {
            chars.next();
            match chars.next() {
                Some((_, '=')) => out.push(Token { tok: Tok::Leq, at }),
                _ => {
                    return Err(LogicError::SyntaxError {
                        position: at,
                        message: "expected `<=`".into(),
                    })
                }
            }
        } else if c.is_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    name.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(name),
                at,
            });
        } else {
            return Err(LogicError::SyntaxError {
                position: at,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.at)
    }

    fn error_at(&self, position: usize, message: impl Into<String>) -> LogicError {
        LogicError::SyntaxError {
            position,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), LogicError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error_at(
                t.at,
                format!("expected {}, found {}", want.describe(), t.tok.describe()),
            )),
            None => Err(self.error_at(self.end, format!("expected {}", want.describe()))),
        }
    }

    fn prefix(&mut self) -> Result<Vec<String>, LogicError> {
        let mut names: Vec<String> = Vec::new();
        loop {
            let (q, var) = match (self.peek_tok(0), self.peek_tok(1), self.peek_tok(2)) {
                (Some(Tok::Ident(q)), Some(Tok::Ident(v)), Some(Tok::Dot))
                    if q == "E" || q == "A" =>
                {
                    (q.clone(), v.clone())
                }
                _ => return Ok(names),
            };
            if q == "A" {
                return Err(LogicError::UnsupportedQuantifier { variable: var });
            }
            if names.contains(&var) {
                let at = self.tokens[self.pos + 1].at;
                return Err(self.error_at(at, format!("variable `{var}` quantified twice")));
            }
            names.push(var);
            self.pos += 3;
        }
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while self.peek_tok(0) == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.peek_tok(0) == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek_tok(0).cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(left)) => {
                if matches!(
                    (left.as_str(), self.peek_tok(1), self.peek_tok(2)),
                    ("E" | "A", Some(Tok::Ident(_)), Some(Tok::Dot))
                ) {
                    return Err(self.error_at(self.here(), "quantifiers must form a prefix"));
                }
                self.pos += 1;
                let kind = match self.peek_tok(0) {
                    Some(Tok::Leq) => AtomKind::Leq,
                    Some(Tok::Eq) => AtomKind::Eq,
                    _ => return Err(self.error_at(self.here(), "expected `<=` or `=`")),
                };
                self.pos += 1;
                match self.peek_tok(0).cloned() {
                    Some(Tok::Ident(right)) => {
                        self.pos += 1;
                        Ok(Formula::Atom { kind, left, right })
                    }
                    _ => Err(self.error_at(self.here(), "expected a variable")),
                }
            }
            Some(other) => Err(self.error_at(
                self.here(),
                format!("expected an atom, `!` or `(`, found {}", other.describe()),
            )),
            None => Err(self.error_at(self.end, "unexpected end of input")),
        }
    }
}
