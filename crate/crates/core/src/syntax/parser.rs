//! Recursive-descent parser for the concrete formula grammar.
//!
//! ```text
//! formula  ::= implies
//! implies  ::= or [ "->" implies ]
//! or       ::= and { "|" and }
//! and      ::= unary { "&" unary }
//! unary    ::= "!" unary
//!            | "<<" agents ">>" unary | "[[" agents "]]" unary
//!            | "E" unary | "A" unary
//!            | "X" unary | "F" unary | "G" unary
//!            | atom | "(" formula ")"
//! agents   ::= [ ident { "," ident } ]
//! ```
//!
//! `X`, `F`, `G`, `E` and `A` are reserved and cannot be used as atoms. The
//! expression is parsed dialect-agnostically and then split into state and
//! path formulas: below a quantifier, a maximal subexpression without temporal
//! operators (outside nested quantifiers) is a state formula.

use std::sync::Arc;

use thiserror::Error;

use super::{AgentSet, DialectError, Dialect, Formula, PathFormula, Quantifier, StateFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error(transparent)]
    Dialect(#[from] DialectError),
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    OpenAngle,
    CloseAngle,
    OpenBracket,
    CloseBracket,
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::OpenAngle => "`<<`".into(),
        Tok::CloseAngle => "`>>`".into(),
        Tok::OpenBracket => "`[[`".into(),
        Tok::CloseBracket => "`]]`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Arrow => "`->`".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = text.get(i..i + 2);
        let tok = match (c, two) {
            (_, Some("<<")) => Some((Tok::OpenAngle, 2)),
            (_, Some(">>")) => Some((Tok::CloseAngle, 2)),
            (_, Some("[[")) => Some((Tok::OpenBracket, 2)),
            (_, Some("]]")) => Some((Tok::CloseBracket, 2)),
            (_, Some("->")) => Some((Tok::Arrow, 2)),
            (b'(', _) => Some((Tok::LParen, 1)),
            (b')', _) => Some((Tok::RParen, 1)),
            (b',', _) => Some((Tok::Comma, 1)),
            (b'!', _) => Some((Tok::Bang, 1)),
            (b'&', _) => Some((Tok::Amp, 1)),
            (b'|', _) => Some((Tok::Pipe, 1)),
            _ => None,
        };
        if let Some((tok, len)) = tok {
            out.push((i, tok));
            i += len;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(syntax(i, format!("unexpected character `{ch}`")));
    }
    Ok(out)
}

/// Dialect-agnostic parse tree.
#[derive(Debug, Clone)]
enum Expr {
    Atom(String),
    Not(Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Quant(Quantifier, Box<Expr>),
    Next(Box<Expr>),
    Eventually(Box<Expr>),
    Always(Box<Expr>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(syntax(pos, format!("expected {}, found {}", describe(&want), describe(&t)))),
            None => Err(syntax(pos, format!("expected {}, found end of input", describe(&want)))),
        }
    }

    fn implies(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn agents(&mut self, close: Tok) -> Result<AgentSet, ParseError> {
        let mut names = Vec::new();
        if self.peek() == Some(&close) {
            self.bump();
            return Ok(AgentSet::empty());
        }
        loop {
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Ident(name)) => names.push(name),
                Some(t) => return Err(syntax(pos, format!("expected agent name, found {}", describe(&t)))),
                None => return Err(syntax(pos, "expected agent name, found end of input")),
            }
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(t) if t == close => break,
                Some(t) => {
                    return Err(syntax(
                        pos,
                        format!("expected `,` or {}, found {}", describe(&close), describe(&t)),
                    ))
                }
                None => return Err(syntax(pos, "unterminated agent list")),
            }
        }
        Ok(names.into_iter().collect())
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.bump() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        let boxed = |p: &mut Parser| p.unary().map(Box::new);
        match tok {
            Tok::Bang => Ok(Expr::Not(boxed(self)?)),
            Tok::OpenAngle => {
                let agents = self.agents(Tok::CloseAngle)?;
                Ok(Expr::Quant(Quantifier::Exists(agents), boxed(self)?))
            }
            Tok::OpenBracket => {
                let agents = self.agents(Tok::CloseBracket)?;
                Ok(Expr::Quant(Quantifier::Forall(agents), boxed(self)?))
            }
            Tok::LParen => {
                let inner = self.implies()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "E" => Ok(Expr::Quant(Quantifier::SomePath, boxed(self)?)),
                "A" => Ok(Expr::Quant(Quantifier::AllPaths, boxed(self)?)),
                "X" => Ok(Expr::Next(boxed(self)?)),
                "F" => Ok(Expr::Eventually(boxed(self)?)),
                "G" => Ok(Expr::Always(boxed(self)?)),
                _ => Ok(Expr::Atom(name)),
            },
            other => Err(syntax(pos, format!("unexpected {}", describe(&other)))),
        }
    }
}

/// Temporal operator at path level, looking through Boolean connectives but
/// not into nested quantifiers.
fn has_temporal(e: &Expr) -> bool {
    match e {
        Expr::Atom(_) | Expr::Quant(..) => false,
        Expr::Next(_) | Expr::Eventually(_) | Expr::Always(_) => true,
        Expr::Not(g) => has_temporal(g),
        Expr::Or(l, r) | Expr::And(l, r) | Expr::Implies(l, r) => has_temporal(l) || has_temporal(r),
    }
}

fn lower_state(e: Expr) -> Result<Arc<StateFormula>, String> {
    Ok(match e {
        Expr::Atom(p) => StateFormula::atom(p),
        Expr::Not(g) => StateFormula::not(lower_state(*g)?),
        Expr::Or(l, r) => StateFormula::or(lower_state(*l)?, lower_state(*r)?),
        Expr::And(l, r) => StateFormula::and(lower_state(*l)?, lower_state(*r)?),
        Expr::Implies(l, r) => StateFormula::implies(lower_state(*l)?, lower_state(*r)?),
        Expr::Quant(q, body) => StateFormula::quantified(q, lower_path(*body)?),
        Expr::Next(_) | Expr::Eventually(_) | Expr::Always(_) => {
            return Err("temporal operator outside the scope of a quantifier".into())
        }
    })
}

fn lower_path(e: Expr) -> Result<Arc<PathFormula>, String> {
    if !has_temporal(&e) {
        return Ok(PathFormula::state(lower_state(e)?));
    }
    Ok(match e {
        Expr::Not(g) => PathFormula::not(lower_path(*g)?),
        Expr::Or(l, r) => PathFormula::or(lower_path(*l)?, lower_path(*r)?),
        Expr::And(l, r) => PathFormula::and(lower_path(*l)?, lower_path(*r)?),
        Expr::Implies(l, r) => PathFormula::implies(lower_path(*l)?, lower_path(*r)?),
        Expr::Next(g) => PathFormula::next(lower_path(*g)?),
        Expr::Eventually(g) => PathFormula::eventually(lower_path(*g)?),
        Expr::Always(g) => PathFormula::always(lower_path(*g)?),
        Expr::Atom(_) | Expr::Quant(..) => unreachable!("temporal-free expressions are lowered as state formulas"),
    })
}

/// Parses `text` as a state formula of `dialect`.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    if p.peek().is_none() {
        return Err(syntax(0, "empty formula"));
    }
    let expr = p.implies()?;
    if let Some(t) = p.peek().cloned() {
        return Err(syntax(p.pos(), format!("unexpected {} after formula", describe(&t))));
    }
    let root = lower_state(expr).map_err(|m| syntax(0, m))?;
    Ok(Formula::new(dialect, root)?)
}
