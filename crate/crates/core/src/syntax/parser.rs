//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! formula := or
//! or      := and ("|" and)*
//! and     := temp ("&" temp)*
//! temp    := unary (("U" | "R") temp)?          right associative
//! unary   := "!" unary | ("X" | "F" | "G") unary | prefix | primary
//! prefix  := ("E" | "A") IDENT formula | "(" IDENT "," IDENT ")" formula
//! primary := IDENT | "(" formula ")"
//! ```
//!
//! Quantifiers and bindings scope as far to the right as possible.

use std::collections::BTreeSet;

use super::{dualize, Formula, FALSE_ATOM, TRUE_ATOM};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Pipe,
    Kw(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: &[char] = &['E', 'A', 'X', 'F', 'G', 'U', 'R'];

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let single = |tok| Spanned {
            tok,
            line: l,
            column: col,
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '#' => {
                // comment to end of line
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            ',' => out.push(single(Tok::Comma)),
            '!' => out.push(single(Tok::Bang)),
            '&' => out.push(single(Tok::Amp)),
            '|' => out.push(single(Tok::Pipe)),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                let tok = match ident.chars().next() {
                    Some(k) if ident.len() == 1 && KEYWORDS.contains(&k) => Tok::Kw(k),
                    _ => Tok::Ident(ident),
                };
                out.push(Spanned {
                    tok,
                    line: l,
                    column: col,
                });
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        chars.next();
        column += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    agents: BTreeSet<String>,
    vars: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self, role: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                if role != "atom" && (name == TRUE_ATOM || name == FALSE_ATOM) {
                    return self.error(format!("`{name}` is reserved and cannot name an {role}"));
                }
                self.bump();
                Ok(name)
            }
            other => self.error(format!("expected {role} name, found {}", describe(&other))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Kw('U') => {
                self.bump();
                Ok(Formula::until(lhs, self.temporal()?))
            }
            Tok::Kw('R') => {
                self.bump();
                Ok(Formula::release(lhs, self.temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(dualize(&self.unary()?))
            }
            Tok::Kw('X') => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Kw('F') => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Kw('G') => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::Kw(q @ ('E' | 'A')) => {
                self.bump();
                let var = self.ident("variable")?;
                self.vars.insert(var.clone());
                let body = self.formula()?;
                Ok(if q == 'E' {
                    Formula::Exists(var, Box::new(body))
                } else {
                    Formula::Forall(var, Box::new(body))
                })
            }
            Tok::LParen
                if matches!(self.peek_at(1), Tok::Ident(_))
                    && *self.peek_at(2) == Tok::Comma =>
            {
                self.bump();
                let agent = self.ident("agent")?;
                self.expect(Tok::Comma, "`,`")?;
                let var = self.ident("variable")?;
                self.expect(Tok::RParen, "`)`")?;
                self.agents.insert(agent.clone());
                self.vars.insert(var.clone());
                let body = self.formula()?;
                Ok(Formula::Bind(agent, var, Box::new(body)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            other => self.error(format!("expected a formula, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Kw(k) => format!("`{k}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a formula, pushing negations to the atoms.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        agents: BTreeSet::new(),
        vars: BTreeSet::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    if let Some(clash) = p.agents.intersection(&p.vars).next() {
        return Err(Error::Namespace(clash.clone()));
    }
    Ok(f)
}
