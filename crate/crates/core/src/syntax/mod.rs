//! Strategy Logic formulas in negation normal form.
//!
//! Negation only ever appears on atoms. `!` in the concrete syntax is
//! pushed inwards at parse time with [`dualize`], and the derived operators
//! `F`/`G` are expanded into `Until`/`Release` over the reserved atoms
//! `true` and `false`.

mod parser;
mod print;

use std::collections::BTreeSet;

pub use parser::parse;

use crate::config::ReleaseMode;

/// Reserved atom that holds in every state.
pub const TRUE_ATOM: &str = "true";
/// Reserved atom that holds in no state.
pub const FALSE_ATOM: &str = "false";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `(agent, var) body`
    Bind(String, String, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(name.to_string())
    }

    pub fn tt() -> Formula {
        Formula::atom(TRUE_ATOM)
    }

    pub fn ff() -> Formula {
        Formula::atom(FALSE_ATOM)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn bind(agent: &str, var: &str, body: Formula) -> Formula {
        Formula::Bind(agent.to_string(), var.to_string(), Box::new(body))
    }

    pub fn next(a: Formula) -> Formula {
        Formula::Next(Box::new(a))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// `F a`, i.e. `true U a`.
    pub fn eventually(a: Formula) -> Formula {
        Formula::until(Formula::tt(), a)
    }

    /// `G a`, i.e. `false R a`.
    pub fn always(a: Formula) -> Formula {
        Formula::release(Formula::ff(), a)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Height of the AST; a literal has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => vec![],
            Formula::Exists(_, b) | Formula::Forall(_, b) | Formula::Bind(_, _, b) => vec![b],
            Formula::Next(b) => vec![b],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => vec![a, b],
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Next(_) | Formula::Until(..) | Formula::Release(..)
        )
    }

    /// True when the formula contains no quantifier and no binding.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) | Formula::Bind(..) => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    /// Atom names occurring in the formula, reserved constants excluded.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) | Formula::NegAtom(p) => {
                if p != TRUE_ATOM && p != FALSE_ATOM {
                    out.insert(p.clone());
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_atoms(out);
                }
            }
        }
    }

    /// Agents appearing in some binding.
    pub fn bound_agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Bind(a, _, _) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }
}

/// Free agents and free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeSet {
    pub agents: BTreeSet<String>,
    pub vars: BTreeSet<String>,
}

impl FreeSet {
    pub fn is_empty(&self) -> bool {
        self.agents.is_empty() && self.vars.is_empty()
    }
}

/// Free agents and free variables.
///
/// An agent is free when some temporal operator or literal is reached
/// without a binding for it; a variable is free when it is bound to an
/// agent outside the scope of any quantifier for it.
pub fn free<S: AsRef<str>>(phi: &Formula, declared_agents: &[S]) -> FreeSet {
    fn go<'a>(
        f: &'a Formula,
        declared: &[&'a str],
        bound: &mut Vec<&'a str>,
        quantified: &mut Vec<&'a str>,
        out: &mut FreeSet,
    ) {
        match f {
            Formula::Atom(_) | Formula::NegAtom(_) => {
                for ag in declared {
                    if !bound.contains(ag) {
                        out.agents.insert(ag.to_string());
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, declared, bound, quantified, out);
                go(b, declared, bound, quantified, out);
            }
            Formula::Exists(x, b) | Formula::Forall(x, b) => {
                quantified.push(x);
                go(b, declared, bound, quantified, out);
                quantified.pop();
            }
            Formula::Bind(a, x, b) => {
                if !quantified.contains(&x.as_str()) {
                    out.vars.insert(x.clone());
                }
                bound.push(a);
                go(b, declared, bound, quantified, out);
                bound.pop();
            }
            Formula::Next(_) | Formula::Until(..) | Formula::Release(..) => {
                for ag in declared {
                    if !bound.contains(ag) {
                        out.agents.insert(ag.to_string());
                    }
                }
                for c in f.children() {
                    go(c, declared, bound, quantified, out);
                }
            }
        }
    }
    let declared: Vec<&str> = declared_agents.iter().map(|s| s.as_ref()).collect();
    let mut out = FreeSet::default();
    go(phi, &declared, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

pub fn is_sentence<S: AsRef<str>>(phi: &Formula, declared_agents: &[S]) -> bool {
    free(phi, declared_agents).is_empty()
}

/// Structural NNF of the negation: swaps atom polarity, `&`/`|`, `E`/`A`
/// and `U`/`R`; keeps `X` and bindings.
pub fn dualize(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(p) => Formula::NegAtom(p.clone()),
        Formula::NegAtom(p) => Formula::Atom(p.clone()),
        Formula::And(a, b) => Formula::or(dualize(a), dualize(b)),
        Formula::Or(a, b) => Formula::and(dualize(a), dualize(b)),
        Formula::Exists(x, b) => Formula::Forall(x.clone(), Box::new(dualize(b))),
        Formula::Forall(x, b) => Formula::Exists(x.clone(), Box::new(dualize(b))),
        Formula::Bind(a, x, b) => Formula::Bind(a.clone(), x.clone(), Box::new(dualize(b))),
        Formula::Next(b) => Formula::next(dualize(b)),
        Formula::Until(a, b) => Formula::release(dualize(a), dualize(b)),
        Formula::Release(a, b) => Formula::until(dualize(a), dualize(b)),
    }
}

/// Semantic negation in NNF under the given release reading.
///
/// With [`ReleaseMode::Standard`] this is [`dualize`]. Under the literal
/// reading `φ1 R φ2` may be released at the very position where `φ1`
/// holds, so the `U`/`R` pair is no longer dual and the negations become
/// `¬(a U b) = (¬a ∧ ¬b) R ¬b` and `¬(a R b) = ¬a U (¬a ∧ ¬b)`.
pub fn negate(phi: &Formula, mode: ReleaseMode) -> Formula {
    match mode {
        ReleaseMode::Standard => dualize(phi),
        ReleaseMode::Literal => negate_literal(phi),
    }
}

fn negate_literal(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(p) => Formula::NegAtom(p.clone()),
        Formula::NegAtom(p) => Formula::Atom(p.clone()),
        Formula::And(a, b) => Formula::or(negate_literal(a), negate_literal(b)),
        Formula::Or(a, b) => Formula::and(negate_literal(a), negate_literal(b)),
        Formula::Exists(x, b) => Formula::Forall(x.clone(), Box::new(negate_literal(b))),
        Formula::Forall(x, b) => Formula::Exists(x.clone(), Box::new(negate_literal(b))),
        Formula::Bind(a, x, b) => {
            Formula::Bind(a.clone(), x.clone(), Box::new(negate_literal(b)))
        }
        Formula::Next(b) => Formula::next(negate_literal(b)),
        Formula::Until(a, b) => {
            let (na, nb) = (negate_literal(a), negate_literal(b));
            Formula::release(Formula::and(na, nb.clone()), nb)
        }
        Formula::Release(a, b) => {
            let (na, nb) = (negate_literal(a), negate_literal(b));
            Formula::until(na.clone(), Formula::and(na, nb))
        }
    }
}
