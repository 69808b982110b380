//! Lowering of formulas to an indexed program over a fixed model
//! vocabulary.
//!
//! Every quantifier owns a variable slot; bindings refer to the slot of
//! the innermost enclosing quantifier of their variable. Variables with no
//! enclosing quantifier get external slots filled from a caller-supplied
//! assignment.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{Formula, FALSE_ATOM, TRUE_ATOM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    Const(bool),
    Lit { atom: usize, neg: bool },
    And(usize, usize),
    Or(usize, usize),
    Quant { exists: bool, slot: usize, body: usize },
    Bind { agent: usize, slot: usize, body: usize },
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub ops: Vec<Op>,
    pub root: usize,
    /// Number of variable slots (quantifier slots first, then external).
    pub slots: usize,
    pub slot_names: Vec<String>,
    /// External slots by variable name.
    pub external: Vec<(String, usize)>,
    /// Agents bound to each slot.
    pub bound: Vec<Vec<usize>>,
    /// Agents whose strategies a node's value may depend on.
    pub dep_agents: Vec<Vec<usize>>,
    /// Slots a node's value may depend on.
    pub dep_slots: Vec<Vec<usize>>,
    /// Printed form of temporal nodes, for error messages.
    pub text: Vec<Option<String>>,
}

struct Lowering<'a> {
    agents: &'a [String],
    atoms: &'a [String],
    ops: Vec<Op>,
    text: Vec<Option<String>>,
    slot_names: Vec<String>,
    external: Vec<(String, usize)>,
    bound: Vec<Vec<usize>>,
    pending_external: Vec<(String, Vec<usize>)>,
}

pub(crate) fn compile(phi: &Formula, agents: &[String], atoms: &[String]) -> Result<Program> {
    let mut l = Lowering {
        agents,
        atoms,
        ops: Vec::new(),
        text: Vec::new(),
        slot_names: Vec::new(),
        external: Vec::new(),
        bound: Vec::new(),
        pending_external: Vec::new(),
    };
    let root = l.lower(phi, &mut Vec::new())?;
    // external slots come after quantifier slots; rewrite placeholders
    let base = l.slot_names.len();
    let mut ops = l.ops;
    for (i, (name, _)) in l.pending_external.iter().enumerate() {
        l.slot_names.push(name.clone());
        l.external.push((name.clone(), base + i));
    }
    for op in ops.iter_mut() {
        if let Op::Bind { slot, .. } = op {
            if *slot >= PLACEHOLDER {
                *slot = base + (*slot - PLACEHOLDER);
            }
        }
    }
    let mut bound = l.bound;
    for (_, agents) in &l.pending_external {
        bound.push(agents.clone());
    }
    let slots = l.slot_names.len();
    let mut prog = Program {
        ops,
        root,
        slots,
        slot_names: l.slot_names,
        external: l.external,
        bound,
        dep_agents: Vec::new(),
        dep_slots: Vec::new(),
        text: l.text,
    };
    compute_deps(&mut prog, agents.len());
    Ok(prog)
}

const PLACEHOLDER: usize = usize::MAX / 2;

impl<'a> Lowering<'a> {
    fn push(&mut self, op: Op, text: Option<String>) -> usize {
        self.ops.push(op);
        self.text.push(text);
        self.ops.len() - 1
    }

    fn lower(&mut self, phi: &Formula, scope: &mut Vec<(String, usize)>) -> Result<usize> {
        let op = match phi {
            Formula::Atom(p) | Formula::NegAtom(p) => {
                let neg = matches!(phi, Formula::NegAtom(_));
                if p == TRUE_ATOM || p == FALSE_ATOM {
                    Op::Const((p == TRUE_ATOM) != neg)
                } else {
                    let atom = self
                        .atoms
                        .binary_search(p)
                        .map_err(|_| Error::UnknownAtom(p.clone()))?;
                    Op::Lit { atom, neg }
                }
            }
            Formula::And(a, b) => {
                let a = self.lower(a, scope)?;
                let b = self.lower(b, scope)?;
                Op::And(a, b)
            }
            Formula::Or(a, b) => {
                let a = self.lower(a, scope)?;
                let b = self.lower(b, scope)?;
                Op::Or(a, b)
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let slot = self.slot_names.len();
                self.slot_names.push(x.clone());
                self.bound.push(Vec::new());
                scope.push((x.clone(), slot));
                let body = self.lower(body, scope);
                scope.pop();
                Op::Quant {
                    exists: matches!(phi, Formula::Exists(..)),
                    slot,
                    body: body?,
                }
            }
            Formula::Bind(a, x, body) => {
                let agent = self
                    .agents
                    .binary_search(a)
                    .map_err(|_| Error::UnknownAgent(a.clone()))?;
                let slot = match scope.iter().rev().find(|(n, _)| n == x) {
                    Some(&(_, slot)) => {
                        if !self.bound[slot].contains(&agent) {
                            self.bound[slot].push(agent);
                        }
                        slot
                    }
                    None => {
                        let i = match self.pending_external.iter().position(|(n, _)| n == x) {
                            Some(i) => i,
                            None => {
                                self.pending_external.push((x.clone(), Vec::new()));
                                self.pending_external.len() - 1
                            }
                        };
                        if !self.pending_external[i].1.contains(&agent) {
                            self.pending_external[i].1.push(agent);
                        }
                        PLACEHOLDER + i
                    }
                };
                let body = self.lower(body, scope)?;
                Op::Bind { agent, slot, body }
            }
            Formula::Next(a) => {
                let a = self.lower(a, scope)?;
                return Ok(self.push(Op::Next(a), Some(phi.to_string())));
            }
            Formula::Until(a, b) => {
                let a = self.lower(a, scope)?;
                let b = self.lower(b, scope)?;
                return Ok(self.push(Op::Until(a, b), Some(phi.to_string())));
            }
            Formula::Release(a, b) => {
                let a = self.lower(a, scope)?;
                let b = self.lower(b, scope)?;
                return Ok(self.push(Op::Release(a, b), Some(phi.to_string())));
            }
        };
        Ok(self.push(op, None))
    }
}

fn compute_deps(prog: &mut Program, n_agents: usize) {
    let n = prog.ops.len();
    let mut agents: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut slots: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    // children always precede parents in the arena
    for i in 0..n {
        let (a, s) = match &prog.ops[i] {
            Op::Const(_) | Op::Lit { .. } => (BTreeSet::new(), BTreeSet::new()),
            Op::And(x, y) | Op::Or(x, y) => (
                agents[*x].union(&agents[*y]).copied().collect(),
                slots[*x].union(&slots[*y]).copied().collect(),
            ),
            Op::Quant { slot, body, .. } => {
                let mut s = slots[*body].clone();
                s.remove(slot);
                (agents[*body].clone(), s)
            }
            Op::Bind { agent, slot, body } => {
                let mut a = agents[*body].clone();
                let mut s = slots[*body].clone();
                if a.remove(agent) {
                    s.insert(*slot);
                }
                (a, s)
            }
            Op::Next(x) => ((0..n_agents).collect(), slots[*x].clone()),
            Op::Until(x, y) | Op::Release(x, y) => (
                (0..n_agents).collect(),
                slots[*x].union(&slots[*y]).copied().collect(),
            ),
        };
        agents[i] = a;
        slots[i] = s;
    }
    prog.dep_agents = agents.into_iter().map(|s| s.into_iter().collect()).collect();
    prog.dep_slots = slots.into_iter().map(|s| s.into_iter().collect()).collect();
}

impl Program {
    /// Whether the subtree at `node` contains a quantifier.
    pub fn has_quantifier(&self, node: usize) -> bool {
        match &self.ops[node] {
            Op::Const(_) | Op::Lit { .. } => false,
            Op::Quant { .. } => true,
            Op::Bind { body, .. } | Op::Next(body) => self.has_quantifier(*body),
            Op::And(a, b) | Op::Or(a, b) | Op::Until(a, b) | Op::Release(a, b) => {
                self.has_quantifier(*a) || self.has_quantifier(*b)
            }
        }
    }
}
