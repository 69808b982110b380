//! Two-valued satisfaction over [`ConcreteCgs`].
//!
//! Under a complete memoryless assignment every state has exactly one
//! play, an ultimately periodic path. Temporal operators are decided by
//! scanning that lasso position by position. Strategy quantifiers
//! enumerate memoryless strategies lazily: a strategy is only fixed on
//! states some play actually visits.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use crate::config::{Config, ReleaseMode};
use crate::error::{Error, Result};
use crate::eval::compile::{compile, Op, Program};
use crate::model::table::canonical_classes;
use crate::bits::StateSet;
use crate::model::{Assignment, ConcreteCgs};
use crate::syntax::{is_sentence, Formula};

const NONE: u16 = u16::MAX;
const MEMO_LIMIT: usize = 200_000;

type MemoKey = (usize, usize, Vec<Rc<Vec<u16>>>);

/// An ultimately periodic path: `prefix` followed by `cycle` repeated
/// forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    /// Positions of one traversal: the prefix then one copy of the cycle.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix.iter().chain(&self.cycle).copied()
    }

    /// The state at position `i` of the infinite path.
    pub fn at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }
}

/// Folds the path `start, next(start), …` into a lasso.
fn fold<E>(start: usize, n: usize, mut next: impl FnMut(usize) -> std::result::Result<usize, E>) -> std::result::Result<Lasso, E> {
    let mut seen = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut s = start;
    while seen[s] == usize::MAX {
        seen[s] = path.len();
        path.push(s);
        s = next(s)?;
    }
    let cycle = path.split_off(seen[s]);
    Ok(Lasso { prefix: path, cycle })
}

/// The unique play from `s` under a complete assignment.
pub fn play(g: &ConcreteCgs, chi: &Assignment, s: usize) -> Result<Lasso> {
    let profile = chi.profile(g.agents())?;
    if s >= g.num_states() {
        return Err(Error::UnknownState(s.to_string()));
    }
    if profile.iter().any(|f| f.len() != g.num_states()) {
        return Err(Error::Validation("strategy length differs from state count".into()));
    }
    let mut joint = vec![0u16; g.num_agents()];
    fold(s, g.num_states(), |s| {
        for (a, f) in profile.iter().enumerate() {
            joint[a] = f.action(s);
        }
        Ok(g.succ(s, &joint))
    })
}

#[derive(Clone)]
struct Env {
    slots: Vec<Option<Rc<Vec<u16>>>>,
    agents: Vec<Option<(usize, Rc<Vec<u16>>)>>,
}

enum Flow {
    Need { slot: usize, state: usize },
    Fail(Error),
}

impl From<Error> for Flow {
    fn from(e: Error) -> Self {
        Flow::Fail(e)
    }
}

type Res<T> = std::result::Result<T, Flow>;

struct Checker<'a> {
    g: &'a ConcreteCgs,
    prog: Program,
    cfg: &'a Config,
    spent: Cell<u64>,
    start: Instant,
    memo: RefCell<HashMap<MemoKey, bool>>,
    choices: RefCell<HashMap<(usize, usize), Rc<Vec<u16>>>>,
}

impl<'a> Checker<'a> {
    /// One action per behaviour class of the agents bound to `slot` at
    /// `state`: actions in the same class lead to the same successors.
    fn choices(&self, slot: usize, state: usize) -> Rc<Vec<u16>> {
        if let Some(c) = self.choices.borrow().get(&(slot, state)) {
            return c.clone();
        }
        let row = self.g.row(state);
        let agents = &self.prog.bound[slot];
        let keys: Vec<Vec<u16>> = (0..self.g.num_actions() as u16)
            .map(|act| agents.iter().map(|&a| row.class_of(a, act)).collect())
            .collect();
        let classes = canonical_classes(&keys);
        let mut reps = Vec::new();
        for (act, &c) in classes.iter().enumerate() {
            if c as usize == reps.len() {
                reps.push(act as u16);
            }
        }
        let reps = Rc::new(reps);
        self.choices.borrow_mut().insert((slot, state), reps.clone());
        reps
    }

    fn memoized(&self, node: usize, env: &Env, s: usize, f: impl FnOnce() -> Res<bool>) -> Res<bool> {
        let mut strategies = Vec::new();
        for &a in &self.prog.dep_agents[node] {
            if let Some((_, f)) = &env.agents[a] {
                strategies.push(f.clone());
            }
        }
        for &x in &self.prog.dep_slots[node] {
            if let Some(f) = &env.slots[x] {
                strategies.push(f.clone());
            }
        }
        let key = (node, s, strategies);
        if let Some(&v) = self.memo.borrow().get(&key) {
            return Ok(v);
        }
        let v = f()?;
        let mut memo = self.memo.borrow_mut();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, v);
        Ok(v)
    }

    fn tick(&self) -> Res<()> {
        let spent = self.spent.get() + 1;
        self.spent.set(spent);
        if spent > self.cfg.budget {
            return Err(Error::BudgetExceeded(self.cfg.budget).into());
        }
        if spent % 256 == 0 {
            if let Some(limit) = self.cfg.timeout {
                if self.start.elapsed() > limit {
                    return Err(Error::Timeout.into());
                }
            }
        }
        Ok(())
    }

    fn lasso(&self, node: usize, env: &Env, s: usize) -> Res<Lasso> {
        let mut joint = vec![0u16; self.g.num_agents()];
        let mut agents = Vec::with_capacity(joint.len());
        for a in &env.agents {
            match a {
                Some(x) => agents.push(x),
                None => {
                    let text = self.prog.text[node].clone().unwrap_or_default();
                    return Err(Error::FreeUnderTemporal(text).into());
                }
            }
        }
        fold(s, self.g.num_states(), |s| {
            for (a, (slot, f)) in agents.iter().enumerate() {
                if f[s] == NONE {
                    return Err(Flow::Need { slot: *slot, state: s });
                }
                joint[a] = f[s];
            }
            Ok(self.g.succ(s, &joint))
        })
    }

    fn eval(&self, node: usize, env: &Env, s: usize) -> Res<bool> {
        match &self.prog.ops[node] {
            Op::Quant { .. } | Op::Next(_) | Op::Until(..) | Op::Release(..) => {
                self.memoized(node, env, s, || self.eval_step(node, env, s))
            }
            _ => self.eval_step(node, env, s),
        }
    }

    fn eval_step(&self, node: usize, env: &Env, s: usize) -> Res<bool> {
        match &self.prog.ops[node] {
            Op::Const(b) => Ok(*b),
            Op::Lit { atom, neg } => Ok(self.g.holds(s, *atom) != *neg),
            Op::And(a, b) => Ok(self.eval(*a, env, s)? && self.eval(*b, env, s)?),
            Op::Or(a, b) => Ok(self.eval(*a, env, s)? || self.eval(*b, env, s)?),
            Op::Bind { agent, slot, body } => {
                let f = env.slots[*slot].clone().ok_or_else(|| {
                    Flow::Fail(Error::UnassignedVariable(self.prog.slot_names[*slot].clone()))
                })?;
                let mut inner = env.clone();
                inner.agents[*agent] = Some((*slot, f));
                self.eval(*body, &inner, s)
            }
            Op::Quant { exists, slot, body } => {
                let n = self.g.num_states();
                let mut inner = env.clone();
                let mut stack = vec![Rc::new(vec![NONE; n])];
                while let Some(f) = stack.pop() {
                    self.tick()?;
                    inner.slots[*slot] = Some(f.clone());
                    match self.eval(*body, &inner, s) {
                        Ok(v) if v == *exists => return Ok(v),
                        Ok(_) => {}
                        Err(Flow::Need { slot: x, state }) if x == *slot => {
                            for &act in self.choices(*slot, state).iter().rev() {
                                let mut g = (*f).clone();
                                g[state] = act;
                                stack.push(Rc::new(g));
                            }
                        }
                        Err(e) => return Err(e),
                    }
                }
                Ok(!*exists)
            }
            Op::Next(a) => {
                let l = self.lasso(node, env, s)?;
                self.eval(*a, env, l.at(1))
            }
            Op::Until(a, b) => {
                let l = self.lasso(node, env, s)?;
                for p in l.positions() {
                    if self.eval(*b, env, p)? {
                        return Ok(true);
                    }
                    if !self.eval(*a, env, p)? {
                        return Ok(false);
                    }
                }
                Ok(false)
            }
            Op::Release(a, b) => {
                let l = self.lasso(node, env, s)?;
                for p in l.positions() {
                    // for all i: b holds at i, or a held at some j ≤ i
                    // (j < i in standard mode)
                    match self.cfg.release {
                        ReleaseMode::Literal => {
                            if self.eval(*a, env, p)? {
                                return Ok(true);
                            }
                            if !self.eval(*b, env, p)? {
                                return Ok(false);
                            }
                        }
                        ReleaseMode::Standard => {
                            if !self.eval(*b, env, p)? {
                                return Ok(false);
                            }
                            if self.eval(*a, env, p)? {
                                return Ok(true);
                            }
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

fn checker<'a>(g: &'a ConcreteCgs, phi: &Formula, cfg: &'a Config) -> Result<Checker<'a>> {
    Ok(Checker {
        g,
        prog: compile(phi, g.agents(), g.atoms())?,
        cfg,
        spent: Cell::new(0),
        start: Instant::now(),
        memo: RefCell::new(HashMap::new()),
        choices: RefCell::new(HashMap::new()),
    })
}

fn run(c: &Checker<'_>, env: &Env, s: usize) -> Result<bool> {
    match c.eval(c.prog.root, env, s) {
        Ok(b) => Ok(b),
        Err(Flow::Fail(e)) => Err(e),
        Err(Flow::Need { slot, .. }) => Err(Error::UnassignedVariable(c.prog.slot_names[slot].clone())),
    }
}

/// Whether `phi` holds at state `s` under the assignment `chi`.
pub fn eval2(g: &ConcreteCgs, phi: &Formula, chi: &Assignment, s: usize, cfg: &Config) -> Result<bool> {
    if s >= g.num_states() {
        return Err(Error::UnknownState(s.to_string()));
    }
    let c = checker(g, phi, cfg)?;
    let n = g.num_states();
    let fit = |f: &crate::model::MemorylessStrategy| -> Result<Rc<Vec<u16>>> {
        if f.len() != n || f.as_slice().iter().any(|&a| a as usize >= g.num_actions()) {
            return Err(Error::Validation("strategy does not fit the model".into()));
        }
        Ok(Rc::new(f.as_slice().to_vec()))
    };
    let mut env = Env {
        slots: vec![None; c.prog.slots],
        agents: vec![None; g.num_agents()],
    };
    for (name, slot) in &c.prog.external {
        if let Some(f) = chi.var(name) {
            env.slots[*slot] = Some(fit(f)?);
        }
    }
    for (agent, f) in chi.agent_entries() {
        env.agents[g.agent_index(agent)?] = Some((usize::MAX, fit(f)?));
    }
    run(&c, &env, s)
}

/// The states where the root formula holds when every temporal operator
/// is read over all paths (`universal`) or some path of the graph of all
/// joint actions, ignoring quantifiers and bindings. Every play of every
/// assignment is such a path and negation only sits on atoms, so the
/// universal reading implies the formula and the formula implies the
/// existential reading.
fn path_bound(c: &Checker<'_>, universal: bool) -> StateSet {
    let n = c.g.num_states();
    let post: Vec<Vec<usize>> = (0..n).map(|s| c.g.post(s)).collect();
    let pre = |z: &StateSet| {
        StateSet::from_iter(
            n,
            (0..n).filter(|&s| {
                if universal {
                    post[s].iter().all(|&t| z.contains(t))
                } else {
                    post[s].iter().any(|&t| z.contains(t))
                }
            }),
        )
    };
    let fix = |mut z: StateSet, step: &dyn Fn(&StateSet) -> StateSet| loop {
        let next = step(&z);
        if next == z {
            return z;
        }
        z = next;
    };
    let mut sets: Vec<StateSet> = Vec::with_capacity(c.prog.ops.len());
    // children always precede parents in the arena
    for op in &c.prog.ops {
        let v = match op {
            Op::Const(b) => if *b { StateSet::full(n) } else { StateSet::empty(n) },
            Op::Lit { atom, neg } => {
                let set = c.g.atom_states(*atom);
                if *neg { set.complement() } else { set.clone() }
            }
            Op::And(a, b) => {
                let mut v = sets[*a].clone();
                v.intersect_with(&sets[*b]);
                v
            }
            Op::Or(a, b) => {
                let mut v = sets[*a].clone();
                v.union_with(&sets[*b]);
                v
            }
            Op::Quant { body, .. } | Op::Bind { body, .. } => sets[*body].clone(),
            Op::Next(a) => pre(&sets[*a]),
            Op::Until(a, b) => {
                let (a, b) = (&sets[*a], &sets[*b]);
                fix(StateSet::empty(n), &|z| {
                    let mut v = pre(z);
                    v.intersect_with(a);
                    v.union_with(b);
                    v
                })
            }
            Op::Release(a, b) => {
                let (a, b) = (&sets[*a], &sets[*b]);
                fix(StateSet::full(n), &|z| match c.cfg.release {
                    ReleaseMode::Literal => {
                        let mut v = pre(z);
                        v.intersect_with(b);
                        v.union_with(a);
                        v
                    }
                    ReleaseMode::Standard => {
                        let mut v = pre(z);
                        v.union_with(a);
                        v.intersect_with(b);
                        v
                    }
                })
            }
        };
        sets.push(v);
    }
    sets.swap_remove(c.prog.root)
}

/// Whether the model satisfies the sentence at its initial state.
pub fn check2(g: &ConcreteCgs, phi: &Formula, cfg: &Config) -> Result<bool> {
    if !is_sentence(phi, g.agents()) {
        return Err(Error::NotASentence(phi.to_string()));
    }
    let c = checker(g, phi, cfg)?;
    if cfg.shortcuts {
        let s0 = g.initial();
        if path_bound(&c, true).contains(s0) {
            return Ok(true);
        }
        if !path_bound(&c, false).contains(s0) {
            return Ok(false);
        }
    }
    let env = Env {
        slots: vec![None; c.prog.slots],
        agents: vec![None; g.num_agents()],
    };
    run(&c, &env, g.initial())
}
