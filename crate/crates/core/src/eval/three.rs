//! Three-valued satisfaction over [`ThreeCgs`].
//!
//! Valuations are computed for sets of states at once. Quantified
//! variables range over memoryless strategies that are built lazily:
//! evaluation starts from an everywhere-undefined strategy and, whenever a
//! temporal operator needs the action of an undefined state, reports that
//! state back to the quantifier, which branches over the behaviourally
//! distinct choices there. A value computed from a partial strategy is
//! shared by all of its completions.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use crate::bits::StateSet;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::compile::{compile, Op, Program};
use crate::eval::fixpoint::{LocalGraph, Val, Valuation};
use crate::model::table::canonical_classes;
use crate::model::{Assignment, ThreeCgs, TransitionMode};
use crate::syntax::{is_sentence, Formula};
use crate::truth::TruthValue;

pub(crate) const NONE: u16 = u16::MAX;

type Strat = Rc<Vec<u16>>;

#[derive(Clone)]
struct Env {
    slots: Vec<Option<Strat>>,
    /// Strategy of each agent with the slot it was bound from.
    agents: Vec<Option<(usize, Strat)>>,
}

pub(crate) enum Flow {
    Need { slot: usize, state: usize },
    Fail(Error),
}

impl From<Error> for Flow {
    fn from(e: Error) -> Self {
        Flow::Fail(e)
    }
}

type Res<T> = std::result::Result<T, Flow>;

#[derive(Clone, Copy)]
struct Choice {
    action: u16,
    must: bool,
}

#[derive(PartialEq, Eq, Hash)]
struct MemoKey {
    node: usize,
    mask: StateSet,
    strategies: Vec<Strat>,
}

const MEMO_LIMIT: usize = 200_000;
const EXTERNAL: usize = usize::MAX;

pub(crate) struct Engine<'a> {
    g: &'a ThreeCgs,
    prog: Program,
    cfg: &'a Config,
    must_any: bool,
    spent: Cell<u64>,
    start: Instant,
    memo: RefCell<HashMap<MemoKey, Val>>,
    choices: RefCell<HashMap<(usize, usize), Rc<Vec<Choice>>>>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(g: &'a ThreeCgs, phi: &Formula, cfg: &'a Config) -> Result<Self> {
        let prog = compile(phi, g.agents(), g.atoms())?;
        Ok(Engine {
            g,
            prog,
            cfg,
            must_any: g.must_mask().iter().any(|&m| m),
            spent: Cell::new(0),
            start: Instant::now(),
            memo: RefCell::new(HashMap::new()),
            choices: RefCell::new(HashMap::new()),
        })
    }

    /// Strategy evaluations performed so far.
    pub(crate) fn spent(&self) -> u64 {
        self.spent.get()
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

    fn empty_env(&self) -> Env {
        Env {
            slots: vec![None; self.prog.slots],
            agents: vec![None; self.g.num_agents()],
        }
    }

    fn env_from(&self, chi: &Assignment) -> Result<Env> {
        let n = self.g.num_states();
        let mut env = self.empty_env();
        let check = |f: &crate::model::MemorylessStrategy| -> Result<Strat> {
            if f.len() != n || f.as_slice().iter().any(|&a| a as usize >= self.g.num_actions()) {
                return Err(Error::Validation("strategy does not fit the model".into()));
            }
            Ok(Rc::new(f.as_slice().to_vec()))
        };
        for (name, slot) in &self.prog.external {
            if let Some(f) = chi.var(name) {
                env.slots[*slot] = Some(check(f)?);
            }
        }
        for (agent, f) in chi.agent_entries() {
            let a = self.g.agent_index(agent)?;
            env.agents[a] = Some((EXTERNAL, check(f)?));
        }
        Ok(env)
    }

    pub(crate) fn run(&self, chi: &Assignment, mask: &StateSet) -> Result<Val> {
        let env = self.env_from(chi)?;
        self.finish(self.eval(self.prog.root, &env, mask))
    }

    pub(crate) fn run_closed(&self, mask: &StateSet) -> Result<Val> {
        let env = self.empty_env();
        self.finish(self.eval(self.prog.root, &env, mask))
    }

    fn finish(&self, r: Res<Val>) -> Result<Val> {
        match r {
            Ok(v) => Ok(v),
            Err(Flow::Fail(e)) => Err(e),
            Err(Flow::Need { slot, .. }) => Err(Error::UnassignedVariable(
                self.prog.slot_names.get(slot).cloned().unwrap_or_default(),
            )),
        }
    }

    fn eval(&self, node: usize, env: &Env, mask: &StateSet) -> Res<Val> {
        let n = self.g.num_states();
        if mask.is_empty() {
            return Ok(Val::undef(n));
        }
        match &self.prog.ops[node] {
            Op::Const(b) => {
                let mut v = Val::undef(n);
                if *b {
                    v.tt = mask.clone();
                } else {
                    v.ff = mask.clone();
                }
                Ok(v)
            }
            Op::Lit { atom, neg } => {
                let (tt, ff) = self.g.atom_states(*atom);
                let v = if *neg {
                    Val { tt: ff.clone(), ff: tt.clone() }
                } else {
                    Val { tt: tt.clone(), ff: ff.clone() }
                };
                Ok(v.restrict(mask))
            }
            Op::And(a, b) => {
                let va = self.eval(*a, env, mask)?;
                let mut rest = mask.clone();
                rest.difference_with(&va.ff);
                let vb = self.eval(*b, env, &rest)?;
                let mut tt = va.tt;
                tt.intersect_with(&vb.tt);
                let mut ff = va.ff;
                ff.union_with(&vb.ff);
                Ok(Val { tt, ff }.restrict(mask))
            }
            Op::Or(a, b) => {
                let va = self.eval(*a, env, mask)?;
                let mut rest = mask.clone();
                rest.difference_with(&va.tt);
                let vb = self.eval(*b, env, &rest)?;
                let mut tt = va.tt;
                tt.union_with(&vb.tt);
                let mut ff = va.ff;
                ff.intersect_with(&vb.ff);
                Ok(Val { tt, ff }.restrict(mask))
            }
            Op::Bind { agent, slot, body } => {
                let f = env.slots[*slot].clone().ok_or_else(|| {
                    Flow::Fail(Error::UnassignedVariable(self.prog.slot_names[*slot].clone()))
                })?;
                let mut inner = env.clone();
                inner.agents[*agent] = Some((*slot, f));
                self.eval(*body, &inner, mask)
            }
            Op::Quant { exists, slot, body } => {
                self.memoized(node, env, mask, || self.quantify(*exists, *slot, *body, env, mask))
            }
            Op::Next(a) => self.memoized(node, env, mask, || self.next(node, *a, env, mask)),
            Op::Until(a, b) | Op::Release(a, b) => {
                self.memoized(node, env, mask, || self.binary_temporal(node, *a, *b, env, mask))
            }
        }
    }

    fn memoized(&self, node: usize, env: &Env, mask: &StateSet, f: impl FnOnce() -> Res<Val>) -> Res<Val> {
        let mut strategies = Vec::new();
        for &a in &self.prog.dep_agents[node] {
            if let Some((_, s)) = &env.agents[a] {
                strategies.push(s.clone());
            }
        }
        for &x in &self.prog.dep_slots[node] {
            if let Some(s) = &env.slots[x] {
                strategies.push(s.clone());
            }
        }
        let key = MemoKey {
            node,
            mask: mask.clone(),
            strategies,
        };
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        let mut memo = self.memo.borrow_mut();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, v.clone());
        Ok(v)
    }

    fn choices(&self, slot: usize, state: usize) -> Rc<Vec<Choice>> {
        if let Some(c) = self.choices.borrow().get(&(slot, state)) {
            return c.clone();
        }
        let row = self.g.row(state);
        let agents = &self.prog.bound[slot];
        let keys: Vec<Vec<u16>> = (0..self.g.num_actions() as u16)
            .map(|act| agents.iter().map(|&a| row.class_of(a, act)).collect())
            .collect();
        let classes = canonical_classes(&keys);
        let k = classes.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut out: Vec<Option<Choice>> = vec![None; k];
        for (act, &c) in classes.iter().enumerate() {
            let must = self.g.is_must(act as u16);
            match &mut out[c as usize] {
                slot @ None => {
                    *slot = Some(Choice {
                        action: act as u16,
                        must,
                    })
                }
                Some(ch) if must && !ch.must => {
                    *ch = Choice {
                        action: act as u16,
                        must: true,
                    }
                }
                _ => {}
            }
        }
        let out = Rc::new(out.into_iter().map(Option::unwrap).collect::<Vec<_>>());
        self.choices.borrow_mut().insert((slot, state), out.clone());
        out
    }

    fn quantify(&self, exists: bool, slot: usize, body: usize, env: &Env, mask: &StateSet) -> Res<Val> {
        let n = self.g.num_states();
        let mut inner = env.clone();
        // decided: ⊤ witnesses for ∃, ⊥ witnesses for ∀
        let mut decided = StateSet::empty(n);
        // states where some strategy fails to give ⊥ (∃) or ⊤ (∀)
        let mut escaped = StateSet::empty(n);
        let mut remaining = mask.clone();
        let mut stack: Vec<(Strat, bool)> = vec![(Rc::new(vec![NONE; n]), self.must_any)];
        while let Some((f, capable)) = stack.pop() {
            if remaining.is_empty() {
                break;
            }
            self.tick()?;
            inner.slots[slot] = Some(f.clone());
            match self.eval(body, &inner, &remaining) {
                Ok(v) => {
                    let (win, lose) = if exists { (&v.tt, &v.ff) } else { (&v.ff, &v.tt) };
                    if capable {
                        decided.union_with(win);
                    }
                    let mut open = remaining.clone();
                    open.difference_with(lose);
                    escaped.union_with(&open);
                    remaining.difference_with(&decided);
                }
                Err(Flow::Need { slot: s, state }) if s == slot => {
                    for c in self.choices(slot, state).iter().rev() {
                        let mut g = (*f).clone();
                        g[state] = c.action;
                        stack.push((Rc::new(g), capable && c.must));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        let mut refuted = mask.clone();
        refuted.difference_with(&decided);
        refuted.difference_with(&escaped);
        let v = if exists {
            Val { tt: decided, ff: refuted }
        } else {
            Val { tt: refuted, ff: decided }
        };
        Ok(v.restrict(mask))
    }

    /// May/must successors under the current (complete) assignment for all
    /// states reachable from `mask`, or for `mask` alone if `one_step`.
    fn induced(&self, node: usize, env: &Env, mask: &StateSet, one_step: bool) -> Res<LocalGraph<'a>> {
        let n = self.g.num_states();
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
        let mut lg = LocalGraph {
            domain: mask.clone(),
            may: vec![&[][..]; n],
            must: vec![&[][..]; n],
        };
        let mut stack: Vec<usize> = mask.iter().collect();
        while let Some(s) = stack.pop() {
            for (a, (slot, f)) in agents.iter().enumerate() {
                let act = f[s];
                if act == NONE {
                    return Err(Flow::Need { slot: *slot, state: s });
                }
                joint[a] = act;
            }
            let cell = self.g.cell(s, &joint);
            lg.may[s] = &cell.may;
            lg.must[s] = &cell.must;
            if !one_step {
                for &t in &cell.may {
                    if !lg.domain.contains(t as usize) {
                        lg.domain.insert(t as usize);
                        stack.push(t as usize);
                    }
                }
            }
        }
        Ok(lg)
    }

    fn next(&self, node: usize, a: usize, env: &Env, mask: &StateSet) -> Res<Val> {
        let n = self.g.num_states();
        let step = self.induced(node, env, mask, true)?;
        let mut post = StateSet::empty(n);
        for s in mask.iter() {
            for &t in step.may[s] {
                post.insert(t as usize);
            }
        }
        let sub = self.eval(a, env, &post)?;
        // ⊥ candidates need an infinite must continuation
        let mut cand = StateSet::empty(n);
        for s in mask.iter() {
            if !step.may[s].iter().all(|&t| sub.tt.contains(t as usize)) {
                for &t in step.must[s] {
                    if sub.ff.contains(t as usize) {
                        cand.insert(t as usize);
                    }
                }
            }
        }
        let inf = if cand.is_empty() {
            cand
        } else {
            self.induced(node, env, &cand, false)?.inf()
        };
        Ok(step.next(mask, &sub, &inf))
    }

    fn binary_temporal(&self, node: usize, a: usize, b: usize, env: &Env, mask: &StateSet) -> Res<Val> {
        let lg = self.induced(node, env, mask, false)?;
        let domain = lg.domain.clone();
        let v = match self.prog.ops[node] {
            Op::Until(..) => {
                let vb = self.eval(b, env, &domain)?;
                let mut rest = domain.clone();
                rest.difference_with(&vb.tt);
                let va = self.eval(a, env, &rest)?;
                let inf = lg.inf();
                lg.until(&va, &vb, &inf)
            }
            _ => {
                let va = self.eval(a, env, &domain)?;
                let mut rest = domain.clone();
                if self.cfg.release == crate::config::ReleaseMode::Literal {
                    rest.difference_with(&va.tt);
                }
                let vb = self.eval(b, env, &rest)?;
                let inf = lg.inf();
                lg.release(&va, &vb, &inf, self.cfg.release)
            }
        };
        Ok(v.restrict(mask))
    }

    /// ⊤-set of a quantifier-free body over the union of all may
    /// transitions, i.e. the states where it holds on every may path of
    /// every strategy profile.
    pub(crate) fn union_true(&self, node: usize) -> StateSet {
        let n = self.g.num_states();
        let posts: Vec<Vec<u32>> = (0..n)
            .map(|s| self.g.post(s, TransitionMode::May).into_iter().map(|t| t as u32).collect())
            .collect();
        let lg = LocalGraph {
            domain: StateSet::full(n),
            may: posts.iter().map(|v| v.as_slice()).collect(),
            must: vec![&[][..]; n],
        };
        self.union_eval(&lg, node).tt
    }

    fn union_eval(&self, lg: &LocalGraph<'_>, node: usize) -> Val {
        let n = self.g.num_states();
        let all = StateSet::full(n);
        let none = StateSet::empty(n);
        match &self.prog.ops[node] {
            Op::Const(_) | Op::Lit { .. } => {
                let env = self.empty_env();
                match self.eval(node, &env, &all) {
                    Ok(v) => v,
                    Err(_) => unreachable!("literals never fail"),
                }
            }
            Op::And(a, b) => {
                let (va, vb) = (self.union_eval(lg, *a), self.union_eval(lg, *b));
                let mut tt = va.tt;
                tt.intersect_with(&vb.tt);
                Val { tt, ff: StateSet::empty(n) }
            }
            Op::Or(a, b) => {
                let (va, vb) = (self.union_eval(lg, *a), self.union_eval(lg, *b));
                let mut tt = va.tt;
                tt.union_with(&vb.tt);
                Val { tt, ff: StateSet::empty(n) }
            }
            Op::Bind { body, .. } => self.union_eval(lg, *body),
            Op::Quant { .. } => Val::undef(n),
            Op::Next(a) => lg.next(&all, &self.union_eval(lg, *a), &none),
            Op::Until(a, b) => lg.until(&self.union_eval(lg, *a), &self.union_eval(lg, *b), &none),
            Op::Release(a, b) => lg.release(
                &self.union_eval(lg, *a),
                &self.union_eval(lg, *b),
                &none,
                self.cfg.release,
            ),
        }
    }

    fn universal_shortcut_holds(&self) -> bool {
        self.universal_body()
            .map_or(false, |body| self.union_true(body).contains(self.g.initial()))
    }

    /// Body of a `∀…∀ (a,x)…` prefix whose remainder is quantifier free.
    fn universal_body(&self) -> Option<usize> {
        let mut node = self.prog.root;
        loop {
            match &self.prog.ops[node] {
                Op::Quant { exists: false, body, .. } | Op::Bind { body, .. } => node = *body,
                Op::Quant { exists: true, .. } => return None,
                _ => break,
            }
        }
        (!self.prog.has_quantifier(node)).then_some(node)
    }
}

/// Value of `phi` at state `s` under the assignment `chi`.
pub fn eval3(g: &ThreeCgs, phi: &Formula, chi: &Assignment, s: usize, cfg: &Config) -> Result<TruthValue> {
    if s >= g.num_states() {
        return Err(Error::UnknownState(s.to_string()));
    }
    let engine = Engine::new(g, phi, cfg)?;
    let v = engine.run(chi, &StateSet::singleton(g.num_states(), s))?;
    Ok(v.get(s))
}

/// Valuation of `phi` over all states under the assignment `chi`.
pub fn eval3_valuation(g: &ThreeCgs, phi: &Formula, chi: &Assignment, cfg: &Config) -> Result<Valuation> {
    let engine = Engine::new(g, phi, cfg)?;
    Ok(engine.run(chi, &StateSet::full(g.num_states()))?.to_valuation())
}

/// Value of a sentence at the initial state.
pub fn check3(g: &ThreeCgs, phi: &Formula, cfg: &Config) -> Result<TruthValue> {
    Ok(check3_counted(g, phi, cfg)?.0)
}

/// Like [`check3`], also returning the number of strategy evaluations.
pub fn check3_counted(g: &ThreeCgs, phi: &Formula, cfg: &Config) -> Result<(TruthValue, u64)> {
    if !is_sentence(phi, g.agents()) {
        return Err(Error::NotASentence(phi.to_string()));
    }
    let engine = Engine::new(g, phi, cfg)?;
    let s0 = g.initial();
    if cfg.shortcuts && engine.universal_shortcut_holds() {
        return Ok((TruthValue::True, 0));
    }
    let v = engine.run_closed(&StateSet::singleton(g.num_states(), s0))?;
    Ok((v.get(s0), engine.spent()))
}
