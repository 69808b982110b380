//! Name-based model construction.
//!
//! A builder collects states, actions and transition rules by name, sorts
//! every name list, and compiles the rules into per-state [`ProfileRow`]s.
//! A rule covers the joint actions matching one [`Pattern`] per agent; the
//! rules of one state must not overlap.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::StateSet;
use crate::error::{Error, Result};
use crate::model::concrete::ConcreteCgs;
use crate::model::table::{canonical_classes, increment, ActionId, ProfileRow};
use crate::model::three::{Succ, ThreeCgs};
use crate::syntax::{FALSE_ATOM, TRUE_ATOM};
use crate::truth::TruthValue;

/// Set of actions one agent may play for a rule to apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Any,
    Set(BTreeSet<String>),
}

impl Pattern {
    pub fn one(action: &str) -> Pattern {
        Pattern::Set(std::iter::once(action.to_string()).collect())
    }

    pub fn of<S: AsRef<str>>(actions: &[S]) -> Pattern {
        Pattern::Set(actions.iter().map(|a| a.as_ref().to_string()).collect())
    }

    fn matches(&self, action: &str) -> bool {
        match self {
            Pattern::Any => true,
            Pattern::Set(s) => s.contains(action),
        }
    }
}

/// One transition entry: in `state`, every joint action matching `profile`
/// (agent name to pattern, absent agents match anything) leads to
/// `successors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub state: String,
    pub profile: BTreeMap<String, Pattern>,
    pub successors: Vec<String>,
}

impl Rule {
    pub fn new<S: AsRef<str>>(state: &str, profile: &[(&str, Pattern)], successors: &[S]) -> Rule {
        Rule {
            state: state.to_string(),
            profile: profile
                .iter()
                .map(|(a, p)| (a.to_string(), p.clone()))
                .collect(),
            successors: successors.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ModelBuilder {
    agents: BTreeSet<String>,
    states: BTreeSet<String>,
    initial: Option<String>,
    actions: BTreeSet<String>,
    must: Option<BTreeSet<String>>,
    atoms: BTreeSet<String>,
    may_rules: Vec<Rule>,
    must_rules: Vec<Rule>,
    labels: BTreeMap<String, BTreeMap<String, TruthValue>>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn agent(&mut self, name: &str) -> &mut Self {
        self.agents.insert(name.to_string());
        self
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        self.states.insert(name.to_string());
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn action(&mut self, name: &str) -> &mut Self {
        self.actions.insert(name.to_string());
        self
    }

    /// Declares a must action; the action is also added to the may set.
    pub fn must_action(&mut self, name: &str) -> &mut Self {
        self.actions.insert(name.to_string());
        self.must.get_or_insert_with(BTreeSet::new).insert(name.to_string());
        self
    }

    /// Fixes the must set to be empty unless must actions are added later.
    pub fn no_must_actions(&mut self) -> &mut Self {
        self.must.get_or_insert_with(BTreeSet::new);
        self
    }

    pub fn atom(&mut self, name: &str) -> &mut Self {
        self.atoms.insert(name.to_string());
        self
    }

    /// Adds a concrete transition or a may transition.
    pub fn rule(&mut self, rule: Rule) -> &mut Self {
        self.may_rules.push(rule);
        self
    }

    pub fn must_rule(&mut self, rule: Rule) -> &mut Self {
        self.must_rules.push(rule);
        self
    }

    pub fn label(&mut self, state: &str, atom: &str, value: TruthValue) -> &mut Self {
        self.atoms.insert(atom.to_string());
        self.labels
            .entry(state.to_string())
            .or_default()
            .insert(atom.to_string(), value);
        self
    }

    fn check_names(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::Validation("model declares no agents".into()));
        }
        if self.states.is_empty() {
            return Err(Error::Validation("model declares no states".into()));
        }
        if self.actions.is_empty() {
            return Err(Error::Validation("model declares no actions".into()));
        }
        for name in self.agents.iter().chain(&self.states).chain(&self.actions).chain(&self.atoms) {
            if name.is_empty() {
                return Err(Error::Validation("empty identifier".into()));
            }
        }
        for atom in &self.atoms {
            if atom == TRUE_ATOM || atom == FALSE_ATOM {
                return Err(Error::Validation(format!("atom name '{atom}' is reserved")));
            }
        }
        if self.actions.len() > ActionId::MAX as usize {
            return Err(Error::TooLarge(format!("{} actions", self.actions.len())));
        }
        for state in self.labels.keys() {
            if !self.states.contains(state) {
                return Err(Error::UnknownState(state.clone()));
            }
        }
        for rule in self.may_rules.iter().chain(&self.must_rules) {
            if !self.states.contains(&rule.state) {
                return Err(Error::UnknownState(rule.state.clone()));
            }
            for s in &rule.successors {
                if !self.states.contains(s) {
                    return Err(Error::UnknownState(s.clone()));
                }
            }
            for (agent, pattern) in &rule.profile {
                if !self.agents.contains(agent) {
                    return Err(Error::UnknownAgent(agent.clone()));
                }
                if let Pattern::Set(set) = pattern {
                    if let Some(a) = set.iter().find(|a| !self.actions.contains(*a)) {
                        return Err(Error::UnknownAction(a.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    fn initial_index(&self, states: &[String]) -> Result<usize> {
        let init = self
            .initial
            .as_ref()
            .ok_or_else(|| Error::Validation("initial state missing".into()))?;
        states
            .binary_search(init)
            .map_err(|_| Error::UnknownState(init.clone()))
    }

    fn label_value(&self, state: &str, atom: &str) -> TruthValue {
        self.labels
            .get(state)
            .and_then(|m| m.get(atom))
            .copied()
            .unwrap_or(TruthValue::False)
    }

    pub fn build_concrete(&self) -> Result<ConcreteCgs> {
        self.check_names()?;
        if !self.must_rules.is_empty() || self.must.is_some() {
            return Err(Error::Validation(
                "concrete models have no separate must actions or must transitions".into(),
            ));
        }
        let compiled = self.compile()?;
        let mut rows = Vec::with_capacity(compiled.states.len());
        for (s, state) in compiled.states.iter().enumerate() {
            let cells = &compiled.may[s];
            let mut bad = None;
            for (i, c) in cells.cells.iter().enumerate() {
                match c {
                    None => bad = bad.or(Some((i, "transition not total"))),
                    Some(v) if v.is_empty() => bad = bad.or(Some((i, "transition not total"))),
                    Some(v) if v.len() > 1 => {
                        bad = bad.or(Some((i, "two successors for one joint action")))
                    }
                    _ => {}
                }
            }
            if let Some((i, what)) = bad {
                return Err(Error::Validation(format!(
                    "{what}: state {state}, joint action {}",
                    compiled.describe(s, i)
                )));
            }
            rows.push(cells.to_row(|c| c.as_ref().unwrap()[0]));
        }
        let labels = compiled
            .atoms
            .iter()
            .map(|atom| {
                let mut set = StateSet::empty(compiled.states.len());
                for (s, state) in compiled.states.iter().enumerate() {
                    match self.label_value(state, atom) {
                        TruthValue::True => set.insert(s),
                        TruthValue::False => {}
                        TruthValue::Undef => {
                            return Err(Error::Validation(format!(
                                "concrete label of {atom} at {state} is undef"
                            )))
                        }
                    }
                }
                Ok(set)
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = self.initial_index(&compiled.states)?;
        ConcreteCgs::from_parts(
            compiled.agents,
            compiled.states,
            initial,
            compiled.actions,
            compiled.atoms,
            rows,
            labels,
        )
    }

    pub fn build_three(&self) -> Result<ThreeCgs> {
        self.check_names()?;
        let compiled = self.compile()?;
        let must: Vec<bool> = match &self.must {
            Some(m) => {
                if let Some(a) = m.iter().find(|a| !self.actions.contains(*a)) {
                    return Err(Error::UnknownAction(a.clone()));
                }
                compiled.actions.iter().map(|a| m.contains(a)).collect()
            }
            None => vec![true; compiled.actions.len()],
        };
        let mut rows = Vec::with_capacity(compiled.states.len());
        for (s, state) in compiled.states.iter().enumerate() {
            let may = &compiled.may[s];
            if let Some(i) = may
                .cells
                .iter()
                .position(|c| c.as_ref().map_or(true, |v| v.is_empty()))
            {
                return Err(Error::Validation(format!(
                    "may totality: state {state}, joint action {}",
                    compiled.describe(s, i)
                )));
            }
            let must_cells = &compiled.must[s];
            let cells: Vec<Succ> = may
                .cells
                .iter()
                .zip(&must_cells.cells)
                .map(|(m, u)| Succ::new(m.clone().unwrap(), u.clone().unwrap_or_default()))
                .collect();
            let table = Cells {
                class_of: may.class_of.clone(),
                radix: may.radix.clone(),
                cells,
            };
            rows.push(table.to_row(|c| c.clone()));
        }
        let n = compiled.states.len();
        let labels = compiled
            .atoms
            .iter()
            .map(|atom| {
                let mut tt = StateSet::empty(n);
                let mut ff = StateSet::empty(n);
                for (s, state) in compiled.states.iter().enumerate() {
                    match self.label_value(state, atom) {
                        TruthValue::True => tt.insert(s),
                        TruthValue::False => ff.insert(s),
                        TruthValue::Undef => {}
                    }
                }
                (tt, ff)
            })
            .collect();
        let initial = self.initial_index(&compiled.states)?;
        ThreeCgs::from_parts(
            compiled.agents,
            compiled.states,
            initial,
            compiled.actions,
            must,
            compiled.atoms,
            rows,
            labels,
        )
    }

    fn compile(&self) -> Result<Compiled> {
        let agents: Vec<String> = self.agents.iter().cloned().collect();
        let states: Vec<String> = self.states.iter().cloned().collect();
        let actions: Vec<String> = self.actions.iter().cloned().collect();
        let atoms: Vec<String> = self.atoms.iter().cloned().collect();
        let mut by_state: Vec<(Vec<&Rule>, Vec<&Rule>)> = vec![(vec![], vec![]); states.len()];
        for r in &self.may_rules {
            by_state[states.binary_search(&r.state).unwrap()].0.push(r);
        }
        for r in &self.must_rules {
            by_state[states.binary_search(&r.state).unwrap()].1.push(r);
        }
        let mut may = Vec::with_capacity(states.len());
        let mut must = Vec::with_capacity(states.len());
        for (s, (may_rules, must_rules)) in by_state.iter().enumerate() {
            let all: Vec<&Rule> = may_rules.iter().chain(must_rules).copied().collect();
            let class_of: Vec<Vec<u16>> = agents
                .iter()
                .map(|agent| {
                    let sigs: Vec<Vec<bool>> = actions
                        .iter()
                        .map(|act| {
                            all.iter()
                                .map(|r| r.profile.get(agent).map_or(true, |p| p.matches(act)))
                                .collect()
                        })
                        .collect();
                    canonical_classes(&sigs)
                })
                .collect();
            let radix: Vec<usize> = class_of
                .iter()
                .map(|m| m.iter().map(|&c| c as usize + 1).max().unwrap_or(1))
                .collect();
            let total: usize = radix
                .iter()
                .try_fold(1usize, |acc, &r| acc.checked_mul(r))
                .filter(|&t| t <= 1 << 26)
                .ok_or_else(|| {
                    Error::TooLarge(format!("state {} has too many joint-action classes", states[s]))
                })?;
            let resolve = |rule: &Rule| -> Vec<u32> {
                let mut v: Vec<u32> = rule
                    .successors
                    .iter()
                    .map(|x| states.binary_search(x).unwrap() as u32)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let fill = |rules: &[&Rule], what: &str| -> Result<Cells> {
                let mut cells: Vec<Option<Vec<u32>>> = vec![None; total];
                for rule in rules {
                    let succ = resolve(rule);
                    let allowed: Vec<Vec<usize>> = agents
                        .iter()
                        .enumerate()
                        .map(|(a, agent)| {
                            (0..radix[a])
                                .filter(|&c| {
                                    let rep = class_of[a].iter().position(|&x| x as usize == c).unwrap();
                                    rule.profile.get(agent).map_or(true, |p| p.matches(&actions[rep]))
                                })
                                .collect()
                        })
                        .collect();
                    if allowed.iter().any(|v| v.is_empty()) {
                        continue;
                    }
                    let sizes: Vec<usize> = allowed.iter().map(|v| v.len()).collect();
                    let count: usize = sizes.iter().product();
                    let mut digits = vec![0; sizes.len()];
                    for _ in 0..count {
                        let mut idx = 0;
                        for a in 0..digits.len() {
                            idx = idx * radix[a] + allowed[a][digits[a]];
                        }
                        if cells[idx].is_some() {
                            return Err(Error::Validation(format!(
                                "overlapping {what} entries for state {}",
                                states[s]
                            )));
                        }
                        cells[idx] = Some(succ.clone());
                        increment(&mut digits, &sizes);
                    }
                }
                Ok(Cells {
                    class_of: class_of.clone(),
                    radix: radix.clone(),
                    cells,
                })
            };
            may.push(fill(may_rules, "transition")?);
            must.push(fill(must_rules, "must transition")?);
        }
        Ok(Compiled {
            agents,
            states,
            actions,
            atoms,
            may,
            must,
        })
    }
}

struct Cells<T = Option<Vec<u32>>> {
    class_of: Vec<Vec<u16>>,
    radix: Vec<usize>,
    cells: Vec<T>,
}

impl<T> Cells<T> {
    fn index(&self, joint: &[ActionId]) -> usize {
        let mut idx = 0;
        for (a, &act) in joint.iter().enumerate() {
            idx = idx * self.radix[a] + self.class_of[a][act as usize] as usize;
        }
        idx
    }

    fn to_row<U: Clone + Eq + std::hash::Hash>(&self, f: impl Fn(&T) -> U) -> ProfileRow<U> {
        ProfileRow::from_classes(self.class_of.clone(), |joint| f(&self.cells[self.index(joint)]))
    }
}

struct Compiled {
    agents: Vec<String>,
    states: Vec<String>,
    actions: Vec<String>,
    atoms: Vec<String>,
    may: Vec<Cells>,
    must: Vec<Cells>,
}

impl Compiled {
    fn describe(&self, s: usize, idx: usize) -> String {
        let cells = &self.may[s];
        let mut rest = idx;
        let mut digits = vec![0; cells.radix.len()];
        for a in (0..digits.len()).rev() {
            digits[a] = rest % cells.radix[a];
            rest /= cells.radix[a];
        }
        let names: Vec<String> = digits
            .iter()
            .enumerate()
            .map(|(a, &c)| {
                let rep = cells.class_of[a].iter().position(|&x| x as usize == c).unwrap();
                format!("{}={}", self.agents[a], self.actions[rep])
            })
            .collect();
        format!("({})", names.join(", "))
    }
}
