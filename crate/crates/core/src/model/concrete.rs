//! Deterministic two-valued concurrent game structures.

use crate::bits::StateSet;
use crate::error::{Error, Result};
use crate::model::table::{ActionId, ProfileRow};

/// A concurrent game structure: every agent may play every action in every
/// state and each joint action has exactly one successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteCgs {
    agents: Vec<String>,
    states: Vec<String>,
    initial: usize,
    actions: Vec<String>,
    atoms: Vec<String>,
    rows: Vec<ProfileRow<u32>>,
    /// States where each atom holds, indexed like `atoms`.
    labels: Vec<StateSet>,
}

impl ConcreteCgs {
    /// Assembles a model from sorted name lists and per-state rows.
    pub fn from_parts(
        agents: Vec<String>,
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        atoms: Vec<String>,
        rows: Vec<ProfileRow<u32>>,
        labels: Vec<StateSet>,
    ) -> Result<Self> {
        check_sorted("agents", &agents)?;
        check_sorted("states", &states)?;
        check_sorted("actions", &actions)?;
        check_sorted("atoms", &atoms)?;
        if agents.is_empty() || states.is_empty() || actions.is_empty() {
            return Err(Error::Validation("agents, states and actions must be nonempty".into()));
        }
        if initial >= states.len() {
            return Err(Error::Validation("initial state out of range".into()));
        }
        if rows.len() != states.len() || labels.len() != atoms.len() {
            return Err(Error::Validation("row or label count mismatch".into()));
        }
        for row in &rows {
            for a in 0..agents.len() {
                if row.class_map(a).len() != actions.len() {
                    return Err(Error::Validation("row action count mismatch".into()));
                }
            }
            if row.cells().iter().any(|&t| t as usize >= states.len()) {
                return Err(Error::Validation("successor out of range".into()));
            }
        }
        Ok(ConcreteCgs {
            agents,
            states,
            initial,
            actions,
            atoms,
            rows,
            labels,
        })
    }

    /// Builds a model by evaluating a transition function on every joint
    /// action. Name lists must already be sorted.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        agents: Vec<String>,
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        atoms: Vec<String>,
        mut succ: impl FnMut(usize, &[ActionId]) -> usize,
        mut label: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let rows = (0..states.len())
            .map(|s| ProfileRow::from_fn(agents.len(), actions.len(), |j| succ(s, j) as u32))
            .collect();
        let labels = (0..atoms.len())
            .map(|p| StateSet::from_iter(states.len(), (0..states.len()).filter(|&s| label(s, p))))
            .collect();
        Self::from_parts(agents, states, initial, actions, atoms, rows, labels)
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn initial_name(&self) -> &str {
        &self.states[self.initial]
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn row(&self, s: usize) -> &ProfileRow<u32> {
        &self.rows[s]
    }

    pub fn rows(&self) -> &[ProfileRow<u32>] {
        &self.rows
    }

    #[inline]
    pub fn succ(&self, s: usize, joint: &[ActionId]) -> usize {
        *self.rows[s].lookup(joint) as usize
    }

    pub fn holds(&self, s: usize, atom: usize) -> bool {
        self.labels[atom].contains(s)
    }

    /// States labelled with the atom at index `atom`.
    pub fn atom_states(&self, atom: usize) -> &StateSet {
        &self.labels[atom]
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        index_of(&self.states, name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn action_index(&self, name: &str) -> Result<ActionId> {
        index_of(&self.actions, name)
            .map(|i| i as ActionId)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        index_of(&self.agents, name).ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        index_of(&self.atoms, name)
    }

    /// Resolves a joint action given by action names in sorted agent order.
    pub fn joint<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<ActionId>> {
        resolve_joint(&self.actions, self.agents.len(), names)
    }

    /// The successor of a named state under a named joint action.
    pub fn transition<S: AsRef<str>>(&self, state: &str, joint: &[S]) -> Result<&str> {
        let s = self.state_index(state)?;
        let j = self.joint(joint)?;
        Ok(&self.states[self.succ(s, &j)])
    }

    /// Number of joint actions per state, saturating.
    pub fn joint_actions_per_state(&self) -> u128 {
        (self.actions.len() as u128).saturating_pow(self.agents.len() as u32)
    }

    /// Successor states of `s` under any joint action.
    pub fn post(&self, s: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows[s].cells().iter().map(|&t| t as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of distinct (state, successor) edges.
    pub fn edge_count(&self) -> usize {
        (0..self.num_states()).map(|s| self.post(s).len()).sum()
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> StateSet {
        let mut seen = StateSet::singleton(self.num_states(), self.initial);
        let mut stack = vec![self.initial];
        while let Some(s) = stack.pop() {
            for t in self.post(s) {
                if !seen.contains(t) {
                    seen.insert(t);
                    stack.push(t);
                }
            }
        }
        seen
    }
}

pub(crate) fn index_of(sorted: &[String], name: &str) -> Option<usize> {
    sorted.binary_search_by(|x| x.as_str().cmp(name)).ok()
}

pub(crate) fn check_sorted(what: &str, names: &[String]) -> Result<()> {
    if names.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation(format!("{what} must be sorted and distinct")));
    }
    Ok(())
}

pub(crate) fn resolve_joint<S: AsRef<str>>(
    actions: &[String],
    agents: usize,
    names: &[S],
) -> Result<Vec<ActionId>> {
    if names.len() != agents {
        return Err(Error::Validation(format!(
            "joint action has {} components, model has {agents} agents",
            names.len()
        )));
    }
    names
        .iter()
        .map(|n| {
            index_of(actions, n.as_ref())
                .map(|i| i as ActionId)
                .ok_or_else(|| Error::UnknownAction(n.as_ref().to_string()))
        })
        .collect()
}
