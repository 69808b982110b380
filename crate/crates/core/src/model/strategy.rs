//! Memoryless strategies and assignments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::table::ActionId;

/// A positional strategy: one action per state, indexed by state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemorylessStrategy(Vec<ActionId>);

impl MemorylessStrategy {
    pub fn new(actions: Vec<ActionId>) -> Self {
        MemorylessStrategy(actions)
    }

    pub fn constant(states: usize, action: ActionId) -> Self {
        MemorylessStrategy(vec![action; states])
    }

    #[inline]
    pub fn action(&self, state: usize) -> ActionId {
        self.0[state]
    }

    pub fn as_slice(&self) -> &[ActionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Partial map from variables and agents to strategies. Variables and
/// agents live in separate namespaces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    vars: BTreeMap<String, MemorylessStrategy>,
    agents: BTreeMap<String, MemorylessStrategy>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var(mut self, var: &str, f: MemorylessStrategy) -> Self {
        self.vars.insert(var.to_string(), f);
        self
    }

    pub fn with_agent(mut self, agent: &str, f: MemorylessStrategy) -> Self {
        self.agents.insert(agent.to_string(), f);
        self
    }

    pub fn var(&self, var: &str) -> Option<&MemorylessStrategy> {
        self.vars.get(var)
    }

    pub fn agent(&self, agent: &str) -> Option<&MemorylessStrategy> {
        self.agents.get(agent)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&String, &MemorylessStrategy)> {
        self.vars.iter()
    }

    pub fn agent_entries(&self) -> impl Iterator<Item = (&String, &MemorylessStrategy)> {
        self.agents.iter()
    }

    /// `χ[agent ↦ χ(var)]`.
    pub fn bind(&self, agent: &str, var: &str) -> Result<Assignment> {
        let f = self
            .vars
            .get(var)
            .ok_or_else(|| Error::UnassignedVariable(var.to_string()))?
            .clone();
        Ok(self.clone().with_agent(agent, f))
    }

    /// Whether every listed agent has a strategy.
    pub fn is_complete<S: AsRef<str>>(&self, agents: &[S]) -> bool {
        agents.iter().all(|a| self.agents.contains_key(a.as_ref()))
    }

    /// Per-agent strategies in the given agent order.
    pub fn profile<S: AsRef<str>>(&self, agents: &[S]) -> Result<Vec<&MemorylessStrategy>> {
        agents
            .iter()
            .map(|a| self.agents.get(a.as_ref()).ok_or(Error::IncompleteAssignment))
            .collect()
    }
}
