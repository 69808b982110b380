//! Three-valued concurrent game structures with may and must transitions.

use crate::bits::StateSet;
use crate::error::{Error, Result};
use crate::model::concrete::{check_sorted, index_of, resolve_joint, ConcreteCgs};
use crate::model::table::{ActionId, ProfileRow};
use crate::truth::TruthValue;

/// Which transition relation to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransitionMode {
    May,
    Must,
}

/// Successor sets of one joint-action class, both sorted by state index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Succ {
    pub may: Vec<u32>,
    pub must: Vec<u32>,
}

impl Succ {
    pub fn new(mut may: Vec<u32>, mut must: Vec<u32>) -> Succ {
        may.sort_unstable();
        may.dedup();
        must.sort_unstable();
        must.dedup();
        Succ { may, must }
    }

    pub fn get(&self, mode: TransitionMode) -> &[u32] {
        match mode {
            TransitionMode::May => &self.may,
            TransitionMode::Must => &self.must,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeCgs {
    agents: Vec<String>,
    states: Vec<String>,
    initial: usize,
    actions: Vec<String>,
    must: Vec<bool>,
    atoms: Vec<String>,
    rows: Vec<ProfileRow<Succ>>,
    /// Per atom: states where it is true and states where it is false.
    labels: Vec<(StateSet, StateSet)>,
}

impl ThreeCgs {
    /// Assembles and validates a model from sorted name lists and rows.
    ///
    /// `actions` is the may alphabet; `must[i]` marks must actions.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        agents: Vec<String>,
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        must: Vec<bool>,
        atoms: Vec<String>,
        rows: Vec<ProfileRow<Succ>>,
        labels: Vec<(StateSet, StateSet)>,
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
        if rows.len() != states.len() || labels.len() != atoms.len() || must.len() != actions.len() {
            return Err(Error::Validation("row, label or action count mismatch".into()));
        }
        for (tt, ff) in &labels {
            if tt.intersects(ff) {
                return Err(Error::Validation("atom labelled both true and false".into()));
            }
        }
        let g = ThreeCgs {
            agents,
            states,
            initial,
            actions,
            must,
            atoms,
            rows,
            labels,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.states.len() as u32;
        for (s, row) in self.rows.iter().enumerate() {
            for a in 0..self.agents.len() {
                if row.class_map(a).len() != self.actions.len() {
                    return Err(Error::Validation("row action count mismatch".into()));
                }
            }
            for (i, cell) in row.cells().iter().enumerate() {
                if cell.may.iter().chain(&cell.must).any(|&t| t >= n) {
                    return Err(Error::Validation("successor out of range".into()));
                }
                if cell.may.is_empty() {
                    return Err(Error::Validation(format!(
                        "may totality: state {} has no may successor for {}",
                        self.states[s],
                        self.describe(row, i)
                    )));
                }
                if !cell.must.iter().all(|t| cell.may.binary_search(t).is_ok()) {
                    return Err(Error::Validation(format!(
                        "must ⊄ may: state {}, joint action {}",
                        self.states[s],
                        self.describe(row, i)
                    )));
                }
                if cell.must.is_empty() && self.is_must_class_profile(row, i) {
                    return Err(Error::Validation(format!(
                        "must totality: state {} has no must successor for {}",
                        self.states[s],
                        self.describe(row, i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the class profile `idx` contains a joint action built only
    /// from must actions.
    fn is_must_class_profile(&self, row: &ProfileRow<Succ>, idx: usize) -> bool {
        row.digits(idx)
            .iter()
            .enumerate()
            .all(|(a, &c)| row.members(a, c as u16).any(|act| self.must[act as usize]))
    }

    fn describe(&self, row: &ProfileRow<Succ>, idx: usize) -> String {
        let names: Vec<String> = row
            .digits(idx)
            .iter()
            .enumerate()
            .map(|(a, &c)| format!("{}={}", self.agents[a], self.actions[row.reps(a)[c] as usize]))
            .collect();
        format!("({})", names.join(", "))
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// The may action alphabet.
    pub fn actions_may(&self) -> &[String] {
        &self.actions
    }

    pub fn actions_must(&self) -> Vec<&str> {
        self.actions
            .iter()
            .zip(&self.must)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.as_str())
            .collect()
    }

    pub fn must_mask(&self) -> &[bool] {
        &self.must
    }

    #[inline]
    pub fn is_must(&self, action: ActionId) -> bool {
        self.must[action as usize]
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

    pub fn row(&self, s: usize) -> &ProfileRow<Succ> {
        &self.rows[s]
    }

    pub fn rows(&self) -> &[ProfileRow<Succ>] {
        &self.rows
    }

    #[inline]
    pub fn cell(&self, s: usize, joint: &[ActionId]) -> &Succ {
        self.rows[s].lookup(joint)
    }

    pub fn label(&self, s: usize, atom: usize) -> TruthValue {
        let (tt, ff) = &self.labels[atom];
        if tt.contains(s) {
            TruthValue::True
        } else if ff.contains(s) {
            TruthValue::False
        } else {
            TruthValue::Undef
        }
    }

    /// States where the atom at index `atom` is true and where it is false.
    pub fn atom_states(&self, atom: usize) -> (&StateSet, &StateSet) {
        let (tt, ff) = &self.labels[atom];
        (tt, ff)
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

    pub fn joint<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<ActionId>> {
        resolve_joint(&self.actions, self.agents.len(), names)
    }

    /// The may or must successors of a named state under a named joint
    /// action, in canonical order. Must successors may be empty.
    pub fn successors<S: AsRef<str>>(
        &self,
        state: &str,
        joint: &[S],
        mode: TransitionMode,
    ) -> Result<Vec<&str>> {
        let s = self.state_index(state)?;
        let j = self.joint(joint)?;
        Ok(self
            .cell(s, &j)
            .get(mode)
            .iter()
            .map(|&t| self.states[t as usize].as_str())
            .collect())
    }

    /// Distinct successors of `s` over all joint actions.
    pub fn post(&self, s: usize, mode: TransitionMode) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows[s]
            .cells()
            .iter()
            .flat_map(|c| c.get(mode).iter().map(|&t| t as usize))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of distinct (state, successor) edges of the relation.
    pub fn edge_count(&self, mode: TransitionMode) -> usize {
        (0..self.num_states()).map(|s| self.post(s, mode).len()).sum()
    }

    /// Largest number of may successors of any state and joint action.
    pub fn max_may_degree(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.cells().iter().map(|c| c.may.len()))
            .max()
            .unwrap_or(1)
    }

    /// Largest number of must successors of any state and joint action.
    pub fn max_must_degree(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.cells().iter().map(|c| c.must.len()))
            .max()
            .unwrap_or(0)
    }

    /// Whether the model is a plain two-valued structure in disguise.
    pub fn is_two_valued(&self) -> bool {
        self.must.iter().all(|&m| m)
            && self
                .rows
                .iter()
                .all(|r| r.cells().iter().all(|c| c.may.len() == 1 && c.may == c.must))
            && self.labels.iter().all(|(tt, ff)| tt.count() + ff.count() == self.states.len())
    }
}

/// Views a concrete model as a three-valued one with equal may and must
/// parts and no undefined labels.
pub fn embed(g: &ConcreteCgs) -> ThreeCgs {
    let rows = g
        .rows()
        .iter()
        .map(|r| r.map(|&t| Succ { may: vec![t], must: vec![t] }))
        .collect();
    let labels = (0..g.atoms().len())
        .map(|p| {
            let tt = g.atom_states(p).clone();
            let ff = tt.complement();
            (tt, ff)
        })
        .collect();
    ThreeCgs::from_parts(
        g.agents().to_vec(),
        g.states().to_vec(),
        g.initial(),
        g.actions().to_vec(),
        vec![true; g.num_actions()],
        g.atoms().to_vec(),
        rows,
        labels,
    )
    .expect("embedding a valid concrete model is valid")
}
