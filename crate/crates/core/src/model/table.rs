//! Per-state transition tables indexed by joint-action classes.
//!
//! Every agent may play every action in every state, so the joint-action
//! space of a state is `actions^agents`. Most of those profiles behave
//! identically, so each row partitions the actions of every agent into
//! behavioural classes and stores one cell per class profile. Rows are
//! kept minimal (two actions share a class iff swapping them never changes
//! the cell) and classes are numbered by their smallest action, which makes
//! structural equality of rows meaningful.

use std::collections::HashMap;
use std::hash::Hash;

pub type ActionId = u16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow<T> {
    /// `class_of[agent][action]`
    class_of: Vec<Vec<u16>>,
    /// Number of classes per agent.
    radix: Vec<usize>,
    /// Smallest action of each class, per agent.
    reps: Vec<Vec<ActionId>>,
    cells: Vec<T>,
}

impl<T: Clone + Eq + Hash> ProfileRow<T> {
    /// Builds a row from an initial action partition and a cell function
    /// evaluated on one representative joint action per class profile.
    ///
    /// `class_of[agent][action]` must use class ids `0..k` densely.
    pub fn from_classes(class_of: Vec<Vec<u16>>, mut cell: impl FnMut(&[ActionId]) -> T) -> Self {
        let reps = reps_of(&class_of);
        let radix: Vec<usize> = reps.iter().map(|r| r.len()).collect();
        let total: usize = radix.iter().product();
        let mut cells = Vec::with_capacity(total);
        let mut digits = vec![0usize; radix.len()];
        let mut joint: Vec<ActionId> = reps.iter().map(|r| r[0]).collect();
        for _ in 0..total {
            for (a, &d) in digits.iter().enumerate() {
                joint[a] = reps[a][d];
            }
            cells.push(cell(&joint));
            increment(&mut digits, &radix);
        }
        let mut row = ProfileRow {
            class_of,
            radix,
            reps,
            cells,
        };
        row.minimize();
        row
    }

    /// Builds a row by evaluating `cell` on every joint action.
    pub fn from_fn(agents: usize, actions: usize, cell: impl FnMut(&[ActionId]) -> T) -> Self {
        let identity: Vec<u16> = (0..actions as u16).collect();
        ProfileRow::from_classes(vec![identity; agents], cell)
    }

    /// Merges behaviourally equivalent classes and renumbers canonically.
    fn minimize(&mut self) {
        for agent in 0..self.radix.len() {
            self.minimize_agent(agent);
        }
    }

    fn minimize_agent(&mut self, agent: usize) {
        let k = self.radix[agent];
        if k <= 1 {
            return;
        }
        let stride = self.stride(agent);
        // signature of class c: cells with this agent's coordinate fixed to c
        let mut sigs: Vec<Vec<&T>> = vec![Vec::with_capacity(self.cells.len() / k); k];
        for (i, cell) in self.cells.iter().enumerate() {
            sigs[(i / stride) % k].push(cell);
        }
        let mut seen: HashMap<&[&T], u16> = HashMap::new();
        let mut merged = vec![0u16; k];
        for (c, slot) in merged.iter_mut().enumerate() {
            let next = seen.len() as u16;
            *slot = *seen.entry(sigs[c].as_slice()).or_insert(next);
        }
        if seen.len() == k {
            return;
        }
        let new_k = seen.len();
        drop(seen);
        drop(sigs);
        // representative old class for each new class
        let mut old_of_new = vec![usize::MAX; new_k];
        for (c, &m) in merged.iter().enumerate() {
            if old_of_new[m as usize] == usize::MAX {
                old_of_new[m as usize] = c;
            }
        }
        let mut radix = self.radix.clone();
        radix[agent] = new_k;
        let new_total: usize = radix.iter().product();
        let mut cells = Vec::with_capacity(new_total);
        let mut digits = vec![0usize; radix.len()];
        for _ in 0..new_total {
            let mut idx = 0;
            for (a, &d) in digits.iter().enumerate() {
                let d = if a == agent { old_of_new[d] } else { d };
                idx = idx * self.radix[a] + d;
            }
            cells.push(self.cells[idx].clone());
            increment(&mut digits, &radix);
        }
        for c in self.class_of[agent].iter_mut() {
            *c = merged[*c as usize];
        }
        self.radix = radix;
        self.cells = cells;
        self.reps = reps_of(&self.class_of);
    }
}

impl<T> ProfileRow<T> {
    fn stride(&self, agent: usize) -> usize {
        self.radix[agent + 1..].iter().product()
    }

    #[inline]
    pub fn index(&self, joint: &[ActionId]) -> usize {
        let mut idx = 0;
        for (a, &act) in joint.iter().enumerate() {
            idx = idx * self.radix[a] + self.class_of[a][act as usize] as usize;
        }
        idx
    }

    #[inline]
    pub fn lookup(&self, joint: &[ActionId]) -> &T {
        &self.cells[self.index(joint)]
    }

    /// Cell by class profile index.
    pub fn cell(&self, idx: usize) -> &T {
        &self.cells[idx]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    #[inline]
    pub fn class_of(&self, agent: usize, action: ActionId) -> u16 {
        self.class_of[agent][action as usize]
    }

    pub fn class_map(&self, agent: usize) -> &[u16] {
        &self.class_of[agent]
    }

    pub fn class_count(&self, agent: usize) -> usize {
        self.radix[agent]
    }

    pub fn reps(&self, agent: usize) -> &[ActionId] {
        &self.reps[agent]
    }

    /// Actions of `agent` in class `class`.
    pub fn members(&self, agent: usize, class: u16) -> impl Iterator<Item = ActionId> + '_ {
        self.class_of[agent]
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == class)
            .map(|(a, _)| a as ActionId)
    }

    /// Class digits of a class-profile index.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; self.radix.len()];
        for a in (0..self.radix.len()).rev() {
            d[a] = idx % self.radix[a];
            idx /= self.radix[a];
        }
        d
    }

    pub fn map<U: Clone + Eq + Hash>(&self, f: impl Fn(&T) -> U) -> ProfileRow<U> {
        let mut row = ProfileRow {
            class_of: self.class_of.clone(),
            radix: self.radix.clone(),
            reps: self.reps.clone(),
            cells: self.cells.iter().map(f).collect(),
        };
        row.minimize();
        row
    }
}

fn reps_of(class_of: &[Vec<u16>]) -> Vec<Vec<ActionId>> {
    class_of
        .iter()
        .map(|m| {
            let k = m.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
            let mut reps = vec![ActionId::MAX; k];
            for (a, &c) in m.iter().enumerate() {
                if reps[c as usize] == ActionId::MAX {
                    reps[c as usize] = a as ActionId;
                }
            }
            reps
        })
        .collect()
}

/// Canonical class numbering: classes ordered by smallest member.
pub fn canonical_classes(keys: &[impl Eq + Hash + Clone]) -> Vec<u16> {
    let mut seen = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = seen.len() as u16;
            *seen.entry(k.clone()).or_insert(next)
        })
        .collect()
}

pub(crate) fn increment(digits: &mut [usize], radix: &[usize]) {
    for a in (0..digits.len()).rev() {
        digits[a] += 1;
        if digits[a] < radix[a] {
            return;
        }
        digits[a] = 0;
    }
}
