//! Quotient abstraction of a concrete model into a three-valued one.
//!
//! May transitions connect blocks when some member has a concrete edge
//! (∃∃); must transitions when every member does (∀∃). The must action set
//! is a largest set of actions whose joint actions always have a must
//! successor, ties broken by the lexicographically smallest sorted name
//! list.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bits::StateSet;
use crate::error::{Error, Result};
use crate::model::table::canonical_classes;
use crate::model::{ActionId, ConcreteCgs, MemorylessStrategy, ProfileRow, Succ, ThreeCgs, TransitionMode};

/// An equivalence relation over concrete states, as blocks ordered by
/// their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Partition {
    pub fn new(states: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let mut class_of = vec![usize::MAX; states];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        blocks.sort();
        for (i, b) in blocks.iter().enumerate() {
            for &s in b {
                if s >= states {
                    return Err(Error::InvalidPartition(format!("state index {s} out of range")));
                }
                if class_of[s] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("state index {s} is in two blocks")));
                }
                class_of[s] = i;
            }
        }
        if let Some(s) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("state index {s} is in no block")));
        }
        Ok(Partition { blocks, class_of })
    }

    /// A partition given by state names.
    pub fn from_names<S: AsRef<str>>(g: &ConcreteCgs, blocks: &[Vec<S>]) -> Result<Partition> {
        let blocks = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|s| {
                        g.state_index(s.as_ref())
                            .map_err(|_| Error::InvalidPartition(format!("unknown state {}", s.as_ref())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(g.num_states(), blocks)
    }

    /// Blocks from a block index per state.
    pub fn from_class_of(class_of: &[usize]) -> Partition {
        let k = class_of.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (s, &c) in class_of.iter().enumerate() {
            blocks[c].push(s);
        }
        blocks.retain(|b| !b.is_empty());
        Partition::new(class_of.len(), blocks).expect("class maps always partition")
    }

    pub fn singletons(states: usize) -> Partition {
        Partition::from_class_of(&(0..states).collect::<Vec<_>>())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.class_of[s]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.class_of.len()
    }

    /// Blocks as lists of state names.
    pub fn names(&self, g: &ConcreteCgs) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&s| g.states()[s].clone()).collect())
            .collect()
    }
}

/// Groups states that agree on every listed atom.
pub fn partition_by_atoms<S: AsRef<str>>(g: &ConcreteCgs, atoms: &[S]) -> Result<Partition> {
    let idx = atoms
        .iter()
        .map(|p| g.atom_index(p.as_ref()).ok_or_else(|| Error::UnknownAtom(p.as_ref().to_string())))
        .collect::<Result<Vec<_>>>()?;
    let keys: Vec<Vec<bool>> = (0..g.num_states())
        .map(|s| idx.iter().map(|&p| g.holds(s, p)).collect())
        .collect();
    let class_of: Vec<usize> = canonical_classes(&keys).into_iter().map(usize::from).collect();
    Ok(Partition::from_class_of(&class_of))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractionReport {
    pub concrete_states: usize,
    /// Distinct (state, successor) pairs of the concrete model.
    pub concrete_transitions: usize,
    pub abstract_states: usize,
    /// Distinct (block, successor block) pairs of the may relation.
    pub may_transitions: usize,
    /// Distinct (block, successor block) pairs of the must relation.
    pub must_transitions: usize,
    pub must_action_set: Vec<String>,
    /// Whether the must action set came from the greedy fallback.
    pub heuristic: bool,
    #[serde(serialize_with = "secs")]
    pub build_time: Duration,
}

pub(crate) fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Largest action alphabet the abstraction accepts.
pub const MAX_ABSTRACTION_ACTIONS: usize = 64;

/// Largest action count searched exactly; larger alphabets use greedy
/// removal.
pub const EXACT_MUST_SEARCH_LIMIT: usize = 16;

/// Builds the abstract model of `g` with respect to `part`.
pub fn abstract_model(g: &ConcreteCgs, part: &Partition) -> Result<(ThreeCgs, AbstractionReport)> {
    let start = Instant::now();
    if part.num_states() != g.num_states() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} states, model has {}",
            part.num_states(),
            g.num_states()
        )));
    }
    let agents = g.num_agents();
    let actions = g.num_actions();
    if actions > MAX_ABSTRACTION_ACTIONS {
        return Err(Error::TooLarge(format!(
            "abstraction supports at most {MAX_ABSTRACTION_ACTIONS} actions, model has {actions}"
        )));
    }
    let mut rows = Vec::with_capacity(part.len());
    for block in part.blocks() {
        // common refinement of the members' action classes
        let class_of: Vec<Vec<u16>> = (0..agents)
            .map(|a| {
                let keys: Vec<Vec<u16>> = (0..actions as ActionId)
                    .map(|act| block.iter().map(|&s| g.row(s).class_of(a, act)).collect())
                    .collect();
                canonical_classes(&keys)
            })
            .collect();
        rows.push(ProfileRow::from_classes(class_of, |joint| {
            let targets: Vec<u32> = block
                .iter()
                .map(|&s| part.block_of(g.succ(s, joint)) as u32)
                .collect();
            let must = if targets.iter().all(|&t| t == targets[0]) {
                vec![targets[0]]
            } else {
                Vec::new()
            };
            Succ::new(targets, must)
        }));
    }
    let (must_set, heuristic) = must_actions(&rows, agents, actions);
    let n = part.len();
    let labels = (0..g.atoms().len())
        .map(|p| {
            let tt = StateSet::from_iter(n, (0..n).filter(|&b| part.blocks()[b].iter().all(|&s| g.holds(s, p))));
            let ff = StateSet::from_iter(n, (0..n).filter(|&b| part.blocks()[b].iter().all(|&s| !g.holds(s, p))));
            (tt, ff)
        })
        .collect();
    let names: Vec<String> = part.blocks().iter().map(|b| g.states()[b[0]].clone()).collect();
    let mut must = vec![false; actions];
    for &a in &must_set {
        must[a] = true;
    }
    let three = ThreeCgs::from_parts(
        g.agents().to_vec(),
        names,
        part.block_of(g.initial()),
        g.actions().to_vec(),
        must,
        g.atoms().to_vec(),
        rows,
        labels,
    )?;
    let report = AbstractionReport {
        concrete_states: g.num_states(),
        concrete_transitions: g.edge_count(),
        abstract_states: three.num_states(),
        may_transitions: three.edge_count(TransitionMode::May),
        must_transitions: three.edge_count(TransitionMode::Must),
        must_action_set: must_set.iter().map(|&a| g.actions()[a].clone()).collect(),
        heuristic,
        build_time: start.elapsed(),
    };
    Ok((three, report))
}

/// Per-agent action masks of a joint-action class profile without a must
/// successor. A candidate set is blocked by it iff it meets every mask.
fn blocking_profiles(rows: &[ProfileRow<Succ>], agents: usize, actions: usize) -> Vec<Vec<u64>> {
    let mut out = BTreeSet::new();
    for row in rows {
        let masks: Vec<Vec<u64>> = (0..agents)
            .map(|a| {
                let mut m = vec![0u64; row.class_count(a)];
                for act in 0..actions {
                    m[row.class_of(a, act as ActionId) as usize] |= 1 << act;
                }
                m
            })
            .collect();
        for (i, cell) in row.cells().iter().enumerate() {
            if cell.must.is_empty() {
                let d = row.digits(i);
                out.insert((0..agents).map(|a| masks[a][d[a]]).collect::<Vec<u64>>());
            }
        }
    }
    out.into_iter().collect()
}

fn feasible(set: u64, blocking: &[Vec<u64>]) -> bool {
    blocking.iter().all(|masks| masks.iter().any(|&m| m & set == 0))
}

/// Chosen must actions (sorted indices) and whether the greedy fallback
/// was used.
fn must_actions(rows: &[ProfileRow<Succ>], agents: usize, actions: usize) -> (Vec<usize>, bool) {
    let blocking = blocking_profiles(rows, agents, actions);
    if actions <= EXACT_MUST_SEARCH_LIMIT {
        for k in (0..=actions).rev() {
            // k-subsets in lexicographic order of their index lists
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let set = idx.iter().fold(0u64, |m, &i| m | 1 << i);
                if feasible(set, &blocking) {
                    return (idx, false);
                }
                let Some(pos) = (0..k).rev().find(|&p| idx[p] < actions - k + p) else {
                    break;
                };
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
            }
        }
        unreachable!("the empty set is always feasible")
    }
    let mut set: u64 = if actions == 64 { u64::MAX } else { (1 << actions) - 1 };
    while !feasible(set, &blocking) {
        let blocked = |s: u64| blocking.iter().filter(|m| m.iter().all(|&x| x & s != 0)).count();
        let before = blocked(set);
        let best = (0..actions)
            .filter(|&a| set & (1 << a) != 0)
            .max_by_key(|&a| (before - blocked(set & !(1 << a)), std::cmp::Reverse(a)))
            .unwrap();
        set &= !(1 << best);
    }
    ((0..actions).filter(|&a| set & (1 << a) != 0).collect(), true)
}

/// Abstract choices allowed by a concrete strategy: per block, the actions
/// some member plays.
pub fn lift_choices(f: &MemorylessStrategy, part: &Partition) -> Vec<Vec<ActionId>> {
    part.blocks()
        .iter()
        .map(|b| {
            let set: BTreeSet<ActionId> = b.iter().map(|&s| f.action(s)).collect();
            set.into_iter().collect()
        })
        .collect()
}

fn product(choices: &[Vec<ActionId>]) -> Vec<MemorylessStrategy> {
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<ActionId>| {
                c.iter().map(move |&a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(MemorylessStrategy::new).collect()
}

/// Abstract may strategies corresponding to a concrete strategy.
pub fn lift_strategy_may(f: &MemorylessStrategy, part: &Partition) -> Vec<MemorylessStrategy> {
    product(&lift_choices(f, part))
}

/// The lifted may strategies that only use must actions of `abs`.
pub fn lift_strategy_must(f: &MemorylessStrategy, part: &Partition, abs: &ThreeCgs) -> Vec<MemorylessStrategy> {
    let choices: Vec<Vec<ActionId>> = lift_choices(f, part)
        .into_iter()
        .map(|c| c.into_iter().filter(|&a| abs.is_must(a)).collect())
        .collect();
    product(&choices)
}

/// The concrete strategy playing in each state what the abstract strategy
/// plays in its block.
pub fn concretize(f: &MemorylessStrategy, part: &Partition) -> MemorylessStrategy {
    MemorylessStrategy::new((0..part.num_states()).map(|s| f.action(part.block_of(s))).collect())
}
