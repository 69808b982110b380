//! The process scheduler benchmark.
//!
//! `n` processes `P1..Pn` compete for a single resource granted by an
//! `Arbiter`. Each process is idle (`I`), waiting (`W`) or owner (`O`):
//! `request` moves an idle process to waiting, `release` moves the owner
//! back to idle, and `grant_i` turns a waiting `Pi` into the owner when
//! nobody owns the resource. Every agent shares the action alphabet
//! `{stay, request, release, none, grant_1..grant_n}`; a process playing an
//! arbiter action behaves as `stay` and the arbiter playing a process
//! action behaves as `none`. Atom `rs_i` holds when `Pi` owns the
//! resource. Only states reachable from the all-idle state are built;
//! state names list the phases in process order, e.g. `IWO`.

use std::collections::VecDeque;

use crate::abstraction::{partition_by_atoms, Partition};
use crate::error::{Error, Result};
use crate::model::table::canonical_classes;
use crate::model::{ConcreteCgs, ProfileRow};
use crate::syntax::{dualize, Formula};

pub const ARBITER: &str = "Arbiter";

/// How scheduler states are grouped for abstraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SchedulerPartition {
    /// All-idle, some-waiting-no-owner, and one block per owner.
    #[default]
    WaitingCluster,
    /// States agreeing on every `rs_i`.
    AtomAgreement,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Phase {
    Idle,
    Waiting,
    Owner,
}

impl Phase {
    fn letter(self) -> char {
        match self {
            Phase::Idle => 'I',
            Phase::Waiting => 'W',
            Phase::Owner => 'O',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ProcMove {
    Stay,
    Request,
    Release,
}

pub fn process_name(i: usize) -> String {
    format!("P{i}")
}

pub fn atom_name(i: usize) -> String {
    format!("rs{i}")
}

fn step(phases: &[Phase], grant: Option<usize>, moves: &[ProcMove]) -> Vec<Phase> {
    let owned = phases.contains(&Phase::Owner);
    phases
        .iter()
        .zip(moves)
        .enumerate()
        .map(|(i, (&ph, &mv))| match ph {
            Phase::Idle if mv == ProcMove::Request => Phase::Waiting,
            Phase::Waiting if grant == Some(i) && !owned => Phase::Owner,
            Phase::Owner if mv == ProcMove::Release => Phase::Idle,
            other => other,
        })
        .collect()
}

/// The mutual-exclusion property
/// `∀x ∀y1…∀yn (Arbiter,x)(P1,y1)…(Pn,yn) G ¬⋁_{i<j} (rs_i ∧ rs_j)`.
pub fn scheduler_formula(n: usize) -> Formula {
    let mut conflict: Option<Formula> = None;
    for i in 1..=n {
        for j in i + 1..=n {
            let both = Formula::and(Formula::atom(&atom_name(i)), Formula::atom(&atom_name(j)));
            conflict = Some(match conflict {
                None => both,
                Some(c) => Formula::or(c, both),
            });
        }
    }
    let mut body = Formula::always(dualize(&conflict.unwrap_or_else(Formula::ff)));
    for i in (1..=n).rev() {
        body = Formula::bind(&process_name(i), &format!("y{i}"), body);
    }
    body = Formula::bind(ARBITER, "x", body);
    for i in (1..=n).rev() {
        body = Formula::forall(&format!("y{i}"), body);
    }
    Formula::forall("x", body)
}

/// Builds the scheduler model with the waiting-cluster partition.
pub fn gen_scheduler(n: usize) -> Result<(ConcreteCgs, Partition, Formula)> {
    gen_scheduler_with(n, SchedulerPartition::WaitingCluster)
}

pub fn gen_scheduler_with(n: usize, kind: SchedulerPartition) -> Result<(ConcreteCgs, Partition, Formula)> {
    if n < 2 {
        return Err(Error::Validation("the scheduler needs at least two processes".into()));
    }
    let mut agents: Vec<String> = std::iter::once(ARBITER.to_string())
        .chain((1..=n).map(process_name))
        .collect();
    agents.sort();
    let mut actions: Vec<String> = ["stay", "request", "release", "none"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=n).map(|i| format!("grant_{i}")))
        .collect();
    actions.sort();
    let mut atoms: Vec<String> = (1..=n).map(atom_name).collect();
    atoms.sort();

    let arbiter_of = |act: &str| -> Option<usize> {
        act.strip_prefix("grant_").map(|i| i.parse::<usize>().unwrap() - 1)
    };
    let move_of = |act: &str| match act {
        "request" => ProcMove::Request,
        "release" => ProcMove::Release,
        _ => ProcMove::Stay,
    };
    let role: Vec<Option<usize>> = agents
        .iter()
        .map(|a| a.strip_prefix('P').map(|i| i.parse::<usize>().unwrap() - 1))
        .collect();
    let class_of: Vec<Vec<u16>> = role
        .iter()
        .map(|r| {
            let keys: Vec<String> = actions
                .iter()
                .map(|act| match r {
                    None => format!("{:?}", arbiter_of(act)),
                    Some(_) => format!("{}", move_of(act) as u8),
                })
                .collect();
            canonical_classes(&keys)
        })
        .collect();

    let reps: Vec<Vec<u16>> = class_of
        .iter()
        .map(|m| {
            let k = m.iter().max().map_or(0, |&c| c as usize + 1);
            (0..k as u16).map(|c| m.iter().position(|&x| x == c).unwrap() as u16).collect()
        })
        .collect();
    let successor = |ph: &[Phase], joint: &[u16]| -> Vec<Phase> {
        let mut grant = None;
        let mut moves = vec![ProcMove::Stay; n];
        for (a, &act) in joint.iter().enumerate() {
            let name = &actions[act as usize];
            match role[a] {
                None => grant = arbiter_of(name),
                Some(i) => moves[i] = move_of(name),
            }
        }
        step(ph, grant, &moves)
    };
    let code = |ph: &[Phase]| ph.iter().fold(0usize, |acc, &p| acc * 3 + p as usize);

    // breadth-first exploration from the all-idle state
    let init = vec![Phase::Idle; n];
    let mut seen = vec![false; 3usize.pow(n as u32)];
    seen[code(&init)] = true;
    let mut order = vec![init.clone()];
    let mut queue = VecDeque::from([init]);
    while let Some(ph) = queue.pop_front() {
        let mut digits = vec![0usize; reps.len()];
        let mut joint: Vec<u16> = reps.iter().map(|r| r[0]).collect();
        loop {
            for (a, &d) in digits.iter().enumerate() {
                joint[a] = reps[a][d];
            }
            let next = successor(&ph, &joint);
            if !std::mem::replace(&mut seen[code(&next)], true) {
                order.push(next.clone());
                queue.push_back(next);
            }
            let mut a = digits.len();
            while a > 0 {
                a -= 1;
                digits[a] += 1;
                if digits[a] < reps[a].len() {
                    break;
                }
                digits[a] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }

    let name = |ph: &[Phase]| ph.iter().map(|p| p.letter()).collect::<String>();
    order.sort_by_key(|ph| name(ph));
    let mut index = vec![u32::MAX; seen.len()];
    for (k, ph) in order.iter().enumerate() {
        index[code(ph)] = k as u32;
    }
    let states: Vec<String> = order.iter().map(|ph| name(ph)).collect();
    let rows = order
        .iter()
        .map(|ph| ProfileRow::from_classes(class_of.clone(), |joint| index[code(&successor(ph, joint))]))
        .collect();
    let labels = atoms
        .iter()
        .map(|atom| {
            let i: usize = atom[2..].parse::<usize>().unwrap() - 1;
            crate::bits::StateSet::from_iter(
                states.len(),
                (0..states.len()).filter(|&s| states[s].as_bytes()[i] == b'O'),
            )
        })
        .collect();
    let initial = index[0] as usize;
    let g = ConcreteCgs::from_parts(agents, states, initial, actions, atoms, rows, labels)?;
    let part = match kind {
        SchedulerPartition::AtomAgreement => {
            let atoms: Vec<String> = g.atoms().to_vec();
            partition_by_atoms(&g, &atoms)?
        }
        SchedulerPartition::WaitingCluster => {
            let class: Vec<usize> = g
                .states()
                .iter()
                .map(|s| match s.find('O') {
                    Some(i) => 2 + i,
                    None if s.contains('W') => 1,
                    None => 0,
                })
                .collect();
            Partition::from_class_of(&class)
        }
    };
    Ok((g, part, scheduler_formula(n)))
}
