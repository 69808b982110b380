//! Seeded random models, partitions and formulas for property suites and
//! the definedness experiment.
//!
//! Formula depth counts the nodes on the longest path of the temporal
//! body; quantifiers and bindings of a prefix do not add to it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abstraction::Partition;
use crate::bits::StateSet;
use crate::model::{ConcreteCgs, ProfileRow, Succ, ThreeCgs};
use crate::syntax::Formula;

/// Size bounds for random models.
#[derive(Clone, Debug)]
pub struct ModelShape {
    pub max_states: usize,
    pub max_actions: usize,
    pub agents: usize,
    pub atoms: usize,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            max_states: 5,
            max_actions: 3,
            agents: 2,
            atoms: 2,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Agent names `a0, a1, …`.
pub fn agent_names(n: usize) -> Vec<String> {
    names("a", n)
}

/// Atom names `p0, p1, …`.
pub fn atom_names(n: usize) -> Vec<String> {
    names("p", n)
}

/// A random concrete model with 1 to `max_states` states and 1 to
/// `max_actions` actions; `agents` agents and `atoms` atoms exactly.
pub fn random_concrete(rng: &mut impl Rng, shape: &ModelShape) -> ConcreteCgs {
    let n = rng.gen_range(1..=shape.max_states);
    let k = rng.gen_range(1..=shape.max_actions);
    let agents = agent_names(shape.agents);
    let atoms = atom_names(shape.atoms);
    let holds: Vec<Vec<bool>> = (0..n).map(|_| (0..atoms.len()).map(|_| rng.gen()).collect()).collect();
    ConcreteCgs::from_fn(
        agents,
        names("s", n),
        0,
        names("act", k),
        atoms,
        |_, _| rng.gen_range(0..n),
        |s, p| holds[s][p],
    )
    .expect("random concrete models are valid")
}

/// A random three-valued model. May cells are nonempty random sets, must
/// cells random subsets of them; cells of profiles made only of must
/// actions get a nonempty must part. Labels are uniform over ⊤, ⊥, ?.
pub fn random_three(rng: &mut impl Rng, shape: &ModelShape) -> ThreeCgs {
    let n = rng.gen_range(1..=shape.max_states);
    let k = rng.gen_range(1..=shape.max_actions);
    let agents = agent_names(shape.agents);
    let atoms = atom_names(shape.atoms);
    let mut must: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.7)).collect();
    if rng.gen_bool(0.9) && !must.iter().any(|&m| m) {
        must[rng.gen_range(0..k)] = true;
    }
    let rows = (0..n)
        .map(|_| {
            ProfileRow::from_fn(agents.len(), k, |joint| {
                let all_must = joint.iter().all(|&a| must[a as usize]);
                let may: Vec<u32> = loop {
                    let set: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.4)).collect();
                    if !set.is_empty() {
                        break set;
                    }
                };
                let mut must_part: Vec<u32> = may.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if all_must && must_part.is_empty() {
                    must_part.push(*may.choose(rng).expect("may part is nonempty"));
                }
                Succ::new(may, must_part)
            })
        })
        .collect();
    let labels = (0..atoms.len())
        .map(|_| {
            let mut tt = StateSet::empty(n);
            let mut ff = StateSet::empty(n);
            for s in 0..n {
                match rng.gen_range(0..3) {
                    0 => tt.insert(s),
                    1 => ff.insert(s),
                    _ => {}
                }
            }
            (tt, ff)
        })
        .collect();
    ThreeCgs::from_parts(agents, names("s", n), 0, names("act", k), must, atoms, rows, labels)
        .expect("random three-valued models are valid")
}

/// A random partition of `states` states into at most `states` blocks.
pub fn random_partition(rng: &mut impl Rng, states: usize) -> Partition {
    let blocks = rng.gen_range(1..=states.max(1));
    let class_of: Vec<usize> = (0..states).map(|_| rng.gen_range(0..blocks)).collect();
    Partition::from_class_of(&class_of)
}

/// Recursive formula generator over fixed agent and atom names.
struct Gen<'a, R> {
    rng: &'a mut R,
    agents: &'a [String],
    atoms: &'a [String],
    /// Probability that a subformula under a temporal operator becomes a
    /// new quantified block.
    nest: f64,
    fresh: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn literal(&mut self) -> Formula {
        let p = &self.atoms[self.rng.gen_range(0..self.atoms.len())];
        if self.rng.gen() {
            Formula::atom(p)
        } else {
            Formula::neg_atom(p)
        }
    }

    fn sub(&mut self, depth: usize, temporal: bool) -> Formula {
        if temporal && depth >= 2 && self.rng.gen_bool(self.nest) {
            self.block(depth)
        } else {
            self.body(depth, temporal)
        }
    }

    /// Uniform choice over literals, `∧`, `∨`, `X`, `U`, `R`, `F` and `G`.
    fn body(&mut self, depth: usize, temporal: bool) -> Formula {
        if depth <= 1 {
            return self.literal();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 => self.literal(),
            1 => Formula::and(self.sub(d, temporal), self.sub(d, temporal)),
            2 => Formula::or(self.sub(d, temporal), self.sub(d, temporal)),
            3 => Formula::next(self.sub(d, true)),
            4 => Formula::until(self.sub(d, true), self.sub(d, true)),
            5 => Formula::release(self.sub(d, true), self.sub(d, true)),
            6 => Formula::eventually(self.sub(d, true)),
            _ => Formula::always(self.sub(d, true)),
        }
    }

    /// A random quantifier prefix over fresh variables binding every agent
    /// to one of them, so variables may be shared.
    fn block(&mut self, depth: usize) -> Formula {
        if depth >= 3 && self.nest > 0.0 && self.rng.gen_bool(0.2) {
            let a = self.block(depth - 1);
            let b = self.block(depth - 1);
            return if self.rng.gen() { Formula::and(a, b) } else { Formula::or(a, b) };
        }
        let nvars = self.rng.gen_range(1..=self.agents.len().max(1));
        let vars: Vec<String> = (0..nvars)
            .map(|_| {
                self.fresh += 1;
                format!("x{}", self.fresh)
            })
            .collect();
        let mut f = self.body(depth, false);
        let mut order: Vec<usize> = (0..self.agents.len()).collect();
        order.shuffle(self.rng);
        for &a in order.iter().rev() {
            let x = &vars[self.rng.gen_range(0..vars.len())];
            f = Formula::bind(&self.agents[a], x, f);
        }
        for x in vars.iter().rev() {
            f = if self.rng.gen() { Formula::exists(x, f) } else { Formula::forall(x, f) };
        }
        f
    }
}

/// A random quantifier-free temporal body of depth at most `depth`.
pub fn random_body(rng: &mut impl Rng, depth: usize, atoms: &[String]) -> Formula {
    Gen { rng, agents: &[], atoms, nest: 0.0, fresh: 0 }.body(depth.max(1), false)
}

/// A sentence of the one-binding fragment: a quantifier prefix, one
/// binding per agent and a quantifier-free body of depth at most `depth`.
/// The same seed always yields the same formula.
pub fn gen_random_formula(seed: u64, depth: usize, agents: &[String], atoms: &[String]) -> Formula {
    fragment_sentence(&mut rng(seed), depth, agents, atoms)
}

pub fn fragment_sentence(rng: &mut impl Rng, depth: usize, agents: &[String], atoms: &[String]) -> Formula {
    Gen { rng, agents, atoms, nest: 0.0, fresh: 0 }.block(depth.max(1))
}

/// A general sentence: Boolean combinations of quantified blocks whose
/// bodies may contain further blocks under temporal operators, so agents
/// are rebound and quantifiers nest inside `X`, `U` and `R`.
pub fn random_sentence(rng: &mut impl Rng, depth: usize, agents: &[String], atoms: &[String]) -> Formula {
    Gen { rng, agents, atoms, nest: 0.15, fresh: 0 }.block(depth.max(1))
}
