//! Temporal operators as fixpoints over a graph induced by a complete
//! assignment.
//!
//! The ⊤ clauses quantify over all may plays and the ⊥ clauses over some
//! must play. Must plays are infinite, so every ⊥ witness has to end in a
//! state with an infinite must continuation (`INF`).

use crate::bits::StateSet;
use crate::config::ReleaseMode;
use crate::error::{Error, Result};
use crate::model::{Assignment, ThreeCgs};
use crate::truth::TruthValue;

/// Three-valued valuation of a formula over all states.
pub type Valuation = Vec<TruthValue>;

/// A pair of disjoint state sets: where a formula is true and where it is
/// false. States in neither set are undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Val {
    pub tt: StateSet,
    pub ff: StateSet,
}

impl Val {
    pub fn undef(n: usize) -> Val {
        Val {
            tt: StateSet::empty(n),
            ff: StateSet::empty(n),
        }
    }

    pub fn restrict(mut self, mask: &StateSet) -> Val {
        self.tt.intersect_with(mask);
        self.ff.intersect_with(mask);
        self
    }

    pub fn get(&self, s: usize) -> TruthValue {
        if self.tt.contains(s) {
            TruthValue::True
        } else if self.ff.contains(s) {
            TruthValue::False
        } else {
            TruthValue::Undef
        }
    }

    pub fn from_valuation(v: &[TruthValue]) -> Val {
        let n = v.len();
        Val {
            tt: StateSet::from_iter(n, (0..n).filter(|&s| v[s] == TruthValue::True)),
            ff: StateSet::from_iter(n, (0..n).filter(|&s| v[s] == TruthValue::False)),
        }
    }

    pub fn to_valuation(&self) -> Valuation {
        (0..self.tt.universe()).map(|s| self.get(s)).collect()
    }
}

/// May and must successors of the states in `domain`; the domain is
/// closed under may successors.
pub struct LocalGraph<'a> {
    pub domain: StateSet,
    pub may: Vec<&'a [u32]>,
    pub must: Vec<&'a [u32]>,
}

impl<'a> LocalGraph<'a> {
    fn all_may_in(&self, s: usize, z: &StateSet) -> bool {
        self.may[s].iter().all(|&t| z.contains(t as usize))
    }

    fn some_must_in(&self, s: usize, z: &StateSet) -> bool {
        self.must[s].iter().any(|&t| z.contains(t as usize))
    }

    /// Iterates `z ↦ {s ∈ domain : step(s, z)}` from `start` until stable.
    fn iterate(&self, start: StateSet, step: impl Fn(usize, &StateSet) -> bool) -> StateSet {
        let mut z = start;
        loop {
            let next = StateSet::from_iter(z.universe(), self.domain.iter().filter(|&s| step(s, &z)));
            if next == z {
                return z;
            }
            z = next;
        }
    }

    fn lfp(&self, step: impl Fn(usize, &StateSet) -> bool) -> StateSet {
        self.iterate(StateSet::empty(self.domain.universe()), step)
    }

    fn gfp(&self, step: impl Fn(usize, &StateSet) -> bool) -> StateSet {
        self.iterate(self.domain.clone(), step)
    }

    /// States with an infinite must path.
    pub fn inf(&self) -> StateSet {
        self.gfp(|s, z| self.some_must_in(s, z))
    }

    /// `X φ` at the states of `mask`, given the operand on their successors.
    pub fn next(&self, mask: &StateSet, sub: &Val, inf: &StateSet) -> Val {
        let n = mask.universe();
        let mut out = Val::undef(n);
        for s in mask.iter() {
            if self.all_may_in(s, &sub.tt) {
                out.tt.insert(s);
            } else if self.must[s]
                .iter()
                .any(|&t| sub.ff.contains(t as usize) && inf.contains(t as usize))
            {
                out.ff.insert(s);
            }
        }
        out
    }

    pub fn until(&self, a: &Val, b: &Val, inf: &StateSet) -> Val {
        let tt = self.lfp(|s, z| b.tt.contains(s) || (a.tt.contains(s) && self.all_may_in(s, z)));
        let reach = self.lfp(|s, z| {
            (a.ff.contains(s) && b.ff.contains(s) && inf.contains(s))
                || (b.ff.contains(s) && self.some_must_in(s, z))
        });
        let stay = self.gfp(|s, z| b.ff.contains(s) && self.some_must_in(s, z));
        let mut ff = reach;
        ff.union_with(&stay);
        Val { tt, ff }
    }

    pub fn release(&self, a: &Val, b: &Val, inf: &StateSet, mode: ReleaseMode) -> Val {
        match mode {
            ReleaseMode::Literal => {
                let tt = self.gfp(|s, z| a.tt.contains(s) || (b.tt.contains(s) && self.all_may_in(s, z)));
                let ff = self.lfp(|s, z| {
                    a.ff.contains(s)
                        && ((b.ff.contains(s) && inf.contains(s)) || self.some_must_in(s, z))
                });
                Val { tt, ff }
            }
            ReleaseMode::Standard => {
                let tt = self.gfp(|s, z| b.tt.contains(s) && (a.tt.contains(s) || self.all_may_in(s, z)));
                let ff = self.lfp(|s, z| {
                    (b.ff.contains(s) && inf.contains(s)) || (a.ff.contains(s) && self.some_must_in(s, z))
                });
                Val { tt, ff }
            }
        }
    }
}

/// Successor structure induced by a complete assignment on a
/// three-valued model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedGraphs {
    pub joint: Vec<Vec<u16>>,
    pub may_succ: Vec<Vec<u32>>,
    pub must_succ: Vec<Vec<u32>>,
}

impl InducedGraphs {
    pub fn new(g: &ThreeCgs, chi: &Assignment) -> Result<InducedGraphs> {
        let profile = chi.profile(g.agents())?;
        if profile.iter().any(|f| f.len() != g.num_states()) {
            return Err(Error::Validation("strategy length differs from state count".into()));
        }
        let mut joint = Vec::with_capacity(g.num_states());
        let mut may_succ = Vec::with_capacity(g.num_states());
        let mut must_succ = Vec::with_capacity(g.num_states());
        for s in 0..g.num_states() {
            let j: Vec<u16> = profile.iter().map(|f| f.action(s)).collect();
            if j.iter().any(|&a| a as usize >= g.num_actions()) {
                return Err(Error::Validation("strategy uses an unknown action".into()));
            }
            let cell = g.cell(s, &j);
            may_succ.push(cell.may.clone());
            must_succ.push(cell.must.clone());
            joint.push(j);
        }
        Ok(InducedGraphs {
            joint,
            may_succ,
            must_succ,
        })
    }

    /// Builds the structure directly from successor lists.
    pub fn from_successors(may_succ: Vec<Vec<u32>>, must_succ: Vec<Vec<u32>>) -> InducedGraphs {
        InducedGraphs {
            joint: vec![Vec::new(); may_succ.len()],
            may_succ,
            must_succ,
        }
    }

    pub fn num_states(&self) -> usize {
        self.may_succ.len()
    }

    fn local(&self) -> LocalGraph<'_> {
        LocalGraph {
            domain: StateSet::full(self.num_states()),
            may: self.may_succ.iter().map(|v| v.as_slice()).collect(),
            must: self.must_succ.iter().map(|v| v.as_slice()).collect(),
        }
    }
}

/// Value of `X φ` at `s` given the operand valuation.
pub fn next_value(ig: &InducedGraphs, sub: &[TruthValue], s: usize) -> TruthValue {
    let lg = ig.local();
    let inf = lg.inf();
    lg.next(&StateSet::singleton(ig.num_states(), s), &Val::from_valuation(sub), &inf)
        .get(s)
}

pub fn until_value(ig: &InducedGraphs, sub1: &[TruthValue], sub2: &[TruthValue]) -> Valuation {
    let lg = ig.local();
    let inf = lg.inf();
    lg.until(&Val::from_valuation(sub1), &Val::from_valuation(sub2), &inf)
        .to_valuation()
}

pub fn release_value(
    ig: &InducedGraphs,
    sub1: &[TruthValue],
    sub2: &[TruthValue],
    mode: ReleaseMode,
) -> Valuation {
    let lg = ig.local();
    let inf = lg.inf();
    lg.release(&Val::from_valuation(sub1), &Val::from_valuation(sub2), &inf, mode)
        .to_valuation()
}
