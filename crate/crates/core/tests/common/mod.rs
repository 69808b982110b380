#![allow(dead_code)]

use tristrat::model::{load_concrete, ConcreteCgs};

pub fn m1() -> ConcreteCgs {
    load_concrete(include_bytes!("../fixtures/m1.json")).unwrap()
}

pub fn c2() -> ConcreteCgs {
    load_concrete(include_bytes!("../fixtures/c2.json")).unwrap()
}

use proptest::prelude::*;
use tristrat::Formula;

/// Arbitrary NNF formulas over agents `a`, `b`, variables `x`, `y` and
/// atoms `p`, `q`.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["p", "q", "true", "false"]).prop_map(Formula::atom),
        prop::sample::select(vec!["p", "q"]).prop_map(Formula::neg_atom),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y"]);
        let agent = prop::sample::select(vec!["a", "b"]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (var.clone(), inner.clone()).prop_map(|(x, f)| Formula::exists(x, f)),
            (var.clone(), inner.clone()).prop_map(|(x, f)| Formula::forall(x, f)),
            (agent, var, inner.clone()).prop_map(|(a, x, f)| Formula::bind(a, x, f)),
            inner.clone().prop_map(Formula::next),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::until(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::release(l, r)),
        ]
    })
}

use rand::Rng;
use tristrat::model::{Assignment, MemorylessStrategy};

/// Every agent bound to a uniformly random memoryless strategy.
pub fn random_assignment<S: AsRef<str>>(r: &mut impl Rng, agents: &[S], states: usize, actions: usize) -> Assignment {
    agents.iter().fold(Assignment::new(), |chi, a| {
        chi.with_agent(a.as_ref(), random_strategy(r, states, actions))
    })
}

pub fn random_strategy(r: &mut impl Rng, states: usize, actions: usize) -> MemorylessStrategy {
    MemorylessStrategy::new((0..states).map(|_| r.gen_range(0..actions) as u16).collect())
}

/// All memoryless strategies over `states` states choosing from `actions`.
pub fn all_strategies(states: usize, actions: &[u16]) -> Vec<MemorylessStrategy> {
    let mut out = vec![Vec::new()];
    for _ in 0..states {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u16>| {
                actions.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    if actions.is_empty() {
        return Vec::new();
    }
    out.into_iter().map(MemorylessStrategy::new).collect()
}
