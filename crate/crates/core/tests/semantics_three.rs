mod common;

use proptest::prelude::*;
use tristrat::bench::random::{fragment_sentence, random_body, random_concrete, random_sentence, random_three, rng, ModelShape};
use tristrat::bits::StateSet;
use tristrat::eval::{check2, check3, eval3, next_value, release_value, until_value, InducedGraphs};
use tristrat::model::{embed, load_three, Assignment, MemorylessStrategy, ThreeCgs};
use tristrat::{negate, parse, tv_and, tv_or, Config, Formula, ReleaseMode, TruthValue};

use TruthValue::{False, True, Undef};

/// One agent; `go` is may-only and splits into `u` or `v` without a must
/// successor; `p` is undefined at `u` and true at `v`.
const THREE: &str = r#"{
  "schema": "tristrat-cgs/1",
  "kind": "three",
  "agents": ["a"],
  "states": ["u", "v"],
  "initial": "u",
  "actions_may": ["go", "wait"],
  "actions_must": ["wait"],
  "atoms": ["p"],
  "transitions_may": [
    {"state": "u", "action_profile": ["go"], "successors": ["u", "v"]},
    {"state": "u", "action_profile": ["wait"], "successors": ["u"]},
    {"state": "v", "action_profile": ["*"], "successors": ["v"]}
  ],
  "transitions_must": [
    {"state": "u", "action_profile": ["wait"], "successors": ["u"]},
    {"state": "v", "action_profile": ["*"], "successors": ["v"]}
  ],
  "labels": {"u": {"p": "undef"}, "v": {"p": "true"}}
}"#;

fn ig(may: &[&[u32]], must: &[&[u32]]) -> InducedGraphs {
    InducedGraphs::from_successors(
        may.iter().map(|v| v.to_vec()).collect(),
        must.iter().map(|v| v.to_vec()).collect(),
    )
}

#[test]
fn lukasiewicz_connectives() {
    assert_eq!(tv_and(True, Undef), Undef);
    assert_eq!(tv_and(Undef, False), False);
    assert_eq!(tv_or(Undef, False), Undef);
    assert_eq!(tv_or(True, Undef), True);
    assert_eq!(Undef.not(), Undef);
}

#[test]
fn connectives_obey_de_morgan_and_order() {
    assert!(False < Undef && Undef < True);
    for a in [False, Undef, True] {
        for b in [False, Undef, True] {
            assert_eq!(tv_and(a, b).not(), tv_or(a.not(), b.not()));
            assert_eq!(tv_and(a, b), a.min(b));
            assert_eq!(tv_or(a, b), a.max(b));
        }
    }
}

#[test]
fn no_must_path_means_no_false() {
    let g = ig(&[&[1], &[1]], &[&[], &[]]);
    assert_eq!(until_value(&g, &[False, False], &[False, False]), [Undef, Undef]);
    assert_eq!(release_value(&g, &[False, False], &[False, False], ReleaseMode::Literal), [Undef, Undef]);
}

#[test]
fn next_clauses() {
    // state 0 steps to 1 or 2
    let g = ig(&[&[1, 2], &[1], &[2]], &[&[], &[1], &[2]]);
    assert_eq!(next_value(&g, &[False, True, True], 0), True);
    assert_eq!(next_value(&g, &[False, True, Undef], 0), Undef);
    let g = ig(&[&[1, 2], &[1], &[2]], &[&[1], &[1], &[2]]);
    assert_eq!(next_value(&g, &[True, False, True], 0), False);
}

#[test]
fn until_on_embedded_m1() {
    let e = embed(&common::m1());
    let (alpha, beta) = (e.action_index("alpha").unwrap(), e.action_index("beta").unwrap());
    let p = [False, True];
    let t = [True, True];
    let chi = Assignment::new().with_agent("a", MemorylessStrategy::constant(2, beta));
    assert_eq!(until_value(&InducedGraphs::new(&e, &chi).unwrap(), &t, &p)[0], True);
    let chi = Assignment::new().with_agent("a", MemorylessStrategy::constant(2, alpha));
    assert_eq!(until_value(&InducedGraphs::new(&e, &chi).unwrap(), &t, &p)[0], False);
}

#[test]
fn until_without_must_paths_is_undefined() {
    let g = load_three(THREE.as_bytes()).unwrap();
    let go = g.action_index("go").unwrap();
    let chi = Assignment::new().with_agent("a", MemorylessStrategy::constant(2, go));
    let ig = InducedGraphs::new(&g, &chi).unwrap();
    assert_eq!(until_value(&ig, &[True, True], &[Undef, True]), [Undef, True]);
}

#[test]
fn release_edge_cases() {
    let g = ig(&[&[0, 1], &[1]], &[&[1], &[1]]);
    for mode in [ReleaseMode::Literal, ReleaseMode::Standard] {
        assert_eq!(release_value(&g, &[False, False], &[False, False], mode), [False, False]);
    }
    // the first position may discharge the obligation in literal mode only
    assert_eq!(release_value(&g, &[True, True], &[False, False], ReleaseMode::Literal), [True, True]);
    assert_eq!(release_value(&g, &[True, True], &[False, False], ReleaseMode::Standard), [False, False]);
    assert_eq!(release_value(&g, &[False, False], &[True, True], ReleaseMode::Standard), [True, True]);
}

#[test]
fn checks_on_small_models() {
    let cfg = Config::default();
    let e = embed(&common::m1());
    assert_eq!(check3(&e, &parse("E x (a,x) F p").unwrap(), &cfg).unwrap(), True);
    assert_eq!(check3(&e, &parse("A x (a,x) F p").unwrap(), &cfg).unwrap(), False);
    assert_eq!(eval3(&e, &Formula::tt(), &Assignment::new(), 1, &cfg).unwrap(), True);

    let g = load_three(THREE.as_bytes()).unwrap();
    assert_eq!(check3(&g, &parse("A x (a,x) G p").unwrap(), &cfg).unwrap(), Undef);
    // no must strategy reaches v, and no may strategy refutes F p
    assert_eq!(check3(&g, &parse("E x (a,x) F p").unwrap(), &cfg).unwrap(), Undef);
    assert_eq!(check3(&g, &parse("E x (a,x) G !p").unwrap(), &cfg).unwrap(), Undef);
}

/// Falsity needs one refuting must path, truth needs every may path, so
/// with nondeterministic must edges a sentence and its negation can both
/// be false.
#[test]
fn negation_is_not_dual_under_nondeterministic_must() {
    let doc = r#"{
      "schema": "tristrat-cgs/1",
      "kind": "three",
      "agents": ["a"],
      "states": ["s", "u", "v"],
      "initial": "s",
      "actions_may": ["act"],
      "actions_must": ["act"],
      "atoms": ["p"],
      "transitions_may": [
        {"state": "s", "action_profile": ["*"], "successors": ["u", "v"]},
        {"state": "u", "action_profile": ["*"], "successors": ["u"]},
        {"state": "v", "action_profile": ["*"], "successors": ["v"]}
      ],
      "transitions_must": [
        {"state": "s", "action_profile": ["*"], "successors": ["u", "v"]},
        {"state": "u", "action_profile": ["*"], "successors": ["u"]},
        {"state": "v", "action_profile": ["*"], "successors": ["v"]}
      ],
      "labels": {"v": {"p": "true"}}
    }"#;
    let g = load_three(doc.as_bytes()).unwrap();
    let cfg = Config::default();
    let phi = parse("A x (a,x) X p").unwrap();
    assert_eq!(check3(&g, &phi, &cfg).unwrap(), False);
    assert_eq!(check3(&g, &negate(&phi, ReleaseMode::Literal), &cfg).unwrap(), False);
}

/// Models small enough that nested quantifiers in random sentences stay
/// well inside the strategy budget.
const SMALL: ModelShape = ModelShape { max_states: 4, max_actions: 2, agents: 2, atoms: 2 };

/// `g` with every undefined label replaced by a random truth value.
fn refine(g: &ThreeCgs, r: &mut impl rand::Rng) -> ThreeCgs {
    let n = g.num_states();
    let labels = (0..g.atoms().len())
        .map(|p| {
            let (tt, ff) = g.atom_states(p);
            let (mut tt, mut ff) = (tt.clone(), ff.clone());
            for s in 0..n {
                if !tt.contains(s) && !ff.contains(s) {
                    if r.gen() {
                        tt.insert(s)
                    } else {
                        ff.insert(s)
                    }
                }
            }
            (tt, ff)
        })
        .collect::<Vec<(StateSet, StateSet)>>();
    ThreeCgs::from_parts(
        g.agents().to_vec(),
        g.states().to_vec(),
        g.initial(),
        g.actions_may().to_vec(),
        g.must_mask().to_vec(),
        g.atoms().to_vec(),
        g.rows().to_vec(),
        labels,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn embedding_is_conservative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_concrete(&mut r, &ModelShape::default());
        let phi = random_sentence(&mut r, 4, g.agents(), g.atoms());
        let cfg = Config::default();
        let v = check3(&embed(&g), &phi, &cfg).unwrap();
        prop_assert_eq!(v, TruthValue::from_bool(check2(&g, &phi, &cfg).unwrap()));
    }

    #[test]
    fn negation_is_exact_on_embedded_models(seed in any::<u64>(), standard in any::<bool>()) {
        let mut r = rng(seed);
        let g = embed(&random_concrete(&mut r, &ModelShape::default()));
        let phi = random_sentence(&mut r, 3, g.agents(), g.atoms());
        let mode = if standard { ReleaseMode::Standard } else { ReleaseMode::Literal };
        let cfg = Config::default().with_release(mode);
        let v = check3(&g, &phi, &cfg).unwrap();
        prop_assert_eq!(check3(&g, &negate(&phi, mode), &cfg).unwrap(), v.not());
    }

    #[test]
    fn a_sentence_and_its_negation_are_never_both_true(seed in any::<u64>(), standard in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_three(&mut r, &SMALL);
        let phi = random_sentence(&mut r, 3, g.agents(), g.atoms());
        let mode = if standard { ReleaseMode::Standard } else { ReleaseMode::Literal };
        let cfg = Config::default().with_release(mode);
        let v = check3(&g, &phi, &cfg).unwrap();
        let w = check3(&g, &negate(&phi, mode), &cfg).unwrap();
        prop_assert!(!(v == True && w == True));
    }

    #[test]
    fn resolving_undefined_labels_keeps_defined_verdicts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_three(&mut r, &SMALL);
        let phi = random_sentence(&mut r, 3, g.agents(), g.atoms());
        let refined = refine(&g, &mut r);
        let cfg = Config::default();
        if let Some(b) = check3(&g, &phi, &cfg).unwrap().as_bool() {
            prop_assert_eq!(check3(&refined, &phi, &cfg).unwrap(), TruthValue::from_bool(b));
        }
    }

    #[test]
    fn temporal_values_follow_the_connectives(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_three(&mut r, &ModelShape::default());
        let chi = common::random_assignment(&mut r, g.agents(), g.num_states(), g.num_actions());
        let a = random_body(&mut r, 3, g.atoms());
        let b = random_body(&mut r, 3, g.atoms());
        let cfg = Config::default();
        for s in 0..g.num_states() {
            let va = eval3(&g, &a, &chi, s, &cfg).unwrap();
            let vb = eval3(&g, &b, &chi, s, &cfg).unwrap();
            prop_assert_eq!(eval3(&g, &Formula::and(a.clone(), b.clone()), &chi, s, &cfg).unwrap(), tv_and(va, vb));
            prop_assert_eq!(eval3(&g, &Formula::or(a.clone(), b.clone()), &chi, s, &cfg).unwrap(), tv_or(va, vb));
        }
    }

    /// The quantifier clauses evaluated by explicit enumeration: ∃ is true
    /// iff some must strategy satisfies the body and false iff every may
    /// strategy refutes it; the two never hold together.
    #[test]
    fn quantifier_clauses_by_enumeration(seed in any::<u64>(), universal in any::<bool>()) {
        let mut r = rng(seed);
        let shape = ModelShape { max_states: 3, max_actions: 3, agents: 1, atoms: 2 };
        let g = random_three(&mut r, &shape);
        let agent = g.agents()[0].clone();
        let body = Formula::bind(&agent, "x", random_body(&mut r, 3, g.atoms()));
        let cfg = Config::default();
        let all: Vec<u16> = (0..g.num_actions() as u16).collect();
        let must: Vec<u16> = all.iter().copied().filter(|&a| g.is_must(a)).collect();
        let value = |f: &MemorylessStrategy| {
            eval3(&g, &body, &Assignment::new().with_var("x", f.clone()), g.initial(), &cfg).unwrap()
        };
        let must_values: Vec<TruthValue> = common::all_strategies(g.num_states(), &must).iter().map(value).collect();
        let may_values: Vec<TruthValue> = common::all_strategies(g.num_states(), &all).iter().map(value).collect();
        let (phi, expected) = if universal {
            let top = may_values.iter().all(|&v| v == True);
            let bot = must_values.iter().any(|&v| v == False);
            prop_assert!(!(top && bot));
            (Formula::forall("x", body), if top { True } else if bot { False } else { Undef })
        } else {
            let top = must_values.iter().any(|&v| v == True);
            let bot = may_values.iter().all(|&v| v == False);
            prop_assert!(!(top && bot));
            (Formula::exists("x", body), if top { True } else if bot { False } else { Undef })
        };
        prop_assert_eq!(check3(&g, &phi, &cfg).unwrap(), expected);
    }

    #[test]
    fn fragment_sentences_check_without_error(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_three(&mut r, &ModelShape::default());
        let phi = fragment_sentence(&mut r, 4, g.agents(), g.atoms());
        prop_assert!(check3(&g, &phi, &Config::default()).is_ok());
    }
}
