mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use tristrat::abstraction::abstract_model;
use tristrat::bench::random::{fragment_sentence, random_concrete, random_three, rng, ModelShape};
use tristrat::bench::{gen_scheduler, scheduler_formula};
use tristrat::eval::{check2, check3};
use tristrat::model::{embed, load_three};
use tristrat::reduction::{check_split, classify, combine, split};
use tristrat::{is_sentence, parse, Config, Error, ReleaseMode, TruthValue};

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// One agent; `go` is may-only and leaves the must relation empty.
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

#[test]
fn classify_examples() {
    let (e, u) = classify(&scheduler_formula(3)).unwrap();
    assert!(e.is_empty());
    assert_eq!(u, set(&["Arbiter", "P1", "P2", "P3"]));

    let (e, u) = classify(&parse("E x A y (a,x)(b,y) F p").unwrap()).unwrap();
    assert_eq!((e, u), (set(&["a"]), set(&["b"])));

    let (e, u) = classify(&parse("E x (a,x)(b,x) F p").unwrap()).unwrap();
    assert_eq!((e, u), (set(&["a", "b"]), set(&[])));
}

#[test]
fn classify_rejects_unsupported_shapes() {
    for text in [
        "E x (a,x) F (E y (a,y) p)",
        "E x (a,x) (a,x) F p",
        "E x E x (a,x) F p",
        "E x (a,x) X ((a,x) p)",
    ] {
        let phi = parse(text).unwrap();
        assert!(matches!(classify(&phi), Err(Error::UnsupportedFragment(_))), "{text}");
    }
    assert!(matches!(classify(&parse("(a,x) F p").unwrap()), Err(Error::NotASentence(_))));
}

#[test]
fn combine_table() {
    assert_eq!(combine(true, false).unwrap(), TruthValue::True);
    assert_eq!(combine(false, true).unwrap(), TruthValue::False);
    assert_eq!(combine(false, false).unwrap(), TruthValue::Undef);
    assert_eq!(combine(true, true), Err(Error::InconsistentSplit));
}

#[test]
fn split_models_duplicate_atoms_and_add_nature() {
    let g = load_three(THREE.as_bytes()).unwrap();
    let inst = split(&g, &parse("E x (a,x) F p").unwrap(), ReleaseMode::Literal).unwrap();
    assert_eq!(inst.nature, "Nature");
    for m in [&inst.sat_model, &inst.viol_model] {
        assert!(m.agents().contains(&"Nature".to_string()));
        assert!(m.atom_index("p_true").is_some());
        assert!(m.atom_index("p_false").is_some());
        assert!(is_sentence(&inst.sat_formula, inst.sat_model.agents()));
        assert!(is_sentence(&inst.viol_formula, inst.viol_model.agents()));
    }
    // the viol side gains a sink for profiles without must successors
    assert_eq!(inst.viol_model.num_states(), g.num_states() + 1);
}

#[test]
fn undefined_verdict_splits_into_two_failures() {
    let g = load_three(THREE.as_bytes()).unwrap();
    let phi = parse("E x (a,x) F p").unwrap();
    let cfg = Config::default();
    assert_eq!(check3(&g, &phi, &cfg).unwrap(), TruthValue::Undef);
    let inst = split(&g, &phi, cfg.release).unwrap();
    assert!(!check2(&inst.sat_model, &inst.sat_formula, &cfg).unwrap());
    assert!(!check2(&inst.viol_model, &inst.viol_formula, &cfg).unwrap());
    assert_eq!(check_split(&g, &phi, &cfg).unwrap(), TruthValue::Undef);
}

#[test]
fn nature_name_avoids_clashes() {
    let doc = THREE.replace(r#""agents": ["a"]"#, r#""agents": ["Nature"]"#);
    let g = load_three(doc.as_bytes()).unwrap();
    let inst = split(&g, &parse("E x (Nature,x) F p").unwrap(), ReleaseMode::Literal).unwrap();
    assert_ne!(inst.nature, "Nature");
    assert!(inst.nature.starts_with("Nature"));
}

#[test]
fn abstract_scheduler_satisfaction_side_holds() {
    let (g, part, phi) = gen_scheduler(2).unwrap();
    let (a, _) = abstract_model(&g, &part).unwrap();
    let cfg = Config::default();
    let inst = split(&a, &phi, cfg.release).unwrap();
    assert!(check2(&inst.sat_model, &inst.sat_formula, &cfg).unwrap());
    assert_eq!(check_split(&a, &phi, &cfg).unwrap(), TruthValue::True);
}

#[test]
fn split_instance_serialises() {
    let g = load_three(THREE.as_bytes()).unwrap();
    let inst = split(&g, &parse("A x (a,x) G p").unwrap(), ReleaseMode::Literal).unwrap();
    let v: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
    assert_eq!(v["nature"], "Nature");
    assert_eq!(v["u_agents"][0], "a");
    for side in ["sat", "viol"] {
        let doc = serde_json::to_vec(&v[side]).unwrap();
        let loaded = tristrat::model::load_document(&doc).unwrap();
        assert!(loaded.formula.is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_agrees_with_direct_checking(seed in any::<u64>(), standard in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_three(&mut r, &ModelShape::default());
        let phi = fragment_sentence(&mut r, 3, g.agents(), g.atoms());
        let mode = if standard { ReleaseMode::Standard } else { ReleaseMode::Literal };
        let cfg = Config::default().with_release(mode);
        prop_assert_eq!(check_split(&g, &phi, &cfg).unwrap(), check3(&g, &phi, &cfg).unwrap());
    }

    #[test]
    fn split_of_an_embedding_is_defined(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_concrete(&mut r, &ModelShape::default());
        let phi = fragment_sentence(&mut r, 3, g.agents(), g.atoms());
        let cfg = Config::default();
        let v = check_split(&embed(&g), &phi, &cfg).unwrap();
        prop_assert_eq!(v, TruthValue::from_bool(check2(&g, &phi, &cfg).unwrap()));
    }
}

/// `s` branches on every must path to `u` (labelled `p`) or `v` (labelled
/// `q`). Each disjunct of `X p | X q` is refuted by one must path, so the
/// sentence is False. Quantifying Nature once around the whole body would let
/// one positional Nature choice satisfy the disjunction, giving a True
/// satisfaction check and an inconsistent split.
#[test]
fn nature_quantified_once_for_the_body_breaks_disjunctions_of_temporal_goals() {
    let doc = r#"{
      "schema": "tristrat-cgs/1",
      "kind": "three",
      "agents": ["a"],
      "states": ["s", "u", "v"],
      "initial": "s",
      "actions_may": ["act"],
      "actions_must": ["act"],
      "atoms": ["p", "q"],
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
      "labels": {"u": {"p": "true"}, "v": {"q": "true"}}
    }"#;
    let g = load_three(doc.as_bytes()).unwrap();
    let cfg = Config::default();
    let phi = parse("A x (a,x) (X p | X q)").unwrap();
    assert_eq!(check3(&g, &phi, &cfg).unwrap(), TruthValue::False);
    assert_eq!(check_split(&g, &phi, &cfg).unwrap(), TruthValue::False);

    let inst = split(&g, &phi, ReleaseMode::Literal).unwrap();
    let once = parse(&format!("A n A x ({},n) (a,x) (X p_true | X q_true)", inst.nature)).unwrap();
    assert!(check2(&inst.sat_model, &once, &cfg).unwrap());
    assert!(!check2(&inst.sat_model, &inst.sat_formula, &cfg).unwrap());
}
