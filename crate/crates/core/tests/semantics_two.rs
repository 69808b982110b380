mod common;

use proptest::prelude::*;
use tristrat::bench::gen_scheduler;
use tristrat::bench::random::{random_body, random_concrete, random_sentence, rng, ModelShape};
use tristrat::eval::{check2, eval2, play, Lasso};
use tristrat::model::{Assignment, ConcreteCgs, MemorylessStrategy};
use tristrat::{negate, parse, Config, Error, Formula, ReleaseMode};

#[test]
fn play_folds_into_lasso() {
    let g = common::m1();
    let (alpha, beta) = (g.action_index("alpha").unwrap(), g.action_index("beta").unwrap());
    let chi = Assignment::new().with_agent("a", MemorylessStrategy::new(vec![beta, alpha]));
    assert_eq!(play(&g, &chi, 0).unwrap(), Lasso { prefix: vec![0], cycle: vec![1] });
    let chi = Assignment::new().with_agent("a", MemorylessStrategy::constant(2, alpha));
    assert_eq!(play(&g, &chi, 0).unwrap(), Lasso { prefix: vec![], cycle: vec![0] });
}

#[test]
fn play_needs_complete_assignment() {
    let g = common::m1();
    assert_eq!(play(&g, &Assignment::new(), 0), Err(Error::IncompleteAssignment));
}

#[test]
fn m1_examples() {
    let g = common::m1();
    let cfg = Config::default();
    let phi = parse("E x (a,x) F p").unwrap();
    assert!(eval2(&g, &phi, &Assignment::new(), 0, &cfg).unwrap());
    assert!(check2(&g, &phi, &cfg).unwrap());
    let phi = parse("A x (a,x) F p").unwrap();
    assert!(!eval2(&g, &phi, &Assignment::new(), 0, &cfg).unwrap());
    assert!(!check2(&g, &parse("A x (a,x) G !p").unwrap(), &cfg).unwrap());
    assert!(eval2(&g, &Formula::tt(), &Assignment::new(), 1, &cfg).unwrap());
}

#[test]
fn temporal_operator_needs_bound_agents() {
    let g = common::m1();
    let err = eval2(&g, &parse("F p").unwrap(), &Assignment::new(), 0, &Config::default());
    assert!(matches!(err, Err(Error::FreeUnderTemporal(_))));
    assert!(matches!(
        check2(&g, &parse("F p").unwrap(), &Config::default()),
        Err(Error::NotASentence(_))
    ));
}

#[test]
fn budget_is_enforced() {
    let g = common::m1();
    let cfg = Config { budget: 1, shortcuts: false, ..Config::default() };
    let phi = parse("A x (a,x) G !p").unwrap();
    assert_eq!(check2(&g, &phi, &cfg), Err(Error::BudgetExceeded(1)));
}

#[test]
fn scheduler_for_two_processes_is_safe() {
    let (g, _, phi) = gen_scheduler(2).unwrap();
    assert!(check2(&g, &phi, &Config::default()).unwrap());
}

#[test]
fn shortcuts_do_not_change_verdicts() {
    let (g, _, phi) = gen_scheduler(2).unwrap();
    let cfg = Config { shortcuts: false, ..Config::default() };
    assert!(check2(&g, &phi, &cfg).unwrap());
}

fn mode_of(standard: bool) -> ReleaseMode {
    if standard {
        ReleaseMode::Standard
    } else {
        ReleaseMode::Literal
    }
}

/// A random model, complete assignment and two quantifier-free bodies.
fn instance(seed: u64) -> (ConcreteCgs, Assignment, Formula, Formula) {
    let mut r = rng(seed);
    let g = random_concrete(&mut r, &ModelShape::default());
    let chi = common::random_assignment(&mut r, g.agents(), g.num_states(), g.num_actions());
    let a = random_body(&mut r, 3, g.atoms());
    let b = random_body(&mut r, 3, g.atoms());
    (g, chi, a, b)
}

/// Truth of `f` at every state of one traversal of the lasso from `s`.
fn along(g: &ConcreteCgs, chi: &Assignment, f: &Formula, l: &Lasso, cfg: &Config) -> Vec<bool> {
    l.prefix.iter().chain(&l.cycle).map(|&t| eval2(g, f, chi, t, cfg).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn semantic_negation_flips_verdicts(seed in any::<u64>(), standard in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_concrete(&mut r, &ModelShape::default());
        let phi = random_sentence(&mut r, 4, g.agents(), g.atoms());
        let mode = mode_of(standard);
        let cfg = Config::default().with_release(mode);
        prop_assert_eq!(check2(&g, &negate(&phi, mode), &cfg).unwrap(), !check2(&g, &phi, &cfg).unwrap());
    }

    #[test]
    fn dualize_is_negation_under_standard_release(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_concrete(&mut r, &ModelShape::default());
        let phi = random_sentence(&mut r, 4, g.agents(), g.atoms());
        let cfg = Config::default().with_release(ReleaseMode::Standard);
        prop_assert_eq!(check2(&g, &tristrat::dualize(&phi), &cfg).unwrap(), !check2(&g, &phi, &cfg).unwrap());
    }

    #[test]
    fn until_unfolds(seed in any::<u64>()) {
        let (g, chi, a, b) = instance(seed);
        let cfg = Config::default();
        let u = Formula::until(a.clone(), b.clone());
        let unfolded = Formula::or(b, Formula::and(a, Formula::next(u.clone())));
        for s in 0..g.num_states() {
            prop_assert_eq!(eval2(&g, &u, &chi, s, &cfg).unwrap(), eval2(&g, &unfolded, &chi, s, &cfg).unwrap());
        }
    }

    /// Release and until against a direct scan of one lasso traversal:
    /// positions past it repeat states already seen.
    #[test]
    fn temporal_operators_match_lasso_scan(seed in any::<u64>(), standard in any::<bool>()) {
        let (g, chi, a, b) = instance(seed);
        let mode = mode_of(standard);
        let cfg = Config::default().with_release(mode);
        for s in 0..g.num_states() {
            let l = play(&g, &chi, s).unwrap();
            prop_assert!(l.prefix.first().or(l.cycle.first()) == Some(&s));
            let (va, vb) = (along(&g, &chi, &a, &l, &cfg), along(&g, &chi, &b, &l, &cfg));
            let upto = |i: usize| if standard { i } else { i + 1 };
            let release = (0..va.len()).all(|i| vb[i] || (0..upto(i)).any(|j| va[j]));
            let until = (0..va.len()).any(|i| vb[i] && (0..i).all(|j| va[j]));
            let next = va.get(1).copied().unwrap_or(va[0]);
            prop_assert_eq!(eval2(&g, &Formula::release(a.clone(), b.clone()), &chi, s, &cfg).unwrap(), release);
            prop_assert_eq!(eval2(&g, &Formula::until(a.clone(), b.clone()), &chi, s, &cfg).unwrap(), until);
            prop_assert_eq!(eval2(&g, &Formula::next(a.clone()), &chi, s, &cfg).unwrap(), next);
        }
    }

    #[test]
    fn path_shortcuts_agree_with_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_concrete(&mut r, &ModelShape::default());
        let phi = random_sentence(&mut r, 4, g.agents(), g.atoms());
        let fast = Config::default();
        let slow = Config { shortcuts: false, ..Config::default() };
        prop_assert_eq!(check2(&g, &phi, &fast).unwrap(), check2(&g, &phi, &slow).unwrap());
    }
}
