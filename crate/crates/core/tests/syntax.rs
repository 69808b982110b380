mod common;

use proptest::prelude::*;
use tristrat::bench::scheduler_formula;
use tristrat::syntax::{FALSE_ATOM, TRUE_ATOM};
use tristrat::{dualize, free, is_sentence, negate, parse, Error, Formula, ReleaseMode};

fn p() -> Formula {
    Formula::atom("p")
}

fn q() -> Formula {
    Formula::atom("q")
}

#[test]
fn eventually_expands_to_until_true() {
    let f = parse("E x (a,x) F p").unwrap();
    let expected = Formula::exists("x", Formula::bind("a", "x", Formula::until(Formula::atom(TRUE_ATOM), p())));
    assert_eq!(f, expected);
}

#[test]
fn always_expands_to_release_false() {
    let f = parse("G p").unwrap();
    assert_eq!(f, Formula::release(Formula::atom(FALSE_ATOM), p()));
}

#[test]
fn literal_conjunction() {
    assert_eq!(parse("p & !p").unwrap(), Formula::and(p(), Formula::neg_atom("p")));
}

#[test]
fn scheduler_formula_for_two_processes() {
    let f = parse("A x A y1 A y2 (Arbiter,x)(P1,y1)(P2,y2) G !(rs1 & rs2)").unwrap();
    assert_eq!(f, scheduler_formula(2));
    assert!(is_sentence(&f, &["Arbiter", "P1", "P2"]));
}

#[test]
fn precedence_and_associativity() {
    // ! > X/F/G > U/R (right associative) > & > |
    assert_eq!(
        parse("p | q & p").unwrap(),
        Formula::or(p(), Formula::and(q(), p()))
    );
    assert_eq!(
        parse("p U q U p").unwrap(),
        Formula::until(p(), Formula::until(q(), p()))
    );
    assert_eq!(
        parse("X p U q").unwrap(),
        Formula::until(Formula::next(p()), q())
    );
    assert_eq!(
        parse("p U q & p").unwrap(),
        Formula::and(Formula::until(p(), q()), p())
    );
}

#[test]
fn negation_of_compound_is_dualized() {
    assert_eq!(
        parse("!(p U q)").unwrap(),
        Formula::release(Formula::neg_atom("p"), Formula::neg_atom("q"))
    );
    assert_eq!(parse("!!p").unwrap(), p());
}

#[test]
fn syntax_errors_carry_position() {
    match parse("p &\n  & q") {
        Err(Error::Syntax { line, column, .. }) => {
            assert_eq!(line, 2);
            assert_eq!(column, 3);
        }
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(parse("E x"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("(a,x"), Err(Error::Syntax { .. })));
}

#[test]
fn agent_and_variable_namespaces_are_disjoint() {
    assert!(matches!(parse("E a (a,a) p"), Err(Error::Namespace(_))));
    assert!(matches!(parse("E x (a,x) (x,y) p"), Err(Error::Namespace(_))));
}

#[test]
fn free_examples() {
    let fs = free(&Formula::until(p(), q()), &["a", "b"]);
    assert_eq!(fs.agents.len(), 2);
    assert!(fs.vars.is_empty());

    let fs = free(&Formula::bind("a", "x", Formula::next(p())), &["a", "b", "c"]);
    assert_eq!(fs.agents.iter().map(String::as_str).collect::<Vec<_>>(), ["b", "c"]);
    assert_eq!(fs.vars.iter().map(String::as_str).collect::<Vec<_>>(), ["x"]);

    let closed = Formula::exists("x", Formula::bind("a", "x", p()));
    assert!(free(&closed, &["a"]).is_empty());
}

#[test]
fn sentence_examples() {
    assert!(!is_sentence(&p(), &["a"]));
    assert!(!is_sentence(&Formula::forall("x", p()), &["a"]));
    assert!(is_sentence(&p(), &[] as &[&str]));
}

#[test]
fn dualize_examples() {
    assert_eq!(dualize(&p()), Formula::neg_atom("p"));
    assert_eq!(
        dualize(&Formula::exists("x", Formula::until(p(), q()))),
        Formula::forall("x", Formula::release(Formula::neg_atom("p"), Formula::neg_atom("q")))
    );
}

#[test]
fn literal_negation_of_until_and_release() {
    let (np, nq) = (Formula::neg_atom("p"), Formula::neg_atom("q"));
    assert_eq!(
        negate(&Formula::until(p(), q()), ReleaseMode::Literal),
        Formula::release(Formula::and(np.clone(), nq.clone()), nq.clone())
    );
    assert_eq!(
        negate(&Formula::release(p(), q()), ReleaseMode::Literal),
        Formula::until(np.clone(), Formula::and(np, nq))
    );
}

#[test]
fn printer_uses_sugar_and_minimal_parentheses() {
    let f = parse("A x (a,x) G !(p & q)").unwrap();
    assert_eq!(f.to_string(), "A x (a,x) G (!p | !q)");
    let g = Formula::until(Formula::until(p(), q()), Formula::atom("r"));
    assert_eq!(g.to_string(), "(p U q) U r");
    let h = Formula::and(p(), Formula::exists("x", q()));
    assert_eq!(h.to_string(), "p & (E x q)");
    assert_eq!(parse(&h.to_string()).unwrap(), h);
}

#[test]
fn more_syntax_errors() {
    for text in ["p q", "(p", "p $ q", "E true p"] {
        assert!(matches!(parse(text), Err(Error::Syntax { .. })), "{text}");
    }
    assert_eq!(parse("!X p").unwrap(), Formula::next(Formula::neg_atom("p")));
    assert_eq!(
        parse("p U q R p").unwrap(),
        Formula::until(p(), Formula::release(q(), p()))
    );
}

#[test]
fn comments_are_ignored() {
    assert_eq!(parse("# safety\np").unwrap(), p());
}

#[test]
fn temporal_operators_without_bindings_are_not_sentences() {
    assert!(!is_sentence(&Formula::forall("x", Formula::next(p())), &["a"]));
    assert!(!is_sentence(&Formula::eventually(p()), &["a"]));
}

#[test]
fn literal_and_standard_negation_differ_on_release() {
    let f = Formula::until(p(), Formula::release(q(), p()));
    assert_eq!(negate(&f, ReleaseMode::Standard), dualize(&f));
    assert_ne!(negate(&f, ReleaseMode::Literal), dualize(&f));
}

proptest! {
    #[test]
    fn dualize_is_an_involution(f in common::arb_formula()) {
        prop_assert_eq!(dualize(&dualize(&f)), f);
    }

    #[test]
    fn dualize_does_not_grow(f in common::arb_formula()) {
        prop_assert!(dualize(&f).size() <= f.size());
    }

    #[test]
    fn print_parse_round_trip(f in common::arb_formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn free_is_invariant_under_dualize(f in common::arb_formula()) {
        prop_assert_eq!(free(&dualize(&f), &["a", "b"]), free(&f, &["a", "b"]));
    }

    #[test]
    fn literal_negation_is_an_involution_up_to_semantics_shape(f in common::arb_formula()) {
        // negating twice keeps the set of free agents and variables
        let twice = negate(&negate(&f, ReleaseMode::Literal), ReleaseMode::Literal);
        prop_assert_eq!(free(&twice, &["a", "b"]), free(&f, &["a", "b"]));
        prop_assert_eq!(negate(&f, ReleaseMode::Standard), dualize(&f));
    }
}
