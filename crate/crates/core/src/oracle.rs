//! Brute-force path oracle for the three-valued temporal clauses.
//!
//! Each clause is evaluated as written, over explicitly enumerated plays:
//! the ⊤ clauses over all simple lassos of the may graph and the ⊥ clauses
//! over all simple lassos of the must graph. On a finite graph with
//! state-based labels a path property of these shapes has a witness or
//! counterexample that is such a lasso, so the enumeration is exact. The
//! oracle shares no code with the fixpoint evaluator.

use crate::config::ReleaseMode;
use crate::error::{Error, Result};
use crate::eval::{InducedGraphs, Lasso, Valuation};
use crate::model::{Assignment, ThreeCgs};
use crate::syntax::{Formula, FALSE_ATOM, TRUE_ATOM};
use crate::truth::{tv_and, tv_or, TruthValue};

/// Largest model the oracle accepts.
pub const ORACLE_MAX_STATES: usize = 6;

/// All lassos from `s` whose states are pairwise distinct.
pub fn simple_lassos(succ: &[Vec<u32>], s: usize) -> Vec<Lasso> {
    fn go(succ: &[Vec<u32>], path: &mut Vec<usize>, out: &mut Vec<Lasso>) {
        let last = *path.last().unwrap();
        for &t in &succ[last] {
            let t = t as usize;
            if let Some(k) = path.iter().position(|&x| x == t) {
                out.push(Lasso {
                    prefix: path[..k].to_vec(),
                    cycle: path[k..].to_vec(),
                });
            } else {
                path.push(t);
                go(succ, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(succ, &mut vec![s], &mut out);
    out
}

/// The states of one traversal of the lasso.
fn positions(l: &Lasso) -> Vec<usize> {
    l.prefix.iter().chain(&l.cycle).copied().collect()
}

fn is(v: &[TruthValue], s: usize, t: TruthValue) -> bool {
    v[s] == t
}

fn decide(top: bool, bot: bool) -> TruthValue {
    match (top, bot) {
        (true, _) => TruthValue::True,
        (false, true) => TruthValue::False,
        (false, false) => TruthValue::Undef,
    }
}

pub fn oracle_next(ig: &InducedGraphs, sub: &[TruthValue], s: usize) -> TruthValue {
    let top = simple_lassos(&ig.may_succ, s)
        .iter()
        .all(|l| is(sub, l.at(1), TruthValue::True));
    let bot = simple_lassos(&ig.must_succ, s)
        .iter()
        .any(|l| is(sub, l.at(1), TruthValue::False));
    decide(top, bot)
}

pub fn oracle_until(ig: &InducedGraphs, a: &[TruthValue], b: &[TruthValue], s: usize) -> TruthValue {
    use TruthValue::{False, True};
    // some i with b ⊤ at i and a ⊤ at every j < i
    let top = simple_lassos(&ig.may_succ, s).iter().all(|l| {
        let p = positions(l);
        (0..p.len()).any(|i| is(b, p[i], True) && (0..i).all(|j| is(a, p[j], True)))
    });
    // every i has b ⊥ at i or a ⊥ at some j < i
    let bot = simple_lassos(&ig.must_succ, s).iter().any(|l| {
        let p = positions(l);
        (0..p.len()).all(|i| is(b, p[i], False) || (0..i).any(|j| is(a, p[j], False)))
    });
    decide(top, bot)
}

pub fn oracle_release(
    ig: &InducedGraphs,
    a: &[TruthValue],
    b: &[TruthValue],
    s: usize,
    mode: ReleaseMode,
) -> TruthValue {
    use TruthValue::{False, True};
    let upto = |i: usize| match mode {
        ReleaseMode::Literal => i + 1,
        ReleaseMode::Standard => i,
    };
    // every i has b ⊤ at i or a ⊤ at some j ≤ i (j < i in standard mode)
    let top = simple_lassos(&ig.may_succ, s).iter().all(|l| {
        let p = positions(l);
        (0..p.len()).all(|i| is(b, p[i], True) || (0..upto(i)).any(|j| is(a, p[j], True)))
    });
    // some i has b ⊥ at i and a ⊥ at every j ≤ i (j < i in standard mode)
    let bot = simple_lassos(&ig.must_succ, s).iter().any(|l| {
        let p = positions(l);
        (0..p.len()).any(|i| is(b, p[i], False) && (0..upto(i)).all(|j| is(a, p[j], False)))
    });
    decide(top, bot)
}

/// Valuation of a quantifier-free, binding-free formula over all states of
/// the induced graphs, given atom labels.
pub fn oracle_valuation(
    g: &ThreeCgs,
    ig: &InducedGraphs,
    body: &Formula,
    mode: ReleaseMode,
) -> Result<Valuation> {
    let n = ig.num_states();
    let all = |f: &dyn Fn(usize) -> TruthValue| (0..n).map(f).collect::<Valuation>();
    Ok(match body {
        Formula::Atom(p) | Formula::NegAtom(p) => {
            let neg = matches!(body, Formula::NegAtom(_));
            let v: Valuation = if p == TRUE_ATOM || p == FALSE_ATOM {
                vec![TruthValue::from_bool(p == TRUE_ATOM); n]
            } else {
                let atom = g.atom_index(p).ok_or_else(|| Error::UnknownAtom(p.clone()))?;
                (0..n).map(|s| g.label(s, atom)).collect()
            };
            if neg {
                v.into_iter().map(TruthValue::not).collect()
            } else {
                v
            }
        }
        Formula::And(a, b) => {
            let (va, vb) = (oracle_valuation(g, ig, a, mode)?, oracle_valuation(g, ig, b, mode)?);
            all(&|s| tv_and(va[s], vb[s]))
        }
        Formula::Or(a, b) => {
            let (va, vb) = (oracle_valuation(g, ig, a, mode)?, oracle_valuation(g, ig, b, mode)?);
            all(&|s| tv_or(va[s], vb[s]))
        }
        Formula::Next(a) => {
            let va = oracle_valuation(g, ig, a, mode)?;
            all(&|s| oracle_next(ig, &va, s))
        }
        Formula::Until(a, b) => {
            let (va, vb) = (oracle_valuation(g, ig, a, mode)?, oracle_valuation(g, ig, b, mode)?);
            all(&|s| oracle_until(ig, &va, &vb, s))
        }
        Formula::Release(a, b) => {
            let (va, vb) = (oracle_valuation(g, ig, a, mode)?, oracle_valuation(g, ig, b, mode)?);
            all(&|s| oracle_release(ig, &va, &vb, s, mode))
        }
        Formula::Exists(..) | Formula::Forall(..) | Formula::Bind(..) => {
            return Err(Error::UnsupportedFragment(
                "the path oracle takes quantifier- and binding-free formulas".into(),
            ))
        }
    })
}

/// Value of a quantifier-free body at `s` under a complete assignment,
/// computed by enumerating plays.
pub fn oracle_paths(
    g: &ThreeCgs,
    chi: &Assignment,
    s: usize,
    body: &Formula,
    mode: ReleaseMode,
) -> Result<TruthValue> {
    if g.num_states() > ORACLE_MAX_STATES {
        return Err(Error::TooLarge(format!(
            "path oracle handles at most {ORACLE_MAX_STATES} states, model has {}",
            g.num_states()
        )));
    }
    if s >= g.num_states() {
        return Err(Error::UnknownState(s.to_string()));
    }
    let ig = InducedGraphs::new(g, chi)?;
    Ok(oracle_valuation(g, &ig, body, mode)?[s])
}
