//! Acceptance criteria. Each criterion prints one PASS or FAIL line; the
//! process exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use tristrat::abstraction::abstract_model;
use tristrat::bench::random::{
    agent_names, atom_names, fragment_sentence, random_body, random_concrete, random_partition, random_sentence,
    random_three, rng, ModelShape,
};
use tristrat::bench::{compression_table, definedness, gen_scheduler, SchedulerPartition};
use tristrat::eval::{check2, check3, eval3_valuation, next_value, release_value, until_value, InducedGraphs};
use tristrat::model::{embed, Assignment, MemorylessStrategy};
use tristrat::oracle::{oracle_next, oracle_paths, oracle_release, oracle_until};
use tristrat::reduction::check_split;
use tristrat::{Config, Error, ReleaseMode, TruthValue};

const SEED: u64 = 0x5eed_2024;

const CONSERVATIVE_MODELS: usize = 200;
const CONSERVATIVE_SENTENCES: usize = 200;
const CONSERVATIVE_LIMIT: Duration = Duration::from_secs(5 * 60);

const PRESERVATION_INSTANCES: usize = 500;
const PRESERVATION_LIMIT: Duration = Duration::from_secs(10 * 60);

const ORACLE_EXHAUSTIVE_STATES: usize = 3;
const ORACLE_RANDOM_MODELS: usize = 1000;
const ORACLE_LIMIT: Duration = Duration::from_secs(10 * 60);

const REDUCTION_INSTANCES: usize = 300;
const REDUCTION_LIMIT: Duration = Duration::from_secs(10 * 60);

const SCHEDULER_CONCRETE: std::ops::RangeInclusive<usize> = 2..=5;
const SCHEDULER_ABSTRACT: std::ops::RangeInclusive<usize> = 2..=7;
const SCHEDULER_N7_LIMIT: Duration = Duration::from_secs(60);

const COMPRESSION_FROM: usize = 6;
const COMPRESSION_MAX_RATIO: f64 = 0.10;

const DEFINEDNESS_N: usize = 3;
const DEFINEDNESS_FORMULAS: usize = 10_000;
const DEFINEDNESS_DEPTHS: std::ops::RangeInclusive<usize> = 2..=5;
const DEFINEDNESS_BUDGET: u64 = 200_000;

const MAX_SENTENCE_DEPTH: usize = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn shape(r: &mut impl Rng, max_states: usize) -> ModelShape {
    ModelShape {
        max_states,
        max_actions: 3,
        agents: r.gen_range(1..=2),
        atoms: 2,
    }
}

fn random_assignment(r: &mut impl Rng, agents: &[String], states: usize, actions: usize) -> Assignment {
    agents.iter().fold(Assignment::new(), |chi, a| {
        let f = MemorylessStrategy::new((0..states).map(|_| r.gen_range(0..actions) as u16).collect());
        chi.with_agent(a, f)
    })
}

/// check3 on the embedding is defined and equals check2.
fn conservativeness(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED);
    let (mut checks, mut undef, mut mismatches) = (0, 0, 0);
    for _ in 0..CONSERVATIVE_MODELS {
        let sh = shape(&mut r, 5);
        let g = random_concrete(&mut r, &sh);
        let e = embed(&g);
        for _ in 0..CONSERVATIVE_SENTENCES {
            let depth = r.gen_range(1..=MAX_SENTENCE_DEPTH);
            let phi = random_sentence(&mut r, depth, g.agents(), g.atoms());
            let two = check2(&g, &phi, cfg);
            let three = check3(&e, &phi, cfg);
            match (two, three) {
                (Ok(b), Ok(v)) => {
                    checks += 1;
                    if !v.is_defined() {
                        undef += 1;
                    } else if v != TruthValue::from_bool(b) {
                        mismatches += 1;
                    }
                }
                (a, b) => return outcome(false, format!("check failed on {phi}: {a:?} / {b:?}")),
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        undef == 0 && mismatches == 0 && elapsed < CONSERVATIVE_LIMIT,
        format!("{checks} checks, {undef} undefined, {mismatches} mismatches, {:.1}s", elapsed.as_secs_f64()),
    )
}

/// Defined abstract verdicts agree with the concrete verdict.
fn preservation(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 1);
    let (mut undef, mut violations) = (0, 0);
    for _ in 0..PRESERVATION_INSTANCES {
        let sh = shape(&mut r, 6);
        let g = random_concrete(&mut r, &sh);
        let part = random_partition(&mut r, g.num_states());
        let depth = r.gen_range(1..=MAX_SENTENCE_DEPTH);
        let phi = random_sentence(&mut r, depth, g.agents(), g.atoms());
        let (a, _) = match abstract_model(&g, &part) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("abstraction failed: {e}")),
        };
        match (check2(&g, &phi, cfg), check3(&a, &phi, cfg)) {
            (Ok(b), Ok(v)) => match v.as_bool() {
                None => undef += 1,
                Some(x) if x != b => violations += 1,
                Some(_) => {}
            },
            (x, y) => return outcome(false, format!("check failed on {phi}: {x:?} / {y:?}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && elapsed < PRESERVATION_LIMIT,
        format!(
            "{PRESERVATION_INSTANCES} instances, {violations} violations, undefined rate {:.1}%, {:.1}s",
            100.0 * undef as f64 / PRESERVATION_INSTANCES as f64,
            elapsed.as_secs_f64()
        ),
    )
}

/// Every per-state (may, must) cell over `n` states: a nonempty may set
/// and a must subset of it.
fn cells(n: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let bits = |m: u32| (0..n as u32).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>();
    let mut out = Vec::new();
    for may in 1u32..(1 << n) {
        let mut sub = may;
        loop {
            out.push((bits(may), bits(sub)));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & may;
        }
    }
    out
}

fn valuations(n: usize) -> Vec<Vec<TruthValue>> {
    use TruthValue::*;
    (0..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let v = [True, False, Undef][k % 3];
                    k /= 3;
                    v
                })
                .collect()
        })
        .collect()
}

/// Compares the fixpoint clauses with the path oracle on every induced
/// graph over `n` states and every pair of operand valuations. A strategy
/// profile of any model with at most `n` states induces one of these
/// graphs, so this covers every such model and profile.
fn exhaustive_clauses(n: usize) -> (u64, u64) {
    let cs = cells(n);
    let vals = valuations(n);
    let (mut cases, mut mismatches) = (0u64, 0u64);
    for code in 0..cs.len().pow(n as u32) {
        let (mut may, mut must, mut k) = (Vec::new(), Vec::new(), code);
        for _ in 0..n {
            let (a, b) = &cs[k % cs.len()];
            k /= cs.len();
            may.push(a.clone());
            must.push(b.clone());
        }
        let ig = InducedGraphs::from_successors(may, must);
        for a in &vals {
            for s in 0..n {
                cases += 1;
                mismatches += (next_value(&ig, a, s) != oracle_next(&ig, a, s)) as u64;
            }
            for b in &vals {
                let u = until_value(&ig, a, b);
                let rl = release_value(&ig, a, b, ReleaseMode::Literal);
                let rs = release_value(&ig, a, b, ReleaseMode::Standard);
                for s in 0..n {
                    cases += 3;
                    mismatches += (u[s] != oracle_until(&ig, a, b, s)) as u64;
                    mismatches += (rl[s] != oracle_release(&ig, a, b, s, ReleaseMode::Literal)) as u64;
                    mismatches += (rs[s] != oracle_release(&ig, a, b, s, ReleaseMode::Standard)) as u64;
                }
            }
        }
    }
    (cases, mismatches)
}

/// Fixpoint valuations agree with the path oracle.
fn fixpoint_oracle(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let (mut cases, mut mismatches) = (0u64, 0u64);
    for n in 1..=ORACLE_EXHAUSTIVE_STATES {
        let (c, m) = exhaustive_clauses(n);
        cases += c;
        mismatches += m;
    }
    let mut r = rng(SEED + 2);
    let mut random_cases = 0u64;
    for _ in 0..ORACLE_RANDOM_MODELS {
        let sh = shape(&mut r, 5);
        let g = random_three(&mut r, &sh);
        let chi = random_assignment(&mut r, g.agents(), g.num_states(), g.num_actions());
        let depth = r.gen_range(1..=MAX_SENTENCE_DEPTH);
        let body = random_body(&mut r, depth, g.atoms());
        for mode in [ReleaseMode::Literal, ReleaseMode::Standard] {
            let cfg = cfg.clone().with_release(mode);
            let v = match eval3_valuation(&g, &body, &chi, &cfg) {
                Ok(v) => v,
                Err(e) => return outcome(false, format!("evaluation failed on {body}: {e}")),
            };
            for (s, &value) in v.iter().enumerate() {
                random_cases += 1;
                match oracle_paths(&g, &chi, s, &body, mode) {
                    Ok(o) => mismatches += (o != value) as u64,
                    Err(e) => return outcome(false, format!("oracle failed on {body}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < ORACLE_LIMIT,
        format!(
            "{cases} exhaustive and {random_cases} random cases, {mismatches} mismatches, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// The split pipeline agrees with direct three-valued checking.
fn reduction(cfg: &Config) -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 3);
    let (mut mismatches, mut inconsistent) = (0, 0);
    for i in 0..REDUCTION_INSTANCES {
        let sh = shape(&mut r, 5);
        let g = random_three(&mut r, &sh);
        let depth = r.gen_range(1..=MAX_SENTENCE_DEPTH);
        let phi = fragment_sentence(&mut r, depth, &agent_names(sh.agents), &atom_names(sh.atoms));
        let mode = if i % 2 == 0 { ReleaseMode::Literal } else { ReleaseMode::Standard };
        let cfg = cfg.clone().with_release(mode);
        let direct = match check3(&g, &phi, &cfg) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("direct check failed on {phi}: {e}")),
        };
        match check_split(&g, &phi, &cfg) {
            Ok(v) => mismatches += (v != direct) as usize,
            Err(Error::InconsistentSplit) => inconsistent += 1,
            Err(e) => return outcome(false, format!("split check failed on {phi}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && inconsistent == 0 && elapsed < REDUCTION_LIMIT,
        format!(
            "{REDUCTION_INSTANCES} instances, {mismatches} mismatches, {inconsistent} inconsistent, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// The mutual-exclusion property holds on the concrete and abstract
/// scheduler, and the largest abstract instance checks in time.
fn scheduler(cfg: &Config) -> Outcome {
    let mut verdicts = Vec::new();
    for n in SCHEDULER_CONCRETE {
        match gen_scheduler(n).and_then(|(g, _, phi)| check2(&g, &phi, cfg)) {
            Ok(b) => verdicts.push((format!("concrete n={n}"), b)),
            Err(e) => return outcome(false, format!("concrete n={n}: {e}")),
        }
    }
    let mut n7 = Duration::ZERO;
    for n in SCHEDULER_ABSTRACT {
        let start = Instant::now();
        let v = gen_scheduler(n).and_then(|(g, part, phi)| {
            let (a, _) = abstract_model(&g, &part)?;
            check3(&a, &phi, cfg)
        });
        if n == *SCHEDULER_ABSTRACT.end() {
            n7 = start.elapsed();
        }
        match v {
            Ok(v) => verdicts.push((format!("abstract n={n}"), v == TruthValue::True)),
            Err(e) => return outcome(false, format!("abstract n={n}: {e}")),
        }
    }
    let failed: Vec<&str> = verdicts.iter().filter(|(_, ok)| !ok).map(|(k, _)| k.as_str()).collect();
    outcome(
        failed.is_empty() && n7 < SCHEDULER_N7_LIMIT,
        format!(
            "{} verdicts True, {} not True {failed:?}, abstract n={} end to end in {:.2}s",
            verdicts.len() - failed.len(),
            failed.len(),
            SCHEDULER_ABSTRACT.end(),
            n7.as_secs_f64()
        ),
    )
}

/// Abstract states and transitions are at most a tenth of the concrete
/// counts for the larger instances.
fn compression(cfg: &Config) -> Outcome {
    let rows = match compression_table(COMPRESSION_FROM..=*SCHEDULER_ABSTRACT.end(), SchedulerPartition::WaitingCluster, cfg) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for row in &rows {
        let states = row.abstract_states as f64 / row.concrete_states as f64;
        let transitions = (row.may_transitions + row.must_transitions) as f64 / row.concrete_transitions as f64;
        pass &= states <= COMPRESSION_MAX_RATIO && transitions <= COMPRESSION_MAX_RATIO;
        parts.push(format!(
            "n={}: states {}/{} ({:.2}%), transitions {}/{} ({:.2}%)",
            row.n,
            row.abstract_states,
            row.concrete_states,
            100.0 * states,
            row.may_transitions + row.must_transitions,
            row.concrete_transitions,
            100.0 * transitions
        ));
    }
    outcome(pass, parts.join("; "))
}

/// The definedness experiment completes and its counts are consistent.
fn definedness_report(cfg: &Config) -> Outcome {
    let cfg = Config { budget: DEFINEDNESS_BUDGET, ..cfg.clone() };
    match definedness(DEFINEDNESS_N, DEFINEDNESS_FORMULAS, DEFINEDNESS_DEPTHS, SEED, &cfg) {
        Ok(rep) => {
            let completed = rep.true_count + rep.false_count + rep.undef_count;
            let integral = completed + rep.budget_exceeded == rep.formulas
                && (0.0..=1.0).contains(&rep.defined_rate)
                && rep.formulas == DEFINEDNESS_FORMULAS;
            outcome(
                integral,
                format!(
                    "defined {:.2}% over {completed} completed checks ({} true, {} false, {} undefined, {} over budget), reference {:.0}%, {:.1}s",
                    100.0 * rep.defined_rate,
                    rep.true_count,
                    rep.false_count,
                    rep.undef_count,
                    rep.budget_exceeded,
                    100.0 * rep.reference_rate,
                    rep.elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let criteria: [(&str, fn(&Config) -> Outcome); 7] = [
        ("1 conservativeness", conservativeness),
        ("2 preservation", preservation),
        ("3 fixpoint vs oracle", fixpoint_oracle),
        ("4 reduction consistency", reduction),
        ("5 scheduler end to end", scheduler),
        ("6 compression", compression),
        ("7 definedness report", definedness_report),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let o = run(&cfg);
        failures += !o.pass as usize;
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
