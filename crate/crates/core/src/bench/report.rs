//! Run records, the scheduler compression table and the definedness
//! experiment.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::abstraction::{abstract_model, secs, AbstractionReport};
use crate::bench::random::gen_random_formula;
use crate::bench::scheduler::{atom_name, gen_scheduler_with, SchedulerPartition};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::check3;
use crate::truth::TruthValue;

/// Outcome of one `check` run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub verdict: TruthValue,
    pub engine: String,
    pub formula: String,
    /// Where the model came from, e.g. a file path.
    pub model: String,
    #[serde(serialize_with = "opt_secs")]
    pub abstraction_time: Option<Duration>,
    #[serde(serialize_with = "secs")]
    pub verification_time: Duration,
    pub abstraction: Option<AbstractionReport>,
}

fn opt_secs<S: serde::Serializer>(d: &Option<Duration>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_f64(d.as_secs_f64()),
        None => s.serialize_none(),
    }
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict            {}", self.verdict);
        let _ = writeln!(out, "engine             {}", self.engine);
        let _ = writeln!(out, "model              {}", self.model);
        let _ = writeln!(out, "formula            {}", self.formula);
        if let Some(t) = self.abstraction_time {
            let _ = writeln!(out, "abstraction time   {:.6} s", t.as_secs_f64());
        }
        let _ = writeln!(out, "verification time  {:.6} s", self.verification_time.as_secs_f64());
        if let Some(a) = &self.abstraction {
            let _ = writeln!(out, "concrete           {} states, {} transitions", a.concrete_states, a.concrete_transitions);
            let _ = writeln!(
                out,
                "abstract           {} states, {} may, {} must transitions",
                a.abstract_states, a.may_transitions, a.must_transitions
            );
            let _ = writeln!(
                out,
                "must actions       {{{}}}{}",
                a.must_action_set.join(", "),
                if a.heuristic { " (greedy)" } else { "" }
            );
        }
        out
    }
}

/// One row of the compression table.
#[derive(Clone, Debug, Serialize)]
pub struct CompressionRow {
    pub n: usize,
    pub concrete_states: usize,
    pub concrete_transitions: usize,
    pub abstract_states: usize,
    pub may_transitions: usize,
    pub must_transitions: usize,
    /// Share of states removed, in percent.
    pub state_reduction: f64,
    /// Share of transitions removed, counting may and must, in percent.
    pub transition_reduction: f64,
    #[serde(serialize_with = "secs")]
    pub generation_time: Duration,
    #[serde(serialize_with = "secs")]
    pub abstraction_time: Duration,
    #[serde(serialize_with = "secs")]
    pub verification_time: Duration,
    pub verdict: TruthValue,
}

/// Generates, abstracts and checks the scheduler for every `n` in `range`.
pub fn compression_table(
    range: std::ops::RangeInclusive<usize>,
    kind: SchedulerPartition,
    cfg: &Config,
) -> Result<Vec<CompressionRow>> {
    range
        .map(|n| {
            let start = Instant::now();
            let (g, part, phi) = gen_scheduler_with(n, kind)?;
            let generation_time = start.elapsed();
            let (a, rep) = abstract_model(&g, &part)?;
            let start = Instant::now();
            let verdict = check3(&a, &phi, cfg)?;
            let verification_time = start.elapsed();
            let reduction = |small: usize, big: usize| 100.0 * (1.0 - small as f64 / big as f64);
            Ok(CompressionRow {
                n,
                concrete_states: rep.concrete_states,
                concrete_transitions: rep.concrete_transitions,
                abstract_states: rep.abstract_states,
                may_transitions: rep.may_transitions,
                must_transitions: rep.must_transitions,
                state_reduction: reduction(rep.abstract_states, rep.concrete_states),
                transition_reduction: reduction(rep.may_transitions + rep.must_transitions, rep.concrete_transitions),
                generation_time,
                abstraction_time: rep.build_time,
                verification_time,
                verdict,
            })
        })
        .collect()
}

/// The compression table as aligned text.
pub fn compression_text(rows: &[CompressionRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3} {:>8} {:>11} {:>8} {:>5} {:>5} {:>8} {:>8} {:>10} {:>10} {:>8}",
        "n", "states", "transitions", "abstract", "may", "must", "states%", "trans%", "abs [s]", "ver [s]", "verdict"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3} {:>8} {:>11} {:>8} {:>5} {:>5} {:>8.2} {:>8.2} {:>10.4} {:>10.4} {:>8}",
            r.n,
            r.concrete_states,
            r.concrete_transitions,
            r.abstract_states,
            r.may_transitions,
            r.must_transitions,
            r.state_reduction,
            r.transition_reduction,
            r.abstraction_time.as_secs_f64(),
            r.verification_time.as_secs_f64(),
            r.verdict.as_str(),
        );
    }
    out
}

/// Defined-verdict rate reported for the scheduler in the original
/// experiment, printed for reference only.
pub const REFERENCE_DEFINED_RATE: f64 = 0.83;

/// Result of checking a random formula corpus on the abstract scheduler.
#[derive(Clone, Debug, Serialize)]
pub struct DefinednessReport {
    pub n: usize,
    pub formulas: usize,
    pub min_depth: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub budget_per_formula: u64,
    pub true_count: usize,
    pub false_count: usize,
    pub undef_count: usize,
    /// Checks that ran out of budget; they count towards no verdict.
    pub budget_exceeded: usize,
    /// Defined verdicts over completed checks.
    pub defined_rate: f64,
    pub reference_rate: f64,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

impl DefinednessReport {
    pub fn to_text(&self) -> String {
        format!(
            "definedness on abstract scheduler n={}: {} formulas (depth {}..={}, seed {})\n\
             true {}  false {}  undef {}  budget exceeded {}\n\
             defined rate {:.2}% of completed checks (reference {:.0}%), {:.2} s\n",
            self.n,
            self.formulas,
            self.min_depth,
            self.max_depth,
            self.seed,
            self.true_count,
            self.false_count,
            self.undef_count,
            self.budget_exceeded,
            100.0 * self.defined_rate,
            100.0 * self.reference_rate,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Checks `count` random fragment sentences over the scheduler's agents
/// and atoms on its abstraction. Formula `i` uses seed `seed + i` and a
/// depth cycling through `depths`; checks run in parallel.
pub fn definedness(
    n: usize,
    count: usize,
    depths: std::ops::RangeInclusive<usize>,
    seed: u64,
    cfg: &Config,
) -> Result<DefinednessReport> {
    let start = Instant::now();
    let (g, part, _) = gen_scheduler_with(n, SchedulerPartition::WaitingCluster)?;
    let (a, _) = abstract_model(&g, &part)?;
    let agents = a.agents().to_vec();
    let atoms: Vec<String> = (1..=n).map(atom_name).collect();
    let (lo, hi) = (*depths.start(), *depths.end());
    let span = hi.saturating_sub(lo) + 1;
    let outcomes: Vec<Result<TruthValue>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let phi = gen_random_formula(seed.wrapping_add(i as u64), lo + i % span, &agents, &atoms);
            check3(&a, &phi, cfg)
        })
        .collect();
    let mut report = DefinednessReport {
        n,
        formulas: count,
        min_depth: lo,
        max_depth: hi,
        seed,
        budget_per_formula: cfg.budget,
        true_count: 0,
        false_count: 0,
        undef_count: 0,
        budget_exceeded: 0,
        defined_rate: 0.0,
        reference_rate: REFERENCE_DEFINED_RATE,
        elapsed: Duration::ZERO,
    };
    for o in outcomes {
        match o {
            Ok(TruthValue::True) => report.true_count += 1,
            Ok(TruthValue::False) => report.false_count += 1,
            Ok(TruthValue::Undef) => report.undef_count += 1,
            Err(Error::BudgetExceeded(_)) | Err(Error::Timeout) => report.budget_exceeded += 1,
            Err(e) => return Err(e),
        }
    }
    let completed = report.true_count + report.false_count + report.undef_count;
    if completed > 0 {
        report.defined_rate = (report.true_count + report.false_count) as f64 / completed as f64;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
