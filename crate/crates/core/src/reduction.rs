//! Reduction of three-valued checking to two two-valued checks.
//!
//! For a sentence in which every agent is bound exactly once, the agents
//! split into `E` (bound to existentially quantified variables) and `U`
//! (universally quantified). The satisfaction model lets `E` play must
//! actions and `U` may actions; the violation model swaps the roles. In
//! both, the remaining nondeterminism of the chosen transition relation is
//! made explicit by a fresh Nature agent whose action `d_k` picks the k-th
//! successor (clamped to the last one). Nature is quantified afresh at
//! every temporal operator: universally in the satisfaction formula, since
//! a ⊤ verdict must hold on every may path, and existentially in the
//! violation formula, since a ⊥ verdict needs one witnessing must path.
//!
//! Every atom `p` becomes `p_true` (labelled ⊤) and `p_false` (labelled ⊥).
//! Where the must relation is empty under the chosen actions, the
//! violation model moves to a sink `stuck` on which the atom `alive` fails,
//! and every temporal operator of the violation formula also demands
//! `G alive`, so only infinite must paths count as witnesses.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::bits::StateSet;
use crate::config::{Config, ReleaseMode};
use crate::error::{Error, Result};
use crate::eval::check2;
use crate::model::table::canonical_classes;
use crate::model::{save_concrete, ConcreteCgs, ProfileRow, ThreeCgs, TransitionMode};
use crate::syntax::{is_sentence, negate, Formula, FALSE_ATOM, TRUE_ATOM};
use crate::truth::TruthValue;

/// The two concrete checking problems derived from one three-valued one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitInstance {
    pub sat_model: ConcreteCgs,
    pub sat_formula: Formula,
    pub viol_model: ConcreteCgs,
    pub viol_formula: Formula,
    pub e_agents: BTreeSet<String>,
    pub u_agents: BTreeSet<String>,
    /// Name of the agent resolving nondeterminism.
    pub nature: String,
}

impl SplitInstance {
    /// Both checks as model documents with embedded formulas.
    pub fn to_json(&self) -> String {
        let doc = |g: &ConcreteCgs, phi: &Formula| {
            let mut v: serde_json::Value =
                serde_json::from_str(&save_concrete(g)).expect("saved models are valid JSON");
            v["formula"] = json!(phi.to_string());
            v
        };
        let out = json!({
            "e_agents": self.e_agents,
            "u_agents": self.u_agents,
            "nature": self.nature,
            "sat": doc(&self.sat_model, &self.sat_formula),
            "viol": doc(&self.viol_model, &self.viol_formula),
        });
        serde_json::to_string_pretty(&out).expect("JSON values serialise")
    }
}

/// Splits the agents bound in `phi` by the quantifier of their variable.
pub fn classify(phi: &Formula) -> Result<(BTreeSet<String>, BTreeSet<String>)> {
    let mut quant: BTreeMap<String, bool> = BTreeMap::new();
    let mut binding: BTreeMap<String, String> = BTreeMap::new();
    scan(phi, false, &mut quant, &mut binding)?;
    let mut e = BTreeSet::new();
    let mut u = BTreeSet::new();
    for (agent, var) in binding {
        match quant.get(&var) {
            Some(true) => e.insert(agent),
            Some(false) => u.insert(agent),
            None => return Err(Error::NotASentence(format!("variable `{var}` is not quantified"))),
        };
    }
    Ok((e, u))
}

fn scan(
    phi: &Formula,
    temporal: bool,
    quant: &mut BTreeMap<String, bool>,
    binding: &mut BTreeMap<String, String>,
) -> Result<()> {
    let unsupported = |m: String| Err(Error::UnsupportedFragment(m));
    match phi {
        Formula::Atom(_) | Formula::NegAtom(_) => Ok(()),
        Formula::And(a, b) | Formula::Or(a, b) => {
            scan(a, temporal, quant, binding)?;
            scan(b, temporal, quant, binding)
        }
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            if temporal {
                return unsupported(format!("quantifier over `{x}` under a temporal operator"));
            }
            if quant.insert(x.clone(), matches!(phi, Formula::Exists(..))).is_some() {
                return unsupported(format!("variable `{x}` is quantified twice"));
            }
            scan(b, temporal, quant, binding)
        }
        Formula::Bind(a, x, b) => {
            if temporal {
                return unsupported(format!("binding of `{a}` under a temporal operator"));
            }
            if binding.insert(a.clone(), x.clone()).is_some() {
                return unsupported(format!("agent `{a}` is bound twice"));
            }
            scan(b, temporal, quant, binding)
        }
        Formula::Next(b) => scan(b, true, quant, binding),
        Formula::Until(a, b) | Formula::Release(a, b) => {
            scan(a, true, quant, binding)?;
            scan(b, true, quant, binding)
        }
    }
}

/// Maps the two verdicts of a [`SplitInstance`] to a truth value.
pub fn combine(sat: bool, viol: bool) -> Result<TruthValue> {
    match (sat, viol) {
        (true, true) => Err(Error::InconsistentSplit),
        (true, false) => Ok(TruthValue::True),
        (false, true) => Ok(TruthValue::False),
        (false, false) => Ok(TruthValue::Undef),
    }
}

/// Which side of the split is being built.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Sat,
    Viol,
}

/// Builds the satisfaction and violation instances for `phi` on `g`.
pub fn split(g: &ThreeCgs, phi: &Formula, mode: ReleaseMode) -> Result<SplitInstance> {
    if !is_sentence(phi, g.agents()) {
        return Err(Error::NotASentence(phi.to_string()));
    }
    let (e_agents, u_agents) = classify(phi)?;
    for atom in phi.atoms() {
        if atom != TRUE_ATOM && atom != FALSE_ATOM && g.atom_index(&atom).is_none() {
            return Err(Error::UnknownAtom(atom));
        }
    }

    let mut taken: BTreeSet<String> = g.agents().iter().cloned().collect();
    phi.walk(&mut |f| match f {
        Formula::Exists(x, _) | Formula::Forall(x, _) | Formula::Bind(_, x, _) => {
            taken.insert(x.clone());
        }
        _ => {}
    });
    let nature = fresh("Nature", &taken);
    taken.insert(nature.clone());
    let names = Names {
        nature: nature.clone(),
        var_prefix: fresh_prefix("n", &taken),
        alive: fresh_atom("alive", g),
    };

    let must_any = g.must_mask().iter().any(|&m| m);
    let sat_model = side_model(g, &e_agents, Side::Sat, &names)?;
    let viol_model = side_model(g, &u_agents, Side::Viol, &names)?;
    let has_sink = viol_model.num_states() > g.num_states();

    let mut counter = 0;
    let sat_formula = close(
        translate(phi, Side::Sat, must_any, false, &names, &mut counter),
        &sat_model,
        &names,
        &mut counter,
    );
    let negated = negate(phi, mode);
    let viol_formula = close(
        translate(&negated, Side::Viol, must_any, has_sink, &names, &mut counter),
        &viol_model,
        &names,
        &mut counter,
    );
    Ok(SplitInstance {
        sat_model,
        sat_formula,
        viol_model,
        viol_formula,
        e_agents,
        u_agents,
        nature,
    })
}

/// Splits, runs both two-valued checks concurrently and combines them.
pub fn check_split(g: &ThreeCgs, phi: &Formula, cfg: &Config) -> Result<TruthValue> {
    let inst = split(g, phi, cfg.release)?;
    let (sat, viol) = rayon::join(
        || check2(&inst.sat_model, &inst.sat_formula, cfg),
        || check2(&inst.viol_model, &inst.viol_formula, cfg),
    );
    combine(sat?, viol?)
}

struct Names {
    nature: String,
    var_prefix: String,
    alive: String,
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// A prefix no taken identifier starts with, so numbered names built from
/// it never collide.
fn fresh_prefix(base: &str, taken: &BTreeSet<String>) -> String {
    let mut prefix = base.to_string();
    while taken.iter().any(|t| t.starts_with(&prefix)) {
        prefix.push('_');
    }
    prefix
}

fn fresh_atom(base: &str, g: &ThreeCgs) -> String {
    let taken: BTreeSet<String> = g
        .atoms()
        .iter()
        .flat_map(|p| [format!("{p}_true"), format!("{p}_false")])
        .collect();
    fresh(base, &taken)
}

fn literal(name: &str, positive: bool) -> Formula {
    if name == TRUE_ATOM || name == FALSE_ATOM {
        return if positive { Formula::atom(name) } else { Formula::neg_atom(name) };
    }
    Formula::Atom(format!("{name}_{}", if positive { "true" } else { "false" }))
}

fn translate(phi: &Formula, side: Side, must_any: bool, sink: bool, names: &Names, counter: &mut usize) -> Formula {
    let rec = |f: &Formula, counter: &mut usize| translate(f, side, must_any, sink, names, counter);
    let temporal = |body: Formula, counter: &mut usize| {
        *counter += 1;
        let var = format!("{}{}", names.var_prefix, counter);
        let body = if sink { Formula::and(body, Formula::always(Formula::atom(&names.alive))) } else { body };
        let bound = Formula::bind(&names.nature, &var, body);
        match side {
            Side::Sat => Formula::forall(&var, bound),
            Side::Viol => Formula::exists(&var, bound),
        }
    };
    match phi {
        Formula::Atom(p) => literal(p, true),
        Formula::NegAtom(p) => literal(p, false),
        Formula::And(a, b) => Formula::and(rec(a, counter), rec(b, counter)),
        Formula::Or(a, b) => Formula::or(rec(a, counter), rec(b, counter)),
        // existential variables range over must strategies, of which
        // there are none when no action is must
        Formula::Exists(_, _) if !must_any => Formula::ff(),
        Formula::Exists(x, b) => Formula::exists(x, rec(b, counter)),
        Formula::Forall(x, b) => Formula::forall(x, rec(b, counter)),
        Formula::Bind(a, x, b) => Formula::bind(a, x, rec(b, counter)),
        Formula::Next(b) => {
            let inner = Formula::next(rec(b, counter));
            temporal(inner, counter)
        }
        Formula::Until(a, b) => {
            let inner = Formula::until(rec(a, counter), rec(b, counter));
            temporal(inner, counter)
        }
        Formula::Release(a, b) => {
            let inner = Formula::release(rec(a, counter), rec(b, counter));
            temporal(inner, counter)
        }
    }
}

/// Binds every agent at the top when a literal outside every temporal
/// operator would otherwise leave Nature, or agents whose bindings were
/// dropped with an empty must quantifier, unbound. Literals do not depend
/// on strategies and every temporal operator rebinds all agents, so the
/// extra quantifier does not change the verdict.
fn close(phi: Formula, g: &ConcreteCgs, names: &Names, counter: &mut usize) -> Formula {
    if is_sentence(&phi, g.agents()) {
        return phi;
    }
    *counter += 1;
    let var = format!("{}{}", names.var_prefix, counter);
    let bound = g.agents().iter().rev().fold(phi, |f, a| Formula::bind(a, &var, f));
    Formula::forall(&var, bound)
}

/// Sorts `names` and returns the position of each original index.
fn sorted_positions(names: &[String]) -> (Vec<String>, Vec<usize>) {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut pos = vec![0; names.len()];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    (order.iter().map(|&i| names[i].clone()).collect(), pos)
}

/// One side of the split. `restricted` agents play must actions: any other
/// action behaves like their smallest must action. Nature playing an
/// original action behaves like `d_0`; an original agent playing a Nature
/// action behaves like its smallest allowed action.
fn side_model(g: &ThreeCgs, restricted: &BTreeSet<String>, side: Side, names: &Names) -> Result<ConcreteCgs> {
    let relation = match side {
        Side::Sat => TransitionMode::May,
        Side::Viol => TransitionMode::Must,
    };
    let must_set: Vec<usize> = (0..g.num_actions()).filter(|&a| g.is_must(a as u16)).collect();
    let degree = match relation {
        TransitionMode::May => g.max_may_degree(),
        TransitionMode::Must => g.max_must_degree(),
    }
    .max(1);
    let has_sink = relation == TransitionMode::Must
        && g.rows().iter().any(|r| r.cells().iter().any(|c| c.must.is_empty()));

    // states, with the sink appended
    let mut state_names = g.states().to_vec();
    if has_sink {
        let taken: BTreeSet<String> = state_names.iter().cloned().collect();
        state_names.push(fresh("stuck", &taken));
    }
    let (states, state_pos) = sorted_positions(&state_names);
    let sink = has_sink.then(|| state_pos[g.num_states()]);

    // actions: the may alphabet plus Nature's choices
    let taken: BTreeSet<String> = g.actions_may().iter().cloned().collect();
    let mut action_names = g.actions_may().to_vec();
    let nature_base = (0..degree).map(|d| format!("d{d}")).collect::<Vec<_>>();
    let suffix = {
        let mut s = String::new();
        while nature_base.iter().any(|d| taken.contains(&format!("{d}{s}"))) {
            s.push('_');
        }
        s
    };
    action_names.extend(nature_base.iter().map(|d| format!("{d}{suffix}")));
    let (actions, action_pos) = sorted_positions(&action_names);
    let orig_of_new: Vec<usize> = {
        let mut v = vec![0; actions.len()];
        for (orig, &p) in action_pos.iter().enumerate() {
            v[p] = orig;
        }
        v
    };
    let nature_choice = |act: usize| orig_of_new[act].checked_sub(g.num_actions());

    // agents, with Nature inserted
    let mut agent_names = g.agents().to_vec();
    agent_names.push(names.nature.clone());
    let (agents, agent_pos) = sorted_positions(&agent_names);
    let nature_idx = agent_pos[g.num_agents()];
    let orig_agent: Vec<Option<usize>> = {
        let mut v = vec![None; agents.len()];
        for (orig, &p) in agent_pos.iter().enumerate().take(g.num_agents()) {
            v[p] = Some(orig);
        }
        v
    };
    let allowed_default: Vec<u16> = (0..g.num_agents())
        .map(|a| {
            if restricted.contains(&g.agents()[a]) {
                must_set.first().copied().unwrap_or(0) as u16
            } else {
                0
            }
        })
        .collect();
    // the original action an original agent effectively plays
    let effective = |a: usize, act: usize| -> u16 {
        match nature_choice(act) {
            Some(_) => allowed_default[a],
            None => {
                let orig = orig_of_new[act] as u16;
                if restricted.contains(&g.agents()[a]) && !g.is_must(orig) {
                    allowed_default[a]
                } else {
                    orig
                }
            }
        }
    };

    let mut rows = vec![None; states.len()];
    for s in 0..g.num_states() {
        let row = g.row(s);
        let class_of: Vec<Vec<u16>> = (0..agents.len())
            .map(|a| match orig_agent[a] {
                None => {
                    let keys: Vec<usize> = (0..actions.len()).map(|act| nature_choice(act).unwrap_or(0)).collect();
                    canonical_classes(&keys)
                }
                Some(o) => {
                    let keys: Vec<u16> = (0..actions.len()).map(|act| row.class_of(o, effective(o, act))).collect();
                    canonical_classes(&keys)
                }
            })
            .collect();
        let mut orig_joint = vec![0u16; g.num_agents()];
        let new_row = ProfileRow::from_classes(class_of, |joint| {
            for (a, &act) in joint.iter().enumerate() {
                if let Some(o) = orig_agent[a] {
                    orig_joint[o] = effective(o, act as usize);
                }
            }
            let d = nature_choice(joint[nature_idx] as usize).unwrap_or(0);
            let succ = g.cell(s, &orig_joint).get(relation);
            match succ.get(d.min(succ.len().saturating_sub(1))) {
                Some(&t) => state_pos[t as usize] as u32,
                None => sink.expect("empty must cells imply a sink") as u32,
            }
        });
        rows[state_pos[s]] = Some(new_row);
    }
    if let Some(k) = sink {
        rows[k] = Some(ProfileRow::from_classes(vec![vec![0; actions.len()]; agents.len()], |_| k as u32));
    }
    let rows: Vec<ProfileRow<u32>> = rows.into_iter().map(|r| r.expect("every state has a row")).collect();

    // atoms
    let mut atom_sets: Vec<(String, StateSet)> = Vec::new();
    for (p, name) in g.atoms().iter().enumerate() {
        let (tt, ff) = g.atom_states(p);
        let remap = |set: &StateSet| StateSet::from_iter(states.len(), set.iter().map(|s| state_pos[s]));
        atom_sets.push((format!("{name}_true"), remap(tt)));
        atom_sets.push((format!("{name}_false"), remap(ff)));
    }
    if side == Side::Viol && has_sink {
        let alive = StateSet::from_iter(states.len(), (0..g.num_states()).map(|s| state_pos[s]));
        atom_sets.push((names.alive.clone(), alive));
    }
    atom_sets.sort_by(|a, b| a.0.cmp(&b.0));
    let (atoms, labels): (Vec<String>, Vec<StateSet>) = atom_sets.into_iter().unzip();

    ConcreteCgs::from_parts(agents, states, state_pos[g.initial()], actions, atoms, rows, labels)
}
