//! The `tristrat-cgs/1` JSON document format.
//!
//! ```json
//! {
//!   "schema": "tristrat-cgs/1",
//!   "kind": "concrete",
//!   "agents": ["a"],
//!   "states": ["s0", "s1"],
//!   "initial": "s0",
//!   "actions": ["alpha", "beta"],
//!   "atoms": ["p"],
//!   "transitions": [
//!     {"state": "s0", "action_profile": ["alpha"], "successors": ["s0"]},
//!     {"state": "s0", "action_profile": ["beta"], "successors": ["s1"]},
//!     {"state": "s1", "action_profile": ["*"], "successors": ["s1"]}
//!   ],
//!   "labels": {"s0": {"p": "false"}, "s1": {"p": "true"}}
//! }
//! ```
//!
//! Three-valued documents use `"kind": "three"`, `actions_may`,
//! `actions_must`, `transitions_may` and `transitions_must` (a missing must
//! entry means no must successor). An `action_profile` lists one element
//! per agent in sorted agent order, or is an object keyed by agent name;
//! each element is an action name, `"*"` for any action, or a list of
//! action names. Labels not mentioned default to `"false"`. The optional
//! `partition` (list of state lists) and `formula` keys are carried along
//! for the command-line front end.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::builder::{ModelBuilder, Pattern, Rule};
use crate::model::concrete::ConcreteCgs;
use crate::model::table::ProfileRow;
use crate::model::three::{embed, ThreeCgs};
use crate::truth::TruthValue;

pub const SCHEMA: &str = "tristrat-cgs/1";

#[derive(Serialize, Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    kind: String,
    agents: Vec<String>,
    states: Vec<String>,
    initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    actions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    actions_may: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    actions_must: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions_may: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions_must: Option<Vec<Entry>>,
    #[serde(default)]
    labels: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Entry {
    state: String,
    action_profile: Value,
    successors: Successors,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(untagged)]
enum Successors {
    Many(Vec<String>),
    One(String),
}

/// Either kind of model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Concrete(ConcreteCgs),
    Three(ThreeCgs),
}

impl Model {
    /// The model as a three-valued structure (concrete models are embedded).
    pub fn to_three(&self) -> ThreeCgs {
        match self {
            Model::Concrete(g) => embed(g),
            Model::Three(g) => g.clone(),
        }
    }
}

/// A loaded document: the model plus the optional partition and formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDocument {
    pub model: Model,
    pub partition: Option<Vec<Vec<String>>>,
    pub formula: Option<String>,
}

impl ModelDocument {
    pub fn to_json(&self) -> String {
        let mut doc = match &self.model {
            Model::Concrete(g) => concrete_doc(g),
            Model::Three(g) => three_doc(g),
        };
        doc.partition = self.partition.clone();
        doc.formula = self.formula.clone();
        serde_json::to_string_pretty(&doc).expect("documents always serialize")
    }
}

pub fn load_document(bytes: &[u8]) -> Result<ModelDocument> {
    let doc: Doc = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(schema) = &doc.schema {
        if schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema '{schema}', expected '{SCHEMA}'")));
        }
    }
    let model = match doc.kind.as_str() {
        "concrete" => Model::Concrete(concrete_builder(&doc)?.build_concrete()?),
        "three" => Model::Three(three_builder(&doc)?.build_three()?),
        other => return Err(Error::Parse(format!("unknown kind '{other}'"))),
    };
    Ok(ModelDocument {
        model,
        partition: doc.partition,
        formula: doc.formula,
    })
}

pub fn load_concrete(bytes: &[u8]) -> Result<ConcreteCgs> {
    match load_document(bytes)?.model {
        Model::Concrete(g) => Ok(g),
        Model::Three(_) => Err(Error::Validation("expected a concrete model".into())),
    }
}

/// Loads a three-valued model; concrete documents are embedded.
pub fn load_three(bytes: &[u8]) -> Result<ThreeCgs> {
    Ok(load_document(bytes)?.model.to_three())
}

pub fn save_concrete(g: &ConcreteCgs) -> String {
    serde_json::to_string_pretty(&concrete_doc(g)).expect("documents always serialize")
}

pub fn save_three(g: &ThreeCgs) -> String {
    serde_json::to_string_pretty(&three_doc(g)).expect("documents always serialize")
}

fn unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Validation(format!("duplicate {what} '{n}'")));
        }
    }
    Ok(())
}

fn common_builder(doc: &Doc, actions: &[String]) -> Result<(ModelBuilder, Vec<String>)> {
    unique("agent", &doc.agents)?;
    unique("state", &doc.states)?;
    unique("action", actions)?;
    let mut b = ModelBuilder::new();
    for a in &doc.agents {
        b.agent(a);
    }
    for s in &doc.states {
        b.state(s);
    }
    for a in actions {
        b.action(a);
    }
    for p in doc.atoms.iter().flatten() {
        b.atom(p);
    }
    b.initial(&doc.initial);
    for (state, m) in &doc.labels {
        for (atom, v) in m {
            let tv = match v.as_str() {
                "true" => TruthValue::True,
                "false" => TruthValue::False,
                "undef" => TruthValue::Undef,
                other => {
                    return Err(Error::Parse(format!(
                        "label of {atom} at {state}: '{other}' is not true/false/undef"
                    )))
                }
            };
            b.label(state, atom, tv);
        }
    }
    let mut agents = doc.agents.clone();
    agents.sort();
    Ok((b, agents))
}

fn concrete_builder(doc: &Doc) -> Result<ModelBuilder> {
    let actions = doc
        .actions
        .as_ref()
        .ok_or_else(|| Error::Parse("concrete model needs 'actions'".into()))?;
    if doc.actions_may.is_some() || doc.actions_must.is_some() || doc.transitions_must.is_some() {
        return Err(Error::Parse("concrete model cannot have may/must keys".into()));
    }
    let (mut b, agents) = common_builder(doc, actions)?;
    let entries = doc
        .transitions
        .as_ref()
        .ok_or_else(|| Error::Parse("concrete model needs 'transitions'".into()))?;
    for e in entries {
        b.rule(rule_of(e, &agents)?);
    }
    Ok(b)
}

fn three_builder(doc: &Doc) -> Result<ModelBuilder> {
    let may = doc
        .actions_may
        .as_ref()
        .or(doc.actions.as_ref())
        .ok_or_else(|| Error::Parse("three-valued model needs 'actions_may'".into()))?;
    let must = doc
        .actions_must
        .as_ref()
        .ok_or_else(|| Error::Parse("three-valued model needs 'actions_must'".into()))?;
    unique("must action", must)?;
    let (mut b, agents) = common_builder(doc, may)?;
    for a in must {
        if !may.contains(a) {
            return Err(Error::Validation(format!("must action '{a}' is not a may action")));
        }
        b.must_action(a);
    }
    b.no_must_actions();
    let entries = doc
        .transitions_may
        .as_ref()
        .or(doc.transitions.as_ref())
        .ok_or_else(|| Error::Parse("three-valued model needs 'transitions_may'".into()))?;
    for e in entries {
        b.rule(rule_of(e, &agents)?);
    }
    for e in doc.transitions_must.iter().flatten() {
        b.must_rule(rule_of(e, &agents)?);
    }
    Ok(b)
}

fn pattern_of(v: &Value) -> Result<Pattern> {
    match v {
        Value::String(s) if s == "*" => Ok(Pattern::Any),
        Value::String(s) => Ok(Pattern::one(s)),
        Value::Array(items) => items
            .iter()
            .map(|i| {
                i.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("action lists must contain names".into()))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(Pattern::Set),
        _ => Err(Error::Parse(format!("bad action profile element {v}"))),
    }
}

fn rule_of(e: &Entry, agents: &[String]) -> Result<Rule> {
    let mut profile = BTreeMap::new();
    match &e.action_profile {
        Value::Array(items) => {
            if items.len() != agents.len() {
                return Err(Error::Validation(format!(
                    "action_profile of state {} has {} entries for {} agents",
                    e.state,
                    items.len(),
                    agents.len()
                )));
            }
            for (agent, item) in agents.iter().zip(items) {
                profile.insert(agent.clone(), pattern_of(item)?);
            }
        }
        Value::Object(map) => {
            for (agent, item) in map {
                profile.insert(agent.clone(), pattern_of(item)?);
            }
        }
        Value::String(s) if s == "*" => {}
        other => return Err(Error::Parse(format!("bad action_profile {other}"))),
    }
    let successors = match &e.successors {
        Successors::Many(v) => v.clone(),
        Successors::One(s) => vec![s.clone()],
    };
    Ok(Rule {
        state: e.state.clone(),
        profile,
        successors,
    })
}

/// One action-profile element per agent describing a class profile.
fn profile_value<T>(row: &ProfileRow<T>, idx: usize, actions: &[String]) -> Value {
    let values = row
        .digits(idx)
        .iter()
        .enumerate()
        .map(|(a, &c)| {
            let members: Vec<&String> = row.members(a, c as u16).map(|m| &actions[m as usize]).collect();
            if members.len() == actions.len() {
                Value::String("*".into())
            } else if members.len() == 1 {
                Value::String(members[0].clone())
            } else {
                Value::Array(members.into_iter().map(|m| Value::String(m.clone())).collect())
            }
        })
        .collect();
    Value::Array(values)
}

fn concrete_doc(g: &ConcreteCgs) -> Doc {
    let mut transitions = Vec::new();
    for (s, row) in g.rows().iter().enumerate() {
        for (i, &t) in row.cells().iter().enumerate() {
            transitions.push(Entry {
                state: g.states()[s].clone(),
                action_profile: profile_value(row, i, g.actions()),
                successors: Successors::Many(vec![g.states()[t as usize].clone()]),
            });
        }
    }
    let labels = g
        .states()
        .iter()
        .enumerate()
        .map(|(s, name)| {
            let m = g
                .atoms()
                .iter()
                .enumerate()
                .map(|(p, atom)| (atom.clone(), g.holds(s, p).to_string()))
                .collect();
            (name.clone(), m)
        })
        .collect();
    Doc {
        schema: Some(SCHEMA.into()),
        kind: "concrete".into(),
        agents: g.agents().to_vec(),
        states: g.states().to_vec(),
        initial: g.initial_name().to_string(),
        actions: Some(g.actions().to_vec()),
        atoms: Some(g.atoms().to_vec()),
        transitions: Some(transitions),
        labels,
        ..Doc::default()
    }
}

fn three_doc(g: &ThreeCgs) -> Doc {
    let mut may = Vec::new();
    let mut must = Vec::new();
    let names = |v: &[u32]| v.iter().map(|&t| g.states()[t as usize].clone()).collect();
    for (s, row) in g.rows().iter().enumerate() {
        for (i, cell) in row.cells().iter().enumerate() {
            may.push(Entry {
                state: g.states()[s].clone(),
                action_profile: profile_value(row, i, g.actions_may()),
                successors: Successors::Many(names(&cell.may)),
            });
            if !cell.must.is_empty() {
                must.push(Entry {
                    state: g.states()[s].clone(),
                    action_profile: profile_value(row, i, g.actions_may()),
                    successors: Successors::Many(names(&cell.must)),
                });
            }
        }
    }
    let labels = g
        .states()
        .iter()
        .enumerate()
        .map(|(s, name)| {
            let m = g
                .atoms()
                .iter()
                .enumerate()
                .map(|(p, atom)| (atom.clone(), g.label(s, p).as_str().to_string()))
                .collect();
            (name.clone(), m)
        })
        .collect();
    Doc {
        schema: Some(SCHEMA.into()),
        kind: "three".into(),
        agents: g.agents().to_vec(),
        states: g.states().to_vec(),
        initial: g.initial_name().to_string(),
        actions_may: Some(g.actions_may().to_vec()),
        actions_must: Some(g.actions_must().into_iter().map(str::to_string).collect()),
        atoms: Some(g.atoms().to_vec()),
        transitions_may: Some(may),
        transitions_must: Some(must),
        labels,
        ..Doc::default()
    }
}
