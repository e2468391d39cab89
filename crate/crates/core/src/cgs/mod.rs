//! Concurrent game structures and Kripke structures.

mod format;
mod kripke;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use format::{
    load_model, parse_model_doc, save_model, CgsDoc, Finding, KripkeDoc, LoadError, Model, ModelDoc, Report,
    Severity, TransitionDoc,
};
pub use kripke::{kripke_to_cgs, Kripke, KRIPKE_AGENT};

/// Index of a state in its structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of states of a fixed structure, stored as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: Vec<bool>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: vec![false; universe],
        }
    }

    pub fn full(universe: usize) -> Self {
        StateSet {
            bits: vec![true; universe],
        }
    }

    pub fn from_fn(universe: usize, mut member: impl FnMut(StateId) -> bool) -> Self {
        StateSet {
            bits: (0..universe).map(|i| member(StateId(i))).collect(),
        }
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut out = Self::empty(universe);
        for s in states {
            out.insert(s);
        }
        out
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.bits.get(s.0).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, s: StateId) {
        self.bits[s.0] = true;
    }

    pub fn remove(&mut self, s: StateId) {
        self.bits[s.0] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| StateId(i))
    }

    pub fn complement(&self) -> Self {
        StateSet {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn union(&self, other: &StateSet) -> Self {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &StateSet) -> Self {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &StateSet) -> Self {
        self.zip(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    fn zip(&self, other: &StateSet, op: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.universe(), other.universe(), "state sets over different structures");
        StateSet {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| op(*a, *b)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("action vectors overlap or do not cover all agents")]
    BadComposition,
    #[error("state `{0}` has no successor")]
    DeadEnd(String),
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// An action vector for a subset of the agents: a map from agent index to
/// action index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionVector {
    entries: BTreeMap<usize, usize>,
}

impl ActionVector {
    pub fn new(entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        ActionVector {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn agents(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn action(&self, agent: usize) -> Option<usize> {
        self.entries.get(&agent).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ⊕ other`: the full action vector over `num_agents` agents, if the
    /// two domains are disjoint and together cover every agent.
    pub fn compose(&self, other: &ActionVector, num_agents: usize) -> Result<Vec<usize>, ModelError> {
        let mut full = vec![None; num_agents];
        for (&a, &act) in self.entries.iter().chain(other.entries.iter()) {
            let slot = full.get_mut(a).ok_or(ModelError::BadComposition)?;
            if slot.replace(act).is_some() {
                return Err(ModelError::BadComposition);
            }
        }
        full.into_iter().map(|x| x.ok_or(ModelError::BadComposition)).collect()
    }
}

/// A concurrent game structure `(St, Ag, Ac, δ, ℓ)`. Every agent may play
/// every action in every state and `δ` is total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cgs {
    states: Vec<String>,
    agents: Vec<String>,
    actions: Vec<String>,
    propositions: Vec<String>,
    labels: Vec<BTreeSet<String>>,
    /// `delta[s * num_vectors + v]`, with full vectors encoded in mixed radix
    /// (agent 0 is the least significant digit).
    delta: Vec<StateId>,
    state_index: HashMap<String, usize>,
}

impl Cgs {
    /// Builds a structure from indexed parts. `delta` must list, for every
    /// state in order, the successor of every encoded full action vector.
    pub fn new(
        states: Vec<String>,
        agents: Vec<String>,
        actions: Vec<String>,
        propositions: Vec<String>,
        labels: Vec<BTreeSet<String>>,
        delta: Vec<StateId>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::Invalid("no states".into()));
        }
        if !agents.is_empty() && actions.is_empty() {
            return Err(ModelError::Invalid("no actions".into()));
        }
        if labels.len() != states.len() {
            return Err(ModelError::Invalid("labeling must cover every state".into()));
        }
        let num_vectors = actions.len().max(1).pow(agents.len() as u32);
        if delta.len() != states.len() * num_vectors {
            return Err(ModelError::Invalid(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                states.len() * num_vectors
            )));
        }
        if let Some(bad) = delta.iter().find(|t| t.0 >= states.len()) {
            return Err(ModelError::StateOutOfRange(bad.0));
        }
        let state_index: HashMap<String, usize> = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if state_index.len() != states.len() {
            return Err(ModelError::Invalid("duplicate state names".into()));
        }
        Ok(Cgs {
            states,
            agents,
            actions,
            propositions,
            labels,
            delta,
            state_index,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// `|AV| = |Ac|^|Ag|`.
    pub fn num_vectors(&self) -> usize {
        self.actions.len().max(1).pow(self.agents.len() as u32)
    }

    /// `|St × AV|`.
    pub fn size(&self) -> usize {
        self.num_states() * self.num_vectors()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .map(|&i| StateId(i))
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn check_state(&self, s: StateId) -> Result<(), ModelError> {
        if s.0 < self.states.len() {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange(s.0))
        }
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_index(&self, name: &str) -> Result<usize, ModelError> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| ModelError::UnknownAgent(name.to_string()))
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn action_index(&self, name: &str) -> Result<usize, ModelError> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| ModelError::UnknownAction(name.to_string()))
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn propositions(&self) -> &[String] {
        &self.propositions
    }

    pub fn label(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s.0]
    }

    pub fn holds(&self, s: StateId, prop: &str) -> bool {
        self.labels[s.0].contains(prop)
    }

    /// Encodes a full action vector (one action index per agent, in agent
    /// order).
    pub fn encode_vector(&self, actions: &[usize]) -> usize {
        debug_assert_eq!(actions.len(), self.agents.len());
        let base = self.actions.len().max(1);
        actions.iter().rev().fold(0, |acc, &a| acc * base + a)
    }

    pub fn decode_vector(&self, mut index: usize) -> Vec<usize> {
        let base = self.actions.len().max(1);
        (0..self.agents.len())
            .map(|_| {
                let d = index % base;
                index /= base;
                d
            })
            .collect()
    }

    /// `δ(s, vec)` for an encoded full vector.
    pub fn transition(&self, s: StateId, vector: usize) -> StateId {
        self.delta[s.0 * self.num_vectors() + vector]
    }

    /// `δ(s, vec)` for a full vector given by action indices.
    pub fn step(&self, s: StateId, actions: &[usize]) -> StateId {
        self.transition(s, self.encode_vector(actions))
    }

    /// All `δ(s, vec)`, sorted and deduplicated.
    pub fn successors(&self, s: StateId) -> Result<Vec<StateId>, ModelError> {
        self.check_state(s)?;
        let n = self.num_vectors();
        let set: BTreeSet<StateId> = self.delta[s.0 * n..(s.0 + 1) * n].iter().copied().collect();
        Ok(set.into_iter().collect())
    }

    pub fn vector_text(&self, actions: &[usize]) -> String {
        actions
            .iter()
            .map(|&a| self.actions[a].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}
