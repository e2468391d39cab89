use std::collections::{BTreeSet, HashMap};

use super::{Cgs, ModelError, StateId};

/// Name of the single agent of the structure built by [`kripke_to_cgs`].
pub const KRIPKE_AGENT: &str = "a";

/// A Kripke structure `(S, I, R, L)` without dead ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kripke {
    states: Vec<String>,
    initial: Vec<StateId>,
    successors: Vec<Vec<StateId>>,
    propositions: Vec<String>,
    labels: Vec<BTreeSet<String>>,
    state_index: HashMap<String, usize>,
}

impl Kripke {
    /// `edges` are `(from, to)` index pairs. Every state needs a successor.
    pub fn new(
        states: Vec<String>,
        initial: Vec<StateId>,
        edges: impl IntoIterator<Item = (StateId, StateId)>,
        propositions: Vec<String>,
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::Invalid("no states".into()));
        }
        if labels.len() != states.len() {
            return Err(ModelError::Invalid("labeling must cover every state".into()));
        }
        let mut succ: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); states.len()];
        for (from, to) in edges {
            if from.0 >= states.len() || to.0 >= states.len() {
                return Err(ModelError::StateOutOfRange(from.0.max(to.0)));
            }
            succ[from.0].insert(to);
        }
        if let Some(i) = succ.iter().position(BTreeSet::is_empty) {
            return Err(ModelError::DeadEnd(states[i].clone()));
        }
        if let Some(bad) = initial.iter().find(|s| s.0 >= states.len()) {
            return Err(ModelError::StateOutOfRange(bad.0));
        }
        let state_index: HashMap<String, usize> = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if state_index.len() != states.len() {
            return Err(ModelError::Invalid("duplicate state names".into()));
        }
        Ok(Kripke {
            states,
            initial,
            successors: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            propositions,
            labels,
            state_index,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .map(|&i| StateId(i))
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    /// R-successors, sorted by index.
    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.successors[s.0]
    }

    pub fn has_edge(&self, from: StateId, to: StateId) -> bool {
        self.successors[from.0].binary_search(&to).is_ok()
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
}

/// The single-agent structure whose actions are the states of `k`: choosing
/// `s'` in `s` moves to `s'` if `(s, s')` is an edge, and otherwise to the
/// R-successor of `s` with the least name. Both structures have the same
/// paths.
pub fn kripke_to_cgs(k: &Kripke) -> Result<Cgs, ModelError> {
    let n = k.num_states();
    let mut delta = Vec::with_capacity(n * n);
    for s in k.states() {
        let fallback = k
            .successors(s)
            .iter()
            .copied()
            .min_by(|a, b| k.state_name(*a).cmp(k.state_name(*b)))
            .ok_or_else(|| ModelError::DeadEnd(k.state_name(s).to_string()))?;
        for target in k.states() {
            delta.push(if k.has_edge(s, target) { target } else { fallback });
        }
    }
    Cgs::new(
        k.states.clone(),
        vec![KRIPKE_AGENT.to_string()],
        k.states.clone(),
        k.propositions.clone(),
        k.labels.clone(),
        delta,
    )
}
