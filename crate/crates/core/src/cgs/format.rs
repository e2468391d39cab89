//! Model files.
//!
//! The text format is line based. `#` starts a comment. A header of
//! `key = value` lines is followed by `[labels]` and `[transitions]`
//! sections; list values are separated by whitespace or commas.
//!
//! ```text
//! kind = cgs
//! states = s0 s1
//! agents = 1 2
//! actions = a b
//! propositions = p
//!
//! [labels]
//! s0 = p
//!
//! [transitions]
//! s0 : * * -> s1      # `*` matches any action
//! s0 : a a -> s0      # later lines override earlier ones
//! s1 : * * -> s1
//! ```
//!
//! Transition lines list one action per agent in declared agent order. A
//! Kripke structure uses `kind = kripke`, an `initial` list, no agents or
//! actions, and transition lines `s0 -> s1 s2`. The same document can be
//! written as JSON (a file starting with `{`), mirroring [`ModelDoc`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Cgs, Kripke, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelDoc {
    Cgs(CgsDoc),
    Kripke(KripkeDoc),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgsDoc {
    pub states: Vec<String>,
    #[serde(default)]
    pub agents: Vec<String>,
    #[serde(default)]
    pub actions: Vec<String>,
    #[serde(default)]
    pub propositions: Vec<String>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub actions: Vec<String>,
    pub to: String,
    #[serde(skip)]
    pub line: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeDoc {
    pub states: Vec<String>,
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default)]
    pub propositions: Vec<String>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub transitions: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match self.line {
            Some(l) => write!(f, "{sev}: line {l}: {}", self.message),
            None => write!(f, "{sev}: {}", self.message),
        }
    }
}

/// Validation findings; a model is usable iff there are no errors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    fn error(&mut self, line: Option<usize>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Error,
            line,
            message: message.into(),
        });
    }

    fn warning(&mut self, line: Option<usize>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            line,
            message: message.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON model: {0}")]
    Json(String),
    #[error("invalid model:\n{0}")]
    Invalid(Report),
}

/// A loaded structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Cgs(Cgs),
    Kripke(Kripke),
}

fn parse_err(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Parse {
        line,
        message: message.into(),
    }
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(PartialEq)]
enum Section {
    Header,
    Labels,
    Transitions,
}

/// Parses a model document (text or JSON) without validating it.
pub fn parse_model_doc(text: &str) -> Result<ModelDoc, LoadError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()));
    }
    let mut kind: Option<String> = None;
    let mut header: HashMap<String, (usize, Vec<String>)> = HashMap::new();
    let mut labels: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut cgs_transitions = Vec::new();
    let mut kripke_transitions: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err(lineno, "unterminated section header"))?
                .trim();
            section = match name {
                "labels" => Section::Labels,
                "transitions" => Section::Transitions,
                other => return Err(parse_err(lineno, format!("unknown section `{other}`"))),
            };
            if kind.is_none() {
                return Err(parse_err(lineno, "`kind` must be declared before any section"));
            }
            continue;
        }
        match section {
            Section::Header => {
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| parse_err(lineno, "expected `key = value`"))?;
                let key = key.trim();
                match key {
                    "kind" => {
                        let k = value.trim();
                        if k != "cgs" && k != "kripke" {
                            return Err(parse_err(lineno, format!("unknown model kind `{k}`")));
                        }
                        kind = Some(k.to_string());
                    }
                    "states" | "agents" | "actions" | "propositions" | "initial" => {
                        if header.insert(key.to_string(), (lineno, split_list(value))).is_some() {
                            return Err(parse_err(lineno, format!("duplicate key `{key}`")));
                        }
                    }
                    other => return Err(parse_err(lineno, format!("unknown key `{other}`"))),
                }
            }
            Section::Labels => {
                let (state, props) = line
                    .split_once('=')
                    .ok_or_else(|| parse_err(lineno, "expected `state = propositions`"))?;
                let state = state.trim().to_string();
                if labels.insert(state.clone(), split_list(props)).is_some() {
                    return Err(parse_err(lineno, format!("duplicate labels for `{state}`")));
                }
            }
            Section::Transitions => {
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| parse_err(lineno, "expected `->` in transition"))?;
                let targets = split_list(rhs);
                if kind.as_deref() == Some("kripke") {
                    let from = lhs.trim();
                    if from.is_empty() || from.contains(char::is_whitespace) {
                        return Err(parse_err(lineno, "expected a single source state"));
                    }
                    if targets.is_empty() {
                        return Err(parse_err(lineno, "expected at least one target state"));
                    }
                    kripke_transitions.entry(from.to_string()).or_default().extend(targets);
                } else {
                    let (from, acts) = lhs
                        .split_once(':')
                        .ok_or_else(|| parse_err(lineno, "expected `state : actions -> state`"))?;
                    let from = from.trim();
                    if from.is_empty() || from.contains(char::is_whitespace) {
                        return Err(parse_err(lineno, "expected a single source state"));
                    }
                    if targets.len() != 1 {
                        return Err(parse_err(lineno, "expected exactly one target state"));
                    }
                    cgs_transitions.push(TransitionDoc {
                        from: from.to_string(),
                        actions: split_list(acts),
                        to: targets[0].clone(),
                        line: Some(lineno),
                    });
                }
            }
        }
    }

    let Some(kind) = kind else {
        return Err(parse_err(1, "missing `kind = cgs|kripke`"));
    };
    let mut take = |key: &str| header.remove(key).map(|(_, v)| v).unwrap_or_default();
    let states = take("states");
    let propositions = take("propositions");
    if kind == "kripke" {
        if let Some((line, _)) = header.get("agents").or_else(|| header.get("actions")) {
            return Err(parse_err(*line, "Kripke structures have no agents or actions"));
        }
        let initial = header.remove("initial").map(|(_, v)| v).unwrap_or_default();
        Ok(ModelDoc::Kripke(KripkeDoc {
            states,
            initial,
            propositions,
            labels,
            transitions: kripke_transitions,
        }))
    } else {
        if let Some((line, _)) = header.get("initial") {
            return Err(parse_err(*line, "`initial` is only meaningful for Kripke structures"));
        }
        let agents = header.remove("agents").map(|(_, v)| v).unwrap_or_default();
        let actions = header.remove("actions").map(|(_, v)| v).unwrap_or_default();
        Ok(ModelDoc::Cgs(CgsDoc {
            states,
            agents,
            actions,
            propositions,
            labels,
            transitions: cgs_transitions,
        }))
    }
}

fn duplicates(kind: &str, names: &[String], report: &mut Report) {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            report.error(None, format!("duplicate {kind} `{n}`"));
        }
    }
}

fn check_labels(
    states: &HashMap<&str, usize>,
    propositions: &[String],
    labels: &BTreeMap<String, Vec<String>>,
    report: &mut Report,
) {
    let declared: HashSet<&str> = propositions.iter().map(String::as_str).collect();
    for (state, props) in labels {
        if !states.contains_key(state.as_str()) {
            report.error(None, format!("labels given for unknown state `{state}`"));
        }
        for p in props {
            if !declared.contains(p.as_str()) {
                report.warning(None, format!("state `{state}` is labeled with undeclared proposition `{p}`"));
            }
        }
    }
}

fn label_sets(states: &[String], labels: &BTreeMap<String, Vec<String>>) -> Vec<BTreeSet<String>> {
    states
        .iter()
        .map(|s| labels.get(s).map(|v| v.iter().cloned().collect()).unwrap_or_default())
        .collect()
}

impl CgsDoc {
    /// Fills the transition table from the (possibly wildcarded) lines;
    /// later lines win.
    fn table(&self, report: &mut Report) -> Vec<Option<StateId>> {
        let states: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let actions: HashMap<&str, usize> = self.actions.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let base = self.actions.len().max(1);
        let num_vectors = base.pow(self.agents.len() as u32);
        let mut table = vec![None; self.states.len() * num_vectors];
        for t in &self.transitions {
            let mut ok = true;
            let from = states.get(t.from.as_str()).copied();
            let to = states.get(t.to.as_str()).copied();
            if from.is_none() {
                report.error(t.line, format!("transition from unknown state `{}`", t.from));
                ok = false;
            }
            if to.is_none() {
                report.error(t.line, format!("transition to unknown state `{}`", t.to));
                ok = false;
            }
            if t.actions.len() != self.agents.len() {
                report.error(
                    t.line,
                    format!("expected {} actions (one per agent), found {}", self.agents.len(), t.actions.len()),
                );
                continue;
            }
            // per agent: allowed action indices
            let mut choices: Vec<Vec<usize>> = Vec::with_capacity(t.actions.len());
            for a in &t.actions {
                if a == "*" {
                    choices.push((0..self.actions.len()).collect());
                } else if let Some(&i) = actions.get(a.as_str()) {
                    choices.push(vec![i]);
                } else {
                    report.error(t.line, format!("unknown action `{a}`"));
                    ok = false;
                }
            }
            let (Some(from), Some(to), true) = (from, to, ok) else {
                continue;
            };
            let mut vectors = vec![0usize];
            for (agent, options) in choices.iter().enumerate().rev() {
                let _ = agent;
                vectors = vectors
                    .iter()
                    .flat_map(|acc| options.iter().map(move |&o| acc * base + o))
                    .collect();
            }
            for v in vectors {
                table[from * num_vectors + v] = Some(StateId(to));
            }
        }
        table
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        self.validate_into(&mut report);
        report
    }

    fn validate_into(&self, report: &mut Report) -> Vec<Option<StateId>> {
        if self.states.is_empty() {
            report.error(None, "model declares no states");
        }
        if !self.agents.is_empty() && self.actions.is_empty() {
            report.error(None, "model declares agents but no actions");
        }
        duplicates("state", &self.states, report);
        duplicates("agent", &self.agents, report);
        duplicates("action", &self.actions, report);
        if self.actions.iter().any(|a| a == "*") {
            report.error(None, "`*` is reserved and cannot name an action");
        }
        let states: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        check_labels(&states, &self.propositions, &self.labels, report);
        let table = self.table(report);
        let num_vectors = self.actions.len().max(1).pow(self.agents.len() as u32);
        if self.actions.is_empty() && !self.agents.is_empty() {
            return table;
        }
        for (i, entry) in table.iter().enumerate() {
            if entry.is_none() {
                let s = &self.states[i / num_vectors];
                let mut v = i % num_vectors;
                let acts: Vec<&str> = (0..self.agents.len())
                    .map(|_| {
                        let d = v % self.actions.len();
                        v /= self.actions.len();
                        self.actions[d].as_str()
                    })
                    .collect();
                report.error(None, format!("missing transition for `{s}` under ({})", acts.join(" ")));
            }
        }
        table
    }

    pub fn build(&self) -> Result<Cgs, LoadError> {
        let mut report = Report::default();
        let table = self.validate_into(&mut report);
        if !report.is_ok() {
            return Err(LoadError::Invalid(report));
        }
        Cgs::new(
            self.states.clone(),
            self.agents.clone(),
            self.actions.clone(),
            self.propositions.clone(),
            label_sets(&self.states, &self.labels),
            table.into_iter().map(|t| t.expect("validated")).collect(),
        )
        .map_err(|e| {
            let mut r = Report::default();
            r.error(None, e.to_string());
            LoadError::Invalid(r)
        })
    }
}

impl KripkeDoc {
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        if self.states.is_empty() {
            report.error(None, "model declares no states");
        }
        duplicates("state", &self.states, &mut report);
        let states: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        check_labels(&states, &self.propositions, &self.labels, &mut report);
        for s in &self.initial {
            if !states.contains_key(s.as_str()) {
                report.error(None, format!("unknown initial state `{s}`"));
            }
        }
        for (from, targets) in &self.transitions {
            if !states.contains_key(from.as_str()) {
                report.error(None, format!("transition from unknown state `{from}`"));
            }
            for t in targets {
                if !states.contains_key(t.as_str()) {
                    report.error(None, format!("transition to unknown state `{t}`"));
                }
            }
        }
        for s in &self.states {
            if self.transitions.get(s).is_none_or(|t| t.is_empty()) {
                report.error(None, format!("state `{s}` has no successor"));
            }
        }
        report
    }

    pub fn build(&self) -> Result<Kripke, LoadError> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(LoadError::Invalid(report));
        }
        let index: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let edges: Vec<(StateId, StateId)> = self
            .transitions
            .iter()
            .flat_map(|(from, targets)| targets.iter().map(move |t| (from, t)))
            .map(|(f, t)| (StateId(index[f.as_str()]), StateId(index[t.as_str()])))
            .collect();
        Kripke::new(
            self.states.clone(),
            self.initial.iter().map(|s| StateId(index[s.as_str()])).collect(),
            edges,
            self.propositions.clone(),
            label_sets(&self.states, &self.labels),
        )
        .map_err(|e| {
            let mut r = Report::default();
            r.error(None, e.to_string());
            LoadError::Invalid(r)
        })
    }
}

impl ModelDoc {
    pub fn validate(&self) -> Report {
        match self {
            ModelDoc::Cgs(d) => d.validate(),
            ModelDoc::Kripke(d) => d.validate(),
        }
    }

    pub fn build(&self) -> Result<Model, LoadError> {
        match self {
            ModelDoc::Cgs(d) => d.build().map(Model::Cgs),
            ModelDoc::Kripke(d) => d.build().map(Model::Kripke),
        }
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[String]| v.join(" ");
        match self {
            ModelDoc::Cgs(d) => {
                let _ = writeln!(out, "kind = cgs");
                let _ = writeln!(out, "states = {}", list(&d.states));
                let _ = writeln!(out, "agents = {}", list(&d.agents));
                let _ = writeln!(out, "actions = {}", list(&d.actions));
                let _ = writeln!(out, "propositions = {}", list(&d.propositions));
                write_labels(&mut out, &d.labels);
                let _ = writeln!(out, "\n[transitions]");
                for t in &d.transitions {
                    let _ = writeln!(out, "{} : {} -> {}", t.from, list(&t.actions), t.to);
                }
            }
            ModelDoc::Kripke(d) => {
                let _ = writeln!(out, "kind = kripke");
                let _ = writeln!(out, "states = {}", list(&d.states));
                let _ = writeln!(out, "initial = {}", list(&d.initial));
                let _ = writeln!(out, "propositions = {}", list(&d.propositions));
                write_labels(&mut out, &d.labels);
                let _ = writeln!(out, "\n[transitions]");
                for (from, targets) in &d.transitions {
                    let _ = writeln!(out, "{from} -> {}", list(targets));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents serialize")
    }
}

fn write_labels(out: &mut String, labels: &BTreeMap<String, Vec<String>>) {
    let _ = writeln!(out, "\n[labels]");
    for (s, props) in labels {
        let _ = writeln!(out, "{s} = {}", props.join(" "));
    }
}

fn sorted(v: &[String]) -> Vec<String> {
    let mut v = v.to_vec();
    v.sort();
    v
}

impl Cgs {
    /// Document with sorted states, agents, actions and propositions and the
    /// fully expanded transition table.
    pub fn to_doc(&self) -> CgsDoc {
        let states = sorted(self.state_names());
        let agents = sorted(self.agent_names());
        let actions = sorted(self.action_names());
        let agent_idx: Vec<usize> = agents.iter().map(|a| self.agent_index(a).expect("own agent")).collect();
        let action_idx: Vec<usize> = actions.iter().map(|a| self.action_index(a).expect("own action")).collect();
        let mut labels = BTreeMap::new();
        for s in self.states() {
            let props: Vec<String> = self.label(s).iter().cloned().collect();
            if !props.is_empty() {
                labels.insert(self.state_name(s).to_string(), props);
            }
        }
        let mut transitions = Vec::new();
        let k = agents.len();
        let base = actions.len().max(1);
        for name in &states {
            let s = self.state_id(name).expect("own state");
            for mut v in 0..self.num_vectors() {
                // lexicographic over sorted agents, first agent most significant
                let mut digits = vec![0usize; k];
                for d in digits.iter_mut().rev() {
                    *d = v % base;
                    v /= base;
                }
                let mut full = vec![0usize; k];
                for (pos, &agent) in agent_idx.iter().enumerate() {
                    full[agent] = action_idx[digits[pos]];
                }
                transitions.push(TransitionDoc {
                    from: name.clone(),
                    actions: digits.iter().map(|&d| actions[d].clone()).collect(),
                    to: self.state_name(self.step(s, &full)).to_string(),
                    line: None,
                });
            }
        }
        CgsDoc {
            states,
            agents,
            actions,
            propositions: sorted(self.propositions()),
            labels,
            transitions,
        }
    }
}

impl Kripke {
    pub fn to_doc(&self) -> KripkeDoc {
        let mut labels = BTreeMap::new();
        let mut transitions = BTreeMap::new();
        for s in self.states() {
            let props: Vec<String> = self.label(s).iter().cloned().collect();
            if !props.is_empty() {
                labels.insert(self.state_name(s).to_string(), props);
            }
            let targets: Vec<String> = self.successors(s).iter().map(|t| self.state_name(*t).to_string()).collect();
            transitions.insert(self.state_name(s).to_string(), sorted(&targets));
        }
        KripkeDoc {
            states: sorted(self.state_names()),
            initial: sorted(&self.initial().iter().map(|s| self.state_name(*s).to_string()).collect::<Vec<_>>()),
            propositions: sorted(self.propositions()),
            labels,
            transitions,
        }
    }
}

impl Model {
    pub fn to_doc(&self) -> ModelDoc {
        match self {
            Model::Cgs(m) => ModelDoc::Cgs(m.to_doc()),
            Model::Kripke(k) => ModelDoc::Kripke(k.to_doc()),
        }
    }
}

/// Parses and validates a model file.
pub fn load_model(text: &str) -> Result<Model, LoadError> {
    parse_model_doc(text)?.build()
}

/// Deterministic text serialization.
pub fn save_model(model: &Model) -> String {
    model.to_doc().to_text()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_STATE: &str = "
kind = cgs
states = s0 s1
agents = 1 2
actions = a b
propositions = p

[labels]
s0 = p

[transitions]
s0 : * * -> s1
s0 : a a -> s0
s1 : * * -> s1
";

    #[test]
    fn well_formed_model_has_empty_report() {
        let doc = parse_model_doc(TWO_STATE).unwrap();
        assert!(doc.validate().is_empty());
        let Model::Cgs(m) = doc.build().unwrap() else { panic!() };
        let s0 = m.state_id("s0").unwrap();
        assert_eq!(m.step(s0, &[0, 0]), s0);
        assert_eq!(m.step(s0, &[1, 0]), m.state_id("s1").unwrap());
        assert!(m.holds(s0, "p"));
    }

    #[test]
    fn missing_transition_is_reported_once() {
        let text = TWO_STATE.replace("s1 : * * -> s1", "s1 : a * -> s1\ns1 : b a -> s1");
        let report = parse_model_doc(&text).unwrap().validate();
        let errors: Vec<_> = report.errors().collect();
        assert_eq!(errors.len(), 1, "{report}");
        assert!(errors[0].message.contains("missing transition for `s1` under (b b)"));
    }

    #[test]
    fn undeclared_proposition_is_a_warning() {
        let text = TWO_STATE.replace("s0 = p", "s0 = p q");
        let report = parse_model_doc(&text).unwrap().validate();
        assert!(report.is_ok());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].severity, Severity::Warning);
    }

    #[test]
    fn unknown_identifiers_are_errors() {
        let text = TWO_STATE.replace("s0 : a a -> s0", "s0 : a c -> s9");
        let report = parse_model_doc(&text).unwrap().validate();
        let msgs: Vec<_> = report.errors().map(|f| f.message.clone()).collect();
        assert!(msgs.iter().any(|m| m.contains("unknown action `c`")));
        assert!(msgs.iter().any(|m| m.contains("unknown state `s9`")));
        assert!(report.errors().all(|f| f.line == Some(13)), "{report}");
    }

    #[test]
    fn empty_states_file_is_rejected() {
        let err = load_model("kind = cgs\nstates =\nagents = 1\nactions = a\n").unwrap_err();
        assert!(matches!(err, LoadError::Invalid(_)));
        assert!(load_model("").is_err());
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = load_model("kind = cgs\nstates = s\n[transitions]\ns a -> s\n").unwrap_err();
        assert_eq!(err, parse_err(4, "expected `state : actions -> state`"));
        assert!(matches!(load_model("kind = game\n"), Err(LoadError::Parse { line: 1, .. })));
    }

    #[test]
    fn save_is_sorted_and_reloads() {
        let text = "
kind = cgs
states = z a
agents = 2 1
actions = y x
[transitions]
z : * * -> z
z : y x -> a
a : * * -> a
";
        let m = load_model(text).unwrap();
        let saved = save_model(&m);
        assert!(saved.contains("states = a z"));
        assert!(saved.contains("agents = 1 2"));
        let again = load_model(&saved).unwrap();
        assert_eq!(save_model(&again), saved);
        // z under (agent1 = x, agent2 = y) goes to a
        assert!(saved.contains("z : x y -> a"), "{saved}");
    }

    #[test]
    fn json_round_trip() {
        let m = load_model(TWO_STATE).unwrap();
        let json = m.to_doc().to_json();
        let again = load_model(&json).unwrap();
        assert_eq!(save_model(&again), save_model(&m));
    }

    #[test]
    fn kripke_documents() {
        let text = "
kind = kripke
states = s0 s1
initial = s0
propositions = p
[labels]
s1 = p
[transitions]
s0 -> s0 s1
s1 -> s0
";
        let Model::Kripke(k) = load_model(text).unwrap() else { panic!() };
        assert_eq!(k.successors(StateId(0)), &[StateId(0), StateId(1)]);
        let dead = text.replace("s1 -> s0\n", "");
        let report = parse_model_doc(&dead).unwrap().validate();
        assert!(report.errors().any(|f| f.message.contains("no successor")));
    }
}
