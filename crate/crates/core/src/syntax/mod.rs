//! Formula syntax shared by rATL, rATL*, ATL, ATL* and rCTL.
//!
//! All dialects use one pair of syntax trees. Temporal operators are written
//! `X`, `F`, `G` everywhere; whether they are the robust (dotted) operators or
//! the classical ones is decided by the [`Dialect`] attached to a [`Formula`].
//! Children are reference counted so that transformations can share
//! subresults.

mod parser;
mod transform;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::{parse_formula, ParseError};
pub use transform::{dot_transform, is_nnf, nnf, ratlstar_to_atlstar, rctl_embed, TransformError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    /// Robust ATL: one robust temporal operator per strategy quantifier.
    Ratl,
    /// Robust ATL*: arbitrary robust path formulas under strategy quantifiers.
    RatlStar,
    /// Classical ATL.
    Atl,
    /// Classical ATL*.
    AtlStar,
    /// Robust CTL over Kripke structures, with path quantifiers `E` / `A`.
    Rctl,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Ratl => "ratl",
            Dialect::RatlStar => "ratlstar",
            Dialect::Atl => "atl",
            Dialect::AtlStar => "atlstar",
            Dialect::Rctl => "rctl",
        }
    }

    /// Whether path formulas may nest temporal operators and Boolean connectives.
    pub fn is_star(self) -> bool {
        matches!(self, Dialect::RatlStar | Dialect::AtlStar)
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ratl" => Ok(Dialect::Ratl),
            "ratlstar" | "ratl*" => Ok(Dialect::RatlStar),
            "atl" => Ok(Dialect::Atl),
            "atlstar" | "atl*" => Ok(Dialect::AtlStar),
            "rctl" => Ok(Dialect::Rctl),
            other => Err(format!("unknown dialect `{other}`")),
        }
    }
}

/// A set of agent identifiers, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentSet(BTreeSet<String>);

impl AgentSet {
    pub fn empty() -> Self {
        AgentSet(BTreeSet::new())
    }

    pub fn singleton(agent: impl Into<String>) -> Self {
        AgentSet(BTreeSet::from([agent.into()]))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.contains(agent)
    }

    pub fn is_subset(&self, other: &AgentSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl<S: Into<String>> FromIterator<S> for AgentSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        AgentSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(a)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// `<<A>>`: the coalition can enforce.
    Exists(AgentSet),
    /// `[[A]]`: the coalition cannot prevent.
    Forall(AgentSet),
    /// `E`: some path (rCTL).
    SomePath,
    /// `A`: all paths (rCTL).
    AllPaths,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateFormula {
    Atom(String),
    Not(Arc<StateFormula>),
    Or(Arc<StateFormula>, Arc<StateFormula>),
    And(Arc<StateFormula>, Arc<StateFormula>),
    Implies(Arc<StateFormula>, Arc<StateFormula>),
    Quantified(Quantifier, Arc<PathFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathFormula {
    State(Arc<StateFormula>),
    Not(Arc<PathFormula>),
    Or(Arc<PathFormula>, Arc<PathFormula>),
    And(Arc<PathFormula>, Arc<PathFormula>),
    Implies(Arc<PathFormula>, Arc<PathFormula>),
    Next(Arc<PathFormula>),
    Eventually(Arc<PathFormula>),
    Always(Arc<PathFormula>),
}

/// The single temporal operator of an rATL / ATL / rCTL path formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemporalOp {
    Next,
    Eventually,
    Always,
}

impl StateFormula {
    pub fn atom(name: impl Into<String>) -> Arc<Self> {
        Arc::new(StateFormula::Atom(name.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Arc<Self>) -> Arc<Self> {
        Arc::new(StateFormula::Not(f))
    }

    pub fn or(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        Arc::new(StateFormula::Or(l, r))
    }

    pub fn and(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        Arc::new(StateFormula::And(l, r))
    }

    pub fn implies(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        Arc::new(StateFormula::Implies(l, r))
    }

    pub fn quantified(q: Quantifier, path: Arc<PathFormula>) -> Arc<Self> {
        Arc::new(StateFormula::Quantified(q, path))
    }

    pub fn exists(agents: AgentSet, path: Arc<PathFormula>) -> Arc<Self> {
        Self::quantified(Quantifier::Exists(agents), path)
    }

    pub fn forall(agents: AgentSet, path: Arc<PathFormula>) -> Arc<Self> {
        Self::quantified(Quantifier::Forall(agents), path)
    }

    /// Immediate state subformulas, including the state arguments of a
    /// single-operator path formula.
    pub fn children(&self) -> Vec<&Arc<StateFormula>> {
        match self {
            StateFormula::Atom(_) => vec![],
            StateFormula::Not(f) => vec![f],
            StateFormula::Or(l, r) | StateFormula::And(l, r) | StateFormula::Implies(l, r) => {
                vec![l, r]
            }
            StateFormula::Quantified(_, path) => path.state_leaves(),
        }
    }

    /// Atomic propositions occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            StateFormula::Atom(p) => {
                out.insert(p.clone());
            }
            StateFormula::Quantified(_, path) => path.collect_atoms(out),
            _ => {
                for c in self.children() {
                    c.collect_atoms(out);
                }
            }
        }
    }

    /// Agents named by coalition quantifiers, sorted.
    pub fn agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<String>) {
        match self {
            StateFormula::Quantified(q, path) => {
                if let Quantifier::Exists(a) | Quantifier::Forall(a) = q {
                    out.extend(a.iter().map(str::to_string));
                }
                path.collect_agents(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_agents(out);
                }
            }
        }
    }

    /// Number of nodes of the syntax tree, counting shared subtrees once per
    /// occurrence. Saturates instead of overflowing.
    pub fn tree_size(&self) -> u64 {
        match self {
            StateFormula::Atom(_) => 1,
            StateFormula::Not(f) => 1 + f.tree_size(),
            StateFormula::Or(l, r) | StateFormula::And(l, r) | StateFormula::Implies(l, r) => {
                1u64.saturating_add(l.tree_size()).saturating_add(r.tree_size())
            }
            StateFormula::Quantified(_, p) => 1u64.saturating_add(p.tree_size()),
        }
    }

    /// Number of distinct nodes reachable from this one, counting every shared
    /// node once.
    pub fn dag_size(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        dag_visit_state(self, &mut seen);
        seen.len()
    }
}

fn dag_visit_state(f: &Arc<StateFormula>, seen: &mut std::collections::HashSet<usize>) {
    if !seen.insert(Arc::as_ptr(f) as *const () as usize) {
        return;
    }
    match &**f {
        StateFormula::Atom(_) => {}
        StateFormula::Not(g) => dag_visit_state(g, seen),
        StateFormula::Or(l, r) | StateFormula::And(l, r) | StateFormula::Implies(l, r) => {
            dag_visit_state(l, seen);
            dag_visit_state(r, seen);
        }
        StateFormula::Quantified(_, p) => dag_visit_path(p, seen),
    }
}

fn dag_visit_path(f: &Arc<PathFormula>, seen: &mut std::collections::HashSet<usize>) {
    if !seen.insert(Arc::as_ptr(f) as *const () as usize) {
        return;
    }
    match &**f {
        PathFormula::State(s) => dag_visit_state(s, seen),
        PathFormula::Not(g)
        | PathFormula::Next(g)
        | PathFormula::Eventually(g)
        | PathFormula::Always(g) => dag_visit_path(g, seen),
        PathFormula::Or(l, r) | PathFormula::And(l, r) | PathFormula::Implies(l, r) => {
            dag_visit_path(l, seen);
            dag_visit_path(r, seen);
        }
    }
}

impl PathFormula {
    pub fn state(f: Arc<StateFormula>) -> Arc<Self> {
        Arc::new(PathFormula::State(f))
    }

    pub fn next(f: Arc<Self>) -> Arc<Self> {
        Arc::new(PathFormula::Next(f))
    }

    pub fn eventually(f: Arc<Self>) -> Arc<Self> {
        Arc::new(PathFormula::Eventually(f))
    }

    pub fn always(f: Arc<Self>) -> Arc<Self> {
        Arc::new(PathFormula::Always(f))
    }

    // The Boolean constructors keep formulas canonical: a connective over
    // state formulas only is itself a state formula, as the parser reads it.

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Arc<Self>) -> Arc<Self> {
        match &*f {
            PathFormula::State(g) => Self::state(StateFormula::not(g.clone())),
            _ => Arc::new(PathFormula::Not(f)),
        }
    }

    pub fn or(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        match (&*l, &*r) {
            (PathFormula::State(a), PathFormula::State(b)) => Self::state(StateFormula::or(a.clone(), b.clone())),
            _ => Arc::new(PathFormula::Or(l, r)),
        }
    }

    pub fn and(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        match (&*l, &*r) {
            (PathFormula::State(a), PathFormula::State(b)) => Self::state(StateFormula::and(a.clone(), b.clone())),
            _ => Arc::new(PathFormula::And(l, r)),
        }
    }

    pub fn implies(l: Arc<Self>, r: Arc<Self>) -> Arc<Self> {
        match (&*l, &*r) {
            (PathFormula::State(a), PathFormula::State(b)) => {
                Self::state(StateFormula::implies(a.clone(), b.clone()))
            }
            _ => Arc::new(PathFormula::Implies(l, r)),
        }
    }

    /// `op` applied to the state formula `f`.
    pub fn temporal(op: TemporalOp, f: Arc<StateFormula>) -> Arc<Self> {
        let inner = Self::state(f);
        match op {
            TemporalOp::Next => Self::next(inner),
            TemporalOp::Eventually => Self::eventually(inner),
            TemporalOp::Always => Self::always(inner),
        }
    }

    /// Splits a single-operator path formula `op φ` into `(op, φ)`.
    pub fn as_simple(&self) -> Option<(TemporalOp, &Arc<StateFormula>)> {
        let (op, inner) = match self {
            PathFormula::Next(g) => (TemporalOp::Next, g),
            PathFormula::Eventually(g) => (TemporalOp::Eventually, g),
            PathFormula::Always(g) => (TemporalOp::Always, g),
            _ => return None,
        };
        match &**inner {
            PathFormula::State(s) => Some((op, s)),
            _ => None,
        }
    }

    /// The maximal state formulas embedded in this path formula.
    pub fn state_leaves(&self) -> Vec<&Arc<StateFormula>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Arc<StateFormula>>) {
        match self {
            PathFormula::State(s) => out.push(s),
            PathFormula::Not(g)
            | PathFormula::Next(g)
            | PathFormula::Eventually(g)
            | PathFormula::Always(g) => g.collect_leaves(out),
            PathFormula::Or(l, r) | PathFormula::And(l, r) | PathFormula::Implies(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        for s in self.state_leaves() {
            s.collect_atoms(out);
        }
    }

    fn collect_agents(&self, out: &mut BTreeSet<String>) {
        for s in self.state_leaves() {
            s.collect_agents(out);
        }
    }

    /// Whether a temporal operator occurs at path level (outside embedded
    /// state formulas).
    pub fn has_temporal(&self) -> bool {
        match self {
            PathFormula::State(_) => false,
            PathFormula::Next(_) | PathFormula::Eventually(_) | PathFormula::Always(_) => true,
            PathFormula::Not(g) => g.has_temporal(),
            PathFormula::Or(l, r) | PathFormula::And(l, r) | PathFormula::Implies(l, r) => {
                l.has_temporal() || r.has_temporal()
            }
        }
    }

    pub fn tree_size(&self) -> u64 {
        match self {
            PathFormula::State(s) => 1u64.saturating_add(s.tree_size()),
            PathFormula::Not(g)
            | PathFormula::Next(g)
            | PathFormula::Eventually(g)
            | PathFormula::Always(g) => 1u64.saturating_add(g.tree_size()),
            PathFormula::Or(l, r) | PathFormula::And(l, r) | PathFormula::Implies(l, r) => {
                1u64.saturating_add(l.tree_size()).saturating_add(r.tree_size())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialectError {
    #[error("{dialect}: strategy quantifier body must be a single temporal operator applied to a state formula, found `{found}`")]
    NestedPath { dialect: Dialect, found: String },
    #[error("{dialect}: path quantifier `{quantifier}` is not allowed")]
    WrongQuantifier { dialect: Dialect, quantifier: String },
}

/// A state formula tagged with the dialect it is interpreted in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    dialect: Dialect,
    root: Arc<StateFormula>,
}

impl Formula {
    /// Wraps `root`, checking the dialect's structural restrictions.
    pub fn new(dialect: Dialect, root: Arc<StateFormula>) -> Result<Self, DialectError> {
        check_state(&root, dialect)?;
        Ok(Formula { dialect, root })
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn root(&self) -> &Arc<StateFormula> {
        &self.root
    }

    pub fn into_root(self) -> Arc<StateFormula> {
        self.root
    }

    /// Reinterprets the formula in another dialect, re-checking restrictions.
    pub fn with_dialect(&self, dialect: Dialect) -> Result<Formula, DialectError> {
        Formula::new(dialect, self.root.clone())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

fn check_state(f: &StateFormula, dialect: Dialect) -> Result<(), DialectError> {
    match f {
        StateFormula::Atom(_) => Ok(()),
        StateFormula::Not(g) => check_state(g, dialect),
        StateFormula::Or(l, r) | StateFormula::And(l, r) | StateFormula::Implies(l, r) => {
            check_state(l, dialect)?;
            check_state(r, dialect)
        }
        StateFormula::Quantified(q, path) => {
            let path_quantifier = matches!(q, Quantifier::SomePath | Quantifier::AllPaths);
            if path_quantifier != (dialect == Dialect::Rctl) {
                return Err(DialectError::WrongQuantifier {
                    dialect,
                    quantifier: quantifier_text(q),
                });
            }
            if dialect.is_star() {
                for s in path.state_leaves() {
                    check_state(s, dialect)?;
                }
                Ok(())
            } else {
                match path.as_simple() {
                    Some((_, s)) => check_state(s, dialect),
                    None => Err(DialectError::NestedPath {
                        dialect,
                        found: path.to_string(),
                    }),
                }
            }
        }
    }
}

fn quantifier_text(q: &Quantifier) -> String {
    match q {
        Quantifier::Exists(a) => format!("<<{a}>>"),
        Quantifier::Forall(a) => format!("[[{a}]]"),
        Quantifier::SomePath => "E".to_string(),
        Quantifier::AllPaths => "A".to_string(),
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&quantifier_text(self))
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::Atom(p) => f.write_str(p),
            StateFormula::Not(g) => write!(f, "!{g}"),
            StateFormula::Or(l, r) => write!(f, "({l} | {r})"),
            StateFormula::And(l, r) => write!(f, "({l} & {r})"),
            StateFormula::Implies(l, r) => write!(f, "({l} -> {r})"),
            StateFormula::Quantified(q, p) => write!(f, "{q} {p}"),
        }
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::State(s) => s.fmt(f),
            PathFormula::Not(g) => write!(f, "!{g}"),
            PathFormula::Or(l, r) => write!(f, "({l} | {r})"),
            PathFormula::And(l, r) => write!(f, "({l} & {r})"),
            PathFormula::Implies(l, r) => write!(f, "({l} -> {r})"),
            PathFormula::Next(g) => write!(f, "X {g}"),
            PathFormula::Eventually(g) => write!(f, "F {g}"),
            PathFormula::Always(g) => write!(f, "G {g}"),
        }
    }
}

/// Canonical text of a formula; [`parse_formula`] reads it back.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
