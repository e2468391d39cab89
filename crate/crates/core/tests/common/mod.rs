//! Random instances shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratl::cgs::{Cgs, Kripke, StateId, StateSet};
use ratl::syntax::{AgentSet, Dialect, Formula, PathFormula, Quantifier, StateFormula, TemporalOp};

pub const PROPS: [&str; 2] = ["p", "q"];
pub const AGENT_NAMES: [&str; 3] = ["a", "b", "c"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<BTreeSet<String>> {
    (0..n)
        .map(|_| PROPS.iter().filter(|_| rng.gen_bool(0.5)).map(|p| p.to_string()).collect())
        .collect()
}

/// Mostly `max`, sometimes anything from 1 up.
fn skewed(rng: &mut ChaCha8Rng, max: usize) -> usize {
    if rng.gen_bool(0.7) {
        max
    } else {
        rng.gen_range(1..=max)
    }
}

/// A CGS with at most `max_states` states, `max_agents` agents and
/// `max_actions` actions, skewed towards the bounds, with uniformly random
/// transitions and labels.
pub fn random_cgs(rng: &mut ChaCha8Rng, max_states: usize, max_agents: usize, max_actions: usize) -> Cgs {
    let n = skewed(rng, max_states);
    let k = skewed(rng, max_agents);
    let m = skewed(rng, max_actions);
    let vectors = m.pow(k as u32);
    let delta = (0..n * vectors).map(|_| StateId(rng.gen_range(0..n))).collect();
    Cgs::new(
        names("s", n),
        AGENT_NAMES[..k].iter().map(|a| a.to_string()).collect(),
        names("x", m),
        PROPS.iter().map(|p| p.to_string()).collect(),
        labels(rng, n),
        delta,
    )
    .expect("well-formed random CGS")
}

/// A Kripke structure with at most `max_states` states and one to three
/// successors per state.
pub fn random_kripke(rng: &mut ChaCha8Rng, max_states: usize) -> Kripke {
    let n = skewed(rng, max_states);
    let mut edges = Vec::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            edges.push((StateId(s), StateId(rng.gen_range(0..n))));
        }
    }
    Kripke::new(
        names("s", n),
        vec![StateId(0)],
        edges,
        PROPS.iter().map(|p| p.to_string()).collect(),
        labels(rng, n),
    )
    .expect("no dead ends")
}

pub fn random_target(rng: &mut ChaCha8Rng, n: usize) -> StateSet {
    StateSet::from_fn(n, |_| rng.gen_bool(0.5))
}

pub fn random_coalition(rng: &mut ChaCha8Rng, agents: &[String]) -> AgentSet {
    agents.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// Which quantifiers a generated formula may use.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Quantifiers {
    Strategic,
    Paths,
}

fn random_op(rng: &mut ChaCha8Rng) -> TemporalOp {
    *[TemporalOp::Next, TemporalOp::Eventually, TemporalOp::Always]
        .choose(rng)
        .expect("non-empty")
}

fn random_quantifier(rng: &mut ChaCha8Rng, agents: &[String], kind: Quantifiers) -> Quantifier {
    match kind {
        Quantifiers::Strategic => {
            let a = random_coalition(rng, agents);
            if rng.gen_bool(0.5) {
                Quantifier::Exists(a)
            } else {
                Quantifier::Forall(a)
            }
        }
        Quantifiers::Paths => {
            if rng.gen_bool(0.5) {
                Quantifier::SomePath
            } else {
                Quantifier::AllPaths
            }
        }
    }
}

fn atom(rng: &mut ChaCha8Rng) -> Arc<StateFormula> {
    StateFormula::atom(*PROPS.choose(rng).expect("non-empty"))
}

/// A state formula of depth at most `depth` whose quantifiers each apply one
/// temporal operator to a state formula.
pub fn random_simple(rng: &mut ChaCha8Rng, depth: usize, agents: &[String], kind: Quantifiers) -> Arc<StateFormula> {
    if depth == 0 || rng.gen_bool(0.15) {
        return atom(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_simple(rng, depth - 1, agents, kind);
    match rng.gen_range(0..10) {
        0 => StateFormula::not(sub(rng)),
        1 => StateFormula::or(sub(rng), sub(rng)),
        2 => StateFormula::and(sub(rng), sub(rng)),
        3 => StateFormula::implies(sub(rng), sub(rng)),
        _ => {
            let q = random_quantifier(rng, agents, kind);
            let op = random_op(rng);
            StateFormula::quantified(q, PathFormula::temporal(op, sub(rng)))
        }
    }
}

/// A path formula of depth at most `depth` mixing temporal operators and
/// connectives; its state leaves are `random_star` formulas.
pub fn random_path(rng: &mut ChaCha8Rng, depth: usize, agents: &[String]) -> Arc<PathFormula> {
    if depth == 0 || rng.gen_bool(0.2) {
        return PathFormula::state(random_star(rng, depth.saturating_sub(1), agents));
    }
    let sub = |rng: &mut ChaCha8Rng| random_path(rng, depth - 1, agents);
    match rng.gen_range(0..7) {
        0 => PathFormula::not(sub(rng)),
        1 => PathFormula::or(sub(rng), sub(rng)),
        2 => PathFormula::and(sub(rng), sub(rng)),
        3 => PathFormula::implies(sub(rng), sub(rng)),
        4 => PathFormula::next(sub(rng)),
        5 => PathFormula::eventually(sub(rng)),
        _ => PathFormula::always(sub(rng)),
    }
}

/// An rATL* state formula of depth at most `depth`.
pub fn random_star(rng: &mut ChaCha8Rng, depth: usize, agents: &[String]) -> Arc<StateFormula> {
    if depth == 0 || rng.gen_bool(0.2) {
        return atom(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_star(rng, depth - 1, agents);
    match rng.gen_range(0..6) {
        0 => StateFormula::not(sub(rng)),
        1 => StateFormula::or(sub(rng), sub(rng)),
        2 => StateFormula::implies(sub(rng), sub(rng)),
        _ => {
            let q = random_quantifier(rng, agents, Quantifiers::Strategic);
            StateFormula::quantified(q, random_path(rng, depth - 1, agents))
        }
    }
}

pub fn formula(dialect: Dialect, root: Arc<StateFormula>) -> Formula {
    Formula::new(dialect, root).expect("generator respects the dialect")
}

/// Every distinct state subformula, children before parents.
pub fn subformulas(f: &Arc<StateFormula>) -> Vec<Arc<StateFormula>> {
    fn walk(f: &Arc<StateFormula>, seen: &mut Vec<Arc<StateFormula>>) {
        if seen.iter().any(|g| Arc::ptr_eq(g, f)) {
            return;
        }
        for c in f.children() {
            walk(c, seen);
        }
        seen.push(f.clone());
    }
    let mut seen = Vec::new();
    walk(f, &mut seen);
    seen
}

pub fn load_cgs(text: &str) -> Cgs {
    match ratl::cgs::load_model(text).expect("valid fixture") {
        ratl::cgs::Model::Cgs(c) => c,
        ratl::cgs::Model::Kripke(_) => panic!("expected a CGS fixture"),
    }
}

/// Rings of five states chained one after the other, `n` states in total.
/// Agent `a` either advances within its ring or tries to leave it; when it
/// tries, agent `b` decides between moving to the next ring and staying put.
pub fn chain_of_rings(n: usize) -> Cgs {
    const RING: usize = 5;
    let ring_start = |s: usize| s - s % RING;
    let next_in_ring = |s: usize| {
        let start = ring_start(s);
        let len = RING.min(n - start);
        start + (s - start + 1) % len
    };
    let next_ring = |s: usize| {
        let start = ring_start(s) + RING;
        if start < n {
            start
        } else {
            0
        }
    };
    let mut delta = Vec::with_capacity(n * 4);
    for s in 0..n {
        // Vector index is a + 2b: (x0,x0), (x1,x0), (x0,x1), (x1,x1).
        delta.extend([next_in_ring(s), next_ring(s), next_in_ring(s), s].map(StateId));
    }
    let labels = (0..n)
        .map(|s| {
            let mut l = BTreeSet::new();
            if s % 2 == 0 {
                l.insert("p".to_string());
            }
            if s % 3 == 0 {
                l.insert("q".to_string());
            }
            l
        })
        .collect();
    Cgs::new(
        names("s", n),
        vec!["a".into(), "b".into()],
        names("x", 2),
        PROPS.iter().map(|p| p.to_string()).collect(),
        labels,
        delta,
    )
    .expect("well-formed chain")
}

/// `(formula, threshold, expected ATL* text)`: every case of the translation
/// to ATL* at least once.
pub const TRANSLATION_GOLDENS: &[(&str, &str, &str)] = &[
    ("p", "0000", "(p | !p)"),
    ("<<a>> G q", "0000", "(q | !q)"),
    ("p", "1111", "p"),
    ("p", "0011", "p"),
    ("!p", "0111", "!p"),
    ("!<<a>> G p", "0011", "!<<a>> G p"),
    ("p | q", "0011", "(p | q)"),
    ("p & q", "0001", "(p & q)"),
    (
        "p -> q",
        "1111",
        "(((((q | !p) & (q | !p)) & (q | !p)) & (q | !p)) & ((p | !p) | !(p | !p)))",
    ),
    (
        "p -> q",
        "0011",
        "((((((q | !p) & (q | !p)) & (q | !p)) & (q | !p)) & ((p | !p) | !(p | !p))) | q)",
    ),
    ("<<a>> G p", "1111", "<<a>> G p"),
    ("<<a>> G p", "0111", "<<a>> F G p"),
    ("<<a>> G p", "0011", "<<a>> G F p"),
    ("<<a>> G p", "0001", "<<a>> F p"),
    ("<<a>> F p", "0111", "<<a>> F p"),
    ("<<a>> X p", "0011", "<<a>> X p"),
    ("[[a]] G p", "0111", "[[a]] F G p"),
    ("[[a]] F p", "0001", "[[a]] F p"),
    ("<<a>> G F p", "0011", "<<a>> G F F p"),
    ("<<a>> !G p", "0011", "<<a>> !G p"),
    ("<<a>> (G p | F q)", "0111", "<<a>> (F G p | F q)"),
    ("<<a>> (G p & X q)", "1111", "<<a>> (G p & X q)"),
    (
        "<<a>> (G p -> G q)",
        "0011",
        "<<a>> ((((((G q | !G p) & (F G q | !F G p)) & (G F q | !G F p)) & (F q | !F p)) & ((p | !p) | !(p | !p))) | G F q)",
    ),
];
