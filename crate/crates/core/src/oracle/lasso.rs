use std::sync::Arc;

use crate::cgs::StateId;
use crate::syntax::{PathFormula, StateFormula};
use crate::truth::TruthValue;

/// An ultimately periodic path `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl Lasso {
    /// `None` if the cycle is empty.
    pub fn new(prefix: Vec<StateId>, cycle: Vec<StateId>) -> Option<Self> {
        (!cycle.is_empty()).then_some(Lasso { prefix, cycle })
    }

    /// Number of distinct positions.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The state at any position of the infinite path.
    pub fn state(&self, i: usize) -> StateId {
        let p = self.prefix.len();
        if i < p {
            self.prefix[i]
        } else {
            self.cycle[(i - p) % self.cycle.len()]
        }
    }

    fn next(&self, i: usize) -> usize {
        if i + 1 == self.len() {
            self.prefix.len()
        } else {
            i + 1
        }
    }

    /// First `k` states of the path.
    pub fn unroll(&self, k: usize) -> Vec<StateId> {
        (0..k).map(|i| self.state(i)).collect()
    }
}

/// All lassos from `start` whose states are pairwise distinct. `succ` must
/// return each successor once.
pub fn simple_lassos(start: StateId, succ: &dyn Fn(StateId) -> Vec<StateId>) -> Vec<Lasso> {
    let mut out = Vec::new();
    let mut path = vec![start];
    extend(&mut path, succ, &mut out);
    out
}

fn extend(path: &mut Vec<StateId>, succ: &dyn Fn(StateId) -> Vec<StateId>, out: &mut Vec<Lasso>) {
    let last = *path.last().expect("non-empty path");
    for t in succ(last) {
        if let Some(k) = path.iter().position(|&s| s == t) {
            out.push(Lasso {
                prefix: path[..k].to_vec(),
                cycle: path[k..].to_vec(),
            });
        } else {
            path.push(t);
            extend(path, succ, out);
            path.pop();
        }
    }
}

/// Value domain of an evaluator: truth values for the robust logics,
/// `bool` for the classical ones. Disjunction and conjunction are max and min
/// in both.
pub trait Domain: Copy + Ord + std::fmt::Debug {
    fn from_bool(b: bool) -> Self;
    fn not(self) -> Self;
    fn implies(self, other: Self) -> Self;
    /// Value of an always formula given the values at the positions
    /// reachable from the current one and at the positions of the cycle.
    fn always(reach: &[Self], cycle: &[Self]) -> Self;
}

impl Domain for bool {
    fn from_bool(b: bool) -> Self {
        b
    }

    fn not(self) -> Self {
        !self
    }

    fn implies(self, other: Self) -> Self {
        !self || other
    }

    fn always(reach: &[Self], _cycle: &[Self]) -> Self {
        reach.iter().all(|&b| b)
    }
}

impl Domain for TruthValue {
    fn from_bool(b: bool) -> Self {
        TruthValue::from_bool(b)
    }

    fn not(self) -> Self {
        self.neg()
    }

    fn implies(self, other: Self) -> Self {
        TruthValue::implies(self, other)
    }

    fn always(reach: &[Self], cycle: &[Self]) -> Self {
        let all = |vals: &[Self], k: usize| vals.iter().all(|v| v.bits()[k]);
        let any = |vals: &[Self], k: usize| vals.iter().any(|v| v.bits()[k]);
        // the positions visited infinitely often are exactly the cycle
        TruthValue::from_bits([all(reach, 0), all(cycle, 1), any(cycle, 2), any(reach, 3)])
            .expect("always yields a monotone bit quadruple")
    }
}

/// Values of `path` at every position of `lasso`. `leaf` gives the value of
/// a state subformula in a state.
pub fn eval_positions<V: Domain>(
    path: &PathFormula,
    lasso: &Lasso,
    leaf: &mut dyn FnMut(&Arc<StateFormula>, StateId) -> V,
) -> Vec<V> {
    let len = lasso.len();
    let p = lasso.prefix.len();
    match path {
        PathFormula::State(f) => (0..len).map(|i| leaf(f, lasso.state(i))).collect(),
        PathFormula::Not(a) => eval_positions(a, lasso, leaf).into_iter().map(V::not).collect(),
        PathFormula::Or(a, b) | PathFormula::And(a, b) | PathFormula::Implies(a, b) => {
            let x = eval_positions(a, lasso, leaf);
            let y = eval_positions(b, lasso, leaf);
            x.into_iter()
                .zip(y)
                .map(|(x, y)| match path {
                    PathFormula::Or(..) => x.max(y),
                    PathFormula::And(..) => x.min(y),
                    _ => x.implies(y),
                })
                .collect()
        }
        PathFormula::Next(a) => {
            let x = eval_positions(a, lasso, leaf);
            (0..len).map(|i| x[lasso.next(i)]).collect()
        }
        PathFormula::Eventually(a) => {
            let x = eval_positions(a, lasso, leaf);
            (0..len).map(|i| *x[i.min(p)..].iter().max().expect("non-empty")).collect()
        }
        PathFormula::Always(a) => {
            let x = eval_positions(a, lasso, leaf);
            (0..len).map(|i| V::always(&x[i.min(p)..], &x[p..])).collect()
        }
    }
}

/// Value of `path` on the whole lasso.
pub fn eval_path<V: Domain>(
    path: &PathFormula,
    lasso: &Lasso,
    leaf: &mut dyn FnMut(&Arc<StateFormula>, StateId) -> V,
) -> V {
    eval_positions(path, lasso, leaf)[0]
}
