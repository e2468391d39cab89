//! Brute-force reference semantics for small structures.
//!
//! Strategy quantifiers range over the positional coalition strategies and
//! outcomes over the simple lassos of the graph a strategy leaves to the
//! opponents. For rATL and rCTL this is exact: every threshold of a robust
//! temporal operator is a reachability, safety, Büchi, co-Büchi or next-step
//! condition, all of which are won by positional strategies and refuted by
//! simple lassos when they can be refuted at all.

mod lasso;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use lasso::{eval_path, eval_positions, simple_lassos, Domain, Lasso};

use crate::cgs::{Cgs, Kripke, StateId, StateSet};
use crate::games::{Game, GameError, Objective, PositionalStrategy, WinningCondition};
use crate::syntax::{Dialect, Formula, PathFormula, Quantifier, StateFormula};
use crate::truth::TruthValue;

/// Default bound on the number of states.
pub const DEFAULT_MAX_STATES: usize = 6;
/// Bound on the number of positional strategies enumerated per quantifier.
pub const MAX_STRATEGIES: u64 = 1 << 20;
/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const MAX_STATES_ENV: &str = "RATL_ORACLE_MAX_STATES";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("the oracle does not handle {0} formulas here")]
    Unsupported(Dialect),
    #[error("strategy quantifiers need a concurrent game structure")]
    NeedsGame,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// The state bound in effect, honouring the environment override.
pub fn max_states() -> usize {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

/// The structure formulas are evaluated over.
#[derive(Debug, Clone, Copy)]
pub enum Structure<'a> {
    Cgs(&'a Cgs),
    Kripke(&'a Kripke),
}

impl Structure<'_> {
    fn num_states(&self) -> usize {
        match self {
            Structure::Cgs(m) => m.num_states(),
            Structure::Kripke(k) => k.num_states(),
        }
    }

    fn holds(&self, s: StateId, p: &str) -> bool {
        match self {
            Structure::Cgs(m) => m.holds(s, p),
            Structure::Kripke(k) => k.holds(s, p),
        }
    }

    fn successors(&self, s: StateId) -> Vec<StateId> {
        match self {
            Structure::Cgs(m) => m.successors(s).expect("state in range"),
            Structure::Kripke(k) => k.successors(s).to_vec(),
        }
    }
}

/// All positional coalition strategies: one coalition vector per state.
fn strategies(game: &Game<'_>) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = game.num_states();
    let a1 = game.coalition_moves();
    let count = (a1 as u64).checked_pow(n as u32).filter(|&c| c <= MAX_STRATEGIES);
    if count.is_none() {
        return Err(OracleError::BoundExceeded(format!(
            "{a1}^{n} positional strategies exceed {MAX_STRATEGIES}"
        )));
    }
    let mut out = Vec::new();
    let mut sigma = vec![0usize; n];
    loop {
        out.push(sigma.clone());
        let mut i = 0;
        while i < n && sigma[i] + 1 == a1 {
            sigma[i] = 0;
            i += 1;
        }
        if i == n {
            return Ok(out);
        }
        sigma[i] += 1;
    }
}

/// States the opponents can move to from `s` when the coalition plays `v1`.
fn outcomes(game: &Game<'_>, s: StateId, v1: usize) -> Vec<StateId> {
    let mut next: Vec<StateId> = (0..game.opponent_moves()).map(|v2| game.step(s, v1, v2)).collect();
    next.sort_unstable();
    next.dedup();
    next
}

struct Evaluator<'a, V: Domain> {
    structure: Structure<'a>,
    memo: HashMap<*const StateFormula, (Arc<StateFormula>, Vec<V>)>,
}

impl<'a, V: Domain> Evaluator<'a, V> {
    fn new(structure: Structure<'a>) -> Result<Self, OracleError> {
        let n = structure.num_states();
        let bound = max_states();
        if n > bound {
            return Err(OracleError::BoundExceeded(format!(
                "{n} states exceed the limit of {bound} (set {MAX_STATES_ENV} to raise it)"
            )));
        }
        Ok(Evaluator {
            structure,
            memo: HashMap::new(),
        })
    }

    fn values(&mut self, f: &Arc<StateFormula>) -> Result<Vec<V>, OracleError> {
        if let Some((_, v)) = self.memo.get(&Arc::as_ptr(f)) {
            return Ok(v.clone());
        }
        let n = self.structure.num_states();
        let vals: Vec<V> = match f.as_ref() {
            StateFormula::Atom(p) => (0..n).map(|s| V::from_bool(self.structure.holds(StateId(s), p))).collect(),
            StateFormula::Not(a) => self.values(a)?.into_iter().map(V::not).collect(),
            StateFormula::Or(a, b) => zip(self.values(a)?, self.values(b)?, |x, y| x.max(y)),
            StateFormula::And(a, b) => zip(self.values(a)?, self.values(b)?, |x, y| x.min(y)),
            StateFormula::Implies(a, b) => zip(self.values(a)?, self.values(b)?, V::implies),
            StateFormula::Quantified(q, path) => self.quantified(q, path)?,
        };
        self.memo.insert(Arc::as_ptr(f), (f.clone(), vals.clone()));
        Ok(vals)
    }

    fn leaf_table(&mut self, path: &PathFormula) -> Result<HashMap<*const StateFormula, Vec<V>>, OracleError> {
        let mut table = HashMap::new();
        for leaf in path.state_leaves() {
            table.insert(Arc::as_ptr(leaf), self.values(leaf)?);
        }
        Ok(table)
    }

    /// Worst (`max = false`) or best outcome over the simple lassos from `s`.
    fn over_lassos(
        path: &PathFormula,
        s: StateId,
        succ: &dyn Fn(StateId) -> Vec<StateId>,
        leaves: &HashMap<*const StateFormula, Vec<V>>,
        max: bool,
    ) -> V {
        let mut leaf = |f: &Arc<StateFormula>, st: StateId| leaves[&Arc::as_ptr(f)][st.0];
        let vals = simple_lassos(s, succ).into_iter().map(|l| eval_path(path, &l, &mut leaf));
        if max { vals.max() } else { vals.min() }.expect("every state has a lasso")
    }

    fn quantified(&mut self, q: &Quantifier, path: &PathFormula) -> Result<Vec<V>, OracleError> {
        let leaves = self.leaf_table(path)?;
        let n = self.structure.num_states();
        let structure = self.structure;
        match q {
            Quantifier::SomePath | Quantifier::AllPaths => {
                let succ = |s: StateId| structure.successors(s);
                let max = matches!(q, Quantifier::SomePath);
                Ok((0..n).map(|s| Self::over_lassos(path, StateId(s), &succ, &leaves, max)).collect())
            }
            Quantifier::Exists(agents) | Quantifier::Forall(agents) => {
                let Structure::Cgs(cgs) = structure else {
                    return Err(OracleError::NeedsGame);
                };
                let game = Game::new(cgs, agents)?;
                let exists = matches!(q, Quantifier::Exists(_));
                let mut best: Vec<Option<V>> = vec![None; n];
                for sigma in strategies(&game)? {
                    let succ = |s: StateId| outcomes(&game, s, sigma[s.0]);
                    for (s, slot) in best.iter_mut().enumerate() {
                        // the coalition fixes sigma, the opponents pick the outcome
                        let v = Self::over_lassos(path, StateId(s), &succ, &leaves, !exists);
                        *slot = Some(match *slot {
                            None => v,
                            Some(b) if exists => b.max(v),
                            Some(b) => b.min(v),
                        });
                    }
                }
                Ok(best.into_iter().map(|v| v.expect("at least one strategy")).collect())
            }
        }
    }
}

fn zip<V: Copy>(a: Vec<V>, b: Vec<V>, op: impl Fn(V, V) -> V) -> Vec<V> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn require(f: &Formula, allowed: &[Dialect]) -> Result<(), OracleError> {
    if allowed.contains(&f.dialect()) {
        Ok(())
    } else {
        Err(OracleError::Unsupported(f.dialect()))
    }
}

/// Robust value of an rATL, rATL* or rCTL formula in every state of a CGS.
pub fn brute_force_eval(cgs: &Cgs, f: &Formula) -> Result<Vec<TruthValue>, OracleError> {
    require(f, &[Dialect::Ratl, Dialect::RatlStar, Dialect::Rctl])?;
    Evaluator::<TruthValue>::new(Structure::Cgs(cgs))?.values(f.root())
}

/// Every subformula with its value in each state.
pub type ValueTable = Vec<(Arc<StateFormula>, Vec<TruthValue>)>;

/// Values of every subformula, keyed by node identity.
pub fn brute_force_table(cgs: &Cgs, f: &Formula) -> Result<ValueTable, OracleError> {
    require(f, &[Dialect::Ratl, Dialect::RatlStar, Dialect::Rctl])?;
    let mut ev = Evaluator::<TruthValue>::new(Structure::Cgs(cgs))?;
    ev.values(f.root())?;
    Ok(ev.memo.into_values().collect())
}

/// States where the robust value of `f` is at least `t`.
pub fn brute_force_sat(cgs: &Cgs, f: &Formula, t: TruthValue) -> Result<StateSet, OracleError> {
    let values = brute_force_eval(cgs, f)?;
    Ok(StateSet::from_fn(cgs.num_states(), |s| values[s.0] >= t))
}

/// Whether a play, given by its states at even positions, meets `cond`.
pub fn lasso_satisfies(lasso: &Lasso, cond: &WinningCondition) -> bool {
    let t = &cond.target;
    let mut all = lasso.prefix.iter().chain(&lasso.cycle);
    match cond.objective {
        Objective::Next => t.contains(lasso.state(1)),
        Objective::Reach => all.any(|&s| t.contains(s)),
        Objective::Safety => all.all(|&s| t.contains(s)),
        Objective::Buchi => lasso.cycle.iter().any(|&s| t.contains(s)),
        Objective::CoBuchi => lasso.cycle.iter().all(|&s| t.contains(s)),
    }
}

/// Player 1's winning region: the states from which some positional
/// strategy meets `cond` on every lasso the opponents can produce.
pub fn brute_force_region(game: &Game<'_>, cond: &WinningCondition) -> Result<StateSet, OracleError> {
    let n = game.num_states();
    let bound = max_states();
    if n > bound {
        return Err(OracleError::BoundExceeded(format!("{n} states exceed the limit of {bound}")));
    }
    let mut win = StateSet::empty(n);
    for sigma in strategies(game)? {
        let succ = |s: StateId| outcomes(game, s, sigma[s.0]);
        for s in (0..n).map(StateId) {
            if !win.contains(s) && simple_lassos(s, &succ).iter().all(|l| lasso_satisfies(l, cond)) {
                win.insert(s);
            }
        }
    }
    Ok(win)
}

/// Whether every lasso from `s` consistent with a Player 1 `strategy` meets
/// `cond`. States the strategy does not cover play the first vector.
pub fn strategy_meets(game: &Game<'_>, strategy: &PositionalStrategy, cond: &WinningCondition, s: StateId) -> bool {
    let succ = |st: StateId| outcomes(game, st, strategy.choice(st.0).unwrap_or(0));
    simple_lassos(s, &succ).iter().all(|l| lasso_satisfies(l, cond))
}

/// Classical truth of an ATL or ATL* formula in every state.
pub fn atl_eval(cgs: &Cgs, f: &Formula) -> Result<Vec<bool>, OracleError> {
    require(f, &[Dialect::Atl, Dialect::AtlStar])?;
    Evaluator::<bool>::new(Structure::Cgs(cgs))?.values(f.root())
}

/// Robust value of an rCTL formula in every state of a Kripke structure.
pub fn rctl_eval(k: &Kripke, f: &Formula) -> Result<Vec<TruthValue>, OracleError> {
    require(f, &[Dialect::Rctl])?;
    Evaluator::<TruthValue>::new(Structure::Kripke(k))?.values(f.root())
}

/// Guaranteed value of `path` from `s` when the coalition of `game` plays
/// `strategy`: the worst outcome over all opponent behaviours. States the
/// strategy does not cover play the first coalition vector.
pub fn verify_strategy(
    game: &Game<'_>,
    strategy: &PositionalStrategy,
    path: &Arc<PathFormula>,
    s: StateId,
) -> Result<TruthValue, OracleError> {
    let mut ev = Evaluator::<TruthValue>::new(Structure::Cgs(game.cgs()))?;
    let leaves = ev.leaf_table(path)?;
    let succ = |st: StateId| outcomes(game, st, strategy.choice(st.0).unwrap_or(0));
    Ok(Evaluator::over_lassos(path, s, &succ, &leaves, false))
}
