//! Model checking rATL by threshold: for every subformula and every truth
//! value `t`, the set of states where the subformula is worth at least `t`.
//!
//! Each threshold of a quantified subformula reduces to one game on `S_A`.
//! For `<<A>>` the coalition must win the condition below; for `[[A]]` the
//! coalition must not be able to win its dual.
//!
//! | operator | 1111   | 0111    | 0011  | 0001  |
//! |----------|--------|---------|-------|-------|
//! | `X`      | next   | next    | next  | next  |
//! | `F`      | reach  | reach   | reach | reach |
//! | `G`      | safety | coBüchi | Büchi | reach |

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cgs::{kripke_to_cgs, Cgs, Kripke, ModelError, StateId, StateSet, KRIPKE_AGENT};
use crate::games::{Game, GameError, Objective, Player, PositionalStrategy, WinningCondition};
use crate::syntax::{
    dot_transform, nnf, rctl_embed, AgentSet, Dialect, Formula, Quantifier, StateFormula, TemporalOp,
    TransformError,
};
use crate::truth::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("path formula `{0}` nests temporal operators; translate it to ATL* first")]
    NotSimple(String),
    #[error("{0} formulas cannot be checked directly")]
    WrongDialect(Dialect),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// The game condition deciding `<<A>> op φ ⪰ t`, given `Sat(φ, t)`.
pub fn condition(op: TemporalOp, t: TruthValue, sat: StateSet) -> WinningCondition {
    let objective = match (op, t) {
        (TemporalOp::Next, _) => Objective::Next,
        (TemporalOp::Eventually, _) => Objective::Reach,
        (TemporalOp::Always, TruthValue::Always) => Objective::Safety,
        (TemporalOp::Always, TruthValue::AlmostAlways) => Objective::CoBuchi,
        (TemporalOp::Always, TruthValue::InfinitelyOften) => Objective::Buchi,
        (TemporalOp::Always, _) => Objective::Reach,
    };
    WinningCondition::new(objective, sat)
}

/// Satisfaction sets of one subformula, indexed by the rank of the threshold.
pub type SatSets = [StateSet; 5];

/// A coalition strategy certifying `<<A>> ψ ⪰ t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub threshold: TruthValue,
    pub coalition: Vec<String>,
    /// `(state, [(agent, action)])` for every state of the winning region.
    pub moves: Vec<(String, Vec<(String, String)>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub state: String,
    pub formula: String,
    pub value: TruthValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<TruthValue>,
    /// `value ⪰ threshold`, when a threshold was asked for.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Memoizing checker for one structure. Subformulas are keyed by node
/// identity, so shared subtrees are solved once.
pub struct Checker<'a> {
    cgs: &'a Cgs,
    games: HashMap<AgentSet, Game<'a>>,
    table: HashMap<*const StateFormula, (Arc<StateFormula>, SatSets)>,
}

impl<'a> Checker<'a> {
    pub fn new(cgs: &'a Cgs) -> Self {
        Checker {
            cgs,
            games: HashMap::new(),
            table: HashMap::new(),
        }
    }

    pub fn cgs(&self) -> &'a Cgs {
        self.cgs
    }

    fn game(&mut self, agents: &AgentSet) -> Result<&Game<'a>, CheckError> {
        if !self.games.contains_key(agents) {
            let game = Game::new(self.cgs, agents)?;
            self.games.insert(agents.clone(), game);
        }
        Ok(&self.games[agents])
    }

    /// The coalition of a quantifier; `E` and `A` quantify over all agents
    /// and no agents respectively.
    fn coalition(&self, q: &Quantifier) -> (AgentSet, bool) {
        match q {
            Quantifier::Exists(a) => (a.clone(), true),
            Quantifier::Forall(a) => (a.clone(), false),
            Quantifier::SomePath => (self.cgs.agent_names().iter().cloned().collect(), true),
            Quantifier::AllPaths => (AgentSet::empty(), true),
        }
    }

    fn sets_of(&self, values: &[TruthValue]) -> SatSets {
        let n = self.cgs.num_states();
        TruthValue::ALL.map(|t| StateSet::from_fn(n, |s| values[s.0] >= t))
    }

    /// `Sat(φ, t)` for all five thresholds.
    pub fn sat_sets(&mut self, f: &Arc<StateFormula>) -> Result<SatSets, CheckError> {
        if let Some((_, sets)) = self.table.get(&Arc::as_ptr(f)) {
            return Ok(sets.clone());
        }
        let n = self.cgs.num_states();
        let sets: SatSets = match f.as_ref() {
            StateFormula::Atom(p) => {
                let holds = StateSet::from_fn(n, |s| self.cgs.holds(s, p));
                TruthValue::ALL.map(|t| if t == TruthValue::BOTTOM { StateSet::full(n) } else { holds.clone() })
            }
            StateFormula::Not(a) => {
                let top = self.sat_sets(a)?[TruthValue::TOP.rank()].complement();
                TruthValue::ALL.map(|t| if t == TruthValue::BOTTOM { StateSet::full(n) } else { top.clone() })
            }
            StateFormula::Or(a, b) => {
                let (x, y) = (self.sat_sets(a)?, self.sat_sets(b)?);
                TruthValue::ALL.map(|t| x[t.rank()].union(&y[t.rank()]))
            }
            StateFormula::And(a, b) => {
                let (x, y) = (self.sat_sets(a)?, self.sat_sets(b)?);
                TruthValue::ALL.map(|t| x[t.rank()].intersection(&y[t.rank()]))
            }
            StateFormula::Implies(a, b) => {
                let x = self.values(a)?;
                let y = self.values(b)?;
                let v: Vec<TruthValue> = x.iter().zip(&y).map(|(x, y)| x.implies(*y)).collect();
                self.sets_of(&v)
            }
            StateFormula::Quantified(q, path) => {
                let (op, inner) = path.as_simple().ok_or_else(|| CheckError::NotSimple(path.to_string()))?;
                let inner_sets = self.sat_sets(inner)?;
                let (agents, exists) = self.coalition(q);
                let game = self.game(&agents)?;
                TruthValue::ALL.map(|t| {
                    if t == TruthValue::BOTTOM {
                        return StateSet::full(n);
                    }
                    let cond = condition(op, t, inner_sets[t.rank()].clone());
                    if exists {
                        game.solve(&cond).states
                    } else {
                        game.solve(&cond.dual()).states.complement()
                    }
                })
            }
        };
        debug_assert!(sets.windows(2).all(|w| w[1].is_subset(&w[0])));
        self.table.insert(Arc::as_ptr(f), (f.clone(), sets.clone()));
        Ok(sets)
    }

    pub fn sat(&mut self, f: &Arc<StateFormula>, t: TruthValue) -> Result<StateSet, CheckError> {
        Ok(self.sat_sets(f)?[t.rank()].clone())
    }

    /// The value of `f` in every state: the greatest `t` with `s ∈ Sat(f, t)`.
    pub fn values(&mut self, f: &Arc<StateFormula>) -> Result<Vec<TruthValue>, CheckError> {
        let sets = self.sat_sets(f)?;
        Ok(self
            .cgs
            .states()
            .map(|s| {
                TruthValue::ALL
                    .into_iter()
                    .rev()
                    .find(|t| sets[t.rank()].contains(s))
                    .unwrap_or(TruthValue::BOTTOM)
            })
            .collect())
    }

    /// Coalition and game condition behind `<<A>> ψ ⪰ t` for a formula of
    /// that shape.
    pub fn strategy_condition(
        &mut self,
        f: &Arc<StateFormula>,
        t: TruthValue,
    ) -> Result<Option<(AgentSet, WinningCondition)>, CheckError> {
        let StateFormula::Quantified(Quantifier::Exists(agents), path) = f.as_ref() else {
            return Ok(None);
        };
        let (op, inner) = path.as_simple().ok_or_else(|| CheckError::NotSimple(path.to_string()))?;
        let sat = self.sat(inner, t)?;
        Ok(Some((agents.clone(), condition(op, t, sat))))
    }

    /// A positional coalition strategy achieving at least `t` for a formula
    /// `<<A>> ψ`, on every state where that value is guaranteed.
    pub fn strategy(
        &mut self,
        f: &Arc<StateFormula>,
        t: TruthValue,
    ) -> Result<Option<PositionalStrategy>, CheckError> {
        let Some((agents, cond)) = self.strategy_condition(f, t)? else {
            return Ok(None);
        };
        Ok(Some(self.game(&agents)?.strategy(&cond, Player::One)))
    }

    /// Witness for `f ⪰ t` when `f` is `<<A>> ψ` and `t` is above `0000`.
    pub fn witness(&mut self, f: &Arc<StateFormula>, t: TruthValue) -> Result<Option<Witness>, CheckError> {
        if t == TruthValue::BOTTOM {
            return Ok(None);
        }
        let Some((agents, cond)) = self.strategy_condition(f, t)? else {
            return Ok(None);
        };
        let cgs = self.cgs;
        let game = self.game(&agents)?;
        let strategy = game.strategy(&cond, Player::One);
        let moves = strategy
            .region
            .iter()
            .filter_map(|s| {
                let v1 = strategy.coalition_move(game, s).ok()?;
                let profile = game
                    .coalition_profile(v1)
                    .into_iter()
                    .map(|(a, act)| (cgs.agent_names()[a].clone(), cgs.action_names()[act].clone()))
                    .collect();
                Some((cgs.state_name(s).to_string(), profile))
            })
            .collect();
        Ok(Some(Witness {
            threshold: t,
            coalition: agents.iter().map(str::to_string).collect(),
            moves,
        }))
    }
}

fn checkable(f: &Formula) -> Result<(), CheckError> {
    match f.dialect() {
        Dialect::Ratl | Dialect::RatlStar | Dialect::Rctl => Ok(()),
        d => Err(CheckError::WrongDialect(d)),
    }
}

/// Values of a robust formula in every state.
pub fn evaluate(cgs: &Cgs, f: &Formula) -> Result<Vec<TruthValue>, CheckError> {
    checkable(f)?;
    Checker::new(cgs).values(f.root())
}

/// `Sat(f, t)`.
pub fn sat_set(cgs: &Cgs, f: &Formula, t: TruthValue) -> Result<StateSet, CheckError> {
    checkable(f)?;
    Checker::new(cgs).sat(f.root(), t)
}

/// Value of `f` in `state`; with a threshold also the verdict `value ⪰ t`.
/// A witness strategy is attached when `f` is `<<A>> ψ` and its value is
/// above `0000`, for the threshold asked for or otherwise for the value.
pub fn check(cgs: &Cgs, f: &Formula, state: StateId, threshold: Option<TruthValue>) -> Result<CheckResult, CheckError> {
    checkable(f)?;
    cgs.check_state(state)?;
    let mut checker = Checker::new(cgs);
    let value = checker.values(f.root())?[state.0];
    let verdict = threshold.map(|t| value >= t);
    let witness_at = match threshold {
        Some(t) if value >= t => Some(t),
        Some(_) => None,
        None => Some(value),
    };
    let witness = match witness_at {
        Some(t) => checker.witness(f.root(), t)?,
        None => None,
    };
    Ok(CheckResult {
        state: cgs.state_name(state).to_string(),
        formula: f.root().to_string(),
        value,
        threshold,
        verdict,
        witness,
    })
}

/// Classical ATL by way of the dotted formula: `φ` holds iff its robust
/// counterpart is worth `1111`.
pub fn check_atl(cgs: &Cgs, f: &Formula) -> Result<StateSet, CheckError> {
    if f.dialect() != Dialect::Atl {
        return Err(CheckError::WrongDialect(f.dialect()));
    }
    let dotted = dot_transform(&nnf(f)?)?;
    Checker::new(cgs).sat(dotted.root(), TruthValue::TOP)
}

/// rCTL over a Kripke structure through its one-agent game structure.
pub fn check_rctl(k: &Kripke, f: &Formula) -> Result<Vec<TruthValue>, CheckError> {
    if f.dialect() != Dialect::Rctl {
        return Err(CheckError::WrongDialect(f.dialect()));
    }
    let cgs = kripke_to_cgs(k)?;
    let embedded = rctl_embed(f, KRIPKE_AGENT)?;
    Checker::new(&cgs).values(embedded.root())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use std::collections::BTreeSet;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// One agent picks the successor: s0 -> s0 | s1, s1 -> s0 | s2, s2 -> s2.
    /// `p` holds in s0 and s2.
    fn chooser() -> Cgs {
        let (s0, s1, s2) = (StateId(0), StateId(1), StateId(2));
        let p = BTreeSet::from(["p".to_string()]);
        Cgs::new(
            names(&["s0", "s1", "s2"]),
            names(&["a"]),
            names(&["x", "y"]),
            names(&["p"]),
            vec![p.clone(), BTreeSet::new(), p],
            vec![s0, s1, s0, s2, s2, s2],
        )
        .unwrap()
    }

    fn values(m: &Cgs, text: &str) -> Vec<TruthValue> {
        evaluate(m, &parse_formula(text, Dialect::Ratl).unwrap()).unwrap()
    }

    #[test]
    fn always_thresholds() {
        use TruthValue::*;
        let m = chooser();
        assert_eq!(values(&m, "<<a>> G p"), vec![Always, AlmostAlways, Always]);
        // (s0 s1)^ω visits p infinitely often
        assert_eq!(values(&m, "<<>> G p"), vec![InfinitelyOften, InfinitelyOften, Always]);
        assert_eq!(values(&m, "[[a]] G p"), vec![InfinitelyOften, InfinitelyOften, Always]);
        assert_eq!(values(&m, "<<a>> G !p"), vec![InfinitelyOften, InfinitelyOften, Never]);
        assert_eq!(values(&m, "<<a>> X !p"), vec![Always, Never, Never]);
    }

    #[test]
    fn implication_is_pointwise() {
        use TruthValue::*;
        let m = chooser();
        assert_eq!(values(&m, "<<>> G p -> <<a>> G p"), vec![Always, Always, Always]);
        assert_eq!(values(&m, "<<a>> G p -> <<>> G p"), vec![InfinitelyOften, InfinitelyOften, Always]);
    }

    #[test]
    fn witness_for_top_level_strategy() {
        let m = chooser();
        let f = parse_formula("<<a>> G p", Dialect::Ratl).unwrap();
        let r = check(&m, &f, StateId(1), None).unwrap();
        assert_eq!(r.value, TruthValue::AlmostAlways);
        let w = r.witness.unwrap();
        assert_eq!(w.threshold, TruthValue::AlmostAlways);
        let s1 = w.moves.iter().find(|(s, _)| s == "s1").unwrap();
        // least rank-decreasing move: back to s0, which the strategy never leaves
        assert_eq!(s1.1, vec![("a".to_string(), "x".to_string())]);
        let r = check(&m, &f, StateId(1), Some(TruthValue::Always)).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert!(r.witness.is_none());
    }

    #[test]
    fn nested_paths_are_rejected() {
        let m = chooser();
        let f = parse_formula("<<a>> G F p", Dialect::RatlStar).unwrap();
        assert!(matches!(evaluate(&m, &f), Err(CheckError::NotSimple(_))));
        let atl = parse_formula("<<a>> G p", Dialect::Atl).unwrap();
        assert!(matches!(evaluate(&m, &atl), Err(CheckError::WrongDialect(Dialect::Atl))));
    }

    #[test]
    fn classical_atl() {
        let m = chooser();
        let f = parse_formula("!<<a>> G p", Dialect::Atl).unwrap();
        assert_eq!(check_atl(&m, &f).unwrap(), StateSet::from_states(3, [StateId(1)]));
    }

    #[test]
    fn rctl_through_the_embedding() {
        use TruthValue::*;
        let k = Kripke::new(
            names(&["s", "t"]),
            vec![StateId(0)],
            [(StateId(0), StateId(0)), (StateId(0), StateId(1)), (StateId(1), StateId(0))],
            names(&["p"]),
            vec![BTreeSet::from(["p".to_string()]), BTreeSet::new()],
        )
        .unwrap();
        let e = parse_formula("E G p", Dialect::Rctl).unwrap();
        let a = parse_formula("A G p", Dialect::Rctl).unwrap();
        assert_eq!(check_rctl(&k, &e).unwrap(), vec![Always, AlmostAlways]);
        assert_eq!(check_rctl(&k, &a).unwrap(), vec![InfinitelyOften, InfinitelyOften]);
    }
}
