//! Syntactic transformations between the dialects.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::{AgentSet, Dialect, DialectError, Formula, PathFormula, Quantifier, StateFormula};
use crate::truth::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("expected a formula in dialect {expected}, got {found}")]
    WrongDialect { expected: &'static str, found: Dialect },
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error(transparent)]
    Dialect(#[from] DialectError),
}

fn require(f: &Formula, allowed: &[Dialect], expected: &'static str) -> Result<(), TransformError> {
    if allowed.contains(&f.dialect()) {
        Ok(())
    } else {
        Err(TransformError::WrongDialect {
            expected,
            found: f.dialect(),
        })
    }
}

/// Eliminates implications (`a -> b` becomes `!a | b`) and pushes negations
/// down to the atoms, dualizing strategy quantifiers and temporal operators.
pub fn nnf(f: &Formula) -> Result<Formula, TransformError> {
    require(f, &[Dialect::Atl], "atl")?;
    Ok(Formula::new(Dialect::Atl, nnf_pos(f.root()))?)
}

fn nnf_pos(f: &Arc<StateFormula>) -> Arc<StateFormula> {
    match &**f {
        StateFormula::Atom(_) => f.clone(),
        StateFormula::Not(g) => nnf_neg(g),
        StateFormula::Or(l, r) => StateFormula::or(nnf_pos(l), nnf_pos(r)),
        StateFormula::And(l, r) => StateFormula::and(nnf_pos(l), nnf_pos(r)),
        StateFormula::Implies(l, r) => StateFormula::or(nnf_neg(l), nnf_pos(r)),
        StateFormula::Quantified(q, path) => {
            let (op, body) = path.as_simple().expect("ATL quantifier bodies are single temporal operators");
            StateFormula::quantified(q.clone(), PathFormula::temporal(op, nnf_pos(body)))
        }
    }
}

fn nnf_neg(f: &Arc<StateFormula>) -> Arc<StateFormula> {
    use super::TemporalOp::*;
    match &**f {
        StateFormula::Atom(_) => StateFormula::not(f.clone()),
        StateFormula::Not(g) => nnf_pos(g),
        StateFormula::Or(l, r) => StateFormula::and(nnf_neg(l), nnf_neg(r)),
        StateFormula::And(l, r) => StateFormula::or(nnf_neg(l), nnf_neg(r)),
        StateFormula::Implies(l, r) => StateFormula::and(nnf_pos(l), nnf_neg(r)),
        StateFormula::Quantified(q, path) => {
            let (op, body) = path.as_simple().expect("ATL quantifier bodies are single temporal operators");
            let dual_q = match q {
                Quantifier::Exists(a) => Quantifier::Forall(a.clone()),
                Quantifier::Forall(a) => Quantifier::Exists(a.clone()),
                Quantifier::SomePath => Quantifier::AllPaths,
                Quantifier::AllPaths => Quantifier::SomePath,
            };
            let dual_op = match op {
                Next => Next,
                Eventually => Always,
                Always => Eventually,
            };
            StateFormula::quantified(dual_q, PathFormula::temporal(dual_op, nnf_neg(body)))
        }
    }
}

/// Negations only on atoms and no implications.
pub fn is_nnf(f: &StateFormula) -> bool {
    match f {
        StateFormula::Atom(_) => true,
        StateFormula::Not(g) => matches!(**g, StateFormula::Atom(_)),
        StateFormula::Or(l, r) | StateFormula::And(l, r) => is_nnf(l) && is_nnf(r),
        StateFormula::Implies(..) => false,
        StateFormula::Quantified(_, path) => path.state_leaves().into_iter().all(|s| is_nnf(s)),
    }
}

/// Reads an ATL formula in negation normal form as an rATL formula: the tree
/// is kept as is and every temporal operator becomes its robust counterpart.
pub fn dot_transform(f: &Formula) -> Result<Formula, TransformError> {
    require(f, &[Dialect::Atl], "atl")?;
    if !is_nnf(f.root()) {
        return Err(TransformError::NotNnf);
    }
    Ok(f.with_dialect(Dialect::Ratl)?)
}

/// Replaces `E` by `<<agent>>` and `A` by `<<>>`, turning an rCTL formula into
/// an rATL formula over the single-agent structure of a Kripke structure.
pub fn rctl_embed(f: &Formula, agent: &str) -> Result<Formula, TransformError> {
    require(f, &[Dialect::Rctl], "rctl")?;
    Ok(Formula::new(Dialect::Ratl, embed_state(f.root(), agent))?)
}

fn embed_state(f: &Arc<StateFormula>, agent: &str) -> Arc<StateFormula> {
    match &**f {
        StateFormula::Atom(_) => f.clone(),
        StateFormula::Not(g) => StateFormula::not(embed_state(g, agent)),
        StateFormula::Or(l, r) => StateFormula::or(embed_state(l, agent), embed_state(r, agent)),
        StateFormula::And(l, r) => StateFormula::and(embed_state(l, agent), embed_state(r, agent)),
        StateFormula::Implies(l, r) => StateFormula::implies(embed_state(l, agent), embed_state(r, agent)),
        StateFormula::Quantified(q, path) => {
            let q = match q {
                Quantifier::SomePath => Quantifier::Exists(AgentSet::singleton(agent)),
                Quantifier::AllPaths => Quantifier::Exists(AgentSet::empty()),
                other => other.clone(),
            };
            let (op, body) = path.as_simple().expect("rCTL path formulas are single temporal operators");
            StateFormula::quantified(q, PathFormula::temporal(op, embed_state(body, agent)))
        }
    }
}

/// Translates an rATL* (or rATL) formula `φ` and a threshold `t` into a
/// classical ATL* formula `φ_t` that holds at a state exactly when `φ`
/// evaluates to at least `t` there.
///
/// Subresults are memoized per `(node, threshold)` and shared, so the result
/// is a DAG whose size is linear in the input; printing it expands sharing.
pub fn ratlstar_to_atlstar(f: &Formula, t: TruthValue) -> Result<Formula, TransformError> {
    require(f, &[Dialect::Ratl, Dialect::RatlStar], "ratl or ratlstar")?;
    let witness = f.root().atoms().into_iter().next().unwrap_or_else(|| "p".to_string());
    let atom = StateFormula::atom(witness);
    let tautology = StateFormula::or(atom.clone(), StateFormula::not(atom));
    let mut tr = Translator {
        state_memo: HashMap::new(),
        path_memo: HashMap::new(),
        path_tautology: PathFormula::state(tautology.clone()),
        tautology,
    };
    let root = tr.state(f.root(), t);
    Ok(Formula::new(Dialect::AtlStar, root)?)
}

struct Translator {
    state_memo: HashMap<(usize, TruthValue), Arc<StateFormula>>,
    path_memo: HashMap<(usize, TruthValue), Arc<PathFormula>>,
    tautology: Arc<StateFormula>,
    path_tautology: Arc<PathFormula>,
}

impl Translator {
    fn state(&mut self, f: &Arc<StateFormula>, t: TruthValue) -> Arc<StateFormula> {
        if t == TruthValue::Never {
            return self.tautology.clone();
        }
        let key = (Arc::as_ptr(f) as *const () as usize, t);
        if let Some(done) = self.state_memo.get(&key) {
            return done.clone();
        }
        let out = match &**f {
            StateFormula::Atom(_) => f.clone(),
            // ¬φ reaches any t ≻ 0000 exactly when φ is below 1111
            StateFormula::Not(g) => StateFormula::not(self.state(g, TruthValue::Always)),
            StateFormula::Or(l, r) => StateFormula::or(self.state(l, t), self.state(r, t)),
            StateFormula::And(l, r) => StateFormula::and(self.state(l, t), self.state(r, t)),
            StateFormula::Implies(l, r) => {
                if t == TruthValue::Always {
                    let mut conj: Option<Arc<StateFormula>> = None;
                    for u in TruthValue::ALL.into_iter().rev() {
                        let term = StateFormula::or(self.state(r, u), StateFormula::not(self.state(l, u)));
                        conj = Some(match conj {
                            None => term,
                            Some(acc) => StateFormula::and(acc, term),
                        });
                    }
                    conj.expect("five thresholds")
                } else {
                    StateFormula::or(self.state(f, TruthValue::Always), self.state(r, t))
                }
            }
            StateFormula::Quantified(q, path) => StateFormula::quantified(q.clone(), self.path(path, t)),
        };
        self.state_memo.insert(key, out.clone());
        out
    }

    fn path(&mut self, f: &Arc<PathFormula>, t: TruthValue) -> Arc<PathFormula> {
        if t == TruthValue::Never {
            return self.path_tautology.clone();
        }
        let key = (Arc::as_ptr(f) as *const () as usize, t);
        if let Some(done) = self.path_memo.get(&key) {
            return done.clone();
        }
        let out = match &**f {
            PathFormula::State(s) => PathFormula::state(self.state(s, t)),
            PathFormula::Not(g) => PathFormula::not(self.path(g, TruthValue::Always)),
            PathFormula::Or(l, r) => PathFormula::or(self.path(l, t), self.path(r, t)),
            PathFormula::And(l, r) => PathFormula::and(self.path(l, t), self.path(r, t)),
            PathFormula::Implies(l, r) => {
                if t == TruthValue::Always {
                    let mut conj: Option<Arc<PathFormula>> = None;
                    for u in TruthValue::ALL.into_iter().rev() {
                        let term = PathFormula::or(self.path(r, u), PathFormula::not(self.path(l, u)));
                        conj = Some(match conj {
                            None => term,
                            Some(acc) => PathFormula::and(acc, term),
                        });
                    }
                    conj.expect("five thresholds")
                } else {
                    PathFormula::or(self.path(f, TruthValue::Always), self.path(r, t))
                }
            }
            PathFormula::Next(g) => PathFormula::next(self.path(g, t)),
            PathFormula::Eventually(g) => PathFormula::eventually(self.path(g, t)),
            PathFormula::Always(g) => {
                let inner = self.path(g, t);
                match t {
                    TruthValue::Always => PathFormula::always(inner),
                    TruthValue::AlmostAlways => PathFormula::eventually(PathFormula::always(inner)),
                    TruthValue::InfinitelyOften => PathFormula::always(PathFormula::eventually(inner)),
                    TruthValue::Once => PathFormula::eventually(inner),
                    TruthValue::Never => unreachable!(),
                }
            }
        };
        self.path_memo.insert(key, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn atl(s: &str) -> Formula {
        parse_formula(s, Dialect::Atl).unwrap()
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(nnf(&atl("!(p & q)")).unwrap().to_string(), "(!p | !q)");
        assert_eq!(nnf(&atl("p -> q")).unwrap().to_string(), "(!p | q)");
        assert_eq!(nnf(&atl("!<<A>> F p")).unwrap().to_string(), "[[A]] G !p");
        assert_eq!(nnf(&atl("!!p")).unwrap().to_string(), "p");
        assert_eq!(nnf(&atl("!(p -> [[1]] X q)")).unwrap().to_string(), "(p & <<1>> X !q)");
        assert!(nnf(&parse_formula("p", Dialect::Ratl).unwrap()).is_err());
    }

    #[test]
    fn dot_transform_requires_nnf() {
        let f = dot_transform(&atl("<<A>> G (p | !q)")).unwrap();
        assert_eq!(f.dialect(), Dialect::Ratl);
        assert_eq!(f.to_string(), "<<A>> G (p | !q)");
        assert_eq!(dot_transform(&atl("p")).unwrap().to_string(), "p");
        assert_eq!(dot_transform(&atl("[[A]] X !p")).unwrap().to_string(), "[[A]] X !p");
        assert_eq!(dot_transform(&atl("!!p")), Err(TransformError::NotNnf));
        assert_eq!(dot_transform(&atl("p -> q")), Err(TransformError::NotNnf));
    }

    #[test]
    fn rctl_embedding_examples() {
        let r = |s: &str| parse_formula(s, Dialect::Rctl).unwrap();
        assert_eq!(rctl_embed(&r("E G p"), "a").unwrap().to_string(), "<<a>> G p");
        assert_eq!(rctl_embed(&r("A F p"), "a").unwrap().to_string(), "<<>> F p");
        assert_eq!(rctl_embed(&r("p -> q"), "a").unwrap().to_string(), "(p -> q)");
    }
}
