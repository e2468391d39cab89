//! Robust ATL: five-valued alternating-time temporal logic over concurrent
//! game structures.
//!
//! Truth values form the chain `0000 ≺ 0001 ≺ 0011 ≺ 0111 ≺ 1111`
//! ([`TruthValue`]). A robust `G p` is worth `1111` if `p` always holds,
//! `0111` if it holds from some point on, `0011` if it holds infinitely
//! often, `0001` if it holds at least once and `0000` otherwise.
//!
//! ```
//! use ratl::{checker, cgs::load_model, cgs::Model, parse_formula, Dialect, TruthValue};
//!
//! let model = load_model(
//!     "kind = cgs
//!      states = s0 s1
//!      agents = a
//!      actions = stay go
//!      propositions = p
//!      [labels]
//!      s1 = p
//!      [transitions]
//!      s0 : stay -> s0
//!      s0 : go -> s1
//!      s1 : * -> s1",
//! )
//! .unwrap();
//! let Model::Cgs(cgs) = model else { unreachable!() };
//! let f = parse_formula("<<a>> G p", Dialect::Ratl).unwrap();
//! let values = checker::evaluate(&cgs, &f).unwrap();
//! assert_eq!(values, vec![TruthValue::AlmostAlways, TruthValue::Always]);
//! ```

pub mod cgs;
pub mod checker;
pub mod games;
pub mod oracle;
pub mod syntax;
pub mod truth;

pub use cgs::{Cgs, Kripke, StateId, StateSet};
pub use checker::{check, check_atl, check_rctl, evaluate, sat_set, CheckError, CheckResult, Checker};
pub use syntax::{parse_formula, AgentSet, Dialect, Formula, PathFormula, StateFormula};
pub use truth::TruthValue;
