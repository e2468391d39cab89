mod common;

use std::sync::Arc;

use ratl::checker::evaluate;
use ratl::oracle::{atl_eval, brute_force_eval};
use ratl::syntax::{parse_formula, print_formula, ratlstar_to_atlstar, Dialect, StateFormula};
use ratl::TruthValue;

use common::{load_cgs, TRANSLATION_GOLDENS};

fn translate(text: &str, t: TruthValue) -> String {
    let f = parse_formula(text, Dialect::RatlStar).unwrap();
    print_formula(&ratlstar_to_atlstar(&f, t).unwrap())
}

#[test]
fn golden_table() {
    for (input, t, expected) in TRANSLATION_GOLDENS {
        assert_eq!(translate(input, t.parse().unwrap()), *expected, "{input} at {t}");
    }
}

#[test]
fn bottom_threshold_is_a_tautology_for_any_input() {
    for input in ["p", "!q", "<<a>> G (p -> X q)", "[[a,b]] F G p"] {
        let f = parse_formula(input, Dialect::RatlStar).unwrap();
        let atom = f.root().atoms().into_iter().next().unwrap();
        assert_eq!(translate(input, TruthValue::Never), format!("({atom} | !{atom})"));
    }
}

#[test]
fn always_follows_the_threshold() {
    let expected = [
        (TruthValue::Always, "<<a>> G p"),
        (TruthValue::AlmostAlways, "<<a>> F G p"),
        (TruthValue::InfinitelyOften, "<<a>> G F p"),
        (TruthValue::Once, "<<a>> F p"),
    ];
    for (t, text) in expected {
        assert_eq!(translate("<<a>> G p", t), text);
    }
}

#[test]
fn output_is_classical() {
    let f = parse_formula("<<a>> (G p -> F q)", Dialect::RatlStar).unwrap();
    let g = ratlstar_to_atlstar(&f, TruthValue::AlmostAlways).unwrap();
    assert_eq!(g.dialect(), Dialect::AtlStar);
    assert!(parse_formula(&print_formula(&g), Dialect::AtlStar).is_ok());
}

#[test]
fn subresults_are_shared() {
    let f = parse_formula("(<<a>> G p -> <<a>> G p) -> <<a>> G p", Dialect::RatlStar).unwrap();
    let g = ratlstar_to_atlstar(&f, TruthValue::Always).unwrap();
    let tree = g.root().tree_size();
    let dag = g.root().dag_size() as u64;
    assert!(dag * 3 < tree, "dag {dag}, tree {tree}");
}

/// The smart-grid property of the command-line example, checked through the
/// translation at every threshold.
#[test]
fn smartgrid_path_implication() {
    let cgs = load_cgs(include_str!("../../../fixtures/smartgrid.cgs"));
    let f = parse_formula("<<U>> (G lim -> G stable)", Dialect::RatlStar).unwrap();
    let values = brute_force_eval(&cgs, &f).unwrap();
    assert!(values.iter().all(|&v| v == TruthValue::Always), "{values:?}");
    for t in TruthValue::ALL {
        let g = ratlstar_to_atlstar(&f, t).unwrap();
        assert!(atl_eval(&cgs, &g).unwrap().iter().all(|&b| b), "{t}");
    }
}

#[test]
fn robust_values_match_translated_truth_on_the_smartgrid() {
    let cgs = load_cgs(include_str!("../../../fixtures/smartgrid.cgs"));
    for text in ["<<U>> G lim", "<<U>> G stable", "[[U]] F !lim", "<<C>> X !lim -> <<U>> G lim"] {
        let f = parse_formula(text, Dialect::Ratl).unwrap();
        let values = evaluate(&cgs, &f).unwrap();
        for t in TruthValue::ALL {
            let truth = atl_eval(&cgs, &ratlstar_to_atlstar(&f, t).unwrap()).unwrap();
            for s in cgs.states() {
                assert_eq!(values[s.0] >= t, truth[s.0], "{text} at {t} in {}", cgs.state_name(s));
            }
        }
    }
}

#[test]
fn translation_of_a_shared_dag_keeps_sharing() {
    let p = StateFormula::atom("p");
    let shared = StateFormula::or(p.clone(), p);
    let f = ratl::Formula::new(Dialect::Ratl, StateFormula::and(shared.clone(), shared)).unwrap();
    let g = ratlstar_to_atlstar(&f, TruthValue::Always).unwrap();
    match &**g.root() {
        StateFormula::And(l, r) => assert!(Arc::ptr_eq(l, r)),
        other => panic!("unexpected {other}"),
    }
}
