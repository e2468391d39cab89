//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p ratl --test acceptance`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ratl::checker::{check_atl, check_rctl, evaluate, Checker};
use ratl::games::{Game, Objective, Player, WinningCondition};
use ratl::oracle::{atl_eval, brute_force_eval, brute_force_region, brute_force_table, rctl_eval, strategy_meets};
use ratl::syntax::{dot_transform, nnf, ratlstar_to_atlstar};
use ratl::syntax::{parse_formula, print_formula, Dialect};
use ratl::TruthValue;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let mut comparisons = 0usize;
    let mut seen = [0usize; 5];
    for seed in 0..500 {
        let mut r = rng(seed);
        let cgs = random_cgs(&mut r, 5, 2, 2);
        let f = formula(Dialect::Ratl, random_simple(&mut r, 3, cgs.agent_names(), Quantifiers::Strategic));
        let table = brute_force_table(&cgs, &f).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut checker = Checker::new(&cgs);
        for (sub, values) in table {
            for v in &values {
                seen[v.rank()] += 1;
            }
            let sets = checker.sat_sets(&sub).map_err(|e| format!("seed {seed}: {e}"))?;
            for (k, t) in TruthValue::ALL.into_iter().enumerate() {
                for s in cgs.states() {
                    comparisons += 1;
                    ensure(sets[k].contains(s) == (values[s.0] >= t), || {
                        format!("seed {seed}: {sub} at {} threshold {t}: oracle value {}", cgs.state_name(s), values[s.0])
                    })?;
                }
            }
        }
    }
    ensure(seen.iter().all(|&c| c > 0), || format!("some value never occurs: {seen:?}"))?;
    Ok(format!(
        "500 instances, {comparisons} membership comparisons, 0 disagreements; values 0000..1111 seen {seen:?} times"
    ))
}

fn game_equivalence() -> Outcome {
    let mut solved = 0usize;
    for seed in 0..200 {
        let mut r = rng(10_000 + seed);
        let cgs = random_cgs(&mut r, 6, 2, 2);
        let coalition = random_coalition(&mut r, cgs.agent_names());
        let game = Game::new(&cgs, &coalition).map_err(|e| e.to_string())?;
        for objective in Objective::ALL {
            for _ in 0..3 {
                let cond = WinningCondition::new(objective, random_target(&mut r, cgs.num_states()));
                let region = game.solve(&cond).states;
                let expected = brute_force_region(&game, &cond).map_err(|e| e.to_string())?;
                ensure(region == expected, || {
                    format!("seed {seed}: {} solver {region:?} oracle {expected:?}", objective.name())
                })?;
                let strategy = game.strategy(&cond, Player::One);
                for s in region.iter() {
                    ensure(strategy_meets(&game, &strategy, &cond, s), || {
                        format!("seed {seed}: {} strategy loses from {}", objective.name(), cgs.state_name(s))
                    })?;
                }
                solved += 1;
            }
        }
    }
    Ok(format!("200 games, {solved} conditions, regions and strategies match"))
}

fn example_one() -> Outcome {
    let fixtures = [
        (include_str!("../../../fixtures/example1-always.cgs"), TruthValue::Always),
        (include_str!("../../../fixtures/example1-almost-always.cgs"), TruthValue::AlmostAlways),
        (include_str!("../../../fixtures/example1-infinitely-often.cgs"), TruthValue::InfinitelyOften),
        (include_str!("../../../fixtures/example1-once.cgs"), TruthValue::Once),
        (include_str!("../../../fixtures/example1-never.cgs"), TruthValue::Never),
    ];
    let f = parse_formula("<<a>> G p", Dialect::Ratl).map_err(|e| e.to_string())?;
    for (text, expected) in fixtures {
        let cgs = load_cgs(text);
        let s0 = cgs.state_id("s0").map_err(|e| e.to_string())?;
        let got = evaluate(&cgs, &f).map_err(|e| e.to_string())?[s0.0];
        let oracle = brute_force_eval(&cgs, &f).map_err(|e| e.to_string())?[s0.0];
        ensure(got == expected && oracle == expected, || {
            format!("expected {expected}, checker {got}, oracle {oracle}")
        })?;
    }
    Ok("1111 0111 0011 0001 0000 realized and confirmed".into())
}

fn atl_conservativity() -> Outcome {
    let mut holding = 0usize;
    for seed in 0..300 {
        let mut r = rng(20_000 + seed);
        let cgs = random_cgs(&mut r, 5, 2, 2);
        let f = formula(Dialect::Atl, random_simple(&mut r, 3, cgs.agent_names(), Quantifiers::Strategic));
        let sat = check_atl(&cgs, &f).map_err(|e| e.to_string())?;
        let truth = atl_eval(&cgs, &f).map_err(|e| e.to_string())?;
        let dotted = dot_transform(&nnf(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let values = evaluate(&cgs, &dotted).map_err(|e| e.to_string())?;
        for s in cgs.states() {
            ensure(sat.contains(s) == truth[s.0], || format!("seed {seed}: {f} at {}", cgs.state_name(s)))?;
            ensure((values[s.0] == TruthValue::TOP) == truth[s.0], || {
                format!("seed {seed}: dotted {dotted} is {} at {}", values[s.0], cgs.state_name(s))
            })?;
            holding += usize::from(truth[s.0]);
        }
    }
    Ok(format!("300 instances agree, {holding} satisfied state/formula pairs"))
}

fn rctl_embedding() -> Outcome {
    for seed in 0..200 {
        let mut r = rng(30_000 + seed);
        let k = random_kripke(&mut r, 5);
        let f = formula(Dialect::Rctl, random_simple(&mut r, 3, &[], Quantifiers::Paths));
        let got = check_rctl(&k, &f).map_err(|e| e.to_string())?;
        let expected = rctl_eval(&k, &f).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("seed {seed}: {f}: embedding {got:?} oracle {expected:?}"))?;
    }
    Ok("200 Kripke structures agree".into())
}

fn translation() -> Outcome {
    for (input, t, expected) in TRANSLATION_GOLDENS {
        let f = parse_formula(input, Dialect::RatlStar).map_err(|e| e.to_string())?;
        let t: TruthValue = t.parse().map_err(|e| format!("{e}"))?;
        let got = print_formula(&ratlstar_to_atlstar(&f, t).map_err(|e| e.to_string())?);
        ensure(got == *expected, || format!("{input} at {t}: got {got}, expected {expected}"))?;
    }
    let mut cases = 0usize;
    let mut worst: f64 = 0.0;
    for seed in 0..150 {
        let mut r = rng(40_000 + seed);
        let cgs = random_cgs(&mut r, 4, 2, 2);
        let agents = cgs.agent_names();
        let simple = formula(Dialect::Ratl, random_simple(&mut r, 3, agents, Quantifiers::Strategic));
        let star = formula(Dialect::RatlStar, random_star(&mut r, 3, agents));
        let values = evaluate(&cgs, &simple).map_err(|e| e.to_string())?;
        let star_values = brute_force_eval(&cgs, &star).map_err(|e| e.to_string())?;
        for t in TruthValue::ALL {
            let translated = ratlstar_to_atlstar(&simple, t).map_err(|e| e.to_string())?;
            let truth = atl_eval(&cgs, &translated).map_err(|e| e.to_string())?;
            let star_translated = ratlstar_to_atlstar(&star, t).map_err(|e| e.to_string())?;
            let star_truth = atl_eval(&cgs, &star_translated).map_err(|e| e.to_string())?;
            for s in cgs.states() {
                ensure((values[s.0] >= t) == truth[s.0], || {
                    format!("seed {seed}: {simple} at {t} in {}: value {}", cgs.state_name(s), values[s.0])
                })?;
                ensure((star_values[s.0] >= t) == star_truth[s.0], || {
                    format!("seed {seed}: {star} at {t} in {}: value {}", cgs.state_name(s), star_values[s.0])
                })?;
                cases += 2;
            }
            for (f, g) in [(&simple, &translated), (&star, &star_translated)] {
                let ratio = g.root().dag_size() as f64 / f.root().tree_size() as f64;
                worst = worst.max(ratio);
                ensure(ratio <= 10.0, || format!("{f} at {t}: translation has {} nodes", g.root().dag_size()))?;
            }
        }
    }
    Ok(format!(
        "{} goldens, {cases} semantic cases, largest size ratio {worst:.2}",
        TRANSLATION_GOLDENS.len()
    ))
}

fn fairness() -> Outcome {
    let cgs = load_cgs(include_str!("../../../fixtures/fairness.cgs"));
    let wait = cgs.state_id("wait").map_err(|e| e.to_string())?;
    let robust = parse_formula("<<sched>> G granted", Dialect::Ratl).map_err(|e| e.to_string())?;
    let value = evaluate(&cgs, &robust).map_err(|e| e.to_string())?[wait.0];
    ensure(value == TruthValue::InfinitelyOften, || format!("value {value}"))?;
    let always = parse_formula("<<sched>> G granted", Dialect::Atl).map_err(|e| e.to_string())?;
    let eventually = parse_formula("<<sched>> F granted", Dialect::Atl).map_err(|e| e.to_string())?;
    let g = check_atl(&cgs, &always).map_err(|e| e.to_string())?.contains(wait);
    let f = check_atl(&cgs, &eventually).map_err(|e| e.to_string())?.contains(wait);
    ensure(!g && f, || format!("ATL G {g}, F {f}"))?;
    let g_oracle = atl_eval(&cgs, &always).map_err(|e| e.to_string())?[wait.0];
    let f_oracle = atl_eval(&cgs, &eventually).map_err(|e| e.to_string())?[wait.0];
    ensure(!g_oracle && f_oracle, || "oracle disagrees".into())?;
    Ok("value 0011, <<sched>> G granted false, <<sched>> F granted true".into())
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn scaling() -> Outcome {
    let f = parse_formula(
        "(<<a>> G (<<b>> G (p | [[a]] G q) | <<a,b>> F [[b]] G !p) & [[b]] G <<a,b>> X p) -> (<<>> F q | [[a]] G !q)",
        Dialect::Ratl,
    )
    .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let sizes = [10usize, 20, 40, 80, 120, 160, 200];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in &sizes {
        let cgs = chain_of_rings(n);
        let best = (0..5)
            .map(|_| {
                let t = Instant::now();
                let _ = evaluate(&cgs, &f).expect("checkable");
                t.elapsed()
            })
            .min()
            .unwrap_or_default()
            .max(Duration::from_nanos(1));
        xs.push((n as f64).ln());
        ys.push(best.as_secs_f64().ln());
    }
    let total = start.elapsed();
    let k = slope(&xs, &ys);
    ensure(k < 3.0, || format!("log-log slope {k:.2}"))?;
    ensure(total < Duration::from_secs(120), || format!("took {total:?}"))?;
    Ok(format!("n = 10..200, log-log slope {k:.2}, total {total:.2?}"))
}

fn invariants() -> Outcome {
    let all = TruthValue::ALL;
    for a in all {
        for b in all {
            ensure(a.join(b) == b.join(a) && a.meet(b) == b.meet(a), || format!("commutativity at {a},{b}"))?;
            ensure(a.join(a.meet(b)) == a && a.meet(a.join(b)) == a, || format!("absorption at {a},{b}"))?;
            for c in all {
                ensure(a.join(b.join(c)) == a.join(b).join(c), || format!("associativity at {a},{b},{c}"))?;
                ensure(a.meet(b.join(c)) == a.meet(b).join(a.meet(c)), || format!("distributivity at {a},{b},{c}"))?;
                ensure((a.meet(b) <= c) == (a <= b.implies(c)), || format!("residuation at {a},{b},{c}"))?;
            }
        }
    }
    for seed in 0..100 {
        let mut r = rng(50_000 + seed);
        let cgs = random_cgs(&mut r, 6, 3, 2);
        let f = formula(Dialect::Ratl, random_simple(&mut r, 3, cgs.agent_names(), Quantifiers::Strategic));
        let printed = print_formula(&f);
        let reparsed = parse_formula(&printed, Dialect::Ratl).map_err(|e| format!("{printed}: {e}"))?;
        ensure(reparsed.root() == f.root(), || format!("round trip of {printed}"))?;
        let sets = Checker::new(&cgs).sat_sets(f.root()).map_err(|e| e.to_string())?;
        ensure(sets.windows(2).all(|w| w[1].is_subset(&w[0])), || format!("monotonicity of {f}"))?;
        ensure(sets[0].len() == cgs.num_states(), || format!("Sat({f}, 0000) is not everything"))?;
        let coalition = random_coalition(&mut r, cgs.agent_names());
        let game = Game::new(&cgs, &coalition).map_err(|e| e.to_string())?;
        for objective in Objective::ALL {
            let cond = WinningCondition::new(objective, random_target(&mut r, cgs.num_states()));
            let one = game.solve_for(&cond, Player::One).states;
            let two = game.solve_for(&cond.dual(), Player::Two).states;
            ensure(one == two.complement(), || format!("seed {seed}: duality for {}", objective.name()))?;
        }
    }
    Ok("lattice laws and 125 residuation triples, 100 random monotonicity, duality and round-trip checks".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("game solver equivalence", game_equivalence),
        ("five-valued example fixtures", example_one),
        ("ATL conservativity", atl_conservativity),
        ("rCTL embedding", rctl_embedding),
        ("translation to ATL*", translation),
        ("fairness witness", fairness),
        ("polynomial scaling", scaling),
        ("standalone invariants", invariants),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
