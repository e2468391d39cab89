use std::fmt::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use ratl::cgs::{kripke_to_cgs, load_model, parse_model_doc, save_model, LoadError, Model, KRIPKE_AGENT};
use ratl::checker::{check as check_formula, check_atl, check_rctl, Checker};
use ratl::games::Game;
use ratl::oracle::{atl_eval, brute_force_eval, brute_force_table, rctl_eval};
use ratl::syntax::{
    dot_transform, nnf, parse_formula, ratlstar_to_atlstar, rctl_embed, DialectError, ParseError, Quantifier,
};
use ratl::{Cgs, Dialect, Formula, Kripke, StateFormula, StateId, TruthValue};

use crate::output;
use crate::{CheckArgs, CheckDialect, EvalArgs, Format, OracleArgs, Source, Target, TranslateArgs, ValidateArgs};

pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

fn formula_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)
            .with_context(|| format!("cannot read formula file `{path}`"))?
            .trim()
            .to_string()),
        None => Ok(arg.to_string()),
    }
}

fn parse(text: &str, dialect: Dialect) -> Result<Formula> {
    parse_formula(text, dialect).map_err(|e| match e {
        ParseError::Dialect(DialectError::NestedPath { .. }) if dialect == Dialect::Ratl => {
            anyhow!("{e}\nthis is an rATL* formula; `ratl translate --to atlstar --threshold <t>` reduces it to ATL*")
        }
        e => anyhow!(e),
    })
}

fn load(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read model `{}`", path.display()))?;
    load_model(&text).map_err(|e| match e {
        LoadError::Invalid(report) => anyhow!("invalid model `{}`:\n{}", path.display(), report.to_string().trim_end()),
        e => anyhow!("cannot load model `{}`: {e}", path.display()),
    })
}

fn as_cgs(model: Model) -> Result<Cgs> {
    match model {
        Model::Cgs(m) => Ok(m),
        Model::Kripke(k) => Ok(kripke_to_cgs(&k)?),
    }
}

fn as_kripke(model: Model) -> Result<Kripke> {
    match model {
        Model::Kripke(k) => Ok(k),
        Model::Cgs(_) => bail!("rCTL formulas are checked over Kripke structures (`kind = kripke`)"),
    }
}

fn state_of(names: &[String], name: &str) -> Result<StateId> {
    names
        .iter()
        .position(|s| s == name)
        .map(StateId)
        .ok_or_else(|| anyhow!("unknown state `{name}`"))
}

/// A checkable problem: the structure the checker runs on and the rATL
/// formula it checks, together with the original input.
struct Problem {
    cgs: Cgs,
    kripke: Option<Kripke>,
    input: Formula,
    robust: Formula,
}

fn problem(model_path: &Path, formula: &str, dialect: CheckDialect) -> Result<Problem> {
    let model = load(model_path)?;
    let text = formula_text(formula)?;
    Ok(match dialect {
        CheckDialect::Ratl => {
            let f = parse(&text, Dialect::Ratl)?;
            Problem {
                cgs: as_cgs(model)?,
                kripke: None,
                robust: f.clone(),
                input: f,
            }
        }
        CheckDialect::Atl => {
            let f = parse(&text, Dialect::Atl)?;
            Problem {
                cgs: as_cgs(model)?,
                kripke: None,
                robust: dot_transform(&nnf(&f)?)?,
                input: f,
            }
        }
        CheckDialect::Rctl => {
            let f = parse(&text, Dialect::Rctl)?;
            let k = as_kripke(model)?;
            Problem {
                cgs: kripke_to_cgs(&k)?,
                kripke: Some(k),
                robust: rctl_embed(&f, KRIPKE_AGENT)?,
                input: f,
            }
        }
    })
}

fn dialect_name(d: CheckDialect) -> &'static str {
    match d {
        CheckDialect::Ratl => "ratl",
        CheckDialect::Atl => "atl",
        CheckDialect::Rctl => "rctl",
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn check(args: &CheckArgs) -> Result<Outcome> {
    let threshold: TruthValue = args.threshold.parse()?;
    if args.dialect == CheckDialect::Atl && threshold != TruthValue::TOP {
        bail!("ATL formulas are two-valued; only threshold 1111 applies");
    }
    let p = problem(&args.model, &args.formula, args.dialect)?;
    let s = state_of(p.cgs.state_names(), &args.state)?;
    let start = Instant::now();
    let mut result = check_formula(&p.cgs, &p.robust, s, Some(threshold))?;
    let elapsed = ms(start);
    result.formula = p.input.root().to_string();
    if args.dialect == CheckDialect::Atl {
        let classical = check_atl(&p.cgs, &p.input)?.contains(s);
        debug_assert_eq!(Some(classical), result.verdict);
    }

    let oracle = if args.oracle { Some(oracle_value(&p, s)?) } else { None };
    if let Some(v) = oracle {
        let agrees = match args.dialect {
            CheckDialect::Atl => (v == TruthValue::TOP) == (result.value == TruthValue::TOP),
            _ => v == result.value,
        };
        if !agrees {
            bail!("checker ({}) and oracle ({v}) disagree", result.value);
        }
    }
    let game = if args.dump_game { Some(dump_game(&p, threshold)?) } else { None };

    let holds = result.verdict == Some(true);
    let stdout = match args.common.format {
        Format::Text => {
            let mut out = output::check_text(&result);
            if let Some(v) = oracle {
                let _ = writeln!(out, "oracle: agrees ({v})");
            }
            if args.common.timing {
                let _ = writeln!(out, "time: {elapsed:.3} ms");
            }
            if let Some(g) = game {
                out.push('\n');
                out.push_str(&g);
            }
            out
        }
        Format::Json => {
            let mut record = json!({
                "command": "check",
                "model": args.model.display().to_string(),
                "dialect": dialect_name(args.dialect),
            });
            merge(&mut record, serde_json::to_value(&result)?);
            if let Some(v) = oracle {
                record["oracle"] = json!(v);
            }
            if args.common.timing {
                record["timing_ms"] = json!(elapsed);
            }
            if let Some(g) = game {
                record["game"] = json!(g);
            }
            format!("{record}\n")
        }
    };
    Ok(Outcome { stdout, success: holds })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

/// The oracle's value for the input formula; for ATL `1111` stands for true.
fn oracle_value(p: &Problem, s: StateId) -> Result<TruthValue> {
    Ok(match (&p.kripke, p.input.dialect()) {
        (Some(k), Dialect::Rctl) => rctl_eval(k, &p.input)?[s.0],
        (_, Dialect::Atl) => TruthValue::from_bool(atl_eval(&p.cgs, &p.input)?[s.0]),
        _ => brute_force_eval(&p.cgs, &p.robust)?[s.0],
    })
}

fn dump_game(p: &Problem, t: TruthValue) -> Result<String> {
    let StateFormula::Quantified(Quantifier::Exists(agents) | Quantifier::Forall(agents), _) = p.robust.root().as_ref()
    else {
        bail!("--dump-game needs a formula whose outermost operator is a strategy quantifier");
    };
    let game = Game::new(&p.cgs, agents)?;
    let sat = Checker::new(&p.cgs).sat(p.robust.root(), t)?;
    let name = format!("sat_{t}");
    Ok(game.dump(&[(name.as_str(), &sat)]))
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let p = problem(&args.model, &args.formula, args.dialect)?;
    let start = Instant::now();
    let values = match (&p.kripke, args.dialect) {
        (Some(k), CheckDialect::Rctl) => check_rctl(k, &p.input)?,
        _ => Checker::new(&p.cgs).values(p.robust.root())?,
    };
    let elapsed = ms(start);
    let oracle = if args.oracle {
        let o: Vec<TruthValue> = match (&p.kripke, args.dialect) {
            (Some(k), CheckDialect::Rctl) => rctl_eval(k, &p.input)?,
            (_, CheckDialect::Atl) => atl_eval(&p.cgs, &p.input)?.into_iter().map(TruthValue::from_bool).collect(),
            _ => brute_force_eval(&p.cgs, &p.robust)?,
        };
        let agree = values.iter().zip(&o).all(|(v, w)| match args.dialect {
            CheckDialect::Atl => (*v == TruthValue::TOP) == (*w == TruthValue::TOP),
            _ => v == w,
        });
        if !agree {
            bail!("checker and oracle disagree");
        }
        true
    } else {
        false
    };
    let states: Vec<StateId> = match &args.state {
        Some(name) => vec![state_of(p.cgs.state_names(), name)?],
        None => p.cgs.states().collect(),
    };
    let formula = p.input.root().to_string();
    let mut out = String::new();
    for s in states {
        let name = p.cgs.state_name(s);
        match args.common.format {
            Format::Text => {
                let _ = writeln!(out, "{name}: {}", values[s.0]);
            }
            Format::Json => {
                let mut record = json!({
                    "command": "eval",
                    "model": args.model.display().to_string(),
                    "dialect": dialect_name(args.dialect),
                    "formula": formula,
                    "state": name,
                    "value": values[s.0],
                });
                if args.common.timing {
                    record["timing_ms"] = json!(elapsed);
                }
                let _ = writeln!(out, "{record}");
            }
        }
    }
    if args.common.format == Format::Text {
        if oracle {
            let _ = writeln!(out, "oracle: agrees");
        }
        if args.common.timing {
            let _ = writeln!(out, "time: {elapsed:.3} ms");
        }
    }
    Ok(Outcome { stdout: out, success: true })
}

pub fn translate(args: &TranslateArgs) -> Result<Outcome> {
    let text = formula_text(&args.formula)?;
    let start = Instant::now();
    let (input, output) = match args.to {
        Target::Atlstar => {
            let dialect = match args.from.unwrap_or(Source::Ratlstar) {
                Source::Ratl => Dialect::Ratl,
                Source::Ratlstar => Dialect::RatlStar,
                _ => bail!("--to atlstar translates rATL or rATL* formulas"),
            };
            let t: TruthValue = args
                .threshold
                .as_deref()
                .ok_or_else(|| anyhow!("--to atlstar needs --threshold"))?
                .parse()?;
            let f = parse(&text, dialect)?;
            let out = ratlstar_to_atlstar(&f, t)?;
            (f, out)
        }
        Target::Ratl => {
            reject_threshold(args)?;
            match args.from.unwrap_or(Source::Atl) {
                Source::Atl => {
                    let f = parse(&text, Dialect::Atl)?;
                    let out = dot_transform(&nnf(&f)?)?;
                    (f, out)
                }
                Source::Rctl => {
                    let f = parse(&text, Dialect::Rctl)?;
                    let out = rctl_embed(&f, &args.agent)?;
                    (f, out)
                }
                _ => bail!("--to ratl translates ATL or rCTL formulas"),
            }
        }
        Target::Nnf => {
            reject_threshold(args)?;
            if !matches!(args.from, None | Some(Source::Atl)) {
                bail!("--to nnf applies to ATL formulas");
            }
            let f = parse(&text, Dialect::Atl)?;
            let out = nnf(&f)?;
            (f, out)
        }
    };
    let elapsed = ms(start);
    let printed = output.root().to_string();
    let stdout = match args.common.format {
        Format::Text => {
            let mut out = format!("{printed}\n");
            if args.common.timing {
                let _ = writeln!(out, "time: {elapsed:.3} ms");
            }
            out
        }
        Format::Json => {
            let mut record = json!({
                "command": "translate",
                "from": input.dialect().name(),
                "to": output.dialect().name(),
                "input": input.root().to_string(),
                "output": printed,
                "input_size": input.root().tree_size(),
                "output_dag_size": output.root().dag_size(),
            });
            if let Some(t) = &args.threshold {
                record["threshold"] = json!(t);
            }
            if args.common.timing {
                record["timing_ms"] = json!(elapsed);
            }
            format!("{record}\n")
        }
    };
    Ok(Outcome { stdout, success: true })
}

fn reject_threshold(args: &TranslateArgs) -> Result<()> {
    if args.threshold.is_some() {
        bail!("--threshold only applies to --to atlstar");
    }
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&args.model)
        .with_context(|| format!("cannot read model `{}`", args.model.display()))?;
    let (report, canonical) = match parse_model_doc(&text) {
        Ok(doc) => {
            let report = doc.validate();
            let canonical = if report.is_ok() && args.canonical {
                Some(save_model(&doc.build()?))
            } else {
                None
            };
            (report, canonical)
        }
        Err(e) => (output::load_error_report(e), None),
    };
    let valid = report.is_ok();
    let stdout = match args.common.format {
        Format::Text => output::report_text(&report, canonical.as_deref()),
        Format::Json => {
            let mut record = json!({
                "command": "validate",
                "model": args.model.display().to_string(),
                "valid": valid,
                "findings": report.findings,
            });
            if let Some(c) = canonical {
                record["canonical"] = json!(c);
            }
            format!("{record}\n")
        }
    };
    Ok(Outcome { stdout, success: valid })
}

pub fn oracle_check(args: &OracleArgs) -> Result<Outcome> {
    let p = problem(&args.model, &args.formula, args.dialect)?;
    let start = Instant::now();
    let mut compared = 0usize;
    let mut disagreements: Vec<String> = Vec::new();
    match args.dialect {
        CheckDialect::Ratl => {
            let mut checker = Checker::new(&p.cgs);
            let mut table = brute_force_table(&p.cgs, &p.robust)?;
            table.sort_by_key(|(f, _)| f.to_string());
            for (sub, expected) in table {
                let sets = checker.sat_sets(&sub)?;
                for t in TruthValue::ALL {
                    for s in p.cgs.states() {
                        compared += 1;
                        if sets[t.rank()].contains(s) != (expected[s.0] >= t) {
                            disagreements.push(format!("{sub} at {} threshold {t}", p.cgs.state_name(s)));
                        }
                    }
                }
            }
        }
        CheckDialect::Atl => {
            let checked = check_atl(&p.cgs, &p.input)?;
            for (s, truth) in atl_eval(&p.cgs, &p.input)?.into_iter().enumerate() {
                compared += 1;
                if checked.contains(StateId(s)) != truth {
                    disagreements.push(format!("{} at {}", p.input.root(), p.cgs.state_name(StateId(s))));
                }
            }
        }
        CheckDialect::Rctl => {
            let k = p.kripke.as_ref().expect("rCTL problems carry their Kripke structure");
            let checked = check_rctl(k, &p.input)?;
            for (s, v) in rctl_eval(k, &p.input)?.into_iter().enumerate() {
                compared += 1;
                if checked[s] != v {
                    disagreements.push(format!("{} at {}", p.input.root(), k.state_name(StateId(s))));
                }
            }
        }
    }
    let elapsed = ms(start);
    let agree = disagreements.is_empty();
    let stdout = match args.common.format {
        Format::Text => {
            let mut out = String::new();
            if agree {
                let _ = writeln!(out, "agree: {compared} comparisons");
            } else {
                let _ = writeln!(out, "DISAGREE: {} of {compared} comparisons", disagreements.len());
                for d in &disagreements {
                    let _ = writeln!(out, "  {d}");
                }
            }
            if args.common.timing {
                let _ = writeln!(out, "time: {elapsed:.3} ms");
            }
            out
        }
        Format::Json => {
            let mut record = json!({
                "command": "oracle-check",
                "model": args.model.display().to_string(),
                "formula": p.input.root().to_string(),
                "compared": compared,
                "agree": agree,
                "disagreements": disagreements,
            });
            if args.common.timing {
                record["timing_ms"] = json!(elapsed);
            }
            format!("{record}\n")
        }
    };
    Ok(Outcome { stdout, success: agree })
}
