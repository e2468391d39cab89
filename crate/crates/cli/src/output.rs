//! Text rendering.

use std::fmt::Write;

use ratl::cgs::{Finding, LoadError, Report, Severity};
use ratl::checker::CheckResult;

pub fn check_text(r: &CheckResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state: {}", r.state);
    let _ = writeln!(out, "formula: {}", r.formula);
    if let Some(t) = r.threshold {
        let _ = writeln!(out, "threshold: {t}");
    }
    let _ = writeln!(out, "value: {}", r.value);
    if let Some(v) = r.verdict {
        let _ = writeln!(out, "verdict: {}", if v { "holds" } else { "fails" });
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "witness strategy for {{{}}} (threshold {}):",
            w.coalition.join(","),
            w.threshold
        );
        for (state, moves) in &w.moves {
            let moves: Vec<String> = moves.iter().map(|(a, act)| format!("{a}={act}")).collect();
            let moves = if moves.is_empty() { "-".to_string() } else { moves.join(" ") };
            let _ = writeln!(out, "  {state}: {moves}");
        }
    }
    out
}

/// Turns a parse failure into a one-finding report.
pub fn load_error_report(e: LoadError) -> Report {
    let finding = match e {
        LoadError::Parse { line, message } => Finding {
            severity: Severity::Error,
            line: Some(line),
            message,
        },
        LoadError::Json(message) => Finding {
            severity: Severity::Error,
            line: None,
            message,
        },
        LoadError::Invalid(report) => return report,
    };
    Report { findings: vec![finding] }
}

pub fn report_text(report: &Report, canonical: Option<&str>) -> String {
    let mut out = report.to_string();
    let errors = report.errors().count();
    let warnings = report.findings.len() - errors;
    if errors == 0 {
        let _ = writeln!(out, "valid ({warnings} warning{})", if warnings == 1 { "" } else { "s" });
    } else {
        let _ = writeln!(
            out,
            "invalid: {errors} error{}, {warnings} warning{}",
            if errors == 1 { "" } else { "s" },
            if warnings == 1 { "" } else { "s" }
        );
    }
    if let Some(c) = canonical {
        out.push('\n');
        out.push_str(c);
    }
    out
}
