//! Human-readable rendering of result documents.

use std::fmt::{self, Write};

use strategem::{IntervalPayoffMatrix, SolutionKind};

use crate::document::{ResultDocument, SolutionResult};

pub(crate) fn text(result: &ResultDocument, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match result {
        ResultDocument::Matrix(m) => {
            write!(f, "payoff matrix ({} rule", m.rule)?;
            if let Some(p) = m.period {
                write!(f, ", period {p}")?;
            }
            writeln!(f, ")")?;
            writeln!(f, "{}", m.matrix)
        }
        ResultDocument::IntervalMatrix(m) => {
            writeln!(f, "interval payoff matrix")?;
            writeln!(f, "{}", interval_table(&m.matrix))
        }
        ResultDocument::Solution(s) => solution(s, f),
        ResultDocument::Series(s) => {
            // tab separated, ready for plotting tools
            writeln!(f, "period\tvalue\tkind")?;
            for p in &s.periods {
                writeln!(f, "{}\t{}\t{}", p.period, p.value, kind_name(&p.kind))?;
            }
            Ok(())
        }
        ResultDocument::Whatif(w) => {
            match w.budget {
                Some(b) => writeln!(f, "search within bounds, budget {b}, step {}", w.step)?,
                None => writeln!(f, "search within bounds, no budget")?,
            }
            writeln!(f, "baseline: {}", round(w.baseline))?;
            writeln!(f, "achieved: {}", round(w.achieved))?;
            writeln!(f, "delta:    {}", signed(w.delta))?;
            writeln!(f, "realization:\n{}", w.realization)
        }
        ResultDocument::Sensitivity(s) => {
            writeln!(f, "entry ({}, {}) changed by {}", s.row, s.col, signed(s.delta))?;
            writeln!(f, "baseline: {}", round(s.baseline))?;
            writeln!(f, "change:   {}", signed(s.value_change))?;
            solution(&s.solution, f)
        }
    }
}

fn kind_name(kind: &SolutionKind) -> String {
    match kind {
        SolutionKind::PureSaddle { row, col } => format!("saddle({row},{col})"),
        SolutionKind::Mixed => "mixed".into(),
    }
}

fn solution(s: &SolutionResult, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "value: {}", round(s.value))?;
    if s.withdraw {
        write!(f, "  (negative: change the strategy or withdraw)")?;
    }
    writeln!(f)?;
    if let Some((low, high)) = s.bounds {
        writeln!(f, "bounds: [{}, {}]", round(low), round(high))?;
    }
    match &s.kind {
        SolutionKind::PureSaddle { row, col } => writeln!(f, "saddle point: ({row}, {col})")?,
        SolutionKind::Mixed => writeln!(f, "mixed strategies")?,
    }
    writeln!(f, "assets:  {}", strategy(&s.row_labels, &s.row_strategy))?;
    writeln!(f, "threats: {}", strategy(&s.col_labels, &s.col_strategy))?;
    if !s.trace.is_empty() {
        writeln!(f, "reduction:")?;
        for event in &s.trace {
            writeln!(f, "  {}. {}", event.step, event.description)?;
        }
    }
    writeln!(f, "matrix:\n{}", s.matrix)
}

fn strategy(labels: &[String], probabilities: &[f64]) -> String {
    labels
        .iter()
        .zip(probabilities)
        .map(|(l, p)| format!("{l}={}", round(*p)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Six decimals at most, without trailing zeros.
fn round(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn signed(x: f64) -> String {
    let s = round(x);
    if s.starts_with('-') { s } else { format!("+{s}") }
}

pub(crate) fn interval_table(m: &IntervalPayoffMatrix) -> String {
    let cells: Vec<Vec<String>> = m
        .entries()
        .iter()
        .map(|r| {
            r.iter()
                .map(|iv| match iv.is_empty() {
                    true => "empty".to_string(),
                    false => format!("[{}, {}]", round(iv.lo()), round(iv.hi())),
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    let label_width = m.row_labels().iter().map(String::len).max().unwrap_or(0);
    let mut out = format!("{:label_width$}", "");
    for label in m.col_labels() {
        let _ = write!(out, " {label:>width$}");
    }
    for (label, row) in m.row_labels().iter().zip(&cells) {
        let _ = write!(out, "\n{label:label_width$}");
        for cell in row {
            let _ = write!(out, " {cell:>width$}");
        }
    }
    out
}

