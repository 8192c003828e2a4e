use std::fmt;

use serde::{Deserialize, Serialize};

use crate::payoff::PayoffMatrix;

/// Which kind of dominance licenses an elimination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    /// At least as good everywhere, strictly better somewhere.
    #[default]
    Weak,
    /// Strictly better everywhere.
    Strict,
}

impl std::str::FromStr for Dominance {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "weak" => Ok(Dominance::Weak),
            "strict" => Ok(Dominance::Strict),
            other => Err(crate::Error::Config(format!("unknown dominance mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Column,
}

/// A dominated line in a specific matrix, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub axis: Axis,
    pub index: usize,
    pub dominated_by: usize,
    /// Strict when the dominator is better in every entry.
    pub kind: Dominance,
}

/// One recorded elimination, by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub axis: Axis,
    pub label: String,
    pub dominated_by: String,
    pub kind: Dominance,
}

impl fmt::Display for Elimination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = match self.axis {
            Axis::Row => "row",
            Axis::Column => "column",
        };
        let kind = match self.kind {
            Dominance::Weak => "weakly",
            Dominance::Strict => "strictly",
        };
        write!(
            f,
            "{axis} {} eliminated: {kind} dominated by {}",
            self.label, self.dominated_by
        )
    }
}

/// Eliminations in the order they were applied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReductionTrace(pub Vec<Elimination>);

impl ReductionTrace {
    pub fn events(&self) -> &[Elimination] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eliminated(&self, axis: Axis) -> impl Iterator<Item = &str> {
        self.0
            .iter()
            .filter(move |e| e.axis == axis)
            .map(|e| e.label.as_str())
    }
}

/// Compares `better` against `worse` entry by entry. `None` when `better`
/// does not dominate under `mode`.
fn dominates(
    better: impl Iterator<Item = f64>,
    worse: impl Iterator<Item = f64>,
    mode: Dominance,
) -> Option<Dominance> {
    let mut any_strict = false;
    let mut all_strict = true;
    for (b, w) in better.zip(worse) {
        if b < w {
            return None;
        }
        if b > w {
            any_strict = true;
        } else {
            all_strict = false;
        }
    }
    match (mode, all_strict, any_strict) {
        (_, true, _) => Some(Dominance::Strict),
        (Dominance::Weak, false, true) => Some(Dominance::Weak),
        _ => None,
    }
}

/// Every (dominated line, dominator) pair. Rows come first, then columns;
/// within an axis pairs are ordered by dominated index, then dominator index.
///
/// The row player maximizes, so a row is dominated by a row that is at least
/// as large; the column player minimizes, so a column is dominated by one that
/// is at most as large.
pub fn find_dominated(matrix: &PayoffMatrix, mode: Dominance) -> Vec<Candidate> {
    let mut found = Vec::new();
    for worse in 0..matrix.rows() {
        for better in (0..matrix.rows()).filter(|&b| b != worse) {
            let cmp = dominates(
                matrix.row(better).iter().copied(),
                matrix.row(worse).iter().copied(),
                mode,
            );
            if let Some(kind) = cmp {
                found.push(Candidate {
                    axis: Axis::Row,
                    index: worse,
                    dominated_by: better,
                    kind,
                });
            }
        }
    }
    for worse in 0..matrix.cols() {
        for better in (0..matrix.cols()).filter(|&b| b != worse) {
            // negate so that "smaller is better" becomes "larger is better"
            let cmp = dominates(
                matrix.column(better).map(|v| -v),
                matrix.column(worse).map(|v| -v),
                mode,
            );
            if let Some(kind) = cmp {
                found.push(Candidate {
                    axis: Axis::Column,
                    index: worse,
                    dominated_by: better,
                    kind,
                });
            }
        }
    }
    found
}

pub(crate) struct Reduction {
    pub matrix: PayoffMatrix,
    pub trace: ReductionTrace,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

pub(crate) fn reduce_indexed(matrix: &PayoffMatrix, mode: Dominance) -> Reduction {
    let mut rows: Vec<usize> = (0..matrix.rows()).collect();
    let mut cols: Vec<usize> = (0..matrix.cols()).collect();
    let mut current = matrix.clone();
    let mut trace = Vec::new();
    while let Some(first) = find_dominated(&current, mode).into_iter().next() {
        let labels = match first.axis {
            Axis::Row => current.row_labels(),
            Axis::Column => current.col_labels(),
        };
        trace.push(Elimination {
            axis: first.axis,
            label: labels[first.index].clone(),
            dominated_by: labels[first.dominated_by].clone(),
            kind: first.kind,
        });
        match first.axis {
            Axis::Row => {
                rows.remove(first.index);
            }
            Axis::Column => {
                cols.remove(first.index);
            }
        }
        current = matrix.submatrix(&rows, &cols);
    }
    Reduction {
        matrix: current,
        trace: ReductionTrace(trace),
        rows,
        cols,
    }
}

/// Removes dominated lines one at a time until none remain.
pub fn reduce(matrix: &PayoffMatrix, mode: Dominance) -> (PayoffMatrix, ReductionTrace) {
    let reduction = reduce_indexed(matrix, mode);
    (reduction.matrix, reduction.trace)
}
