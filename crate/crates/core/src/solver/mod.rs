//! Zero-sum matrix game solving.
//!
//! The row player (assets) maximizes and the column player (threats)
//! minimizes. [`solve`] runs the full pipeline: iterated dominance reduction,
//! a pure saddle-point check, the oddments formula for a remaining 2x2 game and
//! a linear program for everything larger.

mod dominance;
mod simplex;

use serde::{Deserialize, Serialize};

pub use dominance::{
    find_dominated, reduce, Axis, Candidate, Dominance, Elimination, ReductionTrace,
};

use crate::error::{Error, Result};
use crate::payoff::{IntervalPayoffMatrix, PayoffMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SolutionKind {
    PureSaddle { row: String, col: String },
    Mixed,
}

/// Value and optimal strategies of a game, over the labels of the matrix that
/// was solved. Eliminated lines carry probability zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSolution {
    pub value: f64,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub kind: SolutionKind,
    pub trace: ReductionTrace,
}

impl GameSolution {
    pub fn is_pure(&self) -> bool {
        matches!(self.kind, SolutionKind::PureSaddle { .. })
    }

    pub fn saddle(&self) -> Option<(&str, &str)> {
        match &self.kind {
            SolutionKind::PureSaddle { row, col } => Some((row, col)),
            SolutionKind::Mixed => None,
        }
    }

    pub fn row_probability(&self, label: &str) -> Option<f64> {
        let i = self.row_labels.iter().position(|l| l == label)?;
        Some(self.row_strategy[i])
    }

    pub fn col_probability(&self, label: &str) -> Option<f64> {
        let j = self.col_labels.iter().position(|l| l == label)?;
        Some(self.col_strategy[j])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddlePoint {
    pub row: usize,
    pub col: usize,
    pub row_label: String,
    pub col_label: String,
    pub value: f64,
}

/// First cell, scanning rows then columns, that is both the minimum of its row
/// and the maximum of its column.
pub fn saddle_point(matrix: &PayoffMatrix) -> Option<SaddlePoint> {
    let row_min: Vec<f64> = (0..matrix.rows())
        .map(|i| matrix.row(i).iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let col_max: Vec<f64> = (0..matrix.cols())
        .map(|j| matrix.column(j).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let v = matrix.get(i, j);
            if v == row_min[i] && v == col_max[j] {
                return Some(SaddlePoint {
                    row: i,
                    col: j,
                    row_label: matrix.row_labels()[i].clone(),
                    col_label: matrix.col_labels()[j].clone(),
                    value: v,
                });
            }
        }
    }
    None
}

fn unit(len: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[at] = 1.0;
    v
}

fn pure_solution(matrix: &PayoffMatrix, saddle: SaddlePoint) -> GameSolution {
    GameSolution {
        value: saddle.value,
        row_labels: matrix.row_labels().to_vec(),
        col_labels: matrix.col_labels().to_vec(),
        row_strategy: unit(matrix.rows(), saddle.row),
        col_strategy: unit(matrix.cols(), saddle.col),
        kind: SolutionKind::PureSaddle {
            row: saddle.row_label,
            col: saddle.col_label,
        },
        trace: ReductionTrace::default(),
    }
}

fn kind_of(matrix: &PayoffMatrix, row_strategy: &[f64], col_strategy: &[f64]) -> SolutionKind {
    let support = |s: &[f64]| {
        let mut nonzero = s.iter().enumerate().filter(|(_, p)| **p > 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    };
    match (support(row_strategy), support(col_strategy)) {
        (Some(i), Some(j)) => SolutionKind::PureSaddle {
            row: matrix.row_labels()[i].clone(),
            col: matrix.col_labels()[j].clone(),
        },
        _ => SolutionKind::Mixed,
    }
}

/// Expected payoff of each pure column against `row_strategy`.
pub fn column_payoffs(matrix: &PayoffMatrix, row_strategy: &[f64]) -> Vec<f64> {
    (0..matrix.cols())
        .map(|j| matrix.column(j).zip(row_strategy).map(|(a, p)| a * p).sum())
        .collect()
}

/// Expected payoff of each pure row against `col_strategy`.
pub fn row_payoffs(matrix: &PayoffMatrix, col_strategy: &[f64]) -> Vec<f64> {
    (0..matrix.rows())
        .map(|i| matrix.row(i).iter().zip(col_strategy).map(|(a, q)| a * q).sum())
        .collect()
}

fn equilibrium_tolerance(matrix: &PayoffMatrix) -> f64 {
    let scale = matrix
        .entries()
        .iter()
        .flatten()
        .fold(1.0_f64, |m, v| m.max(v.abs()));
    1e-12 * scale
}

/// Closed-form solution of a 2x2 game by oddments: each player's probabilities
/// are proportional to the absolute differences in the opponent-facing line
/// of the other strategy.
///
/// When the oddments do not form an equilibrium (a game with a saddle point
/// and one dominant line), the saddle point is returned instead.
///
/// ```
/// use strategem::{solve_2x2, PayoffMatrix};
///
/// let m = PayoffMatrix::unlabeled(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
/// let s = solve_2x2(&m).unwrap();
/// assert_eq!(s.value, 0.0);
/// assert_eq!(s.row_strategy, vec![0.5, 0.5]);
/// ```
pub fn solve_2x2(matrix: &PayoffMatrix) -> Result<GameSolution> {
    if matrix.rows() != 2 || matrix.cols() != 2 {
        return Err(Error::Dimension(format!(
            "oddments need a 2x2 game, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let (a, b, c, d) = (
        matrix.get(0, 0),
        matrix.get(0, 1),
        matrix.get(1, 0),
        matrix.get(1, 1),
    );
    let row_odds = [(d - c).abs(), (a - b).abs()];
    let col_odds = [(d - b).abs(), (a - c).abs()];
    let row_total = row_odds[0] + row_odds[1];
    let col_total = col_odds[0] + col_odds[1];

    if row_total > 0.0 && col_total > 0.0 {
        let p: Vec<f64> = row_odds.iter().map(|o| o / row_total).collect();
        let q: Vec<f64> = col_odds.iter().map(|o| o / col_total).collect();
        let against_cols = column_payoffs(matrix, &p);
        let against_rows = row_payoffs(matrix, &q);
        let floor = against_cols.iter().copied().fold(f64::INFINITY, f64::min);
        let ceiling = against_rows.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if (ceiling - floor).abs() <= equilibrium_tolerance(matrix) {
            return Ok(GameSolution {
                value: floor,
                kind: kind_of(matrix, &p, &q),
                row_labels: matrix.row_labels().to_vec(),
                col_labels: matrix.col_labels().to_vec(),
                row_strategy: p,
                col_strategy: q,
                trace: ReductionTrace::default(),
            });
        }
    }
    saddle_point(matrix)
        .map(|s| pure_solution(matrix, s))
        .ok_or_else(|| Error::Degenerate("oddments vanish and no saddle point exists".into()))
}

fn clean_distribution(raw: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    clipped.iter().map(|v| v / total).collect()
}

/// General minimax by linear programming.
///
/// Payoffs are shifted by `1 + |most negative entry|` so every entry is at
/// least 1. The column player's program `max sum(w)  s.t.  B w <= 1, w >= 0`
/// is solved directly; its shadow prices give the row player's strategy.
pub fn solve_lp(matrix: &PayoffMatrix) -> Result<GameSolution> {
    let shift = 1.0 + (-matrix.min_entry()).max(0.0);
    let shifted: Vec<Vec<f64>> = matrix
        .entries()
        .iter()
        .map(|r| r.iter().map(|v| v + shift).collect())
        .collect();
    let lp = simplex::maximize(&shifted, &vec![1.0; matrix.rows()], &vec![1.0; matrix.cols()])?;
    if lp.objective <= simplex::TOLERANCE {
        return Err(Error::Numerical("game program has a zero optimum".into()));
    }
    let row_strategy = clean_distribution(&lp.dual);
    let col_strategy = clean_distribution(&lp.primal);
    Ok(GameSolution {
        value: 1.0 / lp.objective - shift,
        kind: kind_of(matrix, &row_strategy, &col_strategy),
        row_labels: matrix.row_labels().to_vec(),
        col_labels: matrix.col_labels().to_vec(),
        row_strategy,
        col_strategy,
        trace: ReductionTrace::default(),
    })
}

fn expand(strategy: &[f64], kept: &[usize], len: usize) -> Vec<f64> {
    let mut full = vec![0.0; len];
    for (&index, &p) in kept.iter().zip(strategy) {
        full[index] = p;
    }
    full
}

/// Full pipeline: reduce, look for a saddle point, then oddments for a 2x2
/// remnant or the linear program otherwise.
///
/// ```
/// use strategem::{solve, Dominance, PayoffMatrix};
///
/// let m = PayoffMatrix::from_rows(
///     &["A", "B"],
///     &["C", "D", "E"],
///     vec![vec![2.0, 0.0, -1.0], vec![2.0, -1.0, -2.0]],
/// )
/// .unwrap();
/// let s = solve(&m, Dominance::Weak).unwrap();
/// assert_eq!(s.value, -1.0);
/// assert_eq!(s.saddle(), Some(("A", "E")));
/// ```
pub fn solve(matrix: &PayoffMatrix, mode: Dominance) -> Result<GameSolution> {
    let reduction = dominance::reduce_indexed(matrix, mode);
    let reduced = &reduction.matrix;
    let inner = if let Some(saddle) = saddle_point(reduced) {
        pure_solution(reduced, saddle)
    } else if reduced.rows() == 2 && reduced.cols() == 2 {
        solve_2x2(reduced)?
    } else {
        solve_lp(reduced)?
    };
    Ok(GameSolution {
        value: inner.value,
        row_labels: matrix.row_labels().to_vec(),
        col_labels: matrix.col_labels().to_vec(),
        row_strategy: expand(&inner.row_strategy, &reduction.rows, matrix.rows()),
        col_strategy: expand(&inner.col_strategy, &reduction.cols, matrix.cols()),
        kind: inner.kind,
        trace: reduction.trace,
    })
}

/// Values of the all-lower and all-upper realizations. Any realization inside
/// the intervals has a value in between.
pub fn interval_game_bounds(matrix: &IntervalPayoffMatrix, mode: Dominance) -> Result<(f64, f64)> {
    matrix.check_bounded()?;
    let low = solve(&matrix.lower(), mode)?.value;
    let high = solve(&matrix.upper(), mode)?.value;
    Ok((low, high))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::interval::Interval;

    fn m(entries: Vec<Vec<f64>>) -> PayoffMatrix {
        PayoffMatrix::unlabeled(entries).unwrap()
    }

    #[test]
    fn binary_game_saddle() {
        let matrix = PayoffMatrix::from_rows(
            &["A", "B"],
            &["C", "D", "E"],
            vec![vec![2.0, 0.0, -1.0], vec![2.0, -1.0, -2.0]],
        )
        .unwrap();
        let s = saddle_point(&matrix).unwrap();
        assert_eq!((s.row_label.as_str(), s.col_label.as_str(), s.value), ("A", "E", -1.0));
        let solution = solve(&matrix, Dominance::Weak).unwrap();
        assert_eq!(solution.row_strategy, vec![1.0, 0.0]);
        assert_eq!(solution.col_strategy, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn matching_pennies_has_no_saddle() {
        assert!(saddle_point(&m(vec![vec![0.0, 1.0], vec![1.0, 0.0]])).is_none());
    }

    #[test]
    fn saddle_ties_pick_lowest_indices() {
        let s = saddle_point(&m(vec![vec![1.0, 1.0], vec![1.0, 1.0]])).unwrap();
        assert_eq!((s.row, s.col), (0, 0));
    }

    #[test]
    fn oddments_on_reduced_extended_game() {
        let matrix = PayoffMatrix::from_rows(
            &["A", "X"],
            &["D", "E"],
            vec![vec![0.08, 0.14], vec![0.24, 0.14]],
        )
        .unwrap();
        let s = solve_2x2(&matrix).unwrap();
        assert!((s.value - 0.14).abs() < 1e-12);
        assert!((s.row_strategy[0] - 0.625).abs() < 1e-12);
        assert!((s.row_strategy[1] - 0.375).abs() < 1e-12);
        assert_eq!(s.col_strategy, vec![0.0, 1.0]);
        assert_eq!(s.kind, SolutionKind::Mixed);
    }

    #[test]
    fn oddments_fall_back_to_saddle_when_a_line_dominates() {
        let s = solve_2x2(&m(vec![vec![3.0, 1.0], vec![2.0, 0.0]])).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.is_pure());
    }

    #[test]
    fn oddments_require_two_by_two() {
        assert!(matches!(
            solve_2x2(&m(vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0]])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn lp_on_rock_paper_scissors() {
        let rps = m(vec![
            vec![0.0, -1.0, 1.0],
            vec![1.0, 0.0, -1.0],
            vec![-1.0, 1.0, 0.0],
        ]);
        let s = solve_lp(&rps).unwrap();
        assert!(s.value.abs() < 1e-12);
        for p in s.row_strategy.iter().chain(&s.col_strategy) {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(s.kind, SolutionKind::Mixed);
    }

    #[test]
    fn lp_agrees_with_saddle_value() {
        let matrix = fixtures::extended_payoffs();
        let lp = solve_lp(&matrix).unwrap();
        assert!((lp.value - 0.14).abs() < 1e-9);
    }

    #[test]
    fn one_by_one_game() {
        let s = solve(&m(vec![vec![-0.3]]), Dominance::Weak).unwrap();
        assert_eq!(s.value, -0.3);
        assert_eq!(s.saddle(), Some(("R1", "C1")));
    }

    #[test]
    fn pipeline_uses_lp_for_larger_mixed_games() {
        let rps = m(vec![
            vec![0.0, -1.0, 1.0],
            vec![1.0, 0.0, -1.0],
            vec![-1.0, 1.0, 0.0],
        ]);
        let s = solve(&rps, Dominance::Weak).unwrap();
        assert!(s.trace.is_empty());
        assert!(s.value.abs() < 1e-12);
    }

    #[test]
    fn extended_game_pipeline() {
        let s = solve(&fixtures::extended_payoffs(), Dominance::Strict).unwrap();
        assert!((s.value - 0.14).abs() < 1e-12);
        assert_eq!(s.saddle(), Some(("X", "E")));
        assert_eq!(s.row_probability("B"), Some(0.0));
        assert_eq!(s.col_probability("C"), Some(0.0));
    }

    #[test]
    fn interval_bounds() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let im = IntervalPayoffMatrix::from_rows(
            &["A", "B"],
            &["C", "D"],
            vec![vec![unit, unit], vec![unit, unit]],
        )
        .unwrap();
        assert_eq!(interval_game_bounds(&im, Dominance::Weak).unwrap(), (0.0, 1.0));

        let base = fixtures::extended_payoffs();
        let points = IntervalPayoffMatrix::from_points(&base);
        let v = solve(&base, Dominance::Weak).unwrap().value;
        assert_eq!(interval_game_bounds(&points, Dominance::Weak).unwrap(), (v, v));
    }
}
