//! What-if exploration on top of the solver: single-entry sensitivity, the
//! search for better payoff realizations inside interval bounds, game values
//! over a threat timeline, and before/after comparison of two solutions.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::payoff::{
    build_diff_matrix, build_entropy_matrix, time_weighted_matrix, EntropyConfig,
    IntervalPayoffMatrix, PayoffMatrix, PayoffRule,
};
use crate::solver::{solve, Dominance, GameSolution, SolutionKind};
use crate::strategy::Scenario;

/// Default grid step: payoffs are usually quoted to two decimals.
pub const DEFAULT_STEP: f64 = 0.01;

/// Largest matrix (per side) searched exhaustively.
pub const GRID_LIMIT: usize = 3;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sensitivity {
    /// The perturbed matrix.
    pub matrix: PayoffMatrix,
    pub solution: GameSolution,
    pub baseline: f64,
    pub value_change: f64,
}

/// Adds `delta` to one entry and re-solves. The input matrix is untouched.
pub fn sensitivity(
    matrix: &PayoffMatrix,
    row: &str,
    col: &str,
    delta: f64,
    mode: Dominance,
) -> Result<Sensitivity> {
    let (i, j) = (matrix.row_index(row)?, matrix.col_index(col)?);
    let baseline = solve(matrix, mode)?.value;
    let perturbed = matrix.with_entry(i, j, matrix.get(i, j) + delta);
    let solution = solve(&perturbed, mode)?;
    Ok(Sensitivity {
        value_change: solution.value - baseline,
        matrix: perturbed,
        solution,
        baseline,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfResult {
    pub realization: PayoffMatrix,
    pub achieved: f64,
    pub baseline: f64,
    pub delta: f64,
    /// `realization - nominal`, entry by entry.
    pub deviations: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    /// Grid search up to 3x3, greedy above.
    #[default]
    Auto,
    Grid,
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    /// Bound on `sum |realization - nominal|`; `None` means unlimited.
    pub budget: Option<f64>,
    pub step: f64,
    pub method: SearchMethod,
    pub mode: Dominance,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            step: DEFAULT_STEP,
            method: SearchMethod::Auto,
            mode: Dominance::Weak,
        }
    }
}

/// Searches the interval matrix for the realization with the best game value.
///
/// The baseline is the midpoint matrix. Without a budget the all-upper
/// realization wins outright, because the value never decreases when an entry
/// grows.
pub fn optimize_within_intervals(
    matrix: &IntervalPayoffMatrix,
    budget: Option<f64>,
    step: f64,
    mode: Dominance,
) -> Result<WhatIfResult> {
    optimize_with(
        matrix,
        &SearchOptions {
            budget,
            step,
            mode,
            ..SearchOptions::default()
        },
    )
}

pub fn optimize_with(matrix: &IntervalPayoffMatrix, options: &SearchOptions) -> Result<WhatIfResult> {
    let step = options.step;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Step(format!("step {step} must be positive")));
    }
    let widest = matrix
        .entries()
        .iter()
        .flatten()
        .map(|iv| iv.width())
        .fold(0.0, f64::max);
    if widest > 0.0 && step > widest {
        return Err(Error::Step(format!(
            "step {step} exceeds the widest interval ({widest})"
        )));
    }
    if let Some(budget) = options.budget {
        if !(budget >= 0.0) {
            return Err(Error::Range(format!("budget {budget} must be nonnegative")));
        }
    }
    let large = matrix.rows() > GRID_LIMIT || matrix.cols() > GRID_LIMIT;
    if options.method == SearchMethod::Grid && large {
        return Err(Error::Size(format!(
            "{}x{} matrix exceeds the {GRID_LIMIT}x{GRID_LIMIT} grid limit",
            matrix.rows(),
            matrix.cols()
        )));
    }

    let nominal = matrix.midpoint();
    let baseline = solve(&nominal, options.mode)?.value;
    let (realization, achieved) = match options.budget {
        None => {
            let upper = matrix.upper();
            let value = solve(&upper, options.mode)?.value;
            (upper, value)
        }
        Some(budget) => {
            let search = BudgetSearch::new(matrix, &nominal, baseline, budget, step, options.mode);
            let greedy = match options.method {
                SearchMethod::Auto => large,
                SearchMethod::Grid => false,
                SearchMethod::Greedy => true,
            };
            if greedy {
                search.greedy()?
            } else {
                search.exhaustive()?
            }
        }
    };
    let deviations = realization
        .entries()
        .iter()
        .zip(nominal.entries())
        .map(|(r, n)| r.iter().zip(n).map(|(a, b)| a - b).collect())
        .collect();
    Ok(WhatIfResult {
        delta: achieved - baseline,
        realization,
        achieved,
        baseline,
        deviations,
    })
}

/// Budgeted search over upward moves from the nominal matrix. Lowering an
/// entry spends budget without ever raising the value, so only levels at or
/// above the nominal entry are considered.
struct BudgetSearch<'a> {
    nominal: &'a PayoffMatrix,
    /// Candidate values per entry in row-major order, nominal first, ascending.
    levels: Vec<Vec<f64>>,
    baseline: f64,
    budget: f64,
    mode: Dominance,
}

impl<'a> BudgetSearch<'a> {
    fn new(
        matrix: &IntervalPayoffMatrix,
        nominal: &'a PayoffMatrix,
        baseline: f64,
        budget: f64,
        step: f64,
        mode: Dominance,
    ) -> Self {
        let levels = matrix
            .entries()
            .iter()
            .flatten()
            .map(|iv| {
                let mid = iv.midpoint();
                let mut values = vec![mid];
                let count = ((iv.hi() - iv.lo()) / step + 1e-9).floor() as usize;
                for k in 0..=count {
                    let v = (iv.lo() + k as f64 * step).min(iv.hi());
                    if v > values[values.len() - 1] + EPS {
                        values.push(v);
                    }
                }
                if iv.hi() > values[values.len() - 1] + EPS {
                    values.push(iv.hi());
                }
                values
            })
            .collect();
        BudgetSearch {
            nominal,
            levels,
            baseline,
            budget,
            mode,
        }
    }

    fn realize(&self, choice: &[usize]) -> PayoffMatrix {
        let cols = self.nominal.cols();
        let mut m = self.nominal.clone();
        for (k, &level) in choice.iter().enumerate() {
            m = m.with_entry(k / cols, k % cols, self.levels[k][level]);
        }
        m
    }

    fn cost(&self, entry: usize, level: usize) -> f64 {
        self.levels[entry][level] - self.levels[entry][0]
    }

    fn exhaustive(&self) -> Result<(PayoffMatrix, f64)> {
        let n = self.levels.len();
        let mut best = Best::new(self.nominal.clone(), self.baseline);
        let mut choice = vec![0; n];
        self.descend(0, self.budget, &mut choice, &mut best)?;
        Ok((best.matrix, best.value))
    }

    fn descend(
        &self,
        entry: usize,
        remaining: f64,
        choice: &mut Vec<usize>,
        best: &mut Best,
    ) -> Result<()> {
        if entry == self.levels.len() {
            // only maximal allocations can be optimal
            let can_grow = choice.iter().enumerate().any(|(k, &level)| {
                level + 1 < self.levels[k].len()
                    && self.levels[k][level + 1] - self.levels[k][level] <= remaining + EPS
            });
            if !can_grow {
                let realization = self.realize(choice);
                let value = solve(&realization, self.mode)?.value;
                let spent = self.budget - remaining;
                best.offer(realization, value, spent);
            }
            return Ok(());
        }
        for level in 0..self.levels[entry].len() {
            let cost = self.cost(entry, level);
            if cost > remaining + EPS {
                break;
            }
            choice[entry] = level;
            self.descend(entry + 1, remaining - cost, choice, best)?;
        }
        choice[entry] = 0;
        Ok(())
    }

    fn greedy(&self) -> Result<(PayoffMatrix, f64)> {
        let mut choice = vec![0; self.levels.len()];
        let mut remaining = self.budget;
        let mut current = self.baseline;
        loop {
            let mut step: Option<(usize, f64, f64)> = None;
            for k in 0..choice.len() {
                let level = choice[k];
                if level + 1 >= self.levels[k].len() {
                    continue;
                }
                let cost = self.levels[k][level + 1] - self.levels[k][level];
                if cost > remaining + EPS {
                    continue;
                }
                choice[k] += 1;
                let value = solve(&self.realize(&choice), self.mode)?.value;
                choice[k] -= 1;
                if value > current + EPS && step.map_or(true, |(_, v, _)| value > v + EPS) {
                    step = Some((k, value, cost));
                }
            }
            match step {
                Some((k, value, cost)) => {
                    choice[k] += 1;
                    remaining -= cost;
                    current = value;
                }
                None => break,
            }
        }
        Ok((self.realize(&choice), current))
    }
}

struct Best {
    matrix: PayoffMatrix,
    value: f64,
    spent: f64,
}

impl Best {
    fn new(matrix: PayoffMatrix, value: f64) -> Self {
        Best {
            matrix,
            value,
            spent: 0.0,
        }
    }

    /// Higher value wins; equal values prefer the cheaper realization.
    fn offer(&mut self, matrix: PayoffMatrix, value: f64, spent: f64) {
        let better = value > self.value + EPS
            || ((value - self.value).abs() <= EPS && spent < self.spent - EPS);
        if better {
            *self = Best {
                matrix,
                value,
                spent,
            };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodValue {
    pub period: usize,
    pub value: f64,
    pub kind: SolutionKind,
}

/// Game value per timeline period.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueSeries(pub Vec<PeriodValue>);

impl ValueSeries {
    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Plays the game once per timeline period with columns tilted by that
/// period's threat probabilities.
pub fn timeline_values(
    scenario: &Scenario,
    rule: PayoffRule,
    entropy: &EntropyConfig,
    mode: Dominance,
) -> Result<ValueSeries> {
    let timeline = scenario
        .timeline
        .as_ref()
        .ok_or_else(|| Error::Config("scenario has no threat timeline".into()))?;
    let base = match rule {
        PayoffRule::Diff => build_diff_matrix(scenario)?,
        PayoffRule::Entropy => build_entropy_matrix(scenario, entropy)?,
        PayoffRule::Interval => {
            return Err(Error::Scale(
                "timelines are played with the diff or entropy rule".into(),
            ))
        }
    };
    (0..timeline.periods)
        .map(|period| {
            let weighted = time_weighted_matrix(&base, timeline, period)?;
            let solution = solve(&weighted, mode)?;
            Ok(PeriodValue {
                period,
                value: solution.value,
                kind: solution.kind,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(ValueSeries)
}

/// Descriptive difference between two solutions of related games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Movement {
    pub value_before: f64,
    pub value_after: f64,
    pub value_delta: f64,
    pub kind_changed: bool,
    pub saddle_before: Option<(String, String)>,
    pub saddle_after: Option<(String, String)>,
}

impl Movement {
    pub fn saddle_moved(&self) -> bool {
        self.saddle_before != self.saddle_after
    }
}

impl std::fmt::Display for Movement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cell = |s: &Option<(String, String)>| match s {
            Some((r, c)) => format!("({r},{c})"),
            None => "mixed".to_string(),
        };
        write!(
            f,
            "{} -> {}, value {} -> {} (delta {:+})",
            cell(&self.saddle_before),
            cell(&self.saddle_after),
            self.value_before,
            self.value_after,
            self.value_delta
        )
    }
}

/// The label sets on each axis must be equal or nested, as when a strategy is
/// added to or dropped from a game.
fn nested(a: &[String], b: &[String]) -> bool {
    let a: HashSet<&String> = a.iter().collect();
    let b: HashSet<&String> = b.iter().collect();
    a.is_subset(&b) || b.is_subset(&a)
}

pub fn compare_solutions(before: &GameSolution, after: &GameSolution) -> Result<Movement> {
    if !nested(&before.row_labels, &after.row_labels)
        || !nested(&before.col_labels, &after.col_labels)
    {
        return Err(Error::Label(
            "solutions are over unrelated strategy labels".into(),
        ));
    }
    let saddle = |s: &GameSolution| s.saddle().map(|(r, c)| (r.to_string(), c.to_string()));
    Ok(Movement {
        value_before: before.value,
        value_after: after.value,
        value_delta: after.value - before.value,
        kind_changed: before.is_pure() != after.is_pure(),
        saddle_before: saddle(before),
        saddle_after: saddle(after),
    })
}
