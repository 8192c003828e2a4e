//! Payoff matrices and the rules that derive them from strategy vectors.
//!
//! Three rules are available:
//!
//! * **difference**: the payoff of asset `a` against threat `t` is
//!   `sum_k (a_k - t_k)`;
//! * **profit entropy**: each vector is normalized to a probability simplex
//!   and scored with `sum_k -(v_k / cost_k) * log2(v_k)`, the payoff being
//!   `score(asset) - score(threat)`;
//! * **interval**: the difference rule evaluated with interval subtraction on
//!   span-valued parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::strategy::{
    check_unique, normalize_threat_probabilities, PayoffOverrides, Scale, Scenario,
    StrategyProfile, ThreatTimeline,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix<f64>")]
pub struct PayoffMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix<Interval>")]
pub struct IntervalPayoffMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<Interval>>,
}

#[derive(Deserialize)]
struct RawMatrix<T> {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<T>>,
}

fn check_shape<T>(rows: &[String], cols: &[String], entries: &[Vec<T>]) -> Result<()> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::Dimension("payoff matrix needs at least one row and column".into()));
    }
    if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
        return Err(Error::Dimension(format!(
            "payoff entries do not form a {}x{} matrix",
            rows.len(),
            cols.len()
        )));
    }
    check_unique(rows.iter(), "row label")?;
    check_unique(cols.iter(), "column label")
}

fn labels<S: AsRef<str>>(names: &[S]) -> Vec<String> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

fn position(labels: &[String], label: &str, axis: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Label(format!("unknown {axis} label {label:?}")))
}

impl PayoffMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_shape(&row_labels, &col_labels, &entries)?;
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Range("payoff entries must be finite".into()));
        }
        Ok(PayoffMatrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_rows<S: AsRef<str>>(rows: &[S], cols: &[S], entries: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(labels(rows), labels(cols), entries)
    }

    /// Matrix with generated labels `R1..` and `C1..`.
    pub fn unlabeled(entries: Vec<Vec<f64>>) -> Result<Self> {
        let rows = (1..=entries.len()).map(|i| format!("R{i}")).collect();
        let cols = (1..=entries.first().map_or(0, Vec::len))
            .map(|j| format!("C{j}"))
            .collect();
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn row_index(&self, label: &str) -> Result<usize> {
        position(&self.row_labels, label, "row")
    }

    pub fn col_index(&self, label: &str) -> Result<usize> {
        position(&self.col_labels, label, "column")
    }

    pub fn entry(&self, row: &str, col: &str) -> Result<f64> {
        Ok(self.get(self.row_index(row)?, self.col_index(col)?))
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(move |r| r[col])
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, row: usize, col: usize, value: f64) -> Self {
        let mut next = self.clone();
        next.entries[row][col] = value;
        next
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        PayoffMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }

    /// Restriction to the given row and column indices, in that order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        PayoffMatrix {
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        }
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for PayoffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .row_labels
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0);
        write!(f, "{:width$}", "")?;
        for label in &self.col_labels {
            write!(f, " {label:>10}")?;
        }
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            write!(f, "\n{label:width$}")?;
            for value in row {
                write!(f, " {:>10}", format_entry(*value))?;
            }
        }
        Ok(())
    }
}

fn format_entry(value: f64) -> String {
    let rounded = format!("{value:.6}");
    let trimmed = rounded.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

impl TryFrom<RawMatrix<f64>> for PayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix<f64>) -> Result<Self> {
        PayoffMatrix::new(raw.row_labels, raw.col_labels, raw.entries)
    }
}

impl IntervalPayoffMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<Interval>>,
    ) -> Result<Self> {
        check_shape(&row_labels, &col_labels, &entries)?;
        let matrix = IntervalPayoffMatrix {
            row_labels,
            col_labels,
            entries,
        };
        matrix.check_bounded()?;
        Ok(matrix)
    }

    pub fn from_rows<S: AsRef<str>>(
        rows: &[S],
        cols: &[S],
        entries: Vec<Vec<Interval>>,
    ) -> Result<Self> {
        Self::new(labels(rows), labels(cols), entries)
    }

    pub(crate) fn check_bounded(&self) -> Result<()> {
        if self.entries.iter().flatten().all(Interval::is_bounded) {
            Ok(())
        } else {
            Err(Error::Range("interval payoffs must be non-empty and bounded".into()))
        }
    }

    /// Degenerate interval matrix with `[v, v]` in every cell.
    pub fn from_points(matrix: &PayoffMatrix) -> Self {
        IntervalPayoffMatrix {
            row_labels: matrix.row_labels.clone(),
            col_labels: matrix.col_labels.clone(),
            entries: matrix
                .entries
                .iter()
                .map(|r| r.iter().map(|&v| Interval::point(v)).collect())
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn entries(&self) -> &[Vec<Interval>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Interval {
        self.entries[row][col]
    }

    pub fn with_entry(&self, row: usize, col: usize, value: Interval) -> Result<Self> {
        let mut next = self.clone();
        next.entries[row][col] = value;
        next.check_bounded()?;
        Ok(next)
    }

    /// Point matrix built by applying `pick` to every interval.
    pub fn realize(&self, pick: impl Fn(Interval) -> f64) -> PayoffMatrix {
        PayoffMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|&iv| pick(iv)).collect())
                .collect(),
        }
    }

    pub fn lower(&self) -> PayoffMatrix {
        self.realize(|iv| iv.lo())
    }

    pub fn upper(&self) -> PayoffMatrix {
        self.realize(|iv| iv.hi())
    }

    pub fn midpoint(&self) -> PayoffMatrix {
        self.realize(|iv| iv.midpoint())
    }

    /// Whether every entry of `matrix` lies in the matching interval.
    pub fn contains(&self, matrix: &PayoffMatrix) -> bool {
        matrix.rows() == self.rows()
            && matrix.cols() == self.cols()
            && self
                .entries
                .iter()
                .flatten()
                .zip(matrix.entries.iter().flatten())
                .all(|(iv, &v)| iv.contains(v))
    }
}

impl TryFrom<RawMatrix<Interval>> for IntervalPayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix<Interval>) -> Result<Self> {
        IntervalPayoffMatrix::new(raw.row_labels, raw.col_labels, raw.entries)
    }
}

/// How payoffs are derived from strategy vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffRule {
    #[default]
    Diff,
    Entropy,
    Interval,
}

impl FromStr for PayoffRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diff" => Ok(PayoffRule::Diff),
            "entropy" => Ok(PayoffRule::Entropy),
            "interval" => Ok(PayoffRule::Interval),
            other => Err(Error::Config(format!("unknown payoff rule {other:?}"))),
        }
    }
}

impl fmt::Display for PayoffRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PayoffRule::Diff => "diff",
            PayoffRule::Entropy => "entropy",
            PayoffRule::Interval => "interval",
        })
    }
}

/// Settings of the profit-entropy rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EntropyConfig {
    /// One positive cost per parameter; `None` means every cost is 1.
    pub costs: Option<Vec<f64>>,
    /// Substituted for non-positive parameter values before taking logarithms.
    pub probability_floor: f64,
    /// Multiply every term's cost by the strategy's own value at the scheme's
    /// cost index.
    pub use_cost_parameter: bool,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            costs: None,
            probability_floor: 1e-9,
            use_cost_parameter: false,
        }
    }
}

impl EntropyConfig {
    fn check(&self) -> Result<()> {
        if !(self.probability_floor > 0.0 && self.probability_floor < 1.0) {
            return Err(Error::Config(format!(
                "probability floor {} outside (0, 1)",
                self.probability_floor
            )));
        }
        if let Some(costs) = &self.costs {
            if let Some(bad) = costs.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
                return Err(Error::Config(format!("cost {bad} is not positive")));
            }
        }
        Ok(())
    }

    fn costs_for(&self, len: usize) -> Result<Vec<f64>> {
        match &self.costs {
            None => Ok(vec![1.0; len]),
            Some(costs) if costs.len() == len => Ok(costs.clone()),
            Some(costs) => Err(Error::Dimension(format!(
                "{} costs for {len} parameters",
                costs.len()
            ))),
        }
    }
}

/// Payoff of one asset against one threat: `sum_k (asset_k - threat_k)`.
pub fn diff_payoff(asset: &[f64], threat: &[f64]) -> Result<f64> {
    if asset.len() != threat.len() {
        return Err(Error::Dimension(format!(
            "asset has {} parameters, threat has {}",
            asset.len(),
            threat.len()
        )));
    }
    Ok(asset.iter().zip(threat).map(|(a, t)| a - t).sum())
}

fn real_overrides(scenario: &Scenario) -> Result<Option<&PayoffMatrix>> {
    match &scenario.overrides {
        Some(PayoffOverrides::Real(m)) => Ok(Some(m)),
        Some(PayoffOverrides::Interval(_)) => Err(Error::Scale(
            "interval payoff overrides need the interval rule".into(),
        )),
        None => Ok(None),
    }
}

fn require_points(scenario: &Scenario) -> Result<()> {
    if scenario.scale() == Some(Scale::Span) {
        return Err(Error::Scale(
            "span-valued profiles need the interval rule".into(),
        ));
    }
    Ok(())
}

fn point_matrix(
    scenario: &Scenario,
    payoff: impl Fn(&StrategyProfile, &StrategyProfile) -> Result<f64>,
) -> Result<PayoffMatrix> {
    let entries = scenario
        .assets
        .iter()
        .map(|a| scenario.threats.iter().map(|t| payoff(a, t)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    PayoffMatrix::new(scenario.asset_labels(), scenario.threat_labels(), entries)
}

/// Difference-rule matrix: rows follow asset order, columns threat order.
pub fn build_diff_matrix(scenario: &Scenario) -> Result<PayoffMatrix> {
    if let Some(m) = real_overrides(scenario)? {
        return Ok(m.clone());
    }
    require_points(scenario)?;
    point_matrix(scenario, |a, t| {
        diff_payoff(&a.point_values()?, &t.point_values()?)
    })
}

/// `sum_k -(v_k / cost_k) * log2(v_k)` over an already-normalized vector.
/// Zero coordinates contribute nothing.
pub fn entropy_score(values: &[f64], config: &EntropyConfig) -> Result<f64> {
    config.check()?;
    let costs = config.costs_for(values.len())?;
    Ok(values
        .iter()
        .zip(&costs)
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, c)| -(v / c) * v.log2())
        .sum())
}

/// Floors every coordinate at `floor` and rescales onto the probability simplex.
pub fn normalize_parameters(values: &[f64], floor: f64) -> Vec<f64> {
    let floored: Vec<f64> = values.iter().map(|v| v.max(floor)).collect();
    let total: f64 = floored.iter().sum();
    floored.iter().map(|v| v / total).collect()
}

fn profile_entropy(
    profile: &StrategyProfile,
    scenario: &Scenario,
    config: &EntropyConfig,
) -> Result<f64> {
    let raw = profile.point_values()?;
    let probabilities = normalize_parameters(&raw, config.probability_floor);
    let mut costs = config.costs_for(raw.len())?;
    if config.use_cost_parameter {
        let index = scenario.scheme.cost_index().ok_or_else(|| {
            Error::Config("cost parameter requested but the scheme has no cost index".into())
        })?;
        let scalar = raw[index];
        if scalar <= 0.0 {
            return Err(Error::Config(format!(
                "cost parameter of {} is {scalar}, must be positive",
                profile.label
            )));
        }
        costs.iter_mut().for_each(|c| *c *= scalar);
    }
    let per_profile = EntropyConfig {
        costs: Some(costs),
        ..config.clone()
    };
    entropy_score(&probabilities, &per_profile)
}

/// Profit-entropy matrix: `score(asset) - score(threat)` per cell.
pub fn build_entropy_matrix(scenario: &Scenario, config: &EntropyConfig) -> Result<PayoffMatrix> {
    config.check()?;
    if let Some(m) = real_overrides(scenario)? {
        return Ok(m.clone());
    }
    require_points(scenario)?;
    point_matrix(scenario, |a, t| {
        Ok(profile_entropy(a, scenario, config)? - profile_entropy(t, scenario, config)?)
    })
}

/// Interval-rule matrix: interval subtraction summed over parameters.
pub fn build_interval_matrix(scenario: &Scenario) -> Result<IntervalPayoffMatrix> {
    match &scenario.overrides {
        Some(PayoffOverrides::Interval(m)) => return Ok(m.clone()),
        Some(PayoffOverrides::Real(m)) => return Ok(IntervalPayoffMatrix::from_points(m)),
        None => {}
    }
    if scenario.scale() != Some(Scale::Span) {
        return Err(Error::Scale(
            "the interval rule needs span-valued profiles or interval overrides".into(),
        ));
    }
    let entries = scenario
        .assets
        .iter()
        .map(|a| {
            scenario
                .threats
                .iter()
                .map(|t| {
                    a.interval_values()
                        .into_iter()
                        .zip(t.interval_values())
                        .try_fold(Interval::point(0.0), |acc, (x, y)| acc.add(x.sub(y)?))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Interval>>>>()?;
    IntervalPayoffMatrix::new(scenario.asset_labels(), scenario.threat_labels(), entries)
}

/// Column `j` scaled by `n * w_j`, where `w` are the period's normalized
/// threat probabilities and `n` the column count. A uniform period leaves the
/// matrix unchanged.
pub fn time_weighted_matrix(
    base: &PayoffMatrix,
    timeline: &ThreatTimeline,
    period: usize,
) -> Result<PayoffMatrix> {
    let pp = timeline.probabilities(period, base.col_labels())?;
    let weights = normalize_threat_probabilities(&pp)?;
    let n = base.cols() as f64;
    let mut weighted = base.clone();
    for row in weighted.entries.iter_mut() {
        for (value, w) in row.iter_mut().zip(&weights) {
            *value *= n * w;
        }
    }
    Ok(weighted)
}

/// A built payoff table under any rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Payoffs {
    Real(PayoffMatrix),
    Interval(IntervalPayoffMatrix),
}

pub fn build_payoffs(
    scenario: &Scenario,
    rule: PayoffRule,
    entropy: &EntropyConfig,
) -> Result<Payoffs> {
    Ok(match rule {
        PayoffRule::Diff => Payoffs::Real(build_diff_matrix(scenario)?),
        PayoffRule::Entropy => Payoffs::Real(build_entropy_matrix(scenario, entropy)?),
        PayoffRule::Interval => Payoffs::Interval(build_interval_matrix(scenario)?),
    })
}
