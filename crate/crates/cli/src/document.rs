//! JSON documents read and written by the command line and the HTTP service.
//!
//! A [`ScenarioDocument`] describes the strategies of both players and
//! optional timeline, payoff overrides and rule settings. A
//! [`ResultDocument`] carries whatever a command produced.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use strategem::{
    Axis, Dominance, EntropyConfig, GameSolution, Interval, IntervalPayoffMatrix, ParameterScheme,
    ParameterValue, PayoffMatrix, PayoffOverrides, PayoffRule, PeriodValue, Role, Scale, Scenario,
    SolutionKind, StrategyProfile, ThreatTimeline,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub scheme: SchemeSpec,
    pub assets: Vec<ProfileSpec>,
    pub threats: Vec<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeline: Option<TimelineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<OverridesSpec>,
    #[serde(default)]
    pub rule: PayoffRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropyConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub label: String,
    pub values: Vec<ValueSpec>,
    /// Inferred from the values when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleName {
    Binary,
    Real,
    Span,
}

impl From<ScaleName> for Scale {
    fn from(s: ScaleName) -> Scale {
        match s {
            ScaleName::Binary => Scale::Binary,
            ScaleName::Real => Scale::Real,
            ScaleName::Span => Scale::Span,
        }
    }
}

/// A parameter value: `true`/`false`, a number, or an `[lo, hi]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Flag(bool),
    Number(f64),
    Span(Interval),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineSpec {
    pub periods: usize,
    pub pp: BTreeMap<String, Vec<f64>>,
}

/// An explicit payoff table. Labels default to the asset and threat labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverridesSpec {
    Labeled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        row_labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        col_labels: Option<Vec<String>>,
        entries: Vec<Vec<CellSpec>>,
    },
    Table(Vec<Vec<CellSpec>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellSpec {
    Number(f64),
    Span(Interval),
}

/// A parsed document together with the validated scenario it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub document: ScenarioDocument,
    pub scenario: Scenario,
}

impl Loaded {
    pub fn entropy(&self) -> EntropyConfig {
        self.document.entropy.clone().unwrap_or_default()
    }
}

/// Parse or validation failure, anchored to a position in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("line {line}, column {column}: {kind}: {message}")]
pub struct DocumentError {
    pub kind: String,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl DocumentError {
    fn parse(err: &serde_json::Error) -> Self {
        DocumentError {
            kind: "ParseError".into(),
            message: strip_position(&err.to_string()),
            line: err.line().max(1),
            column: err.column().max(1),
        }
    }

    /// Anchors a library error at the first strategy label it mentions, or at
    /// the document section it concerns.
    pub fn anchored(source: &str, document: &ScenarioDocument, err: &strategem::Error) -> Self {
        let message = err.to_string();
        let labels = document
            .assets
            .iter()
            .chain(&document.threats)
            .map(|p| p.label.as_str());
        let offset = labels
            .filter(|l| mentions(&message, l))
            .find_map(|l| find_label(source, l))
            .or_else(|| {
                let section = match err {
                    strategem::Error::Scale(_) | strategem::Error::MixedScale(_) => "assets",
                    _ if message.contains("timeline") => "timeline",
                    _ if message.contains("override") => "overrides",
                    strategem::Error::Config(_) => "entropy",
                    _ => "scheme",
                };
                source.find(&format!("\"{section}\""))
            })
            .unwrap_or(0);
        let (line, column) = line_column(source, offset);
        DocumentError {
            kind: err.kind().into(),
            message,
            line,
            column,
        }
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn mentions(message: &str, label: &str) -> bool {
    let word = |c: char| c.is_alphanumeric() || c == '_';
    message.match_indices(label).any(|(i, _)| {
        let before = message[..i].chars().next_back();
        let after = message[i + label.len()..].chars().next();
        !before.is_some_and(word) && !after.is_some_and(word)
    })
}

/// Byte offset of `"label": "<label>"` in the source.
fn find_label(source: &str, label: &str) -> Option<usize> {
    let quoted = format!("\"{label}\"");
    source.match_indices("\"label\"").find_map(|(i, key)| {
        let rest = &source[i + key.len()..];
        let rest = rest.trim_start().strip_prefix(':')?.trim_start();
        rest.starts_with(&quoted).then_some(i)
    })
}

fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl ScenarioDocument {
    /// Parses and validates a scenario document.
    pub fn load(source: &str) -> Result<Loaded, DocumentError> {
        let document: ScenarioDocument =
            serde_json::from_str(source).map_err(|e| DocumentError::parse(&e))?;
        let scenario = document
            .to_scenario()
            .and_then(strategem::validate_scenario)
            .map_err(|e| DocumentError::anchored(source, &document, &e))?;
        Ok(Loaded { document, scenario })
    }

    pub fn to_scenario(&self) -> strategem::Result<Scenario> {
        let scheme = ParameterScheme::new(self.scheme.names.clone(), self.scheme.cost_index)?;
        // bare 0/1 numbers are binary only when no unscaled profile uses anything else
        let binary = !self
            .assets
            .iter()
            .chain(&self.threats)
            .any(|p| p.scale == Some(ScaleName::Real))
            && self
                .assets
                .iter()
                .chain(&self.threats)
                .filter(|p| p.scale.is_none())
                .flat_map(|p| &p.values)
                .all(|v| !matches!(v, ValueSpec::Number(x) if *x != 0.0 && *x != 1.0));
        let profiles = |specs: &[ProfileSpec], role| {
            specs
                .iter()
                .map(|p| p.to_profile(role, binary))
                .collect::<strategem::Result<Vec<_>>>()
        };
        let mut scenario = Scenario::new(
            scheme,
            profiles(&self.assets, Role::Asset)?,
            profiles(&self.threats, Role::Threat)?,
        );
        if let Some(t) = &self.timeline {
            scenario = scenario.with_timeline(ThreatTimeline::new(t.periods, t.pp.clone())?);
        }
        if let Some(o) = &self.overrides {
            let overrides = o.to_overrides(&scenario)?;
            scenario = scenario.with_overrides(overrides);
        }
        Ok(scenario)
    }

    pub fn from_scenario(scenario: &Scenario, rule: PayoffRule, entropy: Option<EntropyConfig>) -> Self {
        let profiles = |ps: &[StrategyProfile]| ps.iter().map(ProfileSpec::from_profile).collect();
        ScenarioDocument {
            scheme: SchemeSpec {
                names: scenario.scheme.names().to_vec(),
                cost_index: scenario.scheme.cost_index(),
            },
            assets: profiles(&scenario.assets),
            threats: profiles(&scenario.threats),
            timeline: scenario.timeline.as_ref().map(|t| TimelineSpec {
                periods: t.periods,
                pp: t.pp.clone(),
            }),
            overrides: scenario.overrides.as_ref().map(OverridesSpec::from_overrides),
            rule,
            entropy,
        }
    }
}

impl ProfileSpec {
    fn to_profile(&self, role: Role, binary_numbers: bool) -> strategem::Result<StrategyProfile> {
        let scale = self.scale.map(Scale::from);
        let values = self
            .values
            .iter()
            .map(|v| match (*v, scale) {
                (ValueSpec::Flag(b), _) => Ok(ParameterValue::Binary(b)),
                (ValueSpec::Span(iv), _) => Ok(ParameterValue::Span(iv)),
                (ValueSpec::Number(x), Some(Scale::Span)) => Ok(ParameterValue::Span(Interval::point(x))),
                (ValueSpec::Number(x), Some(Scale::Real)) => Ok(ParameterValue::Real(x)),
                (ValueSpec::Number(x), Some(Scale::Binary)) => binary_value(&self.label, x),
                (ValueSpec::Number(x), None) if binary_numbers => binary_value(&self.label, x),
                (ValueSpec::Number(x), None) => Ok(ParameterValue::Real(x)),
            })
            .collect::<strategem::Result<Vec<_>>>()?;
        Ok(StrategyProfile::new(self.label.clone(), role, values))
    }

    fn from_profile(profile: &StrategyProfile) -> Self {
        let values = profile
            .values
            .iter()
            .map(|v| match *v {
                ParameterValue::Binary(b) => ValueSpec::Number(if b { 1.0 } else { 0.0 }),
                ParameterValue::Real(x) => ValueSpec::Number(x),
                ParameterValue::Span(iv) => ValueSpec::Span(iv),
            })
            .collect();
        ProfileSpec {
            label: profile.label.clone(),
            values,
            scale: profile.scale().map(|s| match s {
                Scale::Binary => ScaleName::Binary,
                Scale::Real => ScaleName::Real,
                Scale::Span => ScaleName::Span,
            }),
        }
    }
}

fn binary_value(label: &str, x: f64) -> strategem::Result<ParameterValue> {
    match x {
        0.0 => Ok(ParameterValue::Binary(false)),
        1.0 => Ok(ParameterValue::Binary(true)),
        other => Err(strategem::Error::Range(format!(
            "{label}: binary value {other} is neither 0 nor 1"
        ))),
    }
}

impl OverridesSpec {
    fn to_overrides(&self, scenario: &Scenario) -> strategem::Result<PayoffOverrides> {
        let (rows, cols, entries) = match self {
            OverridesSpec::Labeled {
                row_labels,
                col_labels,
                entries,
            } => (
                row_labels.clone().unwrap_or_else(|| scenario.asset_labels()),
                col_labels.clone().unwrap_or_else(|| scenario.threat_labels()),
                entries,
            ),
            OverridesSpec::Table(entries) => {
                (scenario.asset_labels(), scenario.threat_labels(), entries)
            }
        };
        let all_numbers = entries
            .iter()
            .flatten()
            .all(|c| matches!(c, CellSpec::Number(_)));
        if all_numbers {
            let values = entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| match c {
                            CellSpec::Number(x) => *x,
                            CellSpec::Span(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            Ok(PayoffOverrides::Real(PayoffMatrix::new(rows, cols, values)?))
        } else {
            let values = entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| match c {
                            CellSpec::Number(x) => Interval::point(*x),
                            CellSpec::Span(iv) => *iv,
                        })
                        .collect()
                })
                .collect();
            Ok(PayoffOverrides::Interval(IntervalPayoffMatrix::new(rows, cols, values)?))
        }
    }

    fn from_overrides(overrides: &PayoffOverrides) -> Self {
        match overrides {
            PayoffOverrides::Real(m) => OverridesSpec::Labeled {
                row_labels: Some(m.row_labels().to_vec()),
                col_labels: Some(m.col_labels().to_vec()),
                entries: m
                    .entries()
                    .iter()
                    .map(|r| r.iter().map(|x| CellSpec::Number(*x)).collect())
                    .collect(),
            },
            PayoffOverrides::Interval(m) => OverridesSpec::Labeled {
                row_labels: Some(m.row_labels().to_vec()),
                col_labels: Some(m.col_labels().to_vec()),
                entries: m
                    .entries()
                    .iter()
                    .map(|r| r.iter().map(|iv| CellSpec::Span(*iv)).collect())
                    .collect(),
            },
        }
    }
}

/// Output of any command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ResultDocument {
    Matrix(MatrixResult),
    IntervalMatrix(IntervalMatrixResult),
    Solution(SolutionResult),
    Series(SeriesResult),
    Whatif(WhatIfReport),
    Sensitivity(SensitivityReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixResult {
    pub rule: PayoffRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub matrix: PayoffMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalMatrixResult {
    pub matrix: IntervalPayoffMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionResult {
    pub rule: PayoffRule,
    pub dominance: Dominance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub value: f64,
    /// Negative value: change the strategy or withdraw.
    pub withdraw: bool,
    pub kind: SolutionKind,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub trace: Vec<TraceEvent>,
    /// The matrix that was solved.
    pub matrix: PayoffMatrix,
    /// Values of the all-lower and all-upper games, for interval payoffs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: usize,
    pub axis: Axis,
    pub label: String,
    pub dominated_by: String,
    pub kind: Dominance,
    pub description: String,
}

impl SolutionResult {
    pub fn new(
        solution: GameSolution,
        matrix: PayoffMatrix,
        rule: PayoffRule,
        dominance: Dominance,
        period: Option<usize>,
    ) -> Self {
        let trace = solution
            .trace
            .events()
            .iter()
            .enumerate()
            .map(|(i, e)| TraceEvent {
                step: i + 1,
                axis: e.axis,
                label: e.label.clone(),
                dominated_by: e.dominated_by.clone(),
                kind: e.kind,
                description: e.to_string(),
            })
            .collect();
        SolutionResult {
            rule,
            dominance,
            period,
            value: solution.value,
            withdraw: solution.value < 0.0,
            kind: solution.kind,
            row_labels: solution.row_labels,
            col_labels: solution.col_labels,
            row_strategy: solution.row_strategy,
            col_strategy: solution.col_strategy,
            trace,
            matrix,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub rule: PayoffRule,
    pub dominance: Dominance,
    pub periods: Vec<PeriodValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfReport {
    pub dominance: Dominance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    pub step: f64,
    pub baseline: f64,
    pub achieved: f64,
    pub delta: f64,
    pub realization: PayoffMatrix,
    pub deviations: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub row: String,
    pub col: String,
    pub delta: f64,
    pub baseline: f64,
    pub value_change: f64,
    pub solution: SolutionResult,
}

impl ResultDocument {
    /// Compact JSON, the machine format of every command.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result documents serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for ResultDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::render::text(self, f)
    }
}
