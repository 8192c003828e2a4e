//! Scenario vocabulary: parameter schemes, asset and threat strategy profiles,
//! threat timelines, and the validation that every builder relies on.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::payoff::{IntervalPayoffMatrix, PayoffMatrix};

/// Ordered parameter labels shared by every strategy in a scenario, e.g.
/// competition, trends, costs, marketing, sales, other.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterScheme {
    names: Vec<String>,
    cost_index: Option<usize>,
}

impl ParameterScheme {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        cost_index: Option<usize>,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Dimension("parameter scheme has no names".into()));
        }
        check_unique(names.iter(), "parameter name")?;
        if let Some(index) = cost_index {
            if index >= names.len() {
                return Err(Error::Index(format!(
                    "cost index {index} outside scheme of {} parameters",
                    names.len()
                )));
            }
        }
        Ok(ParameterScheme { names, cost_index })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn cost_index(&self) -> Option<usize> {
        self.cost_index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Binary,
    Real,
    Span,
}

/// One coordinate of a strategy vector.
///
/// Real values and span endpoints must lie in `[-1, 1]`. Linguistic or
/// multi-valued codings should be mapped to `Real` by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParameterValue {
    Binary(bool),
    Real(f64),
    Span(Interval),
}

impl ParameterValue {
    pub fn scale(&self) -> Scale {
        match self {
            ParameterValue::Binary(_) => Scale::Binary,
            ParameterValue::Real(_) => Scale::Real,
            ParameterValue::Span(_) => Scale::Span,
        }
    }

    /// Point value of a binary or real coordinate.
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            ParameterValue::Binary(b) => Some(if b { 1.0 } else { 0.0 }),
            ParameterValue::Real(v) => Some(v),
            ParameterValue::Span(_) => None,
        }
    }

    /// Interval view; points become degenerate intervals.
    pub fn as_interval(&self) -> Interval {
        match *self {
            ParameterValue::Span(span) => span,
            other => Interval::point(other.as_real().expect("point value")),
        }
    }

    fn check_range(&self) -> Result<()> {
        let in_range = |v: f64| (-1.0..=1.0).contains(&v);
        match *self {
            ParameterValue::Binary(_) => Ok(()),
            ParameterValue::Real(v) if in_range(v) => Ok(()),
            ParameterValue::Real(v) => Err(Error::Range(format!("real value {v} outside [-1, 1]"))),
            ParameterValue::Span(s) if !s.is_empty() && in_range(s.lo()) && in_range(s.hi()) => {
                Ok(())
            }
            ParameterValue::Span(s) => Err(Error::Range(format!("span {s} outside [-1, 1]"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Asset,
    Threat,
}

/// A labeled strategy of either player.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub label: String,
    pub role: Role,
    pub values: Vec<ParameterValue>,
}

impl StrategyProfile {
    pub fn new(label: impl Into<String>, role: Role, values: Vec<ParameterValue>) -> Self {
        StrategyProfile {
            label: label.into(),
            role,
            values,
        }
    }

    pub fn asset(label: impl Into<String>, values: Vec<ParameterValue>) -> Self {
        Self::new(label, Role::Asset, values)
    }

    pub fn threat(label: impl Into<String>, values: Vec<ParameterValue>) -> Self {
        Self::new(label, Role::Threat, values)
    }

    /// Binary profile from 0/1 digits; any non-zero digit counts as 1.
    pub fn binary(label: impl Into<String>, role: Role, bits: &[u8]) -> Self {
        let values = bits.iter().map(|&b| ParameterValue::Binary(b != 0)).collect();
        Self::new(label, role, values)
    }

    pub fn real(label: impl Into<String>, role: Role, values: &[f64]) -> Self {
        let values = values.iter().map(|&v| ParameterValue::Real(v)).collect();
        Self::new(label, role, values)
    }

    pub fn span(label: impl Into<String>, role: Role, spans: &[Interval]) -> Self {
        let values = spans.iter().map(|&s| ParameterValue::Span(s)).collect();
        Self::new(label, role, values)
    }

    /// The shared scale of all coordinates, or `None` when they disagree or the
    /// profile is empty.
    pub fn scale(&self) -> Option<Scale> {
        let first = self.values.first()?.scale();
        self.values
            .iter()
            .all(|v| v.scale() == first)
            .then_some(first)
    }

    /// Point coordinates; fails on span profiles.
    pub fn point_values(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|v| {
                v.as_real().ok_or_else(|| {
                    Error::Scale(format!("profile {} holds spans, not points", self.label))
                })
            })
            .collect()
    }

    pub fn interval_values(&self) -> Vec<Interval> {
        self.values.iter().map(ParameterValue::as_interval).collect()
    }
}

/// Per-period occurrence probability of each threat.
///
/// Probabilities of different threats in one period are not required to sum
/// to one: each `pp` only complements its own non-occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreatTimeline {
    pub periods: usize,
    pub pp: BTreeMap<String, Vec<f64>>,
}

impl ThreatTimeline {
    pub fn new(periods: usize, pp: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let timeline = ThreatTimeline { periods, pp };
        timeline.check()?;
        Ok(timeline)
    }

    fn check(&self) -> Result<()> {
        if self.periods == 0 {
            return Err(Error::Dimension("timeline has no periods".into()));
        }
        for (label, series) in &self.pp {
            if series.len() != self.periods {
                return Err(Error::Dimension(format!(
                    "timeline for {label} has {} entries, expected {}",
                    series.len(),
                    self.periods
                )));
            }
            if let Some(bad) = series.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::Range(format!(
                    "probability {bad} for {label} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Raw probabilities for `period`, in the order of `labels`.
    pub fn probabilities(&self, period: usize, labels: &[String]) -> Result<Vec<f64>> {
        if period >= self.periods {
            return Err(Error::Index(format!(
                "period {period} outside timeline of {} periods",
                self.periods
            )));
        }
        labels
            .iter()
            .map(|label| {
                self.pp
                    .get(label)
                    .map(|series| series[period])
                    .ok_or_else(|| Error::Label(format!("timeline has no entry for {label}")))
            })
            .collect()
    }
}

/// An explicit payoff table replacing derivation from strategy vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum PayoffOverrides {
    Real(PayoffMatrix),
    Interval(IntervalPayoffMatrix),
}

impl PayoffOverrides {
    pub fn col_labels(&self) -> &[String] {
        match self {
            PayoffOverrides::Real(m) => m.col_labels(),
            PayoffOverrides::Interval(m) => m.col_labels(),
        }
    }
}

/// Everything needed to build and play one assets-versus-threats game.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scheme: ParameterScheme,
    pub assets: Vec<StrategyProfile>,
    pub threats: Vec<StrategyProfile>,
    pub timeline: Option<ThreatTimeline>,
    pub overrides: Option<PayoffOverrides>,
}

impl Scenario {
    pub fn new(
        scheme: ParameterScheme,
        assets: Vec<StrategyProfile>,
        threats: Vec<StrategyProfile>,
    ) -> Self {
        Scenario {
            scheme,
            assets,
            threats,
            timeline: None,
            overrides: None,
        }
    }

    pub fn with_timeline(mut self, timeline: ThreatTimeline) -> Self {
        self.timeline = Some(timeline);
        self
    }

    pub fn with_overrides(mut self, overrides: PayoffOverrides) -> Self {
        self.overrides = Some(overrides);
        self
    }

    pub fn profiles(&self) -> impl Iterator<Item = &StrategyProfile> {
        self.assets.iter().chain(&self.threats)
    }

    pub fn asset_labels(&self) -> Vec<String> {
        self.assets.iter().map(|p| p.label.clone()).collect()
    }

    pub fn threat_labels(&self) -> Vec<String> {
        self.threats.iter().map(|p| p.label.clone()).collect()
    }

    /// Scale shared by every profile. Only meaningful after validation.
    pub fn scale(&self) -> Option<Scale> {
        self.profiles().next().and_then(StrategyProfile::scale)
    }

    pub fn validate(&self) -> Result<()> {
        if self.assets.is_empty() || self.threats.is_empty() {
            return Err(Error::Label(
                "a scenario needs at least one asset and one threat".into(),
            ));
        }
        for (profiles, role) in [(&self.assets, Role::Asset), (&self.threats, Role::Threat)] {
            if let Some(p) = profiles.iter().find(|p| p.role != role) {
                return Err(Error::Label(format!("profile {} listed under the wrong role", p.label)));
            }
        }
        check_unique(self.profiles().map(|p| &p.label), "strategy label")?;

        let width = self.scheme.len();
        for profile in self.profiles() {
            if profile.values.len() != width {
                return Err(Error::Dimension(format!(
                    "profile {} has {} values, scheme has {width}",
                    profile.label,
                    profile.values.len()
                )));
            }
        }
        for profile in self.profiles() {
            for value in &profile.values {
                value.check_range().map_err(|e| match e {
                    Error::Range(msg) => Error::Range(format!("{}: {msg}", profile.label)),
                    other => other,
                })?;
            }
        }
        let mut scales = Vec::new();
        for profile in self.profiles() {
            let scale = profile.scale().ok_or_else(|| {
                Error::MixedScale(format!("profile {} mixes value kinds", profile.label))
            })?;
            if !scales.contains(&scale) {
                scales.push(scale);
            }
        }
        if scales.len() > 1 {
            return Err(Error::MixedScale(format!(
                "profiles use several scales: {scales:?}"
            )));
        }

        if let Some(timeline) = &self.timeline {
            timeline.check()?;
            let threats: HashSet<&String> = self.threats.iter().map(|p| &p.label).collect();
            for label in &threats {
                if !timeline.pp.contains_key(*label) {
                    return Err(Error::Label(format!("timeline does not cover threat {label}")));
                }
            }
            if let Some(unknown) = timeline.pp.keys().find(|k| !threats.contains(k)) {
                let known_override = self
                    .overrides
                    .as_ref()
                    .is_some_and(|o| o.col_labels().contains(unknown));
                if !known_override {
                    return Err(Error::Label(format!("timeline names unknown threat {unknown}")));
                }
            }
        }
        if let Some(PayoffOverrides::Interval(m)) = &self.overrides {
            m.check_bounded()?;
        }
        Ok(())
    }
}

/// Returns the scenario unchanged when every invariant holds.
pub fn validate_scenario(raw: Scenario) -> Result<Scenario> {
    raw.validate()?;
    Ok(raw)
}

/// Turns one period's raw threat probabilities into weights summing to one.
///
/// ```
/// let w = strategem::normalize_threat_probabilities(&[0.9, 0.3]).unwrap();
/// assert!((w[0] - 0.75).abs() < 1e-12 && (w[1] - 0.25).abs() < 1e-12);
/// ```
pub fn normalize_threat_probabilities(pp: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = pp.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Range(format!("probability {bad} outside [0, 1]")));
    }
    let total: f64 = pp.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate(
            "all threat probabilities are zero; weights undefined".into(),
        ));
    }
    Ok(pp.iter().map(|p| p / total).collect())
}

pub(crate) fn check_unique<'a>(
    labels: impl Iterator<Item = &'a String>,
    what: &str,
) -> Result<()> {
    let mut seen = HashSet::new();
    for label in labels {
        if !seen.insert(label) {
            return Err(Error::Label(format!("duplicate {what} {label:?}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn intro_scenario_is_accepted() {
        let scenario = fixtures::binary_scenario();
        assert_eq!(validate_scenario(scenario.clone()).unwrap(), scenario);
    }

    #[test]
    fn short_vector_is_a_dimension_error() {
        let mut scenario = fixtures::binary_scenario();
        scenario.assets[0].values.pop();
        assert!(matches!(scenario.validate(), Err(Error::Dimension(_))));
    }

    #[test]
    fn binary_and_real_assets_do_not_mix() {
        let mut scenario = fixtures::binary_scenario();
        scenario.assets[1] =
            StrategyProfile::real("B", Role::Asset, &[0.32, 0.68, 0.53, 0.14, 0.06, 0.77]);
        assert!(matches!(scenario.validate(), Err(Error::MixedScale(_))));
    }

    #[test]
    fn mixed_kinds_inside_one_profile() {
        let mut scenario = fixtures::real_scenario();
        scenario.threats[0].values[2] = ParameterValue::Binary(true);
        assert!(matches!(scenario.validate(), Err(Error::MixedScale(_))));
    }

    #[test]
    fn label_rules() {
        let mut duplicate = fixtures::binary_scenario();
        duplicate.threats[0].label = "A".into();
        assert!(matches!(duplicate.validate(), Err(Error::Label(_))));

        let mut no_threats = fixtures::binary_scenario();
        no_threats.threats.clear();
        assert!(matches!(no_threats.validate(), Err(Error::Label(_))));

        let mut wrong_role = fixtures::binary_scenario();
        wrong_role.assets[0].role = Role::Threat;
        assert!(matches!(wrong_role.validate(), Err(Error::Label(_))));
    }

    #[test]
    fn real_values_outside_unit_range() {
        let mut scenario = fixtures::real_scenario();
        scenario.assets[0].values[0] = ParameterValue::Real(1.5);
        assert!(matches!(scenario.validate(), Err(Error::Range(_))));
        scenario.assets[0].values[0] = ParameterValue::Real(-1.0);
        assert!(scenario.validate().is_ok());
    }

    #[test]
    fn timeline_must_cover_threats() {
        let scenario = fixtures::binary_scenario();
        let mut pp = BTreeMap::new();
        pp.insert("C".to_string(), vec![0.2]);
        pp.insert("D".to_string(), vec![0.3]);
        let partial = scenario
            .clone()
            .with_timeline(ThreatTimeline::new(1, pp.clone()).unwrap());
        assert!(matches!(partial.validate(), Err(Error::Label(_))));

        pp.insert("E".to_string(), vec![0.4]);
        pp.insert("Z".to_string(), vec![0.4]);
        let unknown = scenario.with_timeline(ThreatTimeline::new(1, pp).unwrap());
        assert!(matches!(unknown.validate(), Err(Error::Label(_))));
    }

    #[test]
    fn timeline_rejects_bad_probabilities() {
        let mut pp = BTreeMap::new();
        pp.insert("C".to_string(), vec![0.2, 1.2]);
        assert!(matches!(ThreatTimeline::new(2, pp.clone()), Err(Error::Range(_))));
        assert!(matches!(ThreatTimeline::new(3, pp), Err(Error::Dimension(_))));
    }

    #[test]
    fn scheme_invariants() {
        assert!(ParameterScheme::new(Vec::<String>::new(), None).is_err());
        assert!(matches!(ParameterScheme::new(["a", "a"], None), Err(Error::Label(_))));
        assert!(matches!(ParameterScheme::new(["a", "b"], Some(2)), Err(Error::Index(_))));
        assert_eq!(ParameterScheme::new(["a", "b"], Some(1)).unwrap().cost_index(), Some(1));
    }

    #[test]
    fn normalization_examples() {
        let third = normalize_threat_probabilities(&[0.5, 0.5, 0.5]).unwrap();
        assert!(third.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12));
        let same = normalize_threat_probabilities(&[0.2, 0.3, 0.5]).unwrap();
        for (w, e) in same.iter().zip([0.2, 0.3, 0.5]) {
            assert!((w - e).abs() < 1e-12);
        }
        let w = normalize_threat_probabilities(&[0.9, 0.3]).unwrap();
        assert!((w[0] - 0.75).abs() < 1e-12);
        assert!((w[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn all_zero_probabilities_are_degenerate() {
        assert!(matches!(
            normalize_threat_probabilities(&[0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(normalize_threat_probabilities(&[]), Err(Error::Degenerate(_))));
        assert!(matches!(normalize_threat_probabilities(&[-0.1, 0.5]), Err(Error::Range(_))));
    }
}
