//! The four analysis commands, shared by the command line and the service.

use serde::{Deserialize, Serialize};
use strategem::{
    build_payoffs, interval_game_bounds, optimize_with, sensitivity, solve as solve_game,
    time_weighted_matrix, timeline_values, Dominance, Error, PayoffMatrix, PayoffRule, Payoffs,
    Result, SearchMethod, SearchOptions,
};

use crate::document::{
    IntervalMatrixResult, Loaded, MatrixResult, ResultDocument, SensitivityReport, SeriesResult,
    SolutionResult, WhatIfReport,
};

/// Exit status of `solve` when the game value is negative.
pub const EXIT_WITHDRAW: u8 = 3;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Overrides the rule named in the document.
    pub rule: Option<PayoffRule>,
    pub dominance: Option<Dominance>,
    /// Weight threat columns by this timeline period.
    pub period: Option<usize>,
}

impl Options {
    fn rule(&self, loaded: &Loaded) -> PayoffRule {
        self.rule.unwrap_or(loaded.document.rule)
    }

    fn mode(&self) -> Dominance {
        self.dominance.unwrap_or_default()
    }
}

/// Either a single-entry perturbation (`entry`, `delta`) or a budgeted search
/// inside interval payoffs (`budget`, `step`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhatIfRequest {
    pub rule: Option<PayoffRule>,
    pub dominance: Option<Dominance>,
    pub period: Option<usize>,
    /// Row and column label.
    pub entry: Option<(String, String)>,
    pub delta: Option<f64>,
    pub budget: Option<f64>,
    pub step: Option<f64>,
    pub method: Option<SearchMethod>,
}

impl WhatIfRequest {
    fn options(&self) -> Options {
        Options {
            rule: self.rule,
            dominance: self.dominance,
            period: self.period,
        }
    }
}

fn weighted(loaded: &Loaded, matrix: PayoffMatrix, period: Option<usize>) -> Result<PayoffMatrix> {
    match period {
        None => Ok(matrix),
        Some(p) => {
            let timeline = loaded.scenario.timeline.as_ref().ok_or_else(|| {
                Error::Config("--period needs a threat timeline in the scenario".into())
            })?;
            time_weighted_matrix(&matrix, timeline, p)
        }
    }
}

/// The point matrix a rule produces. Interval payoffs are played at their
/// midpoints and also report the all-lower and all-upper values.
fn point_matrix(loaded: &Loaded, options: &Options) -> Result<(PayoffMatrix, Option<(f64, f64)>)> {
    match build_payoffs(&loaded.scenario, options.rule(loaded), &loaded.entropy())? {
        Payoffs::Real(m) => Ok((weighted(loaded, m, options.period)?, None)),
        Payoffs::Interval(m) => {
            if options.period.is_some() {
                return Err(Error::Scale(
                    "timeline weighting needs the diff or entropy rule".into(),
                ));
            }
            let bounds = interval_game_bounds(&m, options.mode())?;
            Ok((m.midpoint(), Some(bounds)))
        }
    }
}

pub fn build(loaded: &Loaded, options: &Options) -> Result<ResultDocument> {
    let rule = options.rule(loaded);
    match build_payoffs(&loaded.scenario, rule, &loaded.entropy())? {
        Payoffs::Real(m) => Ok(ResultDocument::Matrix(MatrixResult {
            rule,
            period: options.period,
            matrix: weighted(loaded, m, options.period)?,
        })),
        Payoffs::Interval(_) if options.period.is_some() => Err(Error::Scale(
            "timeline weighting needs the diff or entropy rule".into(),
        )),
        Payoffs::Interval(matrix) => Ok(ResultDocument::IntervalMatrix(IntervalMatrixResult { matrix })),
    }
}

pub fn solve(loaded: &Loaded, options: &Options) -> Result<ResultDocument> {
    let (matrix, bounds) = point_matrix(loaded, options)?;
    let solution = solve_game(&matrix, options.mode())?;
    let mut result = SolutionResult::new(
        solution,
        matrix,
        options.rule(loaded),
        options.mode(),
        options.period,
    );
    result.bounds = bounds;
    Ok(ResultDocument::Solution(result))
}

pub fn timeline(loaded: &Loaded, options: &Options) -> Result<ResultDocument> {
    let rule = options.rule(loaded);
    let series = timeline_values(&loaded.scenario, rule, &loaded.entropy(), options.mode())?;
    Ok(ResultDocument::Series(SeriesResult {
        rule,
        dominance: options.mode(),
        periods: series.0,
    }))
}

pub fn whatif(loaded: &Loaded, request: &WhatIfRequest) -> Result<ResultDocument> {
    let options = request.options();
    let mode = options.mode();
    if let Some((row, col)) = &request.entry {
        if request.budget.is_some() {
            return Err(Error::Config(
                "give either an entry with a delta or a budget, not both".into(),
            ));
        }
        let delta = request.delta.unwrap_or(0.0);
        let (matrix, _) = point_matrix(loaded, &options)?;
        let s = sensitivity(&matrix, row, col, delta, mode)?;
        return Ok(ResultDocument::Sensitivity(SensitivityReport {
            row: row.clone(),
            col: col.clone(),
            delta,
            baseline: s.baseline,
            value_change: s.value_change,
            solution: SolutionResult::new(s.solution, s.matrix, options.rule(loaded), mode, options.period),
        }));
    }
    if request.delta.is_some() {
        return Err(Error::Config("a delta needs an entry to perturb".into()));
    }
    let intervals = match build_payoffs(&loaded.scenario, options.rule(loaded), &loaded.entropy())? {
        Payoffs::Interval(m) => m,
        Payoffs::Real(_) => {
            return Err(Error::Scale(
                "searching within bounds needs the interval rule".into(),
            ))
        }
    };
    let search = SearchOptions {
        budget: request.budget,
        step: request.step.unwrap_or(SearchOptions::default().step),
        method: request.method.unwrap_or_default(),
        mode,
    };
    let found = optimize_with(&intervals, &search)?;
    Ok(ResultDocument::Whatif(WhatIfReport {
        dominance: mode,
        budget: search.budget,
        step: search.step,
        baseline: found.baseline,
        achieved: found.achieved,
        delta: found.delta,
        realization: found.realization,
        deviations: found.deviations,
    }))
}

/// Process exit status for a successful command.
pub fn exit_status(result: &ResultDocument) -> u8 {
    match result {
        ResultDocument::Solution(s) if s.value < 0.0 => EXIT_WITHDRAW,
        _ => 0,
    }
}
