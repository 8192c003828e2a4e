//! Ready-made scenarios for the market-launch walkthrough used across the
//! guide, the tests and the CLI examples.
//!
//! Six parameters are scored for every strategy: competition, trends, costs,
//! marketing, sales and other. Assets `A` and `B` play against threats `C`,
//! `D` and `E`.

use crate::interval::Interval;
use crate::payoff::PayoffMatrix;
use crate::strategy::{ParameterScheme, PayoffOverrides, Role, Scenario, StrategyProfile};

pub const PARAMETERS: [&str; 6] = ["competition", "trends", "costs", "marketing", "sales", "other"];

/// Index of the cost parameter in [`PARAMETERS`].
pub const COST_INDEX: usize = 2;

pub const REAL_A: [f64; 6] = [0.88, 0.24, 0.52, 0.91, 0.71, 0.02];
pub const REAL_B: [f64; 6] = [0.32, 0.68, 0.53, 0.14, 0.06, 0.77];
pub const REAL_C: [f64; 6] = [0.05, 0.61, 0.53, 0.12, 0.08, 0.30];
pub const REAL_D: [f64; 6] = [0.81, 0.11, 0.50, 0.22, 0.72, 0.84];
pub const REAL_E: [f64; 6] = [0.67, 0.72, 0.07, 0.55, 0.60, 0.53];

/// `C` and `D` after re-assessing the "other" parameter.
pub const CORRECTED_C: [f64; 6] = [0.05, 0.61, 0.53, 0.12, 0.08, 0.40];
pub const CORRECTED_D: [f64; 6] = [0.81, 0.11, 0.50, 0.22, 0.72, 0.68];

/// Payoff rows of the game extended with the extra asset strategy `X`.
/// Rows `A` and `B` are the real-valued difference payoffs; only the `D` and
/// `E` payoffs of `X` (0.24 and 0.14) are prescribed, the `C` entry is any
/// value that keeps column `C` dominated.
pub const EXTENDED_ROWS: [(&str, [f64; 3]); 3] = [
    ("A", [1.59, 0.08, 0.14]),
    ("B", [0.81, -0.70, -0.64]),
    ("X", [0.90, 0.24, 0.14]),
];

pub fn scheme() -> ParameterScheme {
    ParameterScheme::new(PARAMETERS, Some(COST_INDEX)).expect("static scheme")
}

/// Binary coding: 1 marks an asset's strength or a weak threat.
pub fn binary_scenario() -> Scenario {
    Scenario::new(
        scheme(),
        vec![
            StrategyProfile::binary("A", Role::Asset, &[1, 0, 1, 1, 1, 0]),
            StrategyProfile::binary("B", Role::Asset, &[0, 1, 1, 0, 0, 1]),
        ],
        vec![
            StrategyProfile::binary("C", Role::Threat, &[0, 1, 1, 0, 0, 0]),
            StrategyProfile::binary("D", Role::Threat, &[1, 0, 1, 0, 1, 1]),
            StrategyProfile::binary("E", Role::Threat, &[1, 1, 0, 1, 1, 1]),
        ],
    )
}

/// The same strategies scored with real numbers.
pub fn real_scenario() -> Scenario {
    Scenario::new(
        scheme(),
        vec![
            StrategyProfile::real("A", Role::Asset, &REAL_A),
            StrategyProfile::real("B", Role::Asset, &REAL_B),
        ],
        vec![
            StrategyProfile::real("C", Role::Threat, &REAL_C),
            StrategyProfile::real("D", Role::Threat, &REAL_D),
            StrategyProfile::real("E", Role::Threat, &REAL_E),
        ],
    )
}

pub fn extended_payoffs() -> PayoffMatrix {
    let rows: Vec<&str> = EXTENDED_ROWS.iter().map(|(label, _)| *label).collect();
    let entries = EXTENDED_ROWS.iter().map(|(_, row)| row.to_vec()).collect();
    PayoffMatrix::from_rows(&rows, &["C", "D", "E"], entries).expect("static matrix")
}

/// Corrected threats plus the extra asset strategy `X`, given through payoff
/// overrides since `X` has no parameter vector.
pub fn corrected_scenario_with_x() -> Scenario {
    Scenario::new(
        scheme(),
        vec![
            StrategyProfile::real("A", Role::Asset, &REAL_A),
            StrategyProfile::real("B", Role::Asset, &REAL_B),
        ],
        vec![
            StrategyProfile::real("C", Role::Threat, &CORRECTED_C),
            StrategyProfile::real("D", Role::Threat, &CORRECTED_D),
            StrategyProfile::real("E", Role::Threat, &REAL_E),
        ],
    )
    .with_overrides(PayoffOverrides::Real(extended_payoffs()))
}

/// Real scenario with every parameter widened by `±spread` (clamped to
/// `[-1, 1]`).
pub fn span_scenario_with(spread: f64) -> Scenario {
    let widen = |values: &[f64; 6]| -> Vec<Interval> {
        values
            .iter()
            .map(|&v| {
                Interval::new((v - spread).max(-1.0), (v + spread).min(1.0)).expect("ordered")
            })
            .collect()
    };
    Scenario::new(
        scheme(),
        vec![
            StrategyProfile::span("A", Role::Asset, &widen(&REAL_A)),
            StrategyProfile::span("B", Role::Asset, &widen(&REAL_B)),
        ],
        vec![
            StrategyProfile::span("C", Role::Threat, &widen(&REAL_C)),
            StrategyProfile::span("D", Role::Threat, &widen(&REAL_D)),
            StrategyProfile::span("E", Role::Threat, &widen(&REAL_E)),
        ],
    )
}

pub fn span_scenario() -> Scenario {
    span_scenario_with(0.02)
}
