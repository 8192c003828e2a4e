//! Strategic analysis of a project as a zero-sum game between its **assets**
//! (the row player, maximizing) and the **threats** of the market around it
//! (the column player, minimizing).
//!
//! Strategies are vectors of scored parameters (competition, trends, costs,
//! ...). Payoff matrices are derived from them by the difference,
//! profit-entropy or interval rule, then solved by dominance reduction, saddle
//! points, oddments or linear programming. The [`whatif`] module explores how
//! the game value reacts to changed payoffs, interval bounds and threat
//! probabilities over time.
//!
//! ```
//! use strategem::{build_diff_matrix, fixtures, solve, Dominance};
//!
//! let scenario = fixtures::binary_scenario();
//! let matrix = build_diff_matrix(&scenario)?;
//! let solution = solve(&matrix, Dominance::Weak)?;
//!
//! // negative value: change the strategy or withdraw
//! assert_eq!(solution.value, -1.0);
//! assert_eq!(solution.saddle(), Some(("A", "E")));
//! # Ok::<(), strategem::Error>(())
//! ```
//!
//! A longer walkthrough lives in the guide under `book/`.

pub mod error;
pub mod fixtures;
pub mod interval;
pub mod payoff;
pub mod solver;
pub mod strategy;
pub mod whatif;

pub use error::{Error, Result};
pub use interval::{Interval, ReciprocalCase};
pub use payoff::{
    build_diff_matrix, build_entropy_matrix, build_interval_matrix, build_payoffs, diff_payoff,
    entropy_score, normalize_parameters, time_weighted_matrix, EntropyConfig,
    IntervalPayoffMatrix, PayoffMatrix, PayoffRule, Payoffs,
};
pub use solver::{
    find_dominated, interval_game_bounds, reduce, saddle_point, solve, solve_2x2, solve_lp, Axis,
    Dominance, Elimination, GameSolution, ReductionTrace, SaddlePoint, SolutionKind,
};
pub use strategy::{
    normalize_threat_probabilities, validate_scenario, ParameterScheme, ParameterValue,
    PayoffOverrides, Role, Scale, Scenario, StrategyProfile, ThreatTimeline,
};
pub use whatif::{
    compare_solutions, optimize_with, optimize_within_intervals, sensitivity, timeline_values,
    Movement, PeriodValue, SearchMethod, SearchOptions, Sensitivity, ValueSeries, WhatIfResult,
};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/intervals.md")]
    mod intervals {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/whatif.md")]
    mod whatif {}
}
