//! Scenario documents, the `strategem` command line and its HTTP service.

pub mod app;
pub mod commands;
pub mod document;
mod render;
pub mod service;

pub use document::{DocumentError, Loaded, ResultDocument, ScenarioDocument};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod guide {}
