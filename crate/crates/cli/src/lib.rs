//! Command-line orchestration for the nidsbench pipeline: dataset fetch,
//! preprocessing, attribute ranking, batch cross-validation, prequential
//! stream runs and report generation.

// `!(x > 0.0)` guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algo;
pub mod app;
pub mod config;
pub mod data;
pub mod report;
pub mod svg;

pub use app::run_command;
pub use config::{Algorithm, AttrChoice, RunConfig};
