//! Experiment runner companion to the `fracdyn` core crate: config parsing,
//! scenario presets, CSV/SVG output, and deterministic single-run and
//! ensemble execution.

pub mod config;
pub mod csv;
pub mod error;
pub mod manifest;
pub mod runner;
pub mod scenarios;
pub mod svg;
