// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Library side of the `spinstar` command-line tool: scenario configs,
//! table I/O and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{reduce, simulate, sweep, verify, with_parameter, SweepResult, VerifySummary};
pub use config::{InitialCondition, Output, RunConfig, ScenarioConfig, SystemConfig, PRESETS};
pub use error::{CliError, Result};
pub use table::Table;
