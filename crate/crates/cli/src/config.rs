// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration.
//!
//! A scenario is a TOML document with three tables:
//!
//! ```toml
//! [system]
//! M = 10                   # outer qubits
//! gamma = 1.0              # centre-bath coupling
//! Gamma = 0.0              # bath decay rate (dissipative mode)
//! kappa = 0.0              # centre decay rate (dissipative mode)
//! symmetry_tolerance = 1e-9
//!
//! [system.topology]
//! kind = "nearest_neighbor"   # | "uniform_pairwise" | "dipole_ring" | "explicit"
//! J = 1.0
//! # radius = 5.1            # dipole_ring only
//! # matrix = [[0.0, 1.0], [1.0, 0.0]]   # explicit only
//!
//! [initial]
//! kind = "center"             # | "uniform_bath" | "amplitudes"
//! # bath = [[re, im], ...]    # amplitudes only, one pair per outer qubit
//! # center = [re, im]
//!
//! [run]
//! horizon = 20.0              # in units of 1/gamma
//! samples = 2001
//! mode = "unitary"            # | "dissipative"
//! outputs = ["concurrences", "oracle"]
//! reduce_to = 2               # optional
//! ```
//!
//! `[initial]` and `[run]` may be omitted; the defaults are shown above
//! except that `outputs` is empty and `reduce_to` is unset.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spinstar::{AmplitudeState, Complex64, Dynamics, SpinStarSystem, Topology, DEFAULT_SYMMETRY_TOLERANCE};

use crate::error::{CliError, Result};

const FIG2: &str = include_str!("../presets/fig2.toml");
const LH1: &str = include_str!("../presets/lh1.toml");

pub const PRESETS: [&str; 2] = ["fig2", "lh1"];

const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub initial: InitialCondition,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "M")]
    pub m: usize,
    pub gamma: f64,
    #[serde(rename = "Gamma", default)]
    pub bath_decay: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default = "default_symmetry_tolerance")]
    pub symmetry_tolerance: f64,
    pub topology: Topology,
}

fn default_symmetry_tolerance() -> f64 {
    DEFAULT_SYMMETRY_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    #[default]
    Center,
    UniformBath,
    Amplitudes { bath: Vec<[f64; 2]>, center: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Concurrences,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub mode: Dynamics,
    #[serde(default)]
    pub outputs: Vec<Output>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduce_to: Option<usize>,
}

fn default_horizon() -> f64 {
    20.0
}

fn default_samples() -> usize {
    2001
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: default_horizon(),
            samples: default_samples(),
            mode: Dynamics::default(),
            outputs: Vec::new(),
            reduce_to: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::config(origin, e.to_string()))?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "fig2" => FIG2,
            "lh1" => LH1,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown preset '{other}' (available: {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Self::from_toml_str(text, &format!("preset {name}"))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    pub fn validate(&self, origin: &str) -> Result<()> {
        let fail = |msg: String| Err(CliError::config(origin, msg));
        if self.system.m == 0 {
            return fail("system.M must be at least 1".into());
        }
        if !self.run.horizon.is_finite() || self.run.horizon <= 0.0 {
            return fail(format!("run.horizon must be positive, got {}", self.run.horizon));
        }
        if self.run.samples < 2 {
            return fail(format!("run.samples must be at least 2, got {}", self.run.samples));
        }
        if self.system.symmetry_tolerance.is_nan() || self.system.symmetry_tolerance <= 0.0 {
            return fail("system.symmetry_tolerance must be positive".into());
        }
        if let Some(n) = self.run.reduce_to {
            if n < 2 || n > self.system.m {
                return fail(format!(
                    "run.reduce_to must lie in 2..={}, got {n}",
                    self.system.m
                ));
            }
        }
        self.initial_state()
            .map_err(|e| CliError::config(origin, e.to_string()))?;
        Ok(())
    }

    pub fn system(&self) -> Result<SpinStarSystem> {
        let s = &self.system;
        Ok(SpinStarSystem::from_topology(&s.topology, s.m, s.gamma)?
            .with_decay(s.bath_decay, s.kappa)?
            .with_symmetry_tolerance(s.symmetry_tolerance)?)
    }

    pub fn initial_state(&self) -> Result<AmplitudeState> {
        let m = self.system.m;
        match &self.initial {
            InitialCondition::Center => Ok(AmplitudeState::center_excited(m)),
            InitialCondition::UniformBath => Ok(AmplitudeState::uniform_bath(m)),
            InitialCondition::Amplitudes { bath, center } => {
                if bath.len() != m {
                    return Err(CliError::Usage(format!(
                        "initial.bath has {} entries, expected M = {m}",
                        bath.len()
                    )));
                }
                let state = AmplitudeState::new(
                    bath.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                    Complex64::new(center[0], center[1]),
                );
                let norm = state.norm();
                if (norm - 1.0).abs() > NORM_TOLERANCE {
                    return Err(CliError::Usage(format!(
                        "initial amplitudes have norm {norm:.12}, expected 1 within {NORM_TOLERANCE:e}"
                    )));
                }
                Ok(state)
            }
        }
    }

    /// Absolute simulation time: the horizon is given in units of `1/gamma`.
    pub fn time_horizon(&self) -> Result<f64> {
        Ok(self.run.horizon * self.system()?.time_unit())
    }
}
