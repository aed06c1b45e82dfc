// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::model::SymmetryReport;

pub type Result<T> = std::result::Result<T, SpinStarError>;

#[derive(Debug, Clone, Error)]
pub enum SpinStarError {
    #[error("invalid system size: {0}")]
    InvalidSize(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "collective symmetry violated: row sums spread {:.3e} (relative) exceeds tolerance {:.3e}; row sums = {:?}",
        .0.max_relative_spread, .0.tolerance, .0.delta_per_qubit
    )]
    SymmetryViolation(Box<SymmetryReport>),

    #[error("state norm {norm:.12} violates contract (tolerance {tolerance:.1e})")]
    NormViolation { norm: f64, tolerance: f64 },

    #[error("excitation number {n} out of range 0..={m}")]
    ExcitationOutOfRange { n: usize, m: usize },

    #[error("reduction target n={0} is below the minimum of two outer qubits (beta_n vanishes for n < 2)")]
    MinimumSize(usize),

    #[error("reduction target n={n} exceeds the original bath size M={m}")]
    InvalidReduction { n: usize, m: usize },

    #[error("degenerate transform coefficient {name} = {value:.3e} (|value| < 1e-12)")]
    DegenerateCoefficient { name: &'static str, value: f64 },

    #[error("full-space evolution refused: M={m} exceeds guard rail of {max} outer qubits")]
    SizeGuard { m: usize, max: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl SpinStarError {
    /// True for failures of the numerical machinery rather than of caller input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, SpinStarError::NumericalFailure(_))
    }
}
