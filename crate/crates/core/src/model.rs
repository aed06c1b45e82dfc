// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Spin-star system description, standard coupling topologies and the
//! collective-symmetry check.
//!
//! The closed-form machinery only applies when every outer qubit sees the
//! same total intra-bath coupling `Delta_j = sum_{k != j} J_jk`. Individual
//! pair couplings may differ; only the row sums have to agree.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinStarError};

/// Relative tolerance on the spread of row sums `Delta_j`.
pub const DEFAULT_SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Intra-bath coupling layouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    /// Ring with coupling `J` between neighbours `j` and `j + 1 (mod M)`.
    NearestNeighbor {
        #[serde(rename = "J")]
        j: f64,
    },
    /// Complete graph, `J_jk = J` for every pair.
    UniformPairwise {
        #[serde(rename = "J")]
        j: f64,
    },
    /// Qubits equally spaced on a circle of the given radius with dipoles
    /// normal to the plane, `J_jk = J / r_jk^3`.
    DipoleRing {
        #[serde(rename = "J")]
        j: f64,
        radius: f64,
    },
    /// User-supplied coupling matrix (row-major, `M x M`).
    Explicit { matrix: Vec<Vec<f64>> },
}

impl Topology {
    /// Coupling matrix for `m` outer qubits.
    ///
    /// For `m = 1` every layout yields the 1x1 zero matrix. A two-site
    /// nearest-neighbour ring has a single bond.
    pub fn coupling_matrix(&self, m: usize) -> Result<DMatrix<f64>> {
        if m < 1 {
            return Err(SpinStarError::InvalidSize(format!(
                "need at least one outer qubit, got M={m}"
            )));
        }
        let mut couplings = DMatrix::zeros(m, m);
        match self {
            Topology::NearestNeighbor { j } => {
                if m >= 2 {
                    for site in 0..m {
                        let next = (site + 1) % m;
                        couplings[(site, next)] = *j;
                        couplings[(next, site)] = *j;
                    }
                }
            }
            Topology::UniformPairwise { j } => {
                for a in 0..m {
                    for b in 0..m {
                        if a != b {
                            couplings[(a, b)] = *j;
                        }
                    }
                }
            }
            Topology::DipoleRing { j, radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(SpinStarError::InvalidGeometry(format!(
                        "ring radius must be positive and finite, got {radius}"
                    )));
                }
                for a in 0..m {
                    for b in 0..m {
                        if a != b {
                            let sep = a.abs_diff(b) as f64;
                            let chord = 2.0 * radius * (PI * sep / m as f64).sin();
                            couplings[(a, b)] = j / chord.powi(3);
                        }
                    }
                }
            }
            Topology::Explicit { matrix } => {
                if matrix.len() != m || matrix.iter().any(|row| row.len() != m) {
                    return Err(SpinStarError::InvalidSize(format!(
                        "explicit coupling matrix must be {m}x{m}"
                    )));
                }
                for (a, row) in matrix.iter().enumerate() {
                    for (b, value) in row.iter().enumerate() {
                        couplings[(a, b)] = *value;
                    }
                }
            }
        }
        Ok(couplings)
    }
}

/// `M` outer qubits coupled to one central qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinStarSystem {
    gamma: f64,
    couplings: DMatrix<f64>,
    bath_decay: f64,
    center_decay: f64,
    symmetry_tolerance: f64,
}

impl SpinStarSystem {
    /// Validates and builds a lossless system.
    pub fn new(gamma: f64, couplings: DMatrix<f64>) -> Result<Self> {
        let m = couplings.nrows();
        if m < 1 {
            return Err(SpinStarError::InvalidSize(
                "need at least one outer qubit".into(),
            ));
        }
        if couplings.ncols() != m {
            return Err(SpinStarError::InvalidSize(format!(
                "coupling matrix must be square, got {}x{}",
                m,
                couplings.ncols()
            )));
        }
        check_rate("gamma", gamma)?;
        for a in 0..m {
            if couplings[(a, a)] != 0.0 {
                return Err(SpinStarError::InvalidParameter(format!(
                    "coupling matrix diagonal must vanish, J[{a}][{a}] = {}",
                    couplings[(a, a)]
                )));
            }
            for b in 0..m {
                let value = couplings[(a, b)];
                if !value.is_finite() {
                    return Err(SpinStarError::InvalidParameter(format!(
                        "J[{a}][{b}] is not finite"
                    )));
                }
                if value != couplings[(b, a)] {
                    return Err(SpinStarError::InvalidParameter(format!(
                        "coupling matrix must be symmetric, J[{a}][{b}] != J[{b}][{a}]"
                    )));
                }
            }
        }
        Ok(SpinStarSystem {
            gamma,
            couplings,
            bath_decay: 0.0,
            center_decay: 0.0,
            symmetry_tolerance: DEFAULT_SYMMETRY_TOLERANCE,
        })
    }

    pub fn from_topology(topology: &Topology, m: usize, gamma: f64) -> Result<Self> {
        Self::new(gamma, topology.coupling_matrix(m)?)
    }

    /// Sets the outer-qubit decay rate `Gamma` and central decay rate `kappa`.
    pub fn with_decay(mut self, bath_decay: f64, center_decay: f64) -> Result<Self> {
        check_rate("Gamma", bath_decay)?;
        check_rate("kappa", center_decay)?;
        self.bath_decay = bath_decay;
        self.center_decay = center_decay;
        Ok(self)
    }

    pub fn with_symmetry_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(SpinStarError::InvalidParameter(format!(
                "symmetry tolerance must be positive, got {tolerance}"
            )));
        }
        self.symmetry_tolerance = tolerance;
        Ok(self)
    }

    /// Number of outer qubits `M`.
    pub fn size(&self) -> usize {
        self.couplings.nrows()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn couplings(&self) -> &DMatrix<f64> {
        &self.couplings
    }

    pub fn bath_decay(&self) -> f64 {
        self.bath_decay
    }

    pub fn center_decay(&self) -> f64 {
        self.center_decay
    }

    pub fn symmetry_tolerance(&self) -> f64 {
        self.symmetry_tolerance
    }

    pub fn is_lossless(&self) -> bool {
        self.bath_decay == 0.0 && self.center_decay == 0.0
    }

    /// Row sums `Delta_j` of the coupling matrix.
    pub fn row_sums(&self) -> Vec<f64> {
        self.couplings
            .row_iter()
            .map(|row| row.iter().sum::<f64>())
            .collect()
    }

    pub fn check_symmetry(&self, tolerance: f64) -> SymmetryReport {
        SymmetryReport::from_row_sums(self.row_sums(), tolerance)
    }

    /// Reduces the system to its collective parameters, refusing systems
    /// whose row sums differ beyond the configured tolerance.
    pub fn collective(&self) -> Result<CollectiveParams> {
        let report = self.check_symmetry(self.symmetry_tolerance);
        match report.delta {
            Some(delta) if report.is_symmetric => Ok(CollectiveParams {
                m: self.size(),
                gamma: self.gamma,
                delta,
                bath_decay: self.bath_decay,
                center_decay: self.center_decay,
            }),
            _ => Err(SpinStarError::SymmetryViolation(Box::new(report))),
        }
    }

    /// `Omega = sqrt(4 M gamma^2 + Delta^2)`.
    pub fn collective_frequency(&self) -> Result<f64> {
        Ok(self.collective()?.omega())
    }

    /// Natural time unit: `1/gamma`, or `1/|Delta|` for a decoupled center,
    /// or 1 when both vanish.
    pub fn time_unit(&self) -> f64 {
        if self.gamma > 0.0 {
            return 1.0 / self.gamma;
        }
        let mean = mean(&self.row_sums()).abs();
        if mean > 0.0 {
            1.0 / mean
        } else {
            1.0
        }
    }
}

fn check_rate(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(SpinStarError::InvalidParameter(format!(
            "{name} must be finite and non-negative, got {value}"
        )));
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub delta_per_qubit: Vec<f64>,
    /// Common row sum, present only when the system is symmetric.
    pub delta: Option<f64>,
    pub is_symmetric: bool,
    /// `max_j |Delta_j - mean| / max(1, |mean|)`.
    pub max_relative_spread: f64,
    pub tolerance: f64,
}

impl SymmetryReport {
    pub fn from_row_sums(delta_per_qubit: Vec<f64>, tolerance: f64) -> Self {
        let avg = mean(&delta_per_qubit);
        let spread = delta_per_qubit
            .iter()
            .map(|d| (d - avg).abs())
            .fold(0.0, f64::max)
            / avg.abs().max(1.0);
        let is_symmetric = spread <= tolerance;
        SymmetryReport {
            delta_per_qubit,
            delta: is_symmetric.then_some(avg),
            is_symmetric,
            max_relative_spread: spread,
            tolerance,
        }
    }
}

/// Scalar parameters that fully determine the collective dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectiveParams {
    pub m: usize,
    pub gamma: f64,
    pub delta: f64,
    pub bath_decay: f64,
    pub center_decay: f64,
}

impl CollectiveParams {
    pub fn lossless(m: usize, gamma: f64, delta: f64) -> Self {
        CollectiveParams {
            m,
            gamma,
            delta,
            bath_decay: 0.0,
            center_decay: 0.0,
        }
    }

    pub fn omega(&self) -> f64 {
        (4.0 * self.m as f64 * self.gamma * self.gamma + self.delta * self.delta).sqrt()
    }

    pub fn omega_squared(&self) -> f64 {
        4.0 * self.m as f64 * self.gamma * self.gamma + self.delta * self.delta
    }
}
