// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Mapping an `M + 1` qubit spin star onto an `n + 1` qubit one.
//!
//! Both systems share `gamma` and the collective frequency, which fixes
//! `Delta_n^2 = 4 (M - n) gamma^2 + Delta^2`. Observables are related by
//! affine maps
//!
//! ```text
//! (P_M(t) - P_M(0)) / alpha_M = (P_n(t) - P_n(0)) / alpha_n
//! (E_M(t) - E_M(0)) / beta_M  = (E_n(t) - E_n(0)) / beta_n
//! alpha_n = |B_n(0)|^2 - n P_n(0)
//! beta_n  = n (n - 1) P_n(0) + (n - 1) |B_n(0)|^2
//! ```
//!
//! with `P = |b_C|^2` and `E` the collective bath measure. The maps are exact
//! when the initial state has `B(0) = 0` or `b_C(0) = 0`; for mixed starts
//! the interference terms depend on `Delta` itself and the verifier reports
//! the residual instead.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closedform::{evolve_collective, uniform_grid, Dynamics};
use crate::entanglement::collective_bath_measure;
use crate::error::{Result, SpinStarError};
use crate::model::{CollectiveParams, SpinStarSystem, Topology};

const COEFFICIENT_FLOOR: f64 = 1e-12;

/// Largest residual still classified as an exact equivalence.
pub const EXACT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalentSystem {
    pub n: usize,
    pub gamma_n: f64,
    /// Carries the sign of the original `Delta`.
    pub delta_n: f64,
    pub omega: f64,
    pub bath_decay: f64,
    pub center_decay: f64,
}

impl EquivalentSystem {
    pub fn params(&self) -> CollectiveParams {
        CollectiveParams {
            m: self.n,
            gamma: self.gamma_n,
            delta: self.delta_n,
            bath_decay: self.bath_decay,
            center_decay: self.center_decay,
        }
    }

    /// A concrete `n`-qubit system with this `Delta_n`: complete graph with
    /// `J = Delta_n / (n - 1)`.
    pub fn realize(&self) -> Result<SpinStarSystem> {
        let j = self.delta_n / (self.n - 1) as f64;
        SpinStarSystem::from_topology(&Topology::UniformPairwise { j }, self.n, self.gamma_n)?
            .with_decay(self.bath_decay, self.center_decay)
    }
}

pub fn reduce(system: &SpinStarSystem, n: usize) -> Result<EquivalentSystem> {
    reduce_params(&system.collective()?, n)
}

pub fn reduce_params(params: &CollectiveParams, n: usize) -> Result<EquivalentSystem> {
    if n < 2 {
        return Err(SpinStarError::MinimumSize(n));
    }
    if n > params.m {
        return Err(SpinStarError::InvalidReduction { n, m: params.m });
    }
    let gamma_sq = params.gamma * params.gamma;
    let delta_n_sq = 4.0 * (params.m - n) as f64 * gamma_sq + params.delta * params.delta;
    let delta_n = if n == params.m {
        params.delta
    } else {
        delta_n_sq.sqrt().copysign(params.delta)
    };
    Ok(EquivalentSystem {
        n,
        gamma_n: params.gamma,
        delta_n,
        omega: params.omega(),
        bath_decay: params.bath_decay,
        center_decay: params.center_decay,
    })
}

/// `alpha`, `beta` and the initial observables of one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformCoefficients {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `P(0) = |b_C(0)|^2`.
    pub p0: f64,
    /// `E(0) = |-1 + |B(0)|^2 + |b_C(0)|^2|`.
    pub e0: f64,
}

impl TransformCoefficients {
    pub fn new(n: usize, bath_sum0: Complex64, center0: Complex64) -> Self {
        let nf = n as f64;
        let p0 = center0.norm_sqr();
        let b_sq = bath_sum0.norm_sqr();
        TransformCoefficients {
            n,
            alpha: b_sq - nf * p0,
            beta: nf * (nf - 1.0) * p0 + (nf - 1.0) * b_sq,
            p0,
            e0: collective_bath_measure(bath_sum0, center0),
        }
    }

    fn checked(&self, role: Role) -> Result<()> {
        let (alpha_name, beta_name) = match role {
            Role::Source => ("alpha (source)", "beta (source)"),
            Role::Target => ("alpha (target)", "beta (target)"),
        };
        if self.alpha.abs() < COEFFICIENT_FLOOR {
            return Err(SpinStarError::DegenerateCoefficient {
                name: alpha_name,
                value: self.alpha,
            });
        }
        if self.beta.abs() < COEFFICIENT_FLOOR {
            return Err(SpinStarError::DegenerateCoefficient {
                name: beta_name,
                value: self.beta,
            });
        }
        Ok(())
    }
}

enum Role {
    Source,
    Target,
}

/// Maps a series of `(P, E)` of the source system onto the target system.
/// Swapping the arguments gives the inverse map.
pub fn transform_observables(
    series: &[(f64, f64)],
    source: &TransformCoefficients,
    target: &TransformCoefficients,
) -> Result<Vec<(f64, f64)>> {
    source.checked(Role::Source)?;
    target.checked(Role::Target)?;
    let p_scale = target.alpha / source.alpha;
    let e_scale = target.beta / source.beta;
    Ok(series
        .iter()
        .map(|&(p, e)| {
            (
                target.p0 + p_scale * (p - source.p0),
                target.e0 + e_scale * (e - source.e0),
            )
        })
        .collect())
}

/// How the equivalent system's initial state is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialPolicy {
    /// Keep `b_C(0)`; put the remaining weight in the uniform bath state with
    /// the phase of the original `B(0)`, or in a zero-sum bath state when
    /// `B(0) = 0`.
    #[default]
    UniformBath,
    /// Use the given `B_n(0)`.
    Explicit { bath_sum: [f64; 2] },
}

impl InitialPolicy {
    pub fn equivalent_bath_sum(&self, n: usize, bath_sum0: Complex64, center0: Complex64) -> Complex64 {
        match self {
            InitialPolicy::UniformBath => {
                if bath_sum0.norm() > 0.0 {
                    let weight = (1.0 - center0.norm_sqr()).max(0.0);
                    Complex64::from_polar((n as f64 * weight).sqrt(), bath_sum0.arg())
                } else {
                    Complex64::from(0.0)
                }
            }
            InitialPolicy::Explicit { bath_sum } => Complex64::new(bath_sum[0], bath_sum[1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Exact,
    Approximate,
}

/// Original and equivalent dynamics side by side with transform residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub m: usize,
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub delta_n: f64,
    pub omega: f64,
    pub bath_decay: f64,
    pub center_decay: f64,
    pub dynamics: Dynamics,
    /// `[re, im]` of `B(0)` and `b_C(0)` for the original system.
    pub initial_bath_sum: [f64; 2],
    pub initial_center: [f64; 2],
    pub equivalent_bath_sum: [f64; 2],
    pub coefficients_original: TransformCoefficients,
    pub coefficients_equivalent: TransformCoefficients,
    pub times: Vec<f64>,
    pub p_original: Vec<f64>,
    pub e_original: Vec<f64>,
    pub p_equivalent: Vec<f64>,
    pub e_equivalent: Vec<f64>,
    /// Equivalent-system observables predicted from the original run.
    pub p_predicted: Vec<f64>,
    pub e_predicted: Vec<f64>,
    pub residual_p: Vec<f64>,
    pub residual_e: Vec<f64>,
    pub max_residual_p: f64,
    pub max_residual_e: f64,
    pub classification: Classification,
}

/// Normalised `(P, E)` series of one system from its collective start.
pub fn observable_series(
    params: &CollectiveParams,
    bath_sum0: Complex64,
    center0: Complex64,
    times: &[f64],
    dynamics: Dynamics,
) -> Result<Vec<(f64, f64)>> {
    let m = params.m as f64;
    let collective_weight = center0.norm_sqr() + bath_sum0.norm_sqr() / m;
    if collective_weight > 1.0 + 1e-10 {
        return Err(SpinStarError::NormViolation {
            norm: collective_weight.sqrt(),
            tolerance: 1e-10,
        });
    }
    let orthogonal0 = (1.0 - collective_weight).max(0.0);
    Ok(times
        .iter()
        .map(|&t| {
            let s = evolve_collective(params, bath_sum0, center0, t, dynamics);
            let decay = match dynamics {
                Dynamics::Unitary => 0.0,
                Dynamics::Dissipative => params.bath_decay,
            };
            let norm = s.norm_sqr(params.m, decay, orthogonal0).sqrt();
            let (b, c) = (s.bath_sum / norm, s.center / norm);
            (c.norm_sqr(), collective_bath_measure(b, c))
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
pub fn verify_equivalence(
    system: &SpinStarSystem,
    n: usize,
    bath_sum0: Complex64,
    center0: Complex64,
    policy: InitialPolicy,
    horizon: f64,
    samples: usize,
    dynamics: Dynamics,
) -> Result<EquivalenceReport> {
    let original = system.collective()?;
    let equivalent = reduce_params(&original, n)?;
    let times = uniform_grid(horizon, samples)?;
    let bath_sum_n = policy.equivalent_bath_sum(n, bath_sum0, center0);

    let coeff_m = TransformCoefficients::new(original.m, bath_sum0, center0);
    let coeff_n = TransformCoefficients::new(n, bath_sum_n, center0);

    let (orig_series, equiv_series) = rayon::join(
        || observable_series(&original, bath_sum0, center0, &times, dynamics),
        || observable_series(&equivalent.params(), bath_sum_n, center0, &times, dynamics),
    );
    let (orig_series, equiv_series) = (orig_series?, equiv_series?);
    let predicted = transform_observables(&orig_series, &coeff_m, &coeff_n)?;

    let residual_p: Vec<f64> = predicted
        .iter()
        .zip(&equiv_series)
        .map(|(a, b)| (a.0 - b.0).abs())
        .collect();
    let residual_e: Vec<f64> = predicted
        .iter()
        .zip(&equiv_series)
        .map(|(a, b)| (a.1 - b.1).abs())
        .collect();
    let max_residual_p = residual_p.iter().copied().fold(0.0, f64::max);
    let max_residual_e = residual_e.iter().copied().fold(0.0, f64::max);
    let classification = if max_residual_p <= EXACT_THRESHOLD && max_residual_e <= EXACT_THRESHOLD {
        Classification::Exact
    } else {
        Classification::Approximate
    };

    let pair = |z: Complex64| [z.re, z.im];
    let unzip = |s: &[(f64, f64)]| -> (Vec<f64>, Vec<f64>) { s.iter().copied().unzip() };
    let (p_original, e_original) = unzip(&orig_series);
    let (p_equivalent, e_equivalent) = unzip(&equiv_series);
    let (p_predicted, e_predicted) = unzip(&predicted);
    Ok(EquivalenceReport {
        m: original.m,
        n,
        gamma: original.gamma,
        delta: original.delta,
        delta_n: equivalent.delta_n,
        omega: equivalent.omega,
        bath_decay: original.bath_decay,
        center_decay: original.center_decay,
        dynamics,
        initial_bath_sum: pair(bath_sum0),
        initial_center: pair(center0),
        equivalent_bath_sum: pair(bath_sum_n),
        coefficients_original: coeff_m,
        coefficients_equivalent: coeff_n,
        times,
        p_original,
        e_original,
        p_equivalent,
        e_equivalent,
        p_predicted,
        e_predicted,
        residual_p,
        residual_e,
        max_residual_p,
        max_residual_e,
        classification,
    })
}

/// Central-qubit excitation probability in the `N = M` sector.
///
/// Relabelling excitations as holes maps the fully loaded sector onto the
/// single-excitation one with the same `H_I`, so the lossless dynamics is
/// the single-excitation closed form applied to the hole amplitudes:
/// `hole_bath_sum0` is the sum of amplitudes of states with one bath hole,
/// `hole_center0` the amplitude of the state whose only hole is the centre.
pub fn loaded_sector_center_population(
    params: &CollectiveParams,
    hole_bath_sum0: Complex64,
    hole_center0: Complex64,
    t: f64,
) -> f64 {
    let holes = evolve_collective(params, hole_bath_sum0, hole_center0, t, Dynamics::Unitary);
    1.0 - holes.center_population()
}
