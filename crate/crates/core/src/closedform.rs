// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Analytic propagators for the collective amplitudes `(B, b_C)`.
//!
//! Under the collective symmetry the single-excitation Schrodinger equation
//! reduces to
//!
//! ```text
//! d b_C/dt = -i gamma B - kappa b_C
//! d B/dt   = -i M gamma b_C - (Gamma + i Delta) B
//! ```
//!
//! whose solution is `b_C(t) = f_C B(0) + g_C b_C(0)` and
//! `B(t) = f_B B(0) + g_B b_C(0)`. With `X = kappa + Gamma + i Delta`,
//! `delta = Gamma - kappa`, `Omega = sqrt(4 M gamma^2 - (delta + i Delta)^2)`,
//! `u = sin(Omega t/2)` and `v = cos(Omega t/2)`:
//!
//! ```text
//! f_C = -i e^{-Xt/2} 2 gamma u / Omega
//! g_C =    e^{-Xt/2} [ v + (delta + i Delta) u / Omega ]
//! f_B =    e^{-Xt/2} [ v - (delta + i Delta) u / Omega ]
//! g_B = -i e^{-Xt/2} 2 M gamma u / Omega
//! ```
//!
//! The lossless case is `X = i Delta`, `delta = 0`, real `Omega`.
//!
//! The conditional (no-jump) generator uses `-i kappa` on the central
//! qubit, i.e. the central qubit decays. Every propagator depends on
//! `Omega` only through `u / Omega` and `v`, both even in `Omega`, so the
//! principal square root is as good as any other branch.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::AmplitudeState;
use crate::error::{Result, SpinStarError};
use crate::model::{CollectiveParams, SpinStarSystem};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which generator drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    /// Hermitian `H_I`; decay rates ignored.
    #[default]
    Unitary,
    /// Non-Hermitian no-jump generator including `Gamma` and `kappa`.
    Dissipative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorSet {
    pub f_c: Complex64,
    pub g_c: Complex64,
    pub f_b: Complex64,
    pub g_b: Complex64,
}

impl PropagatorSet {
    /// Returns `(B(t), b_C(t))`.
    pub fn apply(&self, bath_sum: Complex64, center: Complex64) -> (Complex64, Complex64) {
        (
            self.f_b * bath_sum + self.g_b * center,
            self.f_c * bath_sum + self.g_c * center,
        )
    }

    pub fn max_abs_diff(&self, other: &PropagatorSet) -> f64 {
        [
            self.f_c - other.f_c,
            self.g_c - other.g_c,
            self.f_b - other.f_b,
            self.g_b - other.g_b,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// Collective amplitudes at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveState {
    /// `B(t) = sum_j b_j(t)`.
    pub bath_sum: Complex64,
    /// `b_C(t)`.
    pub center: Complex64,
    pub t: f64,
}

impl CollectiveState {
    /// `P(t) = |b_C(t)|^2`.
    pub fn center_population(&self) -> f64 {
        self.center.norm_sqr()
    }

    pub fn bath_sum_sq(&self) -> f64 {
        self.bath_sum.norm_sqr()
    }

    /// Squared norm of the full conditional state.
    ///
    /// The part of the bath orthogonal to the uniform vector never talks to
    /// the centre; `J` is Hermitian on it, so its weight only decays as
    /// `exp(-2 Gamma t)`. `orthogonal_weight0` is that weight at `t = 0`.
    pub fn norm_sqr(&self, m: usize, bath_decay: f64, orthogonal_weight0: f64) -> f64 {
        self.center.norm_sqr()
            + self.bath_sum.norm_sqr() / m as f64
            + orthogonal_weight0 * (-2.0 * bath_decay * self.t).exp()
    }
}

/// `X`, `delta` and complex `Omega` of the conditional generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeParams {
    /// `X = kappa + Gamma + i Delta`.
    pub x: Complex64,
    /// `delta = Gamma - kappa`.
    pub delta: f64,
    /// `sqrt(4 M gamma^2 - (delta + i Delta)^2)`, principal branch.
    pub omega: Complex64,
}

impl DissipativeParams {
    pub fn new(params: &CollectiveParams) -> Self {
        let delta = params.bath_decay - params.center_decay;
        let detuning = Complex64::new(delta, params.delta);
        let four_m_gamma_sq = 4.0 * params.m as f64 * params.gamma * params.gamma;
        DissipativeParams {
            x: Complex64::new(params.center_decay + params.bath_decay, params.delta),
            delta,
            omega: (Complex64::from(four_m_gamma_sq) - detuning * detuning).sqrt(),
        }
    }
}

/// `sin(omega t / 2) / omega`, continued to `t / 2` at `omega = 0`.
fn half_sinc(omega: Complex64, t: f64) -> Complex64 {
    let z = omega * (0.5 * t);
    let half_t = Complex64::from(0.5 * t);
    if z.norm() < 1e-4 {
        let z2 = z * z;
        half_t * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        half_t * z.sin() / z
    }
}

pub fn propagators_unitary(params: &CollectiveParams, t: f64) -> PropagatorSet {
    let omega = Complex64::from(params.omega());
    let s = half_sinc(omega, t);
    let v = (omega * (0.5 * t)).cos();
    let phase = (-I * (0.5 * params.delta * t)).exp();
    let detuned = I * params.delta * s;
    PropagatorSet {
        f_c: -I * phase * 2.0 * params.gamma * s,
        g_c: phase * (v + detuned),
        f_b: phase * (v - detuned),
        g_b: -I * phase * 2.0 * params.m as f64 * params.gamma * s,
    }
}

pub fn propagators_dissipative(params: &CollectiveParams, t: f64) -> PropagatorSet {
    let dp = DissipativeParams::new(params);
    propagators_with_omega(params, &dp, dp.omega, t)
}

/// Dissipative propagators evaluated with an explicitly chosen `Omega`
/// branch.
pub(crate) fn propagators_with_omega(
    params: &CollectiveParams,
    dp: &DissipativeParams,
    omega: Complex64,
    t: f64,
) -> PropagatorSet {
    let s = half_sinc(omega, t);
    let v = (omega * (0.5 * t)).cos();
    let envelope = (-dp.x * (0.5 * t)).exp();
    let detuned = Complex64::new(dp.delta, params.delta) * s;
    PropagatorSet {
        f_c: -I * envelope * 2.0 * params.gamma * s,
        g_c: envelope * (v + detuned),
        f_b: envelope * (v - detuned),
        g_b: -I * envelope * 2.0 * params.m as f64 * params.gamma * s,
    }
}

/// Propagates `(B(0), b_C(0))` to time `t`.
///
/// Dissipative results are the raw conditional amplitudes; normalise with
/// [`CollectiveState::norm_sqr`].
pub fn evolve_collective(
    params: &CollectiveParams,
    bath_sum0: Complex64,
    center0: Complex64,
    t: f64,
    dynamics: Dynamics,
) -> CollectiveState {
    let props = match dynamics {
        Dynamics::Unitary => propagators_unitary(params, t),
        Dynamics::Dissipative => propagators_dissipative(params, t),
    };
    let (bath_sum, center) = props.apply(bath_sum0, center0);
    CollectiveState {
        bath_sum,
        center,
        t,
    }
}

/// Every amplitude `b_j(t)`, `b_C(t)` on a time grid.
///
/// The uniform bath mode follows the collective propagators. The
/// orthogonal remainder never couples to the centre: it evolves under the
/// bath couplings alone, in the eigenbasis of `J`, and picks up
/// `e^{-Gamma t}` in the dissipative case.
pub fn evolve_amplitudes(
    system: &SpinStarSystem,
    state: &AmplitudeState,
    times: &[f64],
    dynamics: Dynamics,
) -> Result<Vec<AmplitudeState>> {
    let m = system.size();
    if state.size() != m {
        return Err(SpinStarError::InvalidSize(format!(
            "state has {} bath amplitudes, system has {m}",
            state.size()
        )));
    }
    let params = system.collective()?;
    let mf = m as f64;
    let b0 = state.bath_sum();
    let eig = system.couplings().clone().symmetric_eigen();
    let rest: Vec<Complex64> = state.bath.iter().map(|b| b - b0 / mf).collect();
    let modes: Vec<Complex64> = (0..m)
        .map(|k| (0..m).map(|j| rest[j] * eig.eigenvectors[(j, k)]).sum())
        .collect();
    let damping = match dynamics {
        Dynamics::Unitary => 0.0,
        Dynamics::Dissipative => params.bath_decay,
    };
    Ok(times
        .iter()
        .map(|&t| {
            let c = evolve_collective(&params, b0, state.center, t, dynamics);
            let phases: Vec<Complex64> = (0..m)
                .map(|k| modes[k] * (-(I * eig.eigenvalues[k] + damping) * t).exp())
                .collect();
            let bath = (0..m)
                .map(|j| {
                    let r: Complex64 = (0..m).map(|k| phases[k] * eig.eigenvectors[(j, k)]).sum();
                    c.bath_sum / mf + r
                })
                .collect();
            AmplitudeState::new(bath, c.center)
        })
        .collect())
}

/// `samples` equally spaced times on `[0, horizon]`, endpoints included.
pub fn uniform_grid(horizon: f64, samples: usize) -> Result<Vec<f64>> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(SpinStarError::InvalidGrid(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    if samples < 2 {
        return Err(SpinStarError::InvalidGrid(format!(
            "need at least two samples, got {samples}"
        )));
    }
    let last = (samples - 1) as f64;
    Ok((0..samples).map(|k| horizon * k as f64 / last).collect())
}

/// Diagonal of the reduced central-qubit density matrix.
///
/// `p0` carries the weight `|b_C|^2` and `p1 = 1 - |b_C|^2`, following the
/// labelling in which the `|b_C|^2` entry is written first. Physically
/// `|b_C|^2` is the probability that the central qubit holds the
/// excitation, which is why `sigma_z = 2|b_C|^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralDensity {
    pub p0: f64,
    pub p1: f64,
    pub sigma_z: f64,
}

pub fn central_qubit_density(center: Complex64) -> Result<CentralDensity> {
    let p = center.norm_sqr();
    if p > 1.0 + 1e-10 || !p.is_finite() {
        return Err(SpinStarError::NormViolation {
            norm: p.sqrt(),
            tolerance: 1e-10,
        });
    }
    Ok(CentralDensity {
        p0: p,
        p1: 1.0 - p,
        sigma_z: 2.0 * p - 1.0,
    })
}
