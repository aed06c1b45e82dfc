// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Pairwise concurrences and collective entanglement measures of
//! single-excitation states.
//!
//! For a W-class state every two-qubit reduced state has concurrence
//! `2|b_j b_k^*|`. The collective measures
//!
//! ```text
//! E_B  = | -1 + |B|^2 + |b_C|^2 |        (bath-internal)
//! E_BC = 4 |b_C|^2 (1 - |b_C|^2)         (bath-centre)
//! ```
//!
//! are lower bounds on the summed concurrences `sum_{j<k} C_jk` and
//! `sum_j C_jC`.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinStarError};

const SNAPSHOT_NORM_TOLERANCE: f64 = 1e-8;
const BOUND_SLACK: f64 = 1e-10;

/// Amplitudes `b_1..b_M, b_C` of a single-excitation state.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    pub bath: Vec<Complex64>,
    pub center: Complex64,
}

impl AmplitudeState {
    pub fn new(bath: Vec<Complex64>, center: Complex64) -> Self {
        AmplitudeState { bath, center }
    }

    /// Excitation on the central qubit.
    pub fn center_excited(m: usize) -> Self {
        AmplitudeState::new(vec![Complex64::from(0.0); m], Complex64::from(1.0))
    }

    /// Uniform W state of the bath, `b_j = 1/sqrt(M)`.
    pub fn uniform_bath(m: usize) -> Self {
        let amp = Complex64::from(1.0 / (m as f64).sqrt());
        AmplitudeState::new(vec![amp; m], Complex64::from(0.0))
    }

    pub fn size(&self) -> usize {
        self.bath.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.bath.iter().map(|b| b.norm_sqr()).sum::<f64>() + self.center.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `B = sum_j b_j`.
    pub fn bath_sum(&self) -> Complex64 {
        self.bath.iter().sum()
    }

    /// Weight of the bath component orthogonal to the uniform vector.
    pub fn orthogonal_bath_weight(&self) -> f64 {
        let bath_weight: f64 = self.bath.iter().map(|b| b.norm_sqr()).sum();
        (bath_weight - self.bath_sum().norm_sqr() / self.size() as f64).max(0.0)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        AmplitudeState::new(
            self.bath.iter().map(|b| b / n).collect(),
            self.center / n,
        )
    }

    /// Multiplies every amplitude by the same phase.
    pub fn rotated(&self, phase: f64) -> Self {
        let w = Complex64::from_polar(1.0, phase);
        AmplitudeState::new(self.bath.iter().map(|b| b * w).collect(), self.center * w)
    }
}

/// `C = 2 |b_j b_k^*|`.
pub fn concurrence_pair(bj: Complex64, bk: Complex64) -> f64 {
    2.0 * (bj * bk.conj()).norm()
}

/// `E_B = |-1 + |B|^2 + |b_C|^2|` from the collective variables.
pub fn collective_bath_measure(bath_sum: Complex64, center: Complex64) -> f64 {
    (-1.0 + bath_sum.norm_sqr() + center.norm_sqr()).abs()
}

/// `E_BC = 4 |b_C|^2 (1 - |b_C|^2)`.
pub fn collective_center_measure(center: Complex64) -> f64 {
    let p = center.norm_sqr();
    4.0 * p * (1.0 - p)
}

/// How [`snapshot`] treats the state's norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormPolicy {
    /// Reject states whose norm differs from one by more than `1e-8`.
    #[default]
    Strict,
    /// Normalise first; for conditional (no-jump) states.
    Normalize,
    /// Evaluate the formulas on the raw vector.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementSnapshot {
    /// `C_jk` for `j < k` in row-major pair order.
    pub concurrences_bath: Vec<f64>,
    /// `C_jC` for each outer qubit.
    pub concurrences_center: Vec<f64>,
    pub e_b: f64,
    pub e_bc: f64,
    pub script_e_b: f64,
    pub script_e_bc: f64,
    pub t: f64,
}

impl EntanglementSnapshot {
    pub fn bath_margin(&self) -> f64 {
        self.e_b - self.script_e_b
    }

    pub fn center_margin(&self) -> f64 {
        self.e_bc - self.script_e_bc
    }
}

pub fn snapshot(state: &AmplitudeState, t: f64, policy: NormPolicy) -> Result<EntanglementSnapshot> {
    let owned;
    let state = match policy {
        NormPolicy::Strict => {
            let n = state.norm();
            if (n - 1.0).abs() > SNAPSHOT_NORM_TOLERANCE {
                return Err(SpinStarError::NormViolation {
                    norm: n,
                    tolerance: SNAPSHOT_NORM_TOLERANCE,
                });
            }
            state
        }
        NormPolicy::Normalize => {
            if state.norm() == 0.0 {
                return Err(SpinStarError::NormViolation {
                    norm: 0.0,
                    tolerance: SNAPSHOT_NORM_TOLERANCE,
                });
            }
            owned = state.normalized();
            &owned
        }
        NormPolicy::Raw => state,
    };

    let m = state.size();
    let mut concurrences_bath = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for j in 0..m {
        for k in j + 1..m {
            concurrences_bath.push(concurrence_pair(state.bath[j], state.bath[k]));
        }
    }
    let concurrences_center: Vec<f64> = state
        .bath
        .iter()
        .map(|b| concurrence_pair(*b, state.center))
        .collect();
    Ok(EntanglementSnapshot {
        e_b: concurrences_bath.iter().sum(),
        e_bc: concurrences_center.iter().sum(),
        concurrences_bath,
        concurrences_center,
        script_e_b: collective_bath_measure(state.bath_sum(), state.center),
        script_e_bc: collective_center_measure(state.center),
        t,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub times: Vec<f64>,
    /// `E_B - script E_B` per sample.
    pub bath_margins: Vec<f64>,
    /// `E_BC - script E_BC` per sample.
    pub center_margins: Vec<f64>,
    pub min_bath_margin: f64,
    pub min_center_margin: f64,
    /// Samples where either margin is below `-1e-10`.
    pub violations: usize,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks both lower bounds on every sample. States are normalised first.
pub fn verify_bounds(times: &[f64], states: &[AmplitudeState]) -> Result<BoundReport> {
    if times.len() != states.len() {
        return Err(SpinStarError::InvalidGrid(format!(
            "{} times for {} states",
            times.len(),
            states.len()
        )));
    }
    let mut bath_margins = Vec::with_capacity(states.len());
    let mut center_margins = Vec::with_capacity(states.len());
    let mut violations = 0;
    for (t, state) in times.iter().zip(states) {
        let snap = snapshot(state, *t, NormPolicy::Normalize)?;
        let (b, c) = (snap.bath_margin(), snap.center_margin());
        if b < -BOUND_SLACK || c < -BOUND_SLACK {
            violations += 1;
        }
        bath_margins.push(b);
        center_margins.push(c);
    }
    Ok(BoundReport {
        times: times.to_vec(),
        min_bath_margin: bath_margins.iter().copied().fold(f64::INFINITY, f64::min),
        min_center_margin: center_margins.iter().copied().fold(f64::INFINITY, f64::min),
        bath_margins,
        center_margins,
        violations,
    })
}

/// Reduced density matrix of qubits `a` and `b` of a full-space state with
/// `n_qubits` qubits (index bit `q` is qubit `q`). The two-qubit basis is
/// `|x_a x_b>` with `x_a` the high bit.
pub fn reduced_two_qubit(psi: &DVector<Complex64>, n_qubits: usize, a: usize, b: usize) -> Matrix4<Complex64> {
    assert!(a != b && a < n_qubits && b < n_qubits);
    assert_eq!(psi.len(), 1 << n_qubits);
    let mut rho = Matrix4::zeros();
    let local = |i: usize| ((i >> a & 1) << 1) | (i >> b & 1);
    let pair_mask = (1usize << a) | (1usize << b);
    for i in 0..psi.len() {
        if psi[i] == Complex64::from(0.0) {
            continue;
        }
        for j in 0..psi.len() {
            // traced-out qubits must agree
            if (i & !pair_mask) != (j & !pair_mask) {
                continue;
            }
            rho[(local(i), local(j))] += psi[i] * psi[j].conj();
        }
    }
    rho
}

/// Concurrence of an arbitrary two-qubit density matrix.
///
/// `C = max(0, l1 - l2 - l3 - l4)` with `l_i` the decreasing square roots
/// of the eigenvalues of `rho rho~`, `rho~ = (Y x Y) rho^* (Y x Y)`. With
/// `rho = A A^dag` the `l_i` are the singular values of `A^T (Y x Y) A`;
/// eigenvalues of `rho` below round-off are dropped from `A` first, which
/// avoids the square-root amplification of noise in rank-deficient states.
pub fn two_qubit_concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let h = (rho + rho.adjoint()) * Complex64::from(0.5);
    let eig = h.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()));
    let cutoff = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let kept: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] > cutoff).collect();
    if kept.is_empty() {
        return 0.0;
    }
    let a = DMatrix::from_fn(4, kept.len(), |row, col| {
        let k = kept[col];
        eig.eigenvectors[(row, k)] * eig.eigenvalues[k].sqrt()
    });
    // Y x Y is real: anti-diagonal with signs (-1, 1, 1, -1)
    let mut yy = DMatrix::from_element(4, 4, Complex64::from(0.0));
    for (i, s) in [-1.0, 1.0, 1.0, -1.0].iter().enumerate() {
        yy[(i, 3 - i)] = Complex64::from(*s);
    }
    let tau = a.transpose() * yy * &a;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.resize(4, 0.0);
    lambdas.sort_by(|x, y| y.total_cmp(x));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}
