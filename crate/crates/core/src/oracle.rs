// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force evolution engines.
//!
//! Nothing here assumes the collective symmetry: Hamiltonians are built
//! directly from the hopping terms of `H_I` on explicit occupation bases,
//! either inside a fixed excitation sector or on the whole `2^(M+1)` space.
//! Hermitian generators are evolved through an eigendecomposition, the
//! non-Hermitian conditional generator through a scaling-and-squaring
//! matrix exponential applied interval by interval.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::closedform::Dynamics;
use crate::entanglement::AmplitudeState;
use crate::error::{Result, SpinStarError};
use crate::model::SpinStarSystem;

/// Largest bath handled by [`evolve_full_space`].
pub const FULL_SPACE_MAX_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const NORM_TOLERANCE: f64 = 1e-8;

/// Occupation of the bath (bit `j` = outer qubit `j`) and the central qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub bath: u64,
    pub center: bool,
}

impl BasisState {
    pub fn excitations(&self) -> usize {
        self.bath.count_ones() as usize + usize::from(self.center)
    }

    /// Flips every qubit of an `m`-qubit bath and the centre.
    pub fn complement(&self, m: usize) -> BasisState {
        BasisState {
            bath: !self.bath & bath_mask(m),
            center: !self.center,
        }
    }

    pub fn label(&self, m: usize) -> String {
        let bath: String = (0..m)
            .map(|j| if self.bath >> j & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("{}|{}", bath, u8::from(self.center))
    }
}

fn bath_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// All `m`-bit masks with `k` bits set, in increasing integer order.
fn masks_with_popcount(m: usize, k: usize) -> Vec<u64> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = 1u128 << m;
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << k) - 1;
    loop {
        out.push(x);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x as u128 + c as u128;
        if r >= limit {
            break;
        }
        let r = r as u64;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Ground-centre block first, then excited-centre block, each ordered by
/// bath bitmask.
fn sector_basis(m: usize, n: usize) -> Vec<BasisState> {
    let mut basis: Vec<BasisState> = masks_with_popcount(m, n)
        .into_iter()
        .map(|bath| BasisState {
            bath,
            center: false,
        })
        .collect();
    if n >= 1 {
        basis.extend(
            masks_with_popcount(m, n - 1)
                .into_iter()
                .map(|bath| BasisState { bath, center: true }),
        );
    }
    basis
}

/// Dense generator restricted to a basis closed under `H_I`.
#[derive(Debug, Clone)]
pub struct SubspaceHamiltonian {
    pub m: usize,
    /// Excitation number of the sector, `None` for the full space.
    pub excitations: Option<usize>,
    pub basis: Vec<BasisState>,
    pub matrix: DMatrix<Complex64>,
    pub hermitian: bool,
    index: HashMap<BasisState, usize>,
}

impl SubspaceHamiltonian {
    fn assemble(
        system: &SpinStarSystem,
        basis: Vec<BasisState>,
        excitations: Option<usize>,
        dynamics: Dynamics,
    ) -> Self {
        let m = system.size();
        let gamma = system.gamma();
        let couplings = system.couplings();
        let index: HashMap<BasisState, usize> =
            basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let dim = basis.len();
        let mut matrix = DMatrix::from_element(dim, dim, ZERO);

        for (col, state) in basis.iter().enumerate() {
            let occupied = |j: usize| state.bath >> j & 1 == 1;
            // centre <-> bath exchange
            for j in 0..m {
                let target = match (state.center, occupied(j)) {
                    (true, false) => BasisState {
                        bath: state.bath | 1 << j,
                        center: false,
                    },
                    (false, true) => BasisState {
                        bath: state.bath & !(1 << j),
                        center: true,
                    },
                    _ => continue,
                };
                if let Some(&row) = index.get(&target) {
                    matrix[(row, col)] += Complex64::from(gamma);
                }
            }
            // intra-bath hops k -> j
            for k in (0..m).filter(|&k| occupied(k)) {
                for j in (0..m).filter(|&j| !occupied(j)) {
                    let coupling = couplings[(j, k)];
                    if coupling == 0.0 {
                        continue;
                    }
                    let target = BasisState {
                        bath: state.bath ^ (1 << j) ^ (1 << k),
                        center: state.center,
                    };
                    if let Some(&row) = index.get(&target) {
                        matrix[(row, col)] += Complex64::from(coupling);
                    }
                }
            }
            if dynamics == Dynamics::Dissipative {
                let loss = system.bath_decay() * state.bath.count_ones() as f64
                    + system.center_decay() * f64::from(u8::from(state.center));
                matrix[(col, col)] -= Complex64::new(0.0, loss);
            }
        }

        let hermitian = matrix == matrix.adjoint();
        SubspaceHamiltonian {
            m,
            excitations,
            basis,
            matrix,
            hermitian,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Embeds a single-excitation amplitude vector (sector `N = 1` only).
    pub fn embed(&self, state: &AmplitudeState) -> Result<DVector<Complex64>> {
        self.require_single_excitation()?;
        if state.bath.len() != self.m {
            return Err(SpinStarError::InvalidSize(format!(
                "amplitude state has {} bath entries, system has {}",
                state.bath.len(),
                self.m
            )));
        }
        let mut psi = DVector::from_element(self.dim(), ZERO);
        for (j, amp) in state.bath.iter().enumerate() {
            psi[self.index[&BasisState {
                bath: 1 << j,
                center: false,
            }]] = *amp;
        }
        psi[self.index[&BasisState {
            bath: 0,
            center: true,
        }]] = state.center;
        Ok(psi)
    }

    /// Inverse of [`SubspaceHamiltonian::embed`].
    pub fn amplitude_state(&self, psi: &DVector<Complex64>) -> Result<AmplitudeState> {
        self.require_single_excitation()?;
        let bath = (0..self.m)
            .map(|j| {
                psi[self.index[&BasisState {
                    bath: 1 << j,
                    center: false,
                }]]
            })
            .collect();
        let center = psi[self.index[&BasisState {
            bath: 0,
            center: true,
        }]];
        Ok(AmplitudeState::new(bath, center))
    }

    fn require_single_excitation(&self) -> Result<()> {
        if self.excitations != Some(1) {
            return Err(SpinStarError::InvalidParameter(
                "amplitude-state conversion needs the single-excitation sector".into(),
            ));
        }
        Ok(())
    }
}

/// Generator of the `n`-excitation sector, dimension `C(M, n) + C(M, n-1)`.
pub fn build_subspace_hamiltonian(
    system: &SpinStarSystem,
    n: usize,
    dynamics: Dynamics,
) -> Result<SubspaceHamiltonian> {
    let m = system.size();
    if n > m {
        return Err(SpinStarError::ExcitationOutOfRange { n, m });
    }
    if m >= 63 {
        return Err(SpinStarError::InvalidSize(format!(
            "bit-mask basis supports at most 62 outer qubits, got {m}"
        )));
    }
    Ok(SubspaceHamiltonian::assemble(
        system,
        sector_basis(m, n),
        Some(n),
        dynamics,
    ))
}

/// Generator on the full tensor-product space; state index is
/// `bath | center << M`.
pub fn build_full_space_hamiltonian(
    system: &SpinStarSystem,
    dynamics: Dynamics,
) -> Result<SubspaceHamiltonian> {
    let m = system.size();
    if m > FULL_SPACE_MAX_QUBITS {
        return Err(SpinStarError::SizeGuard {
            m,
            max: FULL_SPACE_MAX_QUBITS,
        });
    }
    let basis = (0..1u64 << (m + 1))
        .map(|i| BasisState {
            bath: i & bath_mask(m),
            center: i >> m & 1 == 1,
        })
        .collect();
    Ok(SubspaceHamiltonian::assemble(system, basis, None, dynamics))
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
    /// Euclidean norms of the raw states; never renormalised.
    pub norms: Vec<f64>,
}

fn validate_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(SpinStarError::InvalidGrid("non-finite time".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(SpinStarError::InvalidGrid(
            "times must be sorted ascending".into(),
        ));
    }
    Ok(())
}

/// Evolves `psi0` under `exp(-i H t)` and samples it on `times`.
pub fn evolve_exact(
    h: &SubspaceHamiltonian,
    psi0: &DVector<Complex64>,
    times: &[f64],
) -> Result<EvolutionResult> {
    if psi0.len() != h.dim() {
        return Err(SpinStarError::InvalidSize(format!(
            "initial state has dimension {}, subspace has {}",
            psi0.len(),
            h.dim()
        )));
    }
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > NORM_TOLERANCE {
        return Err(SpinStarError::NormViolation {
            norm: norm0,
            tolerance: NORM_TOLERANCE,
        });
    }
    validate_grid(times)?;

    let states = if h.hermitian {
        evolve_hermitian(h, psi0, times)?
    } else {
        evolve_stepwise(h, psi0, times)?
    };
    let norms: Vec<f64> = states.iter().map(|s| s.norm()).collect();
    if let Some((k, n)) = norms.iter().enumerate().find(|(_, n)| !n.is_finite()) {
        return Err(SpinStarError::NumericalFailure(format!(
            "state norm became {n} at t={}",
            times[k]
        )));
    }
    if h.hermitian {
        let worst = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
        if worst > 1e-9 {
            return Err(SpinStarError::NumericalFailure(format!(
                "unitary evolution lost norm: max |norm - 1| = {worst:.3e} (dim {})",
                h.dim()
            )));
        }
    }
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        norms,
    })
}

fn evolve_hermitian(
    h: &SubspaceHamiltonian,
    psi0: &DVector<Complex64>,
    times: &[f64],
) -> Result<Vec<DVector<Complex64>>> {
    let dim = h.dim();
    let eig = h
        .matrix
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 1000 * dim.max(1))
        .ok_or_else(|| {
            SpinStarError::NumericalFailure(format!(
                "Hermitian eigendecomposition did not converge (dim {dim})"
            ))
        })?;
    let coeffs = eig.eigenvectors.adjoint() * psi0;
    Ok(times
        .iter()
        .map(|&t| {
            let rotated = DVector::from_iterator(
                dim,
                coeffs
                    .iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(c, e)| c * Complex64::new(0.0, -e * t).exp()),
            );
            &eig.eigenvectors * rotated
        })
        .collect())
}

fn evolve_stepwise(
    h: &SubspaceHamiltonian,
    psi0: &DVector<Complex64>,
    times: &[f64],
) -> Result<Vec<DVector<Complex64>>> {
    let mut out = Vec::with_capacity(times.len());
    let mut psi = psi0.clone();
    let mut t_prev = 0.0;
    let mut cached: Option<(f64, DMatrix<Complex64>)> = None;
    for &t in times {
        let dt = t - t_prev;
        if dt != 0.0 {
            let reuse = matches!(&cached, Some((c, _)) if (c - dt).abs() <= 1e-13 * dt.abs().max(1.0));
            if !reuse {
                let step = (&h.matrix * Complex64::new(0.0, -dt)).exp();
                if step.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(SpinStarError::NumericalFailure(format!(
                        "matrix exponential overflowed for step {dt:e} (dim {})",
                        h.dim()
                    )));
                }
                cached = Some((dt, step));
            }
            psi = &cached.as_ref().expect("step cached").1 * psi;
        }
        out.push(psi.clone());
        t_prev = t;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct FullSpaceResult {
    pub evolution: EvolutionResult,
    /// `sector_populations[k][n]`: weight in the `n`-excitation sector at
    /// sample `k`, `n = 0..=M+1`.
    pub sector_populations: Vec<Vec<f64>>,
    /// `<N>` per sample.
    pub mean_excitations: Vec<f64>,
}

/// Evolution on the full `2^(M+1)` space with per-sector bookkeeping.
pub fn evolve_full_space(
    system: &SpinStarSystem,
    psi0: &DVector<Complex64>,
    times: &[f64],
    dynamics: Dynamics,
) -> Result<FullSpaceResult> {
    let h = build_full_space_hamiltonian(system, dynamics)?;
    let evolution = evolve_exact(&h, psi0, times)?;
    let m = system.size();
    let sector_populations: Vec<Vec<f64>> = evolution
        .states
        .iter()
        .map(|psi| {
            let mut pops = vec![0.0; m + 2];
            for (amp, state) in psi.iter().zip(&h.basis) {
                pops[state.excitations()] += amp.norm_sqr();
            }
            pops
        })
        .collect();
    let mean_excitations = sector_populations
        .iter()
        .map(|pops| pops.iter().enumerate().map(|(n, p)| n as f64 * p).sum())
        .collect();
    Ok(FullSpaceResult {
        evolution,
        sector_populations,
        mean_excitations,
    })
}

/// Copies a sector vector into the full space (index `bath | center << M`).
pub fn embed_in_full_space(h: &SubspaceHamiltonian, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let m = h.m;
    let mut full = DVector::from_element(1 << (m + 1), ZERO);
    for (amp, state) in psi.iter().zip(&h.basis) {
        full[(state.bath | u64::from(state.center) << m) as usize] = *amp;
    }
    full
}

/// Restricts a full-space vector to the sector basis of `h`.
pub fn project_from_full_space(
    h: &SubspaceHamiltonian,
    full: &DVector<Complex64>,
) -> DVector<Complex64> {
    let m = h.m;
    DVector::from_iterator(
        h.dim(),
        h.basis
            .iter()
            .map(|s| full[(s.bath | u64::from(s.center) << m) as usize]),
    )
}

/// Relabels excitations as holes: maps a vector in the sector of `from`
/// onto the complementary sector `M + 1 - N` described by `to`.
pub fn particle_hole_map(
    from: &SubspaceHamiltonian,
    psi: &DVector<Complex64>,
    to: &SubspaceHamiltonian,
) -> Result<DVector<Complex64>> {
    if from.m != to.m {
        return Err(SpinStarError::InvalidSize(
            "particle-hole map needs equal bath sizes".into(),
        ));
    }
    let mut out = DVector::from_element(to.dim(), ZERO);
    for (amp, state) in psi.iter().zip(&from.basis) {
        let image = state.complement(from.m);
        let row = to.index_of(&image).ok_or_else(|| {
            SpinStarError::InvalidParameter(format!(
                "state {} has no image in the target sector",
                state.label(from.m)
            ))
        })?;
        out[row] = *amp;
    }
    Ok(out)
}

/// Weight outside the two-dimensional collective span.
///
/// The span is built from the uniform (Dicke-type) superposition of the
/// ground-centre block and of the excited-centre block of the sector. The
/// returned series is `1 - |projection|^2 / |psi|^2` per sample. For
/// `N = 1` and `N = M` this span is dynamically closed under the
/// collective symmetry; for other `N` the series is a diagnostic only.
pub fn collective_residual(
    system: &SpinStarSystem,
    h: &SubspaceHamiltonian,
    result: &EvolutionResult,
) -> Result<Vec<f64>> {
    if h.excitations.is_none() {
        return Err(SpinStarError::InvalidParameter(
            "collective residual needs a fixed-excitation sector".into(),
        ));
    }
    let report = system.check_symmetry(system.symmetry_tolerance());
    if !report.is_symmetric {
        return Err(SpinStarError::SymmetryViolation(Box::new(report)));
    }
    let blocks: Vec<Vec<usize>> = [false, true]
        .iter()
        .map(|&center| {
            h.basis
                .iter()
                .enumerate()
                .filter(|(_, s)| s.center == center)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(result
        .states
        .iter()
        .map(|psi| {
            let total = psi.norm_squared();
            if total == 0.0 {
                return 0.0;
            }
            let captured: f64 = blocks
                .iter()
                .filter(|b| !b.is_empty())
                .map(|b| {
                    let overlap: Complex64 = b.iter().map(|&i| psi[i]).sum();
                    overlap.norm_sqr() / b.len() as f64
                })
                .sum();
            (1.0 - captured / total).max(0.0)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn system(topology: Topology, m: usize, gamma: f64) -> SpinStarSystem {
        SpinStarSystem::from_topology(&topology, m, gamma).unwrap()
    }

    #[test]
    fn gosper_enumeration_is_complete_and_sorted() {
        for m in 0..=8 {
            for k in 0..=m {
                let masks = masks_with_popcount(m, k);
                let brute: Vec<u64> = (0..1u64 << m)
                    .filter(|x| x.count_ones() as usize == k)
                    .collect();
                assert_eq!(masks, brute, "m={m} k={k}");
            }
        }
        assert_eq!(masks_with_popcount(32, 1).len(), 32);
        assert_eq!(masks_with_popcount(40, 39).len(), 40);
    }

    #[test]
    fn single_excitation_matrix_layout() {
        let (g, j) = (0.7, 0.3);
        let sys = system(Topology::UniformPairwise { j }, 3, g);
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        assert_eq!(h.dim(), 4);
        assert!(h.hermitian);
        for a in 0..4 {
            for b in 0..4 {
                let expected = match (a, b) {
                    (3, 3) => 0.0,
                    (3, _) | (_, 3) => g,
                    _ if a == b => 0.0,
                    _ => j,
                };
                assert_eq!(h.matrix[(a, b)], Complex64::from(expected), "({a},{b})");
            }
        }
    }

    #[test]
    fn sector_dimensions() {
        let sys = system(Topology::NearestNeighbor { j: 1.0 }, 4, 1.0);
        let h = build_subspace_hamiltonian(&sys, 2, Dynamics::Unitary).unwrap();
        assert_eq!(h.dim(), binomial(4, 2) + binomial(4, 1));
        assert_eq!(h.dim(), 10);
        let vac = build_subspace_hamiltonian(&sys, 0, Dynamics::Unitary).unwrap();
        assert_eq!(vac.dim(), 1);
        assert_eq!(vac.matrix[(0, 0)], ZERO);
        assert!(matches!(
            build_subspace_hamiltonian(&sys, 5, Dynamics::Unitary),
            Err(SpinStarError::ExcitationOutOfRange { n: 5, m: 4 })
        ));
    }

    #[test]
    fn dissipative_diagonal_counts_excitations() {
        let sys = system(Topology::UniformPairwise { j: 1.0 }, 3, 1.0)
            .with_decay(0.2, 0.5)
            .unwrap();
        let h = build_subspace_hamiltonian(&sys, 2, Dynamics::Dissipative).unwrap();
        assert!(!h.hermitian);
        for (i, s) in h.basis.iter().enumerate() {
            let expected = 0.2 * s.bath.count_ones() as f64 + if s.center { 0.5 } else { 0.0 };
            assert!((h.matrix[(i, i)].im + expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let sys = system(Topology::UniformPairwise { j: 0.0 }, 3, 0.0);
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let psi0 = DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ]);
        let res = evolve_exact(&h, &psi0, &[0.0, 1.0, 7.5]).unwrap();
        for s in &res.states {
            assert!((s - &psi0).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let sys = system(Topology::UniformPairwise { j: 1.0 }, 2, 1.0);
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let mut psi = DVector::from_element(3, ZERO);
        psi[0] = Complex64::from(1.0);
        assert!(matches!(
            evolve_exact(&h, &psi, &[1.0, 0.5]),
            Err(SpinStarError::InvalidGrid(_))
        ));
        psi[1] = Complex64::from(1.0);
        assert!(matches!(
            evolve_exact(&h, &psi, &[0.0]),
            Err(SpinStarError::NormViolation { .. })
        ));
        let big = system(Topology::UniformPairwise { j: 1.0 }, 11, 1.0);
        let full = DVector::from_element(1 << 12, ZERO);
        assert!(matches!(
            evolve_full_space(&big, &full, &[0.0], Dynamics::Unitary),
            Err(SpinStarError::SizeGuard { m: 11, .. })
        ));
    }

    #[test]
    fn conditional_norm_decays_when_bath_occupied() {
        let sys = system(Topology::NearestNeighbor { j: 0.4 }, 4, 1.0)
            .with_decay(0.3, 0.0)
            .unwrap();
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Dissipative).unwrap();
        let mut psi0 = DVector::from_element(5, ZERO);
        psi0[0] = Complex64::from(1.0);
        let times: Vec<f64> = (0..200).map(|k| 0.05 * k as f64).collect();
        let res = evolve_exact(&h, &psi0, &times).unwrap();
        for w in res.norms.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn stepwise_path_agrees_with_itself_at_double_resolution() {
        let sys = system(Topology::NearestNeighbor { j: 0.8 }, 5, 1.0)
            .with_decay(0.1, 0.25)
            .unwrap();
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Dissipative).unwrap();
        let mut psi0 = DVector::from_element(6, ZERO);
        psi0[5] = Complex64::from(1.0);
        let coarse: Vec<f64> = (0..=200).map(|k| 0.1 * k as f64).collect();
        let fine: Vec<f64> = (0..=400).map(|k| 0.05 * k as f64).collect();
        let a = evolve_exact(&h, &psi0, &coarse).unwrap();
        let b = evolve_exact(&h, &psi0, &fine).unwrap();
        for (k, s) in a.states.iter().enumerate() {
            assert!((s - &b.states[2 * k]).norm() <= 1e-11);
        }
    }

    #[test]
    fn full_space_conserves_sectors() {
        let sys = system(Topology::NearestNeighbor { j: 0.6 }, 5, 1.0);
        let h1 = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let amps = AmplitudeState::new(
            vec![
                Complex64::new(0.3, 0.1),
                Complex64::new(0.0, -0.4),
                Complex64::new(0.2, 0.0),
                Complex64::new(0.1, 0.1),
                Complex64::new(-0.2, 0.3),
            ],
            Complex64::new(0.5, 0.0),
        )
        .normalized();
        let psi_full = embed_in_full_space(&h1, &h1.embed(&amps).unwrap());
        let times: Vec<f64> = (0..=60).map(|k| 0.25 * k as f64).collect();
        let res = evolve_full_space(&sys, &psi_full, &times, Dynamics::Unitary).unwrap();
        for pops in &res.sector_populations {
            for (n, p) in pops.iter().enumerate() {
                if n != 1 {
                    assert!(*p <= 1e-12, "sector {n} leaked {p}");
                }
            }
        }
        for mean in &res.mean_excitations {
            assert!((mean - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn vacuum_is_stationary() {
        let sys = system(Topology::UniformPairwise { j: 1.0 }, 3, 1.0);
        let mut vac = DVector::from_element(16, ZERO);
        vac[0] = Complex64::from(1.0);
        let res = evolve_full_space(&sys, &vac, &[0.0, 3.0, 9.0], Dynamics::Unitary).unwrap();
        for s in &res.evolution.states {
            assert!((s - &vac).norm() < 1e-13);
        }
    }

    #[test]
    fn subspace_and_full_space_agree() {
        let sys = system(Topology::UniformPairwise { j: 0.45 }, 3, 1.1);
        let h1 = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let psi0 = h1
            .embed(
                &AmplitudeState::new(
                    vec![
                        Complex64::new(0.6, 0.0),
                        Complex64::new(0.0, 0.2),
                        Complex64::new(-0.1, 0.0),
                    ],
                    Complex64::new(0.3, 0.4),
                )
                .normalized(),
            )
            .unwrap();
        let times: Vec<f64> = (0..=40).map(|k| 0.5 * k as f64).collect();
        let sub = evolve_exact(&h1, &psi0, &times).unwrap();
        let full =
            evolve_full_space(&sys, &embed_in_full_space(&h1, &psi0), &times, Dynamics::Unitary)
                .unwrap();
        for (a, b) in sub.states.iter().zip(&full.evolution.states) {
            assert!((a - project_from_full_space(&h1, b)).norm() <= 1e-10);
        }
    }

    #[test]
    fn particle_hole_map_is_involutive() {
        let sys = system(Topology::NearestNeighbor { j: 1.0 }, 4, 1.0);
        let h1 = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let h4 = build_subspace_hamiltonian(&sys, 4, Dynamics::Unitary).unwrap();
        assert_eq!(h1.dim(), h4.dim());
        let psi = DVector::from_fn(5, |i, _| Complex64::new(i as f64, -(i as f64)));
        let there = particle_hole_map(&h1, &psi, &h4).unwrap();
        let back = particle_hole_map(&h4, &there, &h1).unwrap();
        assert_eq!(back, psi);
        let h2 = build_subspace_hamiltonian(&sys, 2, Dynamics::Unitary).unwrap();
        assert!(particle_hole_map(&h1, &psi, &h2).is_err());
    }

    #[test]
    fn residual_refuses_asymmetric_system() {
        let mut j = DMatrix::zeros(3, 3);
        j[(0, 1)] = 1.0;
        j[(1, 0)] = 1.0;
        let sys = SpinStarSystem::new(1.0, j).unwrap();
        let h = build_subspace_hamiltonian(&sys, 1, Dynamics::Unitary).unwrap();
        let mut psi = DVector::from_element(4, ZERO);
        psi[3] = Complex64::from(1.0);
        let res = evolve_exact(&h, &psi, &[0.0, 1.0]).unwrap();
        assert!(matches!(
            collective_residual(&sys, &h, &res),
            Err(SpinStarError::SymmetryViolation(_))
        ));
    }
}
