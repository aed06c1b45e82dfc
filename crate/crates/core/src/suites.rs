// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded verification suites that pit the closed forms against the
//! brute-force engines on random symmetric systems.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{
    evolve_collective, propagators_dissipative, propagators_unitary, uniform_grid, Dynamics,
};
use crate::entanglement::{verify_bounds, AmplitudeState};
use crate::error::Result;
use crate::model::{CollectiveParams, SpinStarSystem, Topology};
use crate::oracle::{build_subspace_hamiltonian, evolve_exact};
use crate::renorm::{verify_equivalence, InitialPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Bounds,
    Oracle,
    Equivalence,
    Dissipative,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 4] = [
        SuiteKind::Bounds,
        SuiteKind::Oracle,
        SuiteKind::Equivalence,
        SuiteKind::Dissipative,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Bounds => "bounds",
            SuiteKind::Oracle => "oracle",
            SuiteKind::Equivalence => "equivalence",
            SuiteKind::Dissipative => "dissipative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    /// Worst observed deviation in the suite's own metric.
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: SuiteKind, seed: u64, tolerance: f64) -> Self {
        SuiteReport {
            suite,
            seed,
            cases: 0,
            failures: 0,
            max_residual: 0.0,
            tolerance,
            passed: true,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        self.max_residual = self.max_residual.max(residual);
        if residual.is_nan() || residual > self.tolerance {
            self.failures += 1;
            self.notes.push(format!("{}: residual {residual:.3e}", label()));
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures == 0;
        self
    }
}

/// Runs the given suites in parallel; the report order follows `kinds`.
/// `tolerance` replaces every suite's own threshold when given.
pub fn run_suites(kinds: &[SuiteKind], seed: u64, tolerance: Option<f64>) -> Result<Vec<SuiteReport>> {
    kinds.par_iter().map(|k| run_suite(*k, seed, tolerance)).collect()
}

pub fn run_suite(kind: SuiteKind, seed: u64, tolerance: Option<f64>) -> Result<SuiteReport> {
    match kind {
        SuiteKind::Bounds => bounds_suite(seed, tolerance.unwrap_or(1e-10)),
        SuiteKind::Oracle => oracle_suite(seed, tolerance.unwrap_or(1e-8)),
        SuiteKind::Equivalence => equivalence_suite(seed, tolerance.unwrap_or(1e-9)),
        SuiteKind::Dissipative => dissipative_suite(seed, tolerance.unwrap_or(1e-8)),
    }
}

/// Random system satisfying the collective symmetry. The layout is drawn
/// from the three standard rings plus random symmetric circulants, which
/// have unequal pair couplings but equal row sums.
pub fn random_symmetric_system<R: Rng>(rng: &mut R, m: usize) -> Result<SpinStarSystem> {
    let gamma = rng.random_range(0.3..2.0);
    let j = rng.random_range(-2.0..2.0);
    let topology = match rng.random_range(0..4) {
        0 => Topology::NearestNeighbor { j },
        1 => Topology::UniformPairwise { j },
        2 => Topology::DipoleRing {
            j,
            radius: rng.random_range(0.6..3.0),
        },
        _ => Topology::Explicit {
            matrix: random_circulant(rng, m),
        },
    };
    SpinStarSystem::from_topology(&topology, m, gamma)
}

fn random_circulant<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec<f64>> {
    // c[d] = c[m - d] keeps the matrix symmetric
    let mut c = vec![0.0; m];
    for d in 1..=m / 2 {
        let v = rng.random_range(-1.5..1.5);
        c[d] = v;
        c[m - d] = v;
    }
    (0..m)
        .map(|a| (0..m).map(|b| c[(b + m - a) % m]).collect())
        .collect()
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..2.0 * PI))
}

/// Normalised state with arbitrary amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, m: usize) -> AmplitudeState {
    AmplitudeState::new((0..m).map(|_| random_complex(rng)).collect(), random_complex(rng))
        .normalized()
}

/// Normalised state with either `b_C(0) = 0` (arbitrary bath) or
/// `B(0) = 0` (zero-sum bath plus a central component).
pub fn random_exact_regime_state<R: Rng>(rng: &mut R, m: usize) -> AmplitudeState {
    let mut bath: Vec<Complex64> = (0..m).map(|_| random_complex(rng)).collect();
    if rng.random_bool(0.5) {
        AmplitudeState::new(bath, Complex64::from(0.0)).normalized()
    } else {
        let mean = bath.iter().sum::<Complex64>() / m as f64;
        bath.iter_mut().for_each(|b| *b -= mean);
        if m == 1 {
            return AmplitudeState::center_excited(1);
        }
        AmplitudeState::new(bath, random_complex(rng) + 0.1).normalized()
    }
}

/// Max over the grid of `| |b_C|^2 closed - |b_C|^2 exact |`.
pub fn closed_vs_exact_center_population(
    system: &SpinStarSystem,
    state: &AmplitudeState,
    times: &[f64],
    dynamics: Dynamics,
) -> Result<f64> {
    let params = system.collective()?;
    let h = build_subspace_hamiltonian(system, 1, dynamics)?;
    let exact = evolve_exact(&h, &h.embed(state)?, times)?;
    let (b0, c0) = (state.bath_sum(), state.center);
    let mut worst: f64 = 0.0;
    for (t, psi) in times.iter().zip(&exact.states) {
        let closed = evolve_collective(&params, b0, c0, *t, dynamics);
        let amp = h.amplitude_state(psi)?;
        worst = worst.max((closed.center_population() - amp.center.norm_sqr()).abs());
    }
    Ok(worst)
}

fn bounds_suite(seed: u64, tolerance: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new(SuiteKind::Bounds, seed, tolerance);
    for case in 0..100 {
        let m = rng.random_range(2..=10);
        let system = random_symmetric_system(&mut rng, m)?;
        let state = if case % 2 == 0 {
            AmplitudeState::center_excited(m)
        } else {
            random_state(&mut rng, m)
        };
        let times = uniform_grid(20.0 / system.gamma(), 201)?;
        let h = build_subspace_hamiltonian(&system, 1, Dynamics::Unitary)?;
        let run = evolve_exact(&h, &h.embed(&state)?, &times)?;
        let states = run
            .states
            .iter()
            .map(|psi| h.amplitude_state(psi))
            .collect::<Result<Vec<_>>>()?;
        let bounds = verify_bounds(&times, &states)?;
        let worst = -(bounds.min_bath_margin.min(bounds.min_center_margin)).min(0.0);
        report.record(worst, || format!("run {case} (M={m})"));
    }
    // equality case: common phase on the bath
    for case in 0..50 {
        let m = rng.random_range(2..=10);
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let state = AmplitudeState::new(
            (0..m).map(|_| phase * rng.random_range(0.0..1.0)).collect(),
            random_complex(&mut rng),
        )
        .normalized();
        let bounds = verify_bounds(&[0.0], &[state])?;
        report.record(bounds.bath_margins[0].abs(), || {
            format!("common-phase state {case} (M={m})")
        });
    }
    Ok(report.finish())
}

fn oracle_suite(seed: u64, tolerance: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new(SuiteKind::Oracle, seed, tolerance);
    for case in 0..50 {
        let m = rng.random_range(2..=12);
        let system = random_symmetric_system(&mut rng, m)?;
        let state = random_exact_regime_state(&mut rng, m);
        let times = uniform_grid(20.0 / system.gamma(), 401)?;
        let worst = closed_vs_exact_center_population(&system, &state, &times, Dynamics::Unitary)?;
        report.record(worst, || format!("system {case} (M={m})"));
    }
    Ok(report.finish())
}

fn equivalence_suite(seed: u64, tolerance: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new(SuiteKind::Equivalence, seed, tolerance);
    for case in 0..40 {
        let m = rng.random_range(3..=32);
        let system = random_symmetric_system(&mut rng, m)?;
        let n = rng.random_range(2..=m);
        let center_start = case % 2 == 0;
        let (b0, c0) = if center_start {
            (Complex64::from(0.0), Complex64::from(1.0))
        } else {
            (Complex64::from((m as f64).sqrt()), Complex64::from(0.0))
        };
        let r = verify_equivalence(
            &system,
            n,
            b0,
            c0,
            InitialPolicy::UniformBath,
            20.0 / system.gamma(),
            501,
            Dynamics::Unitary,
        )?;
        // P and E are both exact from the centre; from the uniform bath the
        // P map is the claim under test
        let residual = if center_start {
            r.max_residual_p.max(r.max_residual_e)
        } else {
            r.max_residual_p
        };
        report.record(residual, || format!("case {case} (M={m} -> n={n})"));
    }
    Ok(report.finish())
}

fn dissipative_suite(seed: u64, tolerance: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new(SuiteKind::Dissipative, seed, tolerance);
    for case in 0..30 {
        let m = rng.random_range(2..=10);
        let system = random_symmetric_system(&mut rng, m)?
            .with_decay(rng.random_range(0.0..0.5), rng.random_range(0.0..0.5))?;
        let params = system.collective()?;
        let horizon = 10.0 / system.gamma();

        // lossless limit of the conditional propagators
        let lossless = CollectiveParams {
            bath_decay: 0.0,
            center_decay: 0.0,
            ..params
        };
        let reduction = (0..=200)
            .map(|k| {
                let t = horizon * k as f64 / 200.0;
                propagators_dissipative(&lossless, t).max_abs_diff(&propagators_unitary(&lossless, t))
            })
            .fold(0.0, f64::max);
        report.record(reduction * 1e4, || format!("lossless reduction {case}"));

        // closed form against the non-Hermitian oracle
        let state = random_exact_regime_state(&mut rng, m);
        let times = uniform_grid(horizon, 201)?;
        let worst = closed_vs_exact_center_population(&system, &state, &times, Dynamics::Dissipative)?;
        report.record(worst, || format!("conditional oracle {case} (M={m})"));

        // conditional norm never grows
        let h = build_subspace_hamiltonian(&system, 1, Dynamics::Dissipative)?;
        let run = evolve_exact(&h, &h.embed(&state)?, &times)?;
        let growth = run
            .norms
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .fold(0.0, f64::max);
        report.record(growth, || format!("norm monotonicity {case}"));
    }
    // pure central decay
    for case in 0..10 {
        let kappa = rng.random_range(0.05..2.0);
        let params = CollectiveParams {
            m: rng.random_range(1..=8),
            gamma: 0.0,
            delta: 0.0,
            bath_decay: 0.0,
            center_decay: kappa,
        };
        let worst = (0..=100)
            .map(|k| {
                let t = 0.1 * k as f64;
                let c = evolve_collective(&params, Complex64::from(0.0), Complex64::from(1.0), t, Dynamics::Dissipative);
                (c.center.norm() - (-kappa * t).exp()).abs()
            })
            .fold(0.0, f64::max);
        report.record(worst * 100.0, || format!("pure decay {case}"));
    }
    Ok(report.finish())
}

/// Full-space single-excitation vector for a small system, used by the
/// concurrence cross-check.
pub fn full_space_vector(state: &AmplitudeState) -> DVector<Complex64> {
    let m = state.size();
    let mut psi = DVector::from_element(1 << (m + 1), Complex64::from(0.0));
    for (j, b) in state.bath.iter().enumerate() {
        psi[1 << j] = *b;
    }
    psi[1 << m] = state.center;
    psi
}

/// Symmetric `m x m` matrix with unequal row sums, for counterexamples.
pub fn asymmetric_couplings<R: Rng>(rng: &mut R, m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in a + 1..m {
            let v = rng.random_range(0.0..2.0);
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    j[(0, 1)] += 1.0;
    j[(1, 0)] += 1.0;
    j
}
