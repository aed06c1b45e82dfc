// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Dynamics of spin-star qubit networks.
//!
//! A central qubit couples with strength `gamma` to `M` identical outer
//! qubits, which in turn couple among themselves through a symmetric matrix
//! `J`. When every outer qubit sees the same row sum `Delta = sum_k J_jk`,
//! the single-excitation dynamics close on two collective amplitudes: the
//! central amplitude `b_C(t)` and the bath sum `B(t) = sum_j b_j(t)`. This
//! crate evaluates that closed form (unitary and no-jump conditional),
//! maps an `M + 1` system onto an equivalent `n + 1` system sharing the same
//! collective frequency, and cross-checks everything against brute-force
//! evolution in the excitation subspaces and in the full Hilbert space.
//!
//! Units: `hbar = 1`; all couplings and rates are angular frequencies.

pub mod closedform;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod oracle;
pub mod renorm;
pub mod suites;

pub use closedform::{
    uniform_grid,
    central_qubit_density, evolve_amplitudes, evolve_collective, propagators_dissipative, propagators_unitary,
    CentralDensity, CollectiveState, DissipativeParams, Dynamics, PropagatorSet,
};
pub use entanglement::{
    concurrence_pair, snapshot, verify_bounds, AmplitudeState, BoundReport, EntanglementSnapshot,
    NormPolicy,
};
pub use error::{Result, SpinStarError};
pub use model::{
    CollectiveParams, SpinStarSystem, SymmetryReport, Topology, DEFAULT_SYMMETRY_TOLERANCE,
};
pub use oracle::{
    build_full_space_hamiltonian, build_subspace_hamiltonian, collective_residual, evolve_exact,
    evolve_full_space, BasisState, EvolutionResult, FullSpaceResult, SubspaceHamiltonian,
};
pub use renorm::{
    reduce, transform_observables, verify_equivalence, Classification, EquivalenceReport,
    EquivalentSystem, InitialPolicy, TransformCoefficients,
};

pub use num_complex::Complex64;
