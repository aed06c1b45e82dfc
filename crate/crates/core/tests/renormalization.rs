// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

use spinstar::renorm::{reduce_params, EXACT_THRESHOLD};
use spinstar::*;

fn c(re: f64) -> Complex64 {
    Complex64::from(re)
}

/// Ring radius that puts neighbouring sites at unit distance.
fn unit_spacing_radius(m: usize) -> f64 {
    0.5 / (std::f64::consts::PI / m as f64).sin()
}

#[test]
fn reduced_detunings() {
    let eq = reduce_params(&CollectiveParams::lossless(10, 1.0, 1.0), 2).unwrap();
    assert!((eq.delta_n - 33f64.sqrt()).abs() <= 1e-12);

    let eq = reduce_params(&CollectiveParams::lossless(3, 2.0, 0.0), 2).unwrap();
    assert!((eq.delta_n - 4.0).abs() <= 1e-12);
    assert!((eq.omega - 48f64.sqrt()).abs() <= 1e-12);
    assert_eq!(eq.gamma_n, 2.0);

    let eq = reduce_params(&CollectiveParams::lossless(6, 0.7, -1.3), 6).unwrap();
    assert_eq!(eq.delta_n, -1.3);
}

#[test]
fn reduction_bounds() {
    let system = SpinStarSystem::from_topology(&Topology::UniformPairwise { j: 1.0 }, 5, 1.0).unwrap();
    assert!(matches!(reduce(&system, 1), Err(SpinStarError::MinimumSize(1))));
    assert!(matches!(reduce(&system, 6), Err(SpinStarError::InvalidReduction { n: 6, m: 5 })));
    assert!(reduce(&system, 2).is_ok());
}

#[test]
fn realized_equivalent_system_is_consistent() {
    let system = SpinStarSystem::from_topology(&Topology::NearestNeighbor { j: 1.0 }, 10, 1.0).unwrap();
    let eq = reduce(&system, 3).unwrap();
    let small = eq.realize().unwrap();
    assert_eq!(small.size(), 3);
    let p = small.collective().unwrap();
    assert!((p.delta - eq.delta_n).abs() <= 1e-12);
    assert!((p.omega() - system.collective_frequency().unwrap()).abs() <= 1e-12);
}

#[test]
fn figure_regime_is_exact() {
    let system = SpinStarSystem::from_topology(&Topology::NearestNeighbor { j: 1.0 }, 10, 1.0).unwrap();
    let report = verify_equivalence(
        &system,
        2,
        c(0.0),
        c(1.0),
        InitialPolicy::UniformBath,
        20.0,
        2001,
        Dynamics::Unitary,
    )
    .unwrap();
    assert_eq!(report.classification, Classification::Exact);
    assert!(report.max_residual_p <= 1e-9);
    assert!(report.max_residual_e <= 1e-9);
    assert_eq!(report.coefficients_original.alpha, -10.0);
    assert_eq!(report.coefficients_equivalent.alpha, -2.0);
    // P_M = (1 - M/2) + (M/2) P_2 and E_M = M(M-1)/2 E_2
    for k in 0..report.times.len() {
        assert!((report.p_original[k] - (-4.0 + 5.0 * report.p_equivalent[k])).abs() <= 1e-9);
        assert!((report.e_original[k] - 45.0 * report.e_equivalent[k]).abs() <= 1e-9);
    }
    assert_eq!(report.p_predicted[0], report.p_equivalent[0]);
}

#[test]
fn dipole_ring_reduces_to_two_sites() {
    let topology = Topology::DipoleRing { j: 1.0, radius: unit_spacing_radius(32) };
    let system = SpinStarSystem::from_topology(&topology, 32, 1.0).unwrap();
    let report = verify_equivalence(
        &system,
        2,
        c(0.0),
        c(1.0),
        InitialPolicy::UniformBath,
        20.0,
        2001,
        Dynamics::Unitary,
    )
    .unwrap();
    assert!(report.max_residual_p <= 1e-9, "{}", report.max_residual_p);
    assert_eq!(report.classification, Classification::Exact);
    // nearest neighbours at unit spacing dominate the dipole sum
    assert!(report.delta > 2.0 && report.delta < 2.5, "{}", report.delta);
}

#[test]
fn bath_start_keeps_population_map_exact() {
    for topology in [Topology::NearestNeighbor { j: 0.6 }, Topology::UniformPairwise { j: -0.3 }] {
        let system = SpinStarSystem::from_topology(&topology, 8, 1.0).unwrap();
        let b0 = c(8f64.sqrt());
        let report = verify_equivalence(
            &system,
            3,
            b0,
            c(0.0),
            InitialPolicy::UniformBath,
            20.0,
            1001,
            Dynamics::Unitary,
        )
        .unwrap();
        assert!(report.max_residual_p <= 1e-9, "{}", report.max_residual_p);
    }
}

#[test]
fn mixed_start_is_reported_as_approximate() {
    let system = SpinStarSystem::from_topology(&Topology::NearestNeighbor { j: 1.0 }, 6, 1.0).unwrap();
    // |b_C|^2 = 1/4, uniform bath carrying the rest
    let report = verify_equivalence(
        &system,
        2,
        c((0.75f64 * 6.0).sqrt()),
        Complex64::new(0.0, 0.5),
        InitialPolicy::UniformBath,
        20.0,
        801,
        Dynamics::Unitary,
    )
    .unwrap();
    assert!(report.max_residual_p > EXACT_THRESHOLD);
    assert_eq!(report.classification, Classification::Approximate);
}

#[test]
fn degenerate_coefficients_are_named() {
    let source = TransformCoefficients::new(3, c(0.0), c(1.0));
    let target = TransformCoefficients::new(2, c(0.0), c(0.0));
    let err = transform_observables(&[(1.0, 0.0)], &source, &target).unwrap_err();
    match err {
        SpinStarError::DegenerateCoefficient { name, .. } => assert!(name.contains("target")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn transform_fixes_initial_values() {
    let source = TransformCoefficients::new(10, c(0.0), c(1.0));
    let target = TransformCoefficients::new(2, c(0.0), c(1.0));
    let out = transform_observables(&[(source.p0, source.e0)], &source, &target).unwrap();
    assert_eq!(out[0], (target.p0, target.e0));
}
