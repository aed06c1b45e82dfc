// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! The work behind each subcommand, free of any I/O.

use rayon::prelude::*;
use serde::Serialize;
use spinstar::suites::{run_suites, SuiteKind, SuiteReport};
use spinstar::{
    build_subspace_hamiltonian, evolve_amplitudes, evolve_exact, snapshot, uniform_grid, verify_equivalence,
    Dynamics, EquivalenceReport, InitialPolicy, NormPolicy, Topology,
};

use crate::config::{Output, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::table::Table;

/// Time series of one scenario, optionally with its reduced counterpart.
pub fn simulate(config: &ScenarioConfig) -> Result<Table> {
    let system = config.system()?;
    let params = system.collective()?;
    let state = config.initial_state()?;
    let dynamics = config.run.mode;
    let times = uniform_grid(config.time_horizon()?, config.run.samples)?;
    let states = evolve_amplitudes(&system, &state, &times, dynamics)?;
    let m = system.size();
    let dissipative = dynamics == Dynamics::Dissipative;
    let wants = |o: Output| config.run.outputs.contains(&o);

    let mut columns: Vec<String> = [
        "t", "re_bc", "im_bc", "P", "P_over_M", "B_sq", "script_E_B", "script_E_BC", "E_B", "E_BC", "norm",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if dissipative {
        columns.push("P_normalized".into());
    }

    let oracle = if wants(Output::Oracle) {
        let h = build_subspace_hamiltonian(&system, 1, dynamics)?;
        let run = evolve_exact(&h, &h.embed(&state)?, &times)?;
        columns.extend(["P_oracle".into(), "oracle_residual".into()]);
        Some(
            run.states
                .iter()
                .map(|psi| Ok(h.amplitude_state(psi)?.center.norm_sqr()))
                .collect::<Result<Vec<f64>>>()?,
        )
    } else {
        None
    };

    if wants(Output::Concurrences) {
        columns.extend((1..=m).map(|j| format!("C_c_{j}")));
        for j in 1..=m {
            columns.extend((j + 1..=m).map(|k| format!("C_{j}_{k}")));
        }
    }

    let reduced = match config.run.reduce_to {
        Some(n) => {
            columns.extend(
                ["P_n", "E_n", "P_n_predicted", "E_n_predicted", "residual_P", "residual_E"].map(String::from),
            );
            Some(reduce(config, Some(n))?)
        }
        None => None,
    };

    let mut table = Table::new(columns);
    table.comment("spinstar simulate");
    table.comment("config:");
    for line in config.to_toml().lines() {
        table.comment(format!("  {line}"));
    }
    table.comment(format!(
        "M = {m}, Delta = {:e}, Omega = {:e}, time_unit = {:e}",
        params.delta,
        params.omega(),
        system.time_unit()
    ));
    if let Some(r) = &reduced {
        table.comment(format!(
            "reduced to n = {}: Delta_n = {:e}, max_residual_P = {:e}, max_residual_E = {:e}, classification = {}",
            r.n,
            r.delta_n,
            r.max_residual_p,
            r.max_residual_e,
            serde_json::to_string(&r.classification).unwrap_or_default().trim_matches('"')
        ));
    }

    let mf = m as f64;
    let policy = if dissipative { NormPolicy::Normalize } else { NormPolicy::Strict };
    for (k, (t, s)) in times.iter().zip(&states).enumerate() {
        let snap = snapshot(s, *t, policy)?;
        let p = s.center.norm_sqr();
        let norm = s.norm();
        let mut row = vec![
            *t,
            s.center.re,
            s.center.im,
            p,
            p / mf,
            s.bath_sum().norm_sqr(),
            snap.script_e_b,
            snap.script_e_bc,
            snap.e_b,
            snap.e_bc,
            norm,
        ];
        if dissipative {
            row.push(if norm > 0.0 { p / (norm * norm) } else { 0.0 });
        }
        if let Some(exact) = &oracle {
            row.extend([exact[k], (exact[k] - p).abs()]);
        }
        if wants(Output::Concurrences) {
            row.extend(&snap.concurrences_center);
            row.extend(&snap.concurrences_bath);
        }
        if let Some(r) = &reduced {
            row.extend([
                r.p_equivalent[k],
                r.e_equivalent[k],
                r.p_predicted[k],
                r.e_predicted[k],
                r.residual_p[k],
                r.residual_e[k],
            ]);
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Equivalence report for reducing the scenario to `n` outer qubits;
/// `n` falls back to `run.reduce_to`.
pub fn reduce(config: &ScenarioConfig, n: Option<usize>) -> Result<EquivalenceReport> {
    let n = n
        .or(config.run.reduce_to)
        .ok_or_else(|| CliError::Usage("no reduction target: pass --n or set run.reduce_to".into()))?;
    let system = config.system()?;
    let state = config.initial_state()?;
    Ok(verify_equivalence(
        &system,
        n,
        state.bath_sum(),
        state.center,
        InitialPolicy::UniformBath,
        config.time_horizon()?,
        config.run.samples,
        config.run.mode,
    )?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub tolerance_override: Option<f64>,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

pub fn verify(kinds: &[SuiteKind], seed: u64, tolerance: Option<f64>) -> Result<VerifySummary> {
    let suites = run_suites(kinds, seed, tolerance)?;
    Ok(VerifySummary {
        seed,
        tolerance_override: tolerance,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

/// Parameters a sweep can vary.
pub const SWEEP_PARAMS: [&str; 7] = ["M", "gamma", "Gamma", "kappa", "J", "radius", "horizon"];

/// Copy of `config` with one parameter replaced.
pub fn with_parameter(config: &ScenarioConfig, name: &str, value: f64) -> Result<ScenarioConfig> {
    let mut c = config.clone();
    match name {
        "M" => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(CliError::Usage(format!("M must be a positive integer, got {value}")));
            }
            c.system.m = value as usize;
        }
        "gamma" => c.system.gamma = value,
        "Gamma" => c.system.bath_decay = value,
        "kappa" => c.system.kappa = value,
        "horizon" => c.run.horizon = value,
        "J" => match &mut c.system.topology {
            Topology::NearestNeighbor { j } | Topology::UniformPairwise { j } | Topology::DipoleRing { j, .. } => {
                *j = value
            }
            Topology::Explicit { .. } => {
                return Err(CliError::Usage("cannot sweep J of an explicit coupling matrix".into()))
            }
        },
        "radius" => match &mut c.system.topology {
            Topology::DipoleRing { radius, .. } => *radius = value,
            _ => return Err(CliError::Usage("radius applies to dipole_ring topologies only".into())),
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown sweep parameter '{other}' (one of {})",
                SWEEP_PARAMS.join(", ")
            )))
        }
    }
    c.validate(&format!("sweep {name} = {value}"))?;
    Ok(c)
}

pub struct SweepResult {
    pub tables: Vec<Table>,
    pub summary: Table,
}

/// Runs one simulation per value in parallel. Output order follows `values`.
pub fn sweep(config: &ScenarioConfig, name: &str, values: &[f64]) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let configs = values
        .iter()
        .map(|&v| with_parameter(config, name, v))
        .collect::<Result<Vec<_>>>()?;
    let runs = configs
        .par_iter()
        .map(|c| {
            let table = simulate(c)?;
            let params = c.system()?.collective()?;
            Ok((table, params.delta, params.omega()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summary = Table::new(
        ["value", "Delta", "Omega", "min_P", "max_script_E_B", "final_P"]
            .map(String::from)
            .to_vec(),
    );
    summary.comment(format!("spinstar sweep over {name}"));
    summary.comment("base config:");
    for line in config.to_toml().lines() {
        summary.comment(format!("  {line}"));
    }
    let mut tables = Vec::with_capacity(runs.len());
    for (value, (table, delta, omega)) in values.iter().zip(runs) {
        let p = table.column("P").expect("P column");
        let e = table.column("script_E_B").expect("script_E_B column");
        summary.push_row(vec![
            *value,
            delta,
            omega,
            p.iter().copied().fold(f64::INFINITY, f64::min),
            e.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            *p.last().expect("at least two samples"),
        ]);
        tables.push(table);
    }
    Ok(SweepResult { tables, summary })
}
