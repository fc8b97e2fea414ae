// Copyright 2026 The vidcache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use rayon::prelude::*;
use vidcache_core::coverage::make_constants;
use vidcache_core::economics::Price;
use vidcache_core::equilibrium::{
    nups_solve, participation_thresholds, ups_solve, verify_equilibrium, waterfill_solve, EquilibriumOutcome,
    GameInstance, Scheme,
};
use vidcache_core::sim::simulate_hit_probability;
use vidcache_core::special::{PathLossExponent, SinrThreshold};

use crate::config::{ExperimentConfig, SweepAxis};
use crate::{HarnessError, Table};

/// Simulator/analysis disagreement tolerated regardless of trial count.
pub const COVERAGE_ABS_TOL: f64 = 0.02;

/// Seed for grid point `index`, decorrelated from neighbouring indices by a
/// SplitMix64 finaliser.
pub fn point_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn price_cell(p: Price) -> String {
    p.to_string()
}

fn solve(scheme: Scheme, instance: &GameInstance, verify: bool) -> Result<EquilibriumOutcome, HarnessError> {
    let outcome = match scheme {
        Scheme::Nups => nups_solve(instance)?,
        Scheme::Ups => ups_solve(instance)?,
        Scheme::Waterfill => waterfill_solve(instance)?,
    };
    if verify {
        verify_equilibrium(&outcome, instance)?;
    }
    Ok(outcome)
}

fn solve_if(
    cfg: &ExperimentConfig,
    scheme: Scheme,
    instance: &GameInstance,
) -> Result<Option<EquilibriumOutcome>, HarnessError> {
    if cfg.runs(scheme) {
        solve(scheme, instance, cfg.verify).map(Some)
    } else {
        Ok(None)
    }
}

pub struct CoverageRun {
    pub table: Table,
    /// Grid points where the estimate misses the analytic value by more
    /// than `max(0.02, 3 half-width)`.
    pub mismatches: usize,
}

const COVERAGE_HEADER: [&str; 8] = ["tau", "F", "lambda", "trials", "p_hat", "half_width", "p_analytic", "abs_error"];

/// Simulated against analytic hit probability over τ (sweep range) × Q
/// (`storage_series`) × λ (`lambda_series`). Q must divide N.
pub fn run_verify_coverage(cfg: &ExperimentConfig) -> Result<CoverageRun, HarnessError> {
    if !cfg.simulate {
        return Err(HarnessError::Config("verify-coverage needs simulate = true".into()));
    }
    let taus = cfg.sweep_points(SweepAxis::Tau)?;
    if taus.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(HarnessError::Config("tau grid must lie in [0, 1]".into()));
    }
    let mut points = Vec::new();
    for &q in &cfg.storage_series {
        let storage = q as usize;
        if q != storage as f64 || storage == 0 || !cfg.n_files.is_multiple_of(storage) {
            return Err(vidcache_core::Error::Divisibility { n_files: cfg.n_files, storage }.into());
        }
        for &lambda in &cfg.lambda_series {
            for &tau in &taus {
                points.push((tau, cfg.n_files / storage, lambda));
            }
        }
    }
    let delta = SinrThreshold::new(cfg.delta)?;
    let alpha = PathLossExponent::new(cfg.alpha)?;
    let rows: Vec<(Vec<String>, bool)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(tau, f, lambda))| {
            let sim = cfg.simulator(lambda, point_seed(cfg.seed, i as u64))?;
            let est = simulate_hit_probability(&sim, tau, f)?;
            let analytic = make_constants(delta, alpha, f as f64)?.hit_probability(tau)?;
            let err = (est.p_hat - analytic).abs();
            let ok = err <= COVERAGE_ABS_TOL.max(3.0 * est.half_width_95);
            let row = vec![
                num(tau),
                f.to_string(),
                num(lambda),
                est.trials.to_string(),
                num(est.p_hat),
                num(est.half_width_95),
                num(analytic),
                num(err),
            ];
            Ok((row, ok))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut table = Table::new(&COVERAGE_HEADER);
    let mut mismatches = 0;
    for (row, ok) in rows {
        if !ok {
            log::warn!("simulation mismatch at tau={} F={} lambda={}", row[0], row[1], row[2]);
            mismatches += 1;
        }
        table.push(row);
    }
    Ok(CoverageRun { table, mismatches })
}

const SWEEP_HEADER: [&str; 12] = [
    "gamma",
    "Q",
    "q_min",
    "q_min_uniform",
    "nups_participants",
    "ups_participants",
    "nups_s_nsp",
    "ups_s_nsp",
    "nups_s_bh",
    "ups_s_bh",
    "nups_s_glb",
    "ups_s_glb",
];

fn market_row(cfg: &ExperimentConfig, gamma: f64, storage: f64) -> Result<Vec<String>, HarnessError> {
    let inst = cfg.instance(gamma, storage)?;
    let th = participation_thresholds(&inst.vr_preference, &inst.constants, inst.n_files);
    let n = solve_if(cfg, Scheme::Nups, &inst)?;
    let u = solve_if(cfg, Scheme::Ups, &inst)?;
    let cell =
        |o: &Option<EquilibriumOutcome>, f: fn(&EquilibriumOutcome) -> String| o.as_ref().map(f).unwrap_or_default();
    Ok(vec![
        num(gamma),
        num(storage),
        num(th.min_storage()),
        num(th.min_storage_uniform()),
        cell(&n, |o| o.n_participants.to_string()),
        cell(&u, |o| o.n_participants.to_string()),
        cell(&n, |o| num(o.report.nsp_total)),
        cell(&u, |o| num(o.report.nsp_total)),
        cell(&n, |o| num(o.report.nsp_backhaul_saving)),
        cell(&u, |o| num(o.report.nsp_backhaul_saving)),
        cell(&n, |o| num(o.report.global_total)),
        cell(&u, |o| num(o.report.global_total)),
    ])
}

fn sweep(cfg: &ExperimentConfig, points: Vec<(f64, f64)>) -> Result<Table, HarnessError> {
    let rows: Vec<Vec<String>> =
        points.par_iter().map(|&(gamma, storage)| market_row(cfg, gamma, storage)).collect::<Result<_, _>>()?;
    let mut table = Table::new(&SWEEP_HEADER);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Thresholds, participants and revenues over γ (sweep range), one curve
/// per Q in `storage_series`.
pub fn run_sweep_gamma(cfg: &ExperimentConfig) -> Result<Table, HarnessError> {
    let gammas = cfg.sweep_points(SweepAxis::Gamma)?;
    let points = cfg.storage_series.iter().flat_map(|&q| gammas.iter().map(move |&g| (g, q))).collect();
    sweep(cfg, points)
}

/// Same columns over Q (sweep range), one curve per γ in `gamma_series`.
pub fn run_sweep_storage(cfg: &ExperimentConfig) -> Result<Table, HarnessError> {
    let storages = cfg.sweep_points(SweepAxis::Storage)?;
    let points = cfg.gamma_series.iter().flat_map(|&g| storages.iter().map(move |&q| (g, q))).collect();
    sweep(cfg, points)
}

/// Prices and fractions of each retailer at the config's γ and Q.
pub fn run_per_vr(cfg: &ExperimentConfig) -> Result<Table, HarnessError> {
    let inst = cfg.instance(cfg.gamma, cfg.storage)?;
    let n = solve_if(cfg, Scheme::Nups, &inst)?;
    let u = solve_if(cfg, Scheme::Ups, &inst)?;
    let w = solve_if(cfg, Scheme::Waterfill, &inst)?;
    let price = |o: &Option<EquilibriumOutcome>, v: usize| {
        o.as_ref().map(|o| price_cell(o.prices.as_slice()[v])).unwrap_or_default()
    };
    let frac = |o: &Option<EquilibriumOutcome>, v: usize| {
        o.as_ref().map(|o| num(o.fractions.as_slice()[v])).unwrap_or_default()
    };
    let mut table =
        Table::new(&["v", "q", "nups_price", "ups_price", "nups_fraction", "ups_fraction", "waterfill_fraction"]);
    for v in 0..inst.n_vrs() {
        table.push(vec![
            (v + 1).to_string(),
            num(inst.vr_preference[v]),
            price(&n, v),
            price(&u, v),
            frac(&n, v),
            frac(&u, v),
            frac(&w, v),
        ]);
    }
    Ok(table)
}

/// Full equilibrium of every selected scheme: one `vr` row per retailer and
/// one `summary` row per scheme.
pub fn run_solve(cfg: &ExperimentConfig) -> Result<Table, HarnessError> {
    let inst = cfg.instance(cfg.gamma, cfg.storage)?;
    let mut table = Table::new(&[
        "record",
        "scheme",
        "index",
        "price",
        "fraction",
        "surcharge",
        "rent",
        "profit",
        "participants",
        "s_rt",
        "s_bh",
        "s_nsp",
        "s_glb",
    ]);
    for scheme in cfg.scheme_list()? {
        let o = solve(scheme, &inst, cfg.verify)?;
        let r = &o.report;
        for v in 0..inst.n_vrs() {
            let mut row = vec![
                "vr".to_string(),
                scheme.to_string(),
                (v + 1).to_string(),
                price_cell(o.prices.as_slice()[v]),
                num(o.fractions.as_slice()[v]),
                num(r.vr_surcharge[v]),
                num(r.vr_rent[v]),
                num(r.vr_profits[v]),
            ];
            row.extend(std::iter::repeat_n(String::new(), 5));
            table.push(row);
        }
        let mut row = vec!["summary".to_string(), scheme.to_string()];
        row.extend(std::iter::repeat_n(String::new(), 6));
        row.extend([
            o.n_participants.to_string(),
            num(r.nsp_leasing),
            num(r.nsp_backhaul_saving),
            num(r.nsp_total),
            num(r.global_total),
        ]);
        table.push(row);
    }
    Ok(table)
}
