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

//! Closed-form leader pricing under the non-uniform and uniform schemes.

use super::{bracket, participation_thresholds, EquilibriumOutcome, GameInstance, Scheme};
use crate::economics::{Price, PriceVector};
use crate::Result;

/// `(sum_{j<=u} Gamma_j^(1/3), u Lambda + Theta)`.
fn nups_sums(instance: &GameInstance, u: usize) -> (f64, f64) {
    let sum_cbrt: f64 = instance.gammas.as_slice()[..u].iter().map(|g| g.cbrt()).sum();
    let k = &instance.constants;
    (sum_cbrt, u as f64 * k.lambda_big + k.theta)
}

fn nups_price_list(instance: &GameInstance, u: usize) -> Vec<Price> {
    let (sum_cbrt, denom) = nups_sums(instance, u);
    let k = &instance.constants;
    let scale =
        k.lambda_big * instance.cfg.backhaul_cost * sum_cbrt * sum_cbrt / (instance.cfg.sbs_intensity * denom * denom);
    instance
        .gammas
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, g)| if i < u { Price::Posted(scale * g.cbrt()) } else { Price::Excluded })
        .collect()
}

/// Optimal non-uniform prices when exactly the `u` most popular retailers
/// participate; the rest are excluded.
pub fn nups_prices_for_u(u: usize, instance: &GameInstance) -> Result<PriceVector> {
    check_u(u, instance)?;
    PriceVector::new(nups_price_list(instance, u))
}

/// Leader objective `S_u = sum_{j<=u} (Lambda lambda s_j - Gamma_j s_bh)`
/// at the `u`-participant prices; the NSP profit is `-S_u / Theta`.
pub fn nups_objective(instance: &GameInstance, u: usize) -> f64 {
    let (sum_cbrt, denom) = nups_sums(instance, u);
    let k = &instance.constants;
    let s_bh = instance.cfg.backhaul_cost;
    let lead = k.lambda_big * k.lambda_big * s_bh * sum_cbrt * sum_cbrt / (denom * denom);
    instance.gammas.as_slice()[..u].iter().map(|g| lead * g.cbrt() - g * s_bh).sum()
}

/// NSP profit at the non-uniform equilibrium with `u` participants,
/// `(1/Theta) sum_{j<=u} (Gamma_j s_bh - Lambda^2 s_bh (sum Gamma^(1/3))^2 Gamma_j^(1/3) / (u Lambda + Theta)^2)`.
pub fn nups_closed_form_profit(instance: &GameInstance, u: usize) -> f64 {
    let (sum_cbrt, denom) = nups_sums(instance, u);
    let k = &instance.constants;
    let s_bh = instance.cfg.backhaul_cost;
    let lead = k.lambda_big * k.lambda_big * s_bh * sum_cbrt * sum_cbrt / (denom * denom);
    instance.gammas.as_slice()[..u].iter().map(|g| g * s_bh - lead * g.cbrt()).sum::<f64>() / k.theta
}

fn ups_sums(instance: &GameInstance, u: usize) -> (f64, f64) {
    let sum_sqrt: f64 = instance.gammas.as_slice()[..u].iter().map(|g| g.sqrt()).sum();
    let k = &instance.constants;
    (sum_sqrt, u as f64 * k.lambda_big + k.theta)
}

/// Shared uniform price when the `u` most popular retailers participate.
pub fn ups_price_for_u(instance: &GameInstance, u: usize) -> f64 {
    let (sum_sqrt, denom) = ups_sums(instance, u);
    instance.constants.lambda_big * instance.cfg.backhaul_cost * sum_sqrt * sum_sqrt
        / (instance.cfg.sbs_intensity * denom * denom)
}

fn ups_price_list(instance: &GameInstance, u: usize) -> Vec<Price> {
    let shared = ups_price_for_u(instance, u);
    (0..instance.n_vrs()).map(|i| if i < u { Price::Posted(shared) } else { Price::Excluded }).collect()
}

/// Uniform-pricing leader objective
/// `S_u = u Lambda^2 s_bh (sum_{j<=u} sqrt Gamma_j)^2 / (u Lambda + Theta)^2 - sum_{j<=u} Gamma_j s_bh`.
pub fn ups_objective(instance: &GameInstance, u: usize) -> f64 {
    let (sum_sqrt, denom) = ups_sums(instance, u);
    let k = &instance.constants;
    let s_bh = instance.cfg.backhaul_cost;
    let gamma_total: f64 = instance.gammas.as_slice()[..u].iter().sum();
    u as f64 * k.lambda_big * k.lambda_big * s_bh * sum_sqrt * sum_sqrt / (denom * denom) - gamma_total * s_bh
}

/// `S_u` for `u = 1..=t`, accumulated from factored increments.
///
/// With `a = Gamma_{u+1}^(1/3)`, `A = sum_{j<=u} Gamma_j^(1/3)` and
/// `D = u Lambda + Theta`, the increment `S_{u+1} - S_u` is
/// `s_bh (a - a*)^2 (kappa a + m)` with `a* = Lambda A / D` (the point where
/// retailer `u+1` is priced to exactly zero), `kappa = Lambda^2/(D+Lambda)^2 - 1`
/// and `m = A (D^2/(D+Lambda)^2 - 1)`. Summing the raw objectives instead
/// loses the increment to cancellation when storage sits just above a
/// threshold.
fn nups_candidates(instance: &GameInstance, t: usize) -> Vec<f64> {
    let k = &instance.constants;
    let s_bh = instance.cfg.backhaul_cost;
    let mut out = vec![nups_objective(instance, 1)];
    let mut sum = instance.gammas.as_slice()[0].cbrt();
    for u in 1..t {
        let a = instance.gammas.as_slice()[u].cbrt();
        let d = u as f64 * k.lambda_big + k.theta;
        let d_next = d + k.lambda_big;
        let a_star = k.lambda_big * sum / d;
        let kappa = (k.lambda_big / d_next).powi(2) - 1.0;
        let m = sum * ((d / d_next).powi(2) - 1.0);
        let step = s_bh * (a - a_star).powi(2) * (kappa * a + m);
        out.push(out[u - 1] + step);
        sum += a;
    }
    out
}

/// Uniform-pricing counterpart of [`nups_candidates`]: with
/// `b = sqrt(Gamma_{u+1})` and `B = sum_{j<=u} sqrt(Gamma_j)`, the increment is
/// `s_bh (b - b*)(kappa b + c)` where `b* = Lambda B / D`,
/// `kappa = (u+1) Lambda^2/(D+Lambda)^2 - 1` and
/// `c = -Lambda B D ((u+1)/(D+Lambda)^2 - u/D^2)`.
fn ups_candidates(instance: &GameInstance, t: usize) -> Vec<f64> {
    let k = &instance.constants;
    let s_bh = instance.cfg.backhaul_cost;
    let mut out = vec![ups_objective(instance, 1)];
    let mut sum = instance.gammas.as_slice()[0].sqrt();
    for u in 1..t {
        let b = instance.gammas.as_slice()[u].sqrt();
        let uf = u as f64;
        let d = uf * k.lambda_big + k.theta;
        let d_next = d + k.lambda_big;
        let b_star = k.lambda_big * sum / d;
        let kappa = (uf + 1.0) * (k.lambda_big / d_next).powi(2) - 1.0;
        let c = -k.lambda_big * sum * d * ((uf + 1.0) / (d_next * d_next) - uf / (d * d));
        let step = s_bh * (b - b_star) * (kappa * b + c);
        out.push(out[u - 1] + step);
        sum += b;
    }
    out
}

fn check_u(u: usize, instance: &GameInstance) -> Result<()> {
    if u == 0 || u > instance.n_vrs() {
        return Err(crate::Error::domain(format!("participant count must lie in 1..={}, got {u}", instance.n_vrs())));
    }
    Ok(())
}

/// Index (1-based) of the smallest objective; ties go to the smaller count.
fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best + 1
}

fn solve_with(
    instance: &GameInstance,
    scheme: Scheme,
    thresholds: &[f64],
    candidates_for: fn(&GameInstance, usize) -> Vec<f64>,
    prices_for: fn(&GameInstance, usize) -> Vec<Price>,
) -> Result<EquilibriumOutcome> {
    instance.require_matched_surcharge()?;
    let mut admissible = bracket(thresholds, instance.storage);
    loop {
        let candidates = candidates_for(instance, admissible);
        let u_hat = argmin_first(&candidates);
        let prices = prices_for(instance, u_hat);
        let fractions = instance.follower_fractions(&prices)?;
        if u_hat == 1 || fractions[..u_hat].iter().all(|&t| t > 0.0) {
            return EquilibriumOutcome::assemble(scheme, instance, prices, fractions, u_hat, candidates);
        }
        // Storage sat on a threshold up to rounding: drop to the lower bracket.
        admissible = u_hat - 1;
    }
}

/// Stackelberg equilibrium under non-uniform pricing.
pub fn nups_solve(instance: &GameInstance) -> Result<EquilibriumOutcome> {
    let thresholds = participation_thresholds(&instance.vr_preference, &instance.constants, instance.n_files);
    solve_with(instance, Scheme::Nups, &thresholds.u_values, nups_candidates, nups_price_list)
}

/// Stackelberg equilibrium under uniform pricing.
pub fn ups_solve(instance: &GameInstance) -> Result<EquilibriumOutcome> {
    let thresholds = participation_thresholds(&instance.vr_preference, &instance.constants, instance.n_files);
    solve_with(instance, Scheme::Ups, &thresholds.u_bar_values, ups_candidates, ups_price_list)
}
