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

//! Perturbation checks of the equilibrium conditions.
//!
//! Followers: no retailer gains by renting a different fraction at its
//! posted price. Leader: no price change, with every follower
//! re-best-responding and the SBS budget respected, raises the leader's
//! objective. Non-uniform pricing is checked on the NSP profit. Uniform
//! pricing is checked on the NSP profit under a common price move and on the
//! back-haul saving under arbitrary price moves. Water-filling is checked on
//! the sum profit.

use std::fmt;

use super::{EquilibriumOutcome, GameInstance, Scheme};
use crate::economics::{profit_report, vr_profit, FractionVector, Price, ProfitReport, BUDGET_SLACK};
use crate::{Error, Result};

/// Relative gain above which a deviation counts as profitable.
pub const VERIFY_REL_TOL: f64 = 1e-6;

const STEPS: [f64; 8] = [1e-4, 1e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1, 2e-1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeaderObjective {
    NspProfit,
    BackhaulSaving,
    GlobalProfit,
}

impl LeaderObjective {
    fn of(self, report: &ProfitReport) -> f64 {
        match self {
            LeaderObjective::NspProfit => report.nsp_total,
            LeaderObjective::BackhaulSaving => report.nsp_backhaul_saving,
            LeaderObjective::GlobalProfit => report.global_total,
        }
    }
}

impl fmt::Display for LeaderObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeaderObjective::NspProfit => "NSP profit",
            LeaderObjective::BackhaulSaving => "back-haul saving",
            LeaderObjective::GlobalProfit => "sum profit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    /// Largest relative follower gain found (non-positive at an exact optimum).
    pub follower_max_gain: f64,
    /// Largest relative leader gain found over all checked objectives.
    pub leader_max_gain: f64,
    pub objectives: Vec<LeaderObjective>,
    /// Number of feasible leader deviations evaluated.
    pub leader_evaluations: usize,
}

#[derive(Clone, Copy)]
enum Moves {
    /// Every posted price scaled together.
    Common,
    /// Single prices, budget-preserving pairs, and re-admission of excluded
    /// retailers.
    General,
}

pub fn verify_equilibrium(outcome: &EquilibriumOutcome, instance: &GameInstance) -> Result<VerificationRecord> {
    check_structure(outcome, instance)?;
    let follower_max_gain = check_followers(outcome, instance)?;

    let plan: &[(LeaderObjective, Moves)] = match outcome.scheme {
        Scheme::Nups => &[(LeaderObjective::NspProfit, Moves::General)],
        Scheme::Ups => {
            &[(LeaderObjective::NspProfit, Moves::Common), (LeaderObjective::BackhaulSaving, Moves::General)]
        }
        Scheme::Waterfill => &[(LeaderObjective::GlobalProfit, Moves::General)],
    };
    let mut leader_max_gain = f64::NEG_INFINITY;
    let mut leader_evaluations = 0;
    for &(objective, moves) in plan {
        let (gain, evaluated) = check_leader(outcome, instance, objective, moves)?;
        leader_max_gain = leader_max_gain.max(gain);
        leader_evaluations += evaluated;
    }
    Ok(VerificationRecord {
        follower_max_gain,
        leader_max_gain,
        objectives: plan.iter().map(|(o, _)| *o).collect(),
        leader_evaluations,
    })
}

fn failure(condition: impl Into<String>, magnitude: f64) -> Error {
    Error::VerificationFailure { condition: condition.into(), magnitude }
}

fn check_structure(outcome: &EquilibriumOutcome, instance: &GameInstance) -> Result<()> {
    let v = instance.n_vrs();
    if outcome.prices.len() != v || outcome.fractions.len() != v {
        return Err(Error::Dimension { expected: v, got: outcome.prices.len().min(outcome.fractions.len()) });
    }
    let sum = outcome.fractions.sum();
    if sum > 1.0 + BUDGET_SLACK {
        return Err(failure("SBS budget", sum - 1.0));
    }
    for (i, (&t, p)) in outcome.fractions.as_slice().iter().zip(outcome.prices.as_slice()).enumerate() {
        let inside = i < outcome.n_participants;
        if inside != (t > 0.0) || (inside && p.is_excluded()) {
            return Err(failure(
                format!("participants are the {} most popular retailers (retailer {})", outcome.n_participants, i + 1),
                t,
            ));
        }
    }
    Ok(())
}

fn check_followers(outcome: &EquilibriumOutcome, instance: &GameInstance) -> Result<f64> {
    let gammas = instance.gammas.as_slice();
    let mut worst = f64::NEG_INFINITY;
    for (v, (&tau, price)) in outcome.fractions.as_slice().iter().zip(outcome.prices.as_slice()).enumerate() {
        let Price::Posted(price) = *price else { continue };
        let profit = |t: f64| vr_profit(t, price, gammas[v], &instance.cfg, &instance.constants);
        let base = profit(tau);
        let scale = base.abs().max(outcome.report.vr_surcharge[v]).max(f64::MIN_POSITIVE);
        let mut trial = vec![0.0];
        for h in STEPS {
            trial.extend([tau + h, tau - h, tau * (1.0 + h), tau * (1.0 - h)]);
        }
        for t in trial.into_iter().filter(|&t| t >= 0.0) {
            let gain = (profit(t) - base) / scale;
            worst = worst.max(gain);
            if gain > VERIFY_REL_TOL {
                return Err(failure(format!("retailer {} best response", v + 1), gain));
            }
        }
    }
    Ok(worst)
}

/// Objective value after followers respond to `prices`, or `None` if their
/// demand breaks the SBS budget.
fn evaluate(instance: &GameInstance, prices: &[Price], objective: LeaderObjective) -> Result<Option<f64>> {
    let fractions = instance.follower_fractions(prices)?;
    let sum: f64 = fractions.iter().sum();
    if sum > 1.0 + BUDGET_SLACK || fractions.iter().any(|&t| t > 1.0 + BUDGET_SLACK) {
        return Ok(None);
    }
    let fractions = FractionVector::new(fractions)?;
    let prices = crate::economics::PriceVector::new(prices.to_vec())?;
    let report = profit_report(&fractions, &prices, &instance.gammas, &instance.cfg, &instance.constants)?;
    Ok(Some(objective.of(&report)))
}

/// Lowers `prices[j]` or raises it so that total demand is exactly 1.
fn rebalance(instance: &GameInstance, prices: &mut [Price], j: usize) -> Result<bool> {
    let fractions = instance.follower_fractions(prices)?;
    let others: f64 = fractions.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, t)| t).sum();
    let target = 1.0 - others;
    if target <= 0.0 {
        return Ok(false);
    }
    prices[j] = Price::Posted(instance.price_for_fraction(j, target));
    Ok(true)
}

fn deviations(outcome: &EquilibriumOutcome, instance: &GameInstance, moves: Moves) -> Result<Vec<Vec<Price>>> {
    let base = outcome.prices.as_slice();
    let posted: Vec<usize> = (0..base.len()).filter(|&i| !base[i].is_excluded()).collect();
    let excluded: Vec<usize> = (0..base.len()).filter(|&i| base[i].is_excluded()).collect();
    let scaled = |p: Price, factor: f64| match p {
        Price::Posted(s) => Price::Posted(s * factor),
        Price::Excluded => Price::Excluded,
    };
    let factors = || STEPS.iter().flat_map(|h| [1.0 + h, 1.0 - h]);

    let mut out = Vec::new();
    match moves {
        Moves::Common => {
            for f in factors() {
                out.push(base.iter().map(|&p| scaled(p, f)).collect());
            }
        }
        Moves::General => {
            for &i in &posted {
                for f in factors() {
                    let mut single = base.to_vec();
                    single[i] = scaled(base[i], f);
                    for &j in posted.iter().filter(|&&j| j != i) {
                        let mut pair = single.clone();
                        if rebalance(instance, &mut pair, j)? {
                            out.push(pair);
                        }
                    }
                    out.push(single);
                }
            }
            for &k in &excluded {
                for h in STEPS {
                    let mut admit = base.to_vec();
                    admit[k] = Price::Posted(instance.opt_out_price(k) * (1.0 - h));
                    for &j in &posted {
                        let mut pair = admit.clone();
                        if rebalance(instance, &mut pair, j)? {
                            out.push(pair);
                        }
                    }
                    out.push(admit);
                }
            }
        }
    }
    Ok(out)
}

fn check_leader(
    outcome: &EquilibriumOutcome,
    instance: &GameInstance,
    objective: LeaderObjective,
    moves: Moves,
) -> Result<(f64, usize)> {
    let base = evaluate(instance, outcome.prices.as_slice(), objective)?
        .ok_or_else(|| failure("SBS budget at posted prices", outcome.fractions.sum() - 1.0))?;
    let scale = base.abs().max(f64::MIN_POSITIVE);
    let mut worst = f64::NEG_INFINITY;
    let mut evaluated = 0;
    for prices in deviations(outcome, instance, moves)? {
        let Some(value) = evaluate(instance, &prices, objective)? else { continue };
        evaluated += 1;
        let gain = (value - base) / scale;
        worst = worst.max(gain);
        if gain > VERIFY_REL_TOL {
            return Err(failure(format!("leader optimality ({objective})"), gain));
        }
    }
    Ok((worst, evaluated))
}
