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

//! Stackelberg game between the NSP (leader, posts SBS rental prices) and
//! the retailers (followers, choose the fraction of SBSs to rent).
//!
//! Followers best-respond in closed form. The leader's problem is solved per
//! participant count `u`: only the `u` most popular retailers are kept, the
//! SBS budget binds, and the best `u` below the storage-dependent bracket is
//! chosen. Uniform pricing restricts the leader to one shared price and
//! coincides with the water-filling maximiser of the sum profit.

use std::fmt;

use crate::catalog::PopularityVectors;
use crate::coverage::{make_constants, CoverageConstants};
use crate::economics::{profit_report, EconomicConfig, FractionVector, GammaVector, Price, PriceVector, ProfitReport};
use crate::special::{PathLossExponent, SinrThreshold};
use crate::{Error, Result};

mod pricing;
mod verify;
mod waterfill;

pub use pricing::{
    nups_closed_form_profit, nups_objective, nups_prices_for_u, nups_solve, ups_objective, ups_price_for_u, ups_solve,
};
pub use verify::{verify_equilibrium, LeaderObjective, VerificationRecord, VERIFY_REL_TOL};
pub use waterfill::waterfill_solve;

/// Absolute slack below which storage equal to a threshold falls in the
/// lower participation bracket, scaled by `max(1, |U_v|)`.
pub const BRACKET_TOL: f64 = 1e-12;

/// One leader/followers market.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance {
    /// Retailer preference `q`, non-increasing.
    pub vr_preference: Vec<f64>,
    pub gammas: GammaVector,
    pub cfg: EconomicConfig,
    pub constants: CoverageConstants,
    /// Catalog size `N`.
    pub n_files: usize,
    /// Effective storage `min(Q, N)`; fractional values are allowed.
    pub storage: f64,
}

impl GameInstance {
    /// Builds the instance for storage `Q` (clamped to `N`); the file-group
    /// count `F = N/Q` may be fractional.
    pub fn new(
        delta: SinrThreshold,
        alpha: PathLossExponent,
        n_files: usize,
        storage: f64,
        vr_preference: Vec<f64>,
        cfg: EconomicConfig,
    ) -> Result<Self> {
        if n_files == 0 {
            return Err(Error::domain("catalog must hold at least one file"));
        }
        if !(storage > 0.0 && storage.is_finite()) {
            return Err(Error::domain(format!("storage must be positive, got {storage}")));
        }
        let storage = storage.min(n_files as f64);
        let constants = make_constants(delta, alpha, n_files as f64 / storage)?;
        Self::assemble(vr_preference, cfg, constants, n_files, storage)
    }

    /// Builds the instance from exact popularity vectors; `constants` must
    /// have been made for the same number of file groups.
    pub fn from_popularity(
        pops: &PopularityVectors,
        cfg: EconomicConfig,
        constants: CoverageConstants,
    ) -> Result<Self> {
        if (constants.f_groups - pops.f_groups).abs() > 1e-12 * pops.f_groups {
            return Err(Error::domain(format!(
                "coverage constants built for F={} but catalog has F={}",
                constants.f_groups, pops.f_groups
            )));
        }
        let n_files = pops.file.len();
        let storage = n_files as f64 / pops.f_groups;
        let mut instance = Self::assemble(pops.vr.clone(), cfg, constants, n_files, storage)?;
        instance.gammas = GammaVector::from_popularity(pops, &cfg);
        Ok(instance)
    }

    fn assemble(
        vr_preference: Vec<f64>,
        cfg: EconomicConfig,
        constants: CoverageConstants,
        n_files: usize,
        storage: f64,
    ) -> Result<Self> {
        cfg.validate()?;
        validate_preference(&vr_preference)?;
        Ok(Self {
            gammas: GammaVector::from_preference(&vr_preference, &cfg),
            vr_preference,
            cfg,
            constants,
            n_files,
            storage,
        })
    }

    pub fn n_vrs(&self) -> usize {
        self.vr_preference.len()
    }

    /// Pricing schemes substitute `s_ld = s_bh` into the leader objective.
    pub(crate) fn require_matched_surcharge(&self) -> Result<()> {
        if self.cfg.local_surcharge == self.cfg.backhaul_cost {
            Ok(())
        } else {
            Err(Error::SurchargeMismatch { surcharge: self.cfg.local_surcharge, backhaul: self.cfg.backhaul_cost })
        }
    }

    /// Fractions the followers choose at `prices`, unchecked against the budget.
    pub fn follower_fractions(&self, prices: &[Price]) -> Result<Vec<f64>> {
        prices
            .iter()
            .zip(self.gammas.as_slice())
            .map(|(p, &g)| match p {
                Price::Posted(s) => best_response_fraction(*s, g, &self.cfg, &self.constants),
                Price::Excluded => Ok(0.0),
            })
            .collect()
    }

    /// Price at which retailer `v` rents exactly `tau > 0`.
    pub fn price_for_fraction(&self, v: usize, tau: f64) -> f64 {
        let CoverageConstants { theta, lambda_big, .. } = self.constants;
        let root = theta * tau + lambda_big;
        self.gammas.as_slice()[v] * lambda_big * self.cfg.local_surcharge / (self.cfg.sbs_intensity * root * root)
    }

    /// Price at or above which retailer `v` rents nothing.
    pub fn opt_out_price(&self, v: usize) -> f64 {
        self.gammas.as_slice()[v] * self.cfg.local_surcharge / (self.constants.lambda_big * self.cfg.sbs_intensity)
    }
}

fn validate_preference(q: &[f64]) -> Result<()> {
    if q.is_empty() {
        return Err(Error::domain("at least one retailer is required"));
    }
    if q.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::domain("retailer preferences must be positive"));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("retailer preferences sum to {total}, not 1")));
    }
    if q.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::domain("retailer preferences must be sorted most popular first"));
    }
    Ok(())
}

/// Follower best response to price `s_v`:
/// `tau = (sqrt(Gamma Lambda s_ld / (Theta^2 lambda)) / sqrt(s_v) - Lambda/Theta)^+`.
///
/// The value is not capped at 1; at low prices a single retailer may ask for
/// more than the whole network, which only the leader's pricing prevents.
pub fn best_response_fraction(
    price: f64,
    gamma: f64,
    cfg: &EconomicConfig,
    constants: &CoverageConstants,
) -> Result<f64> {
    if !(price > 0.0) {
        return Err(Error::domain(format!("best response needs a positive price, got {price}")));
    }
    let CoverageConstants { theta, lambda_big, .. } = *constants;
    let scale = (gamma * lambda_big * cfg.local_surcharge / (theta * theta * cfg.sbs_intensity)).sqrt();
    let tau = (scale / price.sqrt() - lambda_big / theta).max(0.0);
    if tau > 1.0 {
        log::debug!("best response {tau} exceeds the whole SBS population at price {price}");
    }
    Ok(tau)
}

/// Participation thresholds on storage: with non-uniform pricing the `v`
/// most popular retailers can all participate iff `Q > U_v`; with uniform
/// pricing iff `Q > Ubar_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationThresholds {
    pub u_values: Vec<f64>,
    pub u_bar_values: Vec<f64>,
}

impl ParticipationThresholds {
    /// `Q_min`: storage above which every retailer joins under NUPS.
    pub fn min_storage(&self) -> f64 {
        *self.u_values.last().expect("non-empty")
    }

    /// `Q'_min`: the same under UPS.
    pub fn min_storage_uniform(&self) -> f64 {
        *self.u_bar_values.last().expect("non-empty")
    }
}

pub fn participation_thresholds(
    vr_preference: &[f64],
    constants: &CoverageConstants,
    n_files: usize,
) -> ParticipationThresholds {
    let scale = n_files as f64 * constants.c / constants.theta;
    let threshold = |root: fn(f64) -> f64| -> Vec<f64> {
        (0..vr_preference.len())
            .map(|v| {
                let qv = vr_preference[v];
                let excess: f64 = vr_preference[..=v].iter().map(|&qj| root(qj / qv)).sum::<f64>() - (v + 1) as f64;
                scale * excess
            })
            .collect()
    };
    ParticipationThresholds { u_values: threshold(f64::cbrt), u_bar_values: threshold(f64::sqrt) }
}

/// Number of retailers `T` admissible at `storage`: the largest `v` with
/// `U_v < Q`. Storage within [`BRACKET_TOL`] of a threshold counts as not
/// exceeding it.
pub(crate) fn bracket(thresholds: &[f64], storage: f64) -> usize {
    thresholds.iter().take_while(|&&u| storage > u + BRACKET_TOL * u.abs().max(1.0)).count().max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Non-uniform pricing: one price per retailer.
    Nups,
    /// Uniform pricing: one price shared by all participants.
    Ups,
    /// Sum-profit maximising allocation.
    Waterfill,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Nups => "NUPS",
            Scheme::Ups => "UPS",
            Scheme::Waterfill => "WATERFILL",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NUPS" => Ok(Scheme::Nups),
            "UPS" => Ok(Scheme::Ups),
            "WATERFILL" => Ok(Scheme::Waterfill),
            other => Err(Error::domain(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOutcome {
    pub scheme: Scheme,
    pub prices: PriceVector,
    pub fractions: FractionVector,
    /// Participants are exactly retailers `1..=n_participants`.
    pub n_participants: usize,
    pub report: ProfitReport,
    /// Leader objective `S_u` for `u = 1..=T` (empty for water-filling).
    pub candidates: Vec<f64>,
}

impl EquilibriumOutcome {
    /// Outcome when the leader posts `prices` and every follower
    /// best-responds. Participants are counted as the retailers renting a
    /// positive share; the budget is checked.
    pub fn from_prices(scheme: Scheme, instance: &GameInstance, prices: Vec<Price>) -> Result<Self> {
        let fractions = instance.follower_fractions(&prices)?;
        let n_participants = fractions.iter().filter(|&&t| t > 0.0).count();
        Self::assemble(scheme, instance, prices, fractions, n_participants, Vec::new())
    }

    /// Same prices, but with the fractions replaced; the profit report is
    /// recomputed. Useful for checking that off-equilibrium play is caught.
    pub fn with_fractions(&self, instance: &GameInstance, fractions: Vec<f64>) -> Result<Self> {
        Self::assemble(
            self.scheme,
            instance,
            self.prices.as_slice().to_vec(),
            fractions,
            self.n_participants,
            self.candidates.clone(),
        )
    }

    pub(crate) fn assemble(
        scheme: Scheme,
        instance: &GameInstance,
        prices: Vec<Price>,
        fractions: Vec<f64>,
        n_participants: usize,
        candidates: Vec<f64>,
    ) -> Result<Self> {
        let prices = PriceVector::new(prices)?;
        let fractions = FractionVector::new(fractions)?;
        let report = profit_report(&fractions, &prices, &instance.gammas, &instance.cfg, &instance.constants)?;
        Ok(Self { scheme, prices, fractions, n_participants, report, candidates })
    }
}

#[cfg(test)]
mod tests;
