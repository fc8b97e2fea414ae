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

//! Profit model of the NSP and the retailers.
//!
//! All profits are per unit area per unit period. The NSP earns rent from
//! leasing SBSs and saves back-haul cost on every cache hit; each retailer
//! earns a local-download surcharge on its cache hits and pays rent.

use std::fmt;

use crate::catalog::PopularityVectors;
use crate::coverage::CoverageConstants;
use crate::{Error, Result};

/// Slack allowed on the SBS budget `sum(tau) <= 1`.
pub const BUDGET_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomicConfig {
    /// Back-haul cost per video, `s_bh`.
    pub backhaul_cost: f64,
    /// Local-download surcharge per video, `s_ld`.
    pub local_surcharge: f64,
    /// Video requests per user per unit period, `K`.
    pub requests_per_mu: f64,
    /// User intensity `zeta` (per km^2).
    pub mu_intensity: f64,
    /// SBS intensity `lambda` (per km^2).
    pub sbs_intensity: f64,
}

impl EconomicConfig {
    /// Configuration with the surcharge set equal to the back-haul cost.
    pub fn new(backhaul_cost: f64, requests_per_mu: f64, mu_intensity: f64, sbs_intensity: f64) -> Result<Self> {
        Self::with_surcharge(backhaul_cost, backhaul_cost, requests_per_mu, mu_intensity, sbs_intensity)
    }

    pub fn with_surcharge(
        backhaul_cost: f64,
        local_surcharge: f64,
        requests_per_mu: f64,
        mu_intensity: f64,
        sbs_intensity: f64,
    ) -> Result<Self> {
        let cfg = Self { backhaul_cost, local_surcharge, requests_per_mu, mu_intensity, sbs_intensity };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("s_bh", self.backhaul_cost),
            ("s_ld", self.local_surcharge),
            ("K", self.requests_per_mu),
            ("zeta", self.mu_intensity),
            ("lambda", self.sbs_intensity),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    /// Requests per unit area per unit period, `zeta * K`.
    pub fn request_density(&self) -> f64 {
        self.mu_intensity * self.requests_per_mu
    }
}

/// Rental price posted to one retailer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Price {
    Posted(f64),
    /// Priced out of the market; never rents.
    Excluded,
}

impl Price {
    pub fn value(self) -> Option<f64> {
        match self {
            Price::Posted(s) => Some(s),
            Price::Excluded => None,
        }
    }

    pub fn is_excluded(self) -> bool {
        matches!(self, Price::Excluded)
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::Posted(s) => write!(f, "{s}"),
            Price::Excluded => f.write_str("EXCLUDED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector(Vec<Price>);

impl PriceVector {
    pub fn new(prices: Vec<Price>) -> Result<Self> {
        for p in &prices {
            if let Price::Posted(s) = p {
                if !(*s >= 0.0 && s.is_finite()) {
                    return Err(Error::domain(format!("posted price must be finite and >= 0, got {s}")));
                }
            }
        }
        Ok(Self(prices))
    }

    pub fn as_slice(&self) -> &[Price] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn posted_count(&self) -> usize {
        self.0.iter().filter(|p| !p.is_excluded()).count()
    }
}

/// Fractions of all SBSs rented by each retailer.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionVector(Vec<f64>);

impl FractionVector {
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        let mut sum = 0.0;
        for &t in &fractions {
            if !(0.0..=1.0 + BUDGET_SLACK).contains(&t) {
                return Err(Error::domain(format!("fraction must lie in [0, 1], got {t}")));
            }
            sum += t;
        }
        if sum > 1.0 + BUDGET_SLACK {
            return Err(Error::BudgetExceeded { sum });
        }
        Ok(Self(fractions))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Request density aimed at each retailer, `Gamma_v = sum_f p_f q_v zeta K`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector(Vec<f64>);

impl GammaVector {
    /// Literal double sum over file groups.
    pub fn from_popularity(pops: &PopularityVectors, cfg: &EconomicConfig) -> Self {
        let density = cfg.request_density();
        Self(pops.vr.iter().map(|&q| pops.group.iter().map(|&p| p * q * density).sum()).collect())
    }

    /// `q_v zeta K`, the same quantity once group popularity has summed to 1.
    pub fn from_preference(vr_preference: &[f64], cfg: &EconomicConfig) -> Self {
        let density = cfg.request_density();
        Self(vr_preference.iter().map(|&q| q * density).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfitReport {
    /// `S^RT`.
    pub nsp_leasing: f64,
    /// `S^BH`.
    pub nsp_backhaul_saving: f64,
    /// `S^NSP = S^RT + S^BH`.
    pub nsp_total: f64,
    /// `S_v^LD`.
    pub vr_surcharge: Vec<f64>,
    /// `S_v^RT`.
    pub vr_rent: Vec<f64>,
    /// `S_v^VR = S_v^LD - S_v^RT`.
    pub vr_profits: Vec<f64>,
    /// `S^GLB = S^NSP + sum_v S_v^VR`.
    pub global_total: f64,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

fn hit(tau: f64, constants: &CoverageConstants) -> f64 {
    // FractionVector admits a rounding slack above 1.
    crate::coverage::hit_probability(tau.min(1.0), constants).expect("validated fraction")
}

/// Rent paid by each retailer, `tau_v lambda s_v`.
fn rents(tau: &FractionVector, prices: &PriceVector, lambda: f64) -> Result<Vec<f64>> {
    check_len(tau.len(), prices.len())?;
    tau.as_slice()
        .iter()
        .zip(prices.as_slice())
        .enumerate()
        .map(|(index, (&t, &p))| match p {
            Price::Posted(s) => Ok(t * lambda * s),
            Price::Excluded if t > 0.0 => Err(Error::InconsistentExclusion { index, fraction: t }),
            Price::Excluded => Ok(0.0),
        })
        .collect()
}

/// NSP leasing income `S^RT = sum_j tau_j lambda s_j`.
pub fn leasing_income(tau: &FractionVector, prices: &PriceVector, lambda: f64) -> Result<f64> {
    Ok(rents(tau, prices, lambda)?.iter().sum())
}

/// Back-haul saving `S^BH` as the double sum over file groups and retailers.
pub fn backhaul_saving(
    tau: &FractionVector,
    pops: &PopularityVectors,
    cfg: &EconomicConfig,
    constants: &CoverageConstants,
) -> Result<f64> {
    check_len(pops.vr.len(), tau.len())?;
    let density = cfg.request_density();
    let mut total = 0.0;
    for &p in &pops.group {
        for (&q, &t) in pops.vr.iter().zip(tau.as_slice()) {
            total += p * q * density * hit(t, constants) * cfg.backhaul_cost;
        }
    }
    Ok(total)
}

/// Back-haul saving from the collapsed form `sum_v Gamma_v Pr(E_v) s_bh`.
pub fn backhaul_saving_collapsed(
    tau: &FractionVector,
    gammas: &GammaVector,
    cfg: &EconomicConfig,
    constants: &CoverageConstants,
) -> Result<f64> {
    check_len(gammas.len(), tau.len())?;
    Ok(tau.as_slice().iter().zip(gammas.as_slice()).map(|(&t, &g)| g * hit(t, constants) * cfg.backhaul_cost).sum())
}

/// Profit of one retailer renting fraction `tau` at `price`.
///
/// Unlike the vector APIs this accepts any `tau >= 0`, which the follower
/// optimisation and the equilibrium checks need.
pub fn vr_profit(tau: f64, price: f64, gamma: f64, cfg: &EconomicConfig, constants: &CoverageConstants) -> f64 {
    let CoverageConstants { theta, lambda_big, .. } = *constants;
    gamma * cfg.local_surcharge * tau / (theta * tau + lambda_big) - cfg.sbs_intensity * price * tau
}

pub fn profit_report(
    tau: &FractionVector,
    prices: &PriceVector,
    gammas: &GammaVector,
    cfg: &EconomicConfig,
    constants: &CoverageConstants,
) -> Result<ProfitReport> {
    check_len(gammas.len(), tau.len())?;
    let vr_rent = rents(tau, prices, cfg.sbs_intensity)?;
    let hits: Vec<f64> = tau.as_slice().iter().map(|&t| hit(t, constants)).collect();
    let vr_surcharge: Vec<f64> =
        gammas.as_slice().iter().zip(&hits).map(|(g, h)| g * h * cfg.local_surcharge).collect();
    let nsp_backhaul_saving: f64 = gammas.as_slice().iter().zip(&hits).map(|(g, h)| g * h * cfg.backhaul_cost).sum();
    let nsp_leasing: f64 = vr_rent.iter().sum();
    let vr_profits: Vec<f64> = vr_surcharge.iter().zip(&vr_rent).map(|(ld, rt)| ld - rt).collect();
    let nsp_total = nsp_leasing + nsp_backhaul_saving;
    let global_total = nsp_total + vr_profits.iter().sum::<f64>();
    Ok(ProfitReport { nsp_leasing, nsp_backhaul_saving, nsp_total, vr_surcharge, vr_rent, vr_profits, global_total })
}
