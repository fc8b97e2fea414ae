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

//! Monte-Carlo estimate of the cache-hit probability.
//!
//! Each trial drops a Poisson number of SBSs uniformly on a disc of radius
//! `window_radius` km around a typical user at the origin, marks each SBS as
//! caching the requested group with probability `tau/F`, and draws unit-mean
//! exponential (Rayleigh power) fades. The user is served by the nearest
//! marked SBS; every other SBS, marked or not, interferes. A trial with no
//! marked SBS is a miss.
//!
//! Randomness: trial `t` uses its own ChaCha8 stream (`seed_from_u64(seed)`
//! then `set_stream(t)`), so estimates do not depend on how trials are
//! scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::special::{PathLossExponent, SinrThreshold};
use crate::{Error, Result};

/// Minimum expected number of SBSs in the window.
pub const MIN_EXPECTED_SBS: f64 = 100.0;
pub const DEFAULT_WINDOW_RADIUS_KM: f64 = 5.0;
pub const DEFAULT_TRIALS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// SBSs per km².
    pub sbs_intensity: f64,
    /// Users per km²; carried for completeness, the typical user is fixed.
    pub mu_intensity: f64,
    /// Transmit power in W.
    pub tx_power: f64,
    /// Noise power in W.
    pub noise_power: f64,
    pub alpha: PathLossExponent,
    pub delta: SinrThreshold,
    /// Disc radius in km.
    pub window_radius: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in
            [("sbs_intensity", self.sbs_intensity), ("tx_power", self.tx_power), ("window_radius", self.window_radius)]
        {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.noise_power >= 0.0 && self.noise_power.is_finite()) {
            return Err(Error::domain(format!("noise power must be non-negative, got {}", self.noise_power)));
        }
        if !(self.mu_intensity >= 0.0) {
            return Err(Error::domain(format!("user intensity must be non-negative, got {}", self.mu_intensity)));
        }
        let expected = self.expected_sbs_count();
        if expected < MIN_EXPECTED_SBS {
            return Err(Error::domain(format!(
                "window holds {expected:.1} SBSs on average; at least {MIN_EXPECTED_SBS} are required"
            )));
        }
        if self.trials == 0 {
            return Err(Error::domain("at least one trial is required"));
        }
        Ok(())
    }

    pub fn expected_sbs_count(&self) -> f64 {
        self.sbs_intensity * std::f64::consts::PI * self.window_radius * self.window_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationEstimate {
    pub p_hat: f64,
    pub trials: usize,
    /// `1.96 sqrt(p(1-p)/n)`.
    pub half_width_95: f64,
}

impl SimulationEstimate {
    pub fn from_hits(hits: u64, trials: usize) -> Self {
        let n = trials as f64;
        let p_hat = hits as f64 / n;
        Self { p_hat, trials, half_width_95: 1.96 * (p_hat * (1.0 - p_hat) / n).sqrt() }
    }
}

/// Homogeneous PPP on the disc of radius `radius` centred at the origin.
pub fn sample_hppp<R: Rng + ?Sized>(intensity: f64, radius: f64, rng: &mut R) -> Result<Vec<[f64; 2]>> {
    if !(intensity > 0.0 && radius > 0.0 && intensity.is_finite() && radius.is_finite()) {
        return Err(Error::domain(format!("HPPP needs positive intensity and radius, got {intensity} and {radius}")));
    }
    let mean = intensity * std::f64::consts::PI * radius * radius;
    let count =
        Poisson::new(mean).map_err(|e| Error::domain(format!("Poisson mean {mean}: {e}")))?.sample(rng) as usize;
    Ok((0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            [r * theta.cos(), r * theta.sin()]
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct TrialOutcome {
    pub total: usize,
    pub marked: usize,
    pub hit: bool,
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub(crate) fn run_trial(cfg: &SimConfig, mark_probability: f64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, trial);
    let points = sample_hppp(cfg.sbs_intensity, cfg.window_radius, &mut rng)?;
    let half_alpha = cfg.alpha.get() / 2.0;

    let mut powers = Vec::with_capacity(points.len());
    let mut marked = 0;
    // (squared distance, index) of the nearest marked SBS
    let mut serving: Option<(f64, usize)> = None;
    for (i, [x, y]) in points.iter().enumerate() {
        let is_marked = rng.random::<f64>() < mark_probability;
        let fade: f64 = Exp1.sample(&mut rng);
        let dist2 = x * x + y * y;
        powers.push(cfg.tx_power * fade * dist2.powf(-half_alpha));
        if is_marked {
            marked += 1;
            if serving.is_none_or(|(d, _)| dist2 < d) {
                serving = Some((dist2, i));
            }
        }
    }
    let hit = match serving {
        None => false,
        Some((_, s)) => {
            let interference: f64 = powers.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, p)| p).sum();
            powers[s] / (interference + cfg.noise_power) >= cfg.delta.get()
        }
    };
    Ok(TrialOutcome { total: points.len(), marked, hit })
}

fn check_request(cfg: &SimConfig, tau: f64, f_groups: usize) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("fraction must lie in [0,1], got {tau}")));
    }
    if f_groups == 0 {
        return Err(Error::domain("at least one file group is required"));
    }
    Ok(tau / f_groups as f64)
}

/// Empirical hit probability for a retailer renting fraction `tau` with `F`
/// file groups. Trials run in parallel; the result does not depend on the
/// thread count.
pub fn simulate_hit_probability(cfg: &SimConfig, tau: f64, f_groups: usize) -> Result<SimulationEstimate> {
    let mark = check_request(cfg, tau, f_groups)?;
    let hits = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, mark, t).map(|o| o.hit as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SimulationEstimate::from_hits(hits, cfg.trials))
}
