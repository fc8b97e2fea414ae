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

//! Experiment configuration.
//!
//! A flat TOML file whose keys mirror the model symbols. Every key is
//! optional; defaults are the reference network (α=4, P=2 W, σ²=1e-10 W,
//! δ=0.01, N=500, V=15, ζ=50/km², K=10, s_bh=1).
//!
//! ```toml
//! scenario = "gamma-sweep"
//! alpha = 4.0
//! delta = 0.01
//! P = 2.0            # W
//! sigma2 = 1e-10     # W
//! lambda = 10.0      # SBSs per km²
//! zeta = 50.0        # users per km²
//! K = 10.0           # requests per user per month
//! s_bh = 1.0
//! # s_ld = 1.0       # defaults to s_bh
//! N = 500
//! Q = 500
//! beta = 0.8
//! V = 15
//! gamma = 0.5
//! sweep = "gamma"    # gamma | storage | tau; must match the subcommand if set
//! sweep_start = 0.1
//! sweep_stop = 1.0
//! sweep_step = 0.1
//! storage_series = [10, 50, 100, 500]   # Q curves for sweep-gamma and verify-coverage
//! gamma_series = [0.3, 1.0]             # γ curves for sweep-storage
//! lambda_series = [10, 20, 30]          # λ curves for verify-coverage
//! schemes = ["NUPS", "UPS", "WATERFILL"]
//! simulate = true
//! verify = true
//! window_radius = 5.0   # km
//! trials = 2000
//! seed = 1
//! out = "results.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use vidcache_core::catalog::{vr_preference, VrConfig, DEFAULT_FILE_EXPONENT};
use vidcache_core::economics::EconomicConfig;
use vidcache_core::equilibrium::{GameInstance, Scheme};
use vidcache_core::sim::{SimConfig, DEFAULT_TRIALS, DEFAULT_WINDOW_RADIUS_KM};
use vidcache_core::special::{PathLossExponent, SinrThreshold};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Gamma,
    Storage,
    Tau,
}

impl SweepAxis {
    fn default_range(self) -> (f64, f64, f64) {
        match self {
            SweepAxis::Gamma | SweepAxis::Tau => (0.1, 1.0, 0.1),
            SweepAxis::Storage => (10.0, 500.0, 10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub alpha: f64,
    pub delta: f64,
    #[serde(rename = "P")]
    pub tx_power: f64,
    pub sigma2: f64,
    pub lambda: f64,
    pub zeta: f64,
    #[serde(rename = "K")]
    pub requests: f64,
    pub s_bh: f64,
    pub s_ld: Option<f64>,
    #[serde(rename = "N")]
    pub n_files: usize,
    #[serde(rename = "Q")]
    pub storage: f64,
    pub beta: f64,
    #[serde(rename = "V")]
    pub n_vrs: usize,
    pub gamma: f64,
    pub sweep: Option<SweepAxis>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_step: Option<f64>,
    pub storage_series: Vec<f64>,
    pub gamma_series: Vec<f64>,
    pub lambda_series: Vec<f64>,
    pub schemes: Vec<String>,
    pub simulate: bool,
    pub verify: bool,
    pub window_radius: f64,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: "default".into(),
            alpha: 4.0,
            delta: 0.01,
            tx_power: 2.0,
            sigma2: 1e-10,
            lambda: 10.0,
            zeta: 50.0,
            requests: 10.0,
            s_bh: 1.0,
            s_ld: None,
            n_files: 500,
            storage: 500.0,
            beta: DEFAULT_FILE_EXPONENT,
            n_vrs: 15,
            gamma: 0.5,
            sweep: None,
            sweep_start: None,
            sweep_stop: None,
            sweep_step: None,
            storage_series: vec![10.0, 50.0, 100.0, 500.0],
            gamma_series: vec![0.3, 1.0],
            lambda_series: vec![10.0, 20.0, 30.0],
            schemes: vec!["NUPS".into(), "UPS".into(), "WATERFILL".into()],
            simulate: true,
            verify: true,
            window_radius: DEFAULT_WINDOW_RADIUS_KM,
            trials: DEFAULT_TRIALS,
            seed: 1,
            out: None,
        }
    }
}

fn config_error(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl ExperimentConfig {
    /// Reads `path` (if any) and applies `key=value` overrides, where the
    /// value is TOML (bare words are taken as strings).
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, HarnessError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
                text.parse::<toml::Table>().map_err(|e| config_error(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for item in overrides {
            let (key, value) =
                item.split_once('=').ok_or_else(|| config_error(format!("override {item:?} is not key=value")))?;
            let (key, value) = (key.trim(), value.trim());
            let parsed = format!("v = {value}")
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()));
            table.insert(key.to_string(), parsed);
        }
        let cfg: Self =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| config_error(e.to_string()))?;
        cfg.validate().map_err(|e| match e {
            HarnessError::Model(m) => config_error(m.to_string()),
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        PathLossExponent::new(self.alpha)?;
        SinrThreshold::new(self.delta)?;
        self.economics()?;
        VrConfig::new(self.n_vrs, self.gamma)?;
        if self.n_files == 0 {
            return Err(config_error("N must be positive"));
        }
        if !(self.storage > 0.0) {
            return Err(config_error("Q must be positive"));
        }
        if !(self.beta >= 0.0) {
            return Err(config_error("beta must be non-negative"));
        }
        if !(self.tx_power > 0.0) || !(self.sigma2 >= 0.0) {
            return Err(config_error("P must be positive and sigma2 non-negative"));
        }
        if self.trials == 0 {
            return Err(config_error("trials must be positive"));
        }
        for (name, s) in [
            ("storage_series", &self.storage_series),
            ("gamma_series", &self.gamma_series),
            ("lambda_series", &self.lambda_series),
        ] {
            if s.is_empty() {
                return Err(config_error(format!("{name} must not be empty")));
            }
        }
        self.scheme_list()?;
        Ok(())
    }

    pub fn scheme_list(&self) -> Result<Vec<Scheme>, HarnessError> {
        if self.schemes.is_empty() {
            return Err(config_error("at least one scheme is required"));
        }
        self.schemes.iter().map(|s| s.parse().map_err(HarnessError::from)).collect()
    }

    pub fn runs(&self, scheme: Scheme) -> bool {
        self.scheme_list().map(|l| l.contains(&scheme)).unwrap_or(false)
    }

    pub fn economics(&self) -> Result<EconomicConfig, HarnessError> {
        Ok(EconomicConfig::with_surcharge(
            self.s_bh,
            self.s_ld.unwrap_or(self.s_bh),
            self.requests,
            self.zeta,
            self.lambda,
        )?)
    }

    /// Market with this config's parameters, overriding γ and Q.
    pub fn instance(&self, gamma: f64, storage: f64) -> Result<GameInstance, HarnessError> {
        let q = vr_preference(&VrConfig::new(self.n_vrs, gamma)?);
        Ok(GameInstance::new(
            SinrThreshold::new(self.delta)?,
            PathLossExponent::new(self.alpha)?,
            self.n_files,
            storage,
            q,
            self.economics()?,
        )?)
    }

    pub fn simulator(&self, sbs_intensity: f64, seed: u64) -> Result<SimConfig, HarnessError> {
        let cfg = SimConfig {
            sbs_intensity,
            mu_intensity: self.zeta,
            tx_power: self.tx_power,
            noise_power: self.sigma2,
            alpha: PathLossExponent::new(self.alpha)?,
            delta: SinrThreshold::new(self.delta)?,
            window_radius: self.window_radius,
            trials: self.trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Grid points along `axis`: `start, start+step, ..., <= stop`, each
    /// rounded to 1e-12 so that decimal steps land on the intended values.
    pub fn sweep_points(&self, axis: SweepAxis) -> Result<Vec<f64>, HarnessError> {
        if let Some(set) = self.sweep {
            if set != axis {
                return Err(config_error(format!("config sweeps {set:?} but the command sweeps {axis:?}")));
            }
        }
        let (d0, d1, d2) = axis.default_range();
        let (start, stop, step) =
            (self.sweep_start.unwrap_or(d0), self.sweep_stop.unwrap_or(d1), self.sweep_step.unwrap_or(d2));
        if !(step > 0.0 && step.is_finite()) {
            return Err(config_error(format!("sweep_step must be positive, got {step}")));
        }
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err(config_error(format!("empty sweep range {start}..{stop}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
    }
}
