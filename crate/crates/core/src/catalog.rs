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

//! Zipf popularity for files, file groups and retailers.
//!
//! All vectors are ordered by popularity: index 0 is the most requested file
//! (or the most preferred retailer). Documentation and file formats number
//! them from 1.

use crate::{Error, Result};

/// Default file-popularity exponent when a configuration leaves it unset.
pub const DEFAULT_FILE_EXPONENT: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogConfig {
    /// Catalog size `N`.
    pub n_files: usize,
    /// Files cached per SBS, `Q`.
    pub storage: usize,
    /// Zipf exponent `beta` of file popularity.
    pub file_exponent: f64,
}

impl CatalogConfig {
    pub fn new(n_files: usize, storage: usize, file_exponent: f64) -> Result<Self> {
        let cfg = Self { n_files, storage, file_exponent };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_files == 0 {
            return Err(Error::domain("catalog must hold at least one file"));
        }
        if self.storage == 0 || self.storage > self.n_files {
            return Err(Error::domain(format!("storage must lie in 1..={}, got {}", self.n_files, self.storage)));
        }
        if !(self.file_exponent >= 0.0 && self.file_exponent.is_finite()) {
            return Err(Error::domain(format!("file exponent must be non-negative, got {}", self.file_exponent)));
        }
        Ok(())
    }

    /// Number of file groups `F = N/Q`, possibly fractional.
    pub fn f_groups(&self) -> f64 {
        self.n_files as f64 / self.storage as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VrConfig {
    /// Number of retailers `V`.
    pub n_vrs: usize,
    /// Zipf exponent `gamma` of retailer preference. Zero gives uniform
    /// preference.
    pub vr_exponent: f64,
}

impl VrConfig {
    pub fn new(n_vrs: usize, vr_exponent: f64) -> Result<Self> {
        let cfg = Self { n_vrs, vr_exponent };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vrs == 0 {
            return Err(Error::domain("at least one retailer is required"));
        }
        if !(self.vr_exponent >= 0.0 && self.vr_exponent.is_finite()) {
            return Err(Error::domain(format!("retailer exponent must be non-negative, got {}", self.vr_exponent)));
        }
        Ok(())
    }
}

/// Normalised Zipf weights `(1/n^s) / sum_j (1/j^s)` for `n = 1..=len`.
pub fn zipf(len: usize, exponent: f64) -> Vec<f64> {
    let raw: Vec<f64> = (1..=len).map(|n| (n as f64).powf(-exponent)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Request probability `t_n` of each file.
pub fn file_popularity(config: &CatalogConfig) -> Vec<f64> {
    zipf(config.n_files, config.file_exponent)
}

/// Request probability `p_f` of each file group: consecutive blocks of
/// `storage` files summed together.
pub fn group_popularity(file_pop: &[f64], storage: usize) -> Result<Vec<f64>> {
    if storage == 0 || file_pop.is_empty() || !file_pop.len().is_multiple_of(storage) {
        return Err(Error::Divisibility { n_files: file_pop.len(), storage });
    }
    Ok(file_pop.chunks(storage).map(|g| g.iter().sum()).collect())
}

/// Retailer preference `q_v`.
pub fn vr_preference(config: &VrConfig) -> Vec<f64> {
    zipf(config.n_vrs, config.vr_exponent)
}

/// The three popularity vectors of one catalog/retailer setup.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityVectors {
    /// `t`, length `N`.
    pub file: Vec<f64>,
    /// `p`, length `F`.
    pub group: Vec<f64>,
    /// `q`, length `V`.
    pub vr: Vec<f64>,
    pub f_groups: f64,
}

impl PopularityVectors {
    /// Requires `Q | N`; analytic code paths that tolerate fractional `F`
    /// only need [`vr_preference`].
    pub fn build(catalog: &CatalogConfig, vrs: &VrConfig) -> Result<Self> {
        catalog.validate()?;
        vrs.validate()?;
        let file = file_popularity(catalog);
        let group = group_popularity(&file, catalog.storage)?;
        Ok(Self { f_groups: group.len() as f64, file, group, vr: vr_preference(vrs) })
    }
}
