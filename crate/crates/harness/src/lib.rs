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

//! Experiment runners for the vidcache SBS rental market: coverage
//! validation against the Monte-Carlo simulator, parameter sweeps, per-retailer
//! tables and single-instance solves. Every runner returns a [`Table`]; the
//! `vidcache` binary writes it as CSV.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod experiments;
mod table;

pub use config::{ExperimentConfig, SweepAxis};
pub use experiments::{
    point_seed, run_per_vr, run_solve, run_sweep_gamma, run_sweep_storage, run_verify_coverage, CoverageRun,
    COVERAGE_ABS_TOL,
};
pub use table::Table;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] vidcache_core::Error),

    #[error("simulation disagrees with the analytic hit probability at {0} grid point(s)")]
    Mismatch(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// 0 success, 1 configuration (and I/O), 2 failed equilibrium
    /// verification, 3 simulator/analysis mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Model(vidcache_core::Error::VerificationFailure { .. }) => 2,
            HarnessError::Mismatch(_) => 3,
            _ => 1,
        }
    }
}
