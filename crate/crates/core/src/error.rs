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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("storage {storage} does not divide catalog size {n_files}")]
    Divisibility { n_files: usize, storage: usize },

    #[error("retailer {index} is excluded but rents fraction {fraction}")]
    InconsistentExclusion { index: usize, fraction: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("rented fractions sum to {sum}, exceeding the SBS budget")]
    BudgetExceeded { sum: f64 },

    #[error("pricing schemes require s_ld == s_bh (got s_ld={surcharge}, s_bh={backhaul})")]
    SurchargeMismatch { surcharge: f64, backhaul: f64 },

    #[error("{condition} violated by {magnitude:e}")]
    VerificationFailure { condition: String, magnitude: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
