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

//! Closed-form cache-hit probability.
//!
//! A typical user at the origin requests a file of group `f` from retailer
//! `v`. The SBSs rented by `v` that cache `f` form a thinned Poisson process
//! of intensity `tau_v * lambda / F`. The request is a cache hit when the
//! nearest of them delivers SINR at least `delta` against Rayleigh-faded
//! interference from every other SBS. Noise is neglected, so the result
//! depends on neither the SBS intensity nor the transmit power.

use crate::special::{a_factor, c_factor, PathLossExponent, SinrThreshold};
use crate::{Error, Result};

/// Constants shared by every closed-form expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageConstants {
    /// `A(delta, alpha)`.
    pub a: f64,
    /// `C(delta, alpha)`.
    pub c: f64,
    /// `Theta = A - C + 1`.
    pub theta: f64,
    /// `Lambda = C * F`.
    pub lambda_big: f64,
    /// Number of file groups `F` the constants were built for.
    pub f_groups: f64,
}

pub fn make_constants(delta: SinrThreshold, alpha: PathLossExponent, f_groups: f64) -> Result<CoverageConstants> {
    if !(f_groups >= 1.0 && f_groups.is_finite()) {
        return Err(Error::domain(format!("number of file groups must be >= 1, got {f_groups}")));
    }
    let a = a_factor(delta, alpha);
    let c = c_factor(delta, alpha);
    let theta = a - c + 1.0;
    if theta <= 0.0 {
        return Err(Error::domain(format!(
            "A - C + 1 = {theta} is not positive for delta={}, alpha={}",
            delta.get(),
            alpha.get()
        )));
    }
    Ok(CoverageConstants { a, c, theta, lambda_big: c * f_groups, f_groups })
}

impl CoverageConstants {
    /// Same `A` and `C`, different number of file groups.
    pub fn with_f_groups(&self, f_groups: f64) -> Result<Self> {
        if !(f_groups >= 1.0 && f_groups.is_finite()) {
            return Err(Error::domain(format!("number of file groups must be >= 1, got {f_groups}")));
        }
        Ok(Self { lambda_big: self.c * f_groups, f_groups, ..*self })
    }

    /// `Pr(E) = tau / (C (F - tau) + A tau + tau)`.
    pub fn hit_probability(&self, tau: f64) -> Result<f64> {
        hit_probability(tau, self)
    }
}

/// Probability that a request is served from the cache of an SBS rented by a
/// retailer holding fraction `tau` of all SBSs.
pub fn hit_probability(tau: f64, constants: &CoverageConstants) -> Result<f64> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("rented fraction must lie in [0, 1], got {tau}")));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let CoverageConstants { a, c, f_groups, .. } = *constants;
    Ok(tau / (c * (f_groups - tau) + a * tau + tau))
}
