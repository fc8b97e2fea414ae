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

//! Pricing and resource allocation for a small-cell video caching market.
//!
//! A network service provider (NSP) leases cache-equipped small-cell base
//! stations (SBSs) to competing video retailers (VRs). SBSs form a
//! homogeneous Poisson point process; a mobile user is served from cache when
//! the nearest SBS rented by its retailer and holding the requested file
//! group delivers an SINR above a threshold.
//!
//! The crate is layered bottom-up:
//!
//! - [`special`]: Beta function and the Gauss hypergeometric evaluation used
//!   by the coverage constants.
//! - [`catalog`]: Zipf popularity of files, file groups and retailers.
//! - [`coverage`]: closed-form cache-hit probability.
//! - [`economics`]: leasing income, back-haul savings and retailer profits.
//! - [`equilibrium`]: follower best responses, non-uniform and uniform
//!   pricing, water-filling, and equilibrium verification.
//! - [`sim`]: Monte-Carlo estimate of the hit probability on a simulated
//!   Poisson network.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod coverage;
pub mod economics;
pub mod equilibrium;
mod error;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
