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

use super::{EquilibriumOutcome, GameInstance, Scheme};
use crate::economics::Price;
use crate::Result;

/// Allocation maximising the sum profit `S^GLB` over the SBS budget.
///
/// Water level `eta = sum_{j<=vbar} sqrt(q_j) / (vbar C F + Theta)` and
/// `tau_v = ((sqrt(q_v)/eta - C F) / Theta)^+`, where `vbar` is the largest
/// count whose least popular member still gets a positive share. Prices are
/// the ones at which each participant's best response is its share.
pub fn waterfill_solve(instance: &GameInstance) -> Result<EquilibriumOutcome> {
    let k = &instance.constants;
    let roots: Vec<f64> = instance.vr_preference.iter().map(|q| q.sqrt()).collect();
    let share = |eta: f64, v: usize| (roots[v] / eta - k.lambda_big) / k.theta;

    let mut level = None;
    for count in (1..=roots.len()).rev() {
        let eta = roots[..count].iter().sum::<f64>() / (count as f64 * k.lambda_big + k.theta);
        if count == 1 || share(eta, count - 1) > 0.0 {
            level = Some((count, eta));
            break;
        }
    }
    let (count, eta) = level.expect("at least one retailer");

    let fractions: Vec<f64> = (0..roots.len()).map(|v| if v < count { share(eta, v) } else { 0.0 }).collect();
    let prices: Vec<Price> = fractions
        .iter()
        .enumerate()
        .map(|(v, &t)| if v < count { Price::Posted(instance.price_for_fraction(v, t)) } else { Price::Excluded })
        .collect();
    EquilibriumOutcome::assemble(Scheme::Waterfill, instance, prices, fractions, count, Vec::new())
}
