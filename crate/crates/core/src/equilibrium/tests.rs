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

use proptest::prelude::*;

use super::*;
use crate::catalog::{vr_preference, VrConfig};

fn cfg() -> EconomicConfig {
    EconomicConfig::new(1.0, 10.0, 50.0, 10.0).unwrap()
}

fn instance(v: usize, gamma: f64, storage: f64) -> GameInstance {
    let q = vr_preference(&VrConfig::new(v, gamma).unwrap());
    GameInstance::new(SinrThreshold::new(0.01).unwrap(), PathLossExponent::new(4.0).unwrap(), 500, storage, q, cfg())
        .unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Golden-section maximiser on [lo, hi].
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-11 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn best_response_example() {
    let inst = instance(1, 0.5, 500.0);
    let k = inst.constants;
    let tau = best_response_fraction(1.0, 500.0, &inst.cfg, &k).unwrap();
    assert!((tau - 3.101718).abs() < 1e-6, "{tau}");
    let oracle = golden_max(|t| crate::economics::vr_profit(t, 1.0, 500.0, &inst.cfg, &k), 0.0, 10.0);
    assert!((tau - oracle).abs() < 1e-6, "{tau} vs {oracle}");
}

#[test]
fn best_response_maximises_profit_when_interior() {
    let inst = instance(4, 0.7, 100.0);
    for (v, &g) in inst.gammas.as_slice().iter().enumerate() {
        let price = 0.5 * inst.opt_out_price(v);
        let tau = best_response_fraction(price, g, &inst.cfg, &inst.constants).unwrap();
        let oracle = golden_max(|t| crate::economics::vr_profit(t, price, g, &inst.cfg, &inst.constants), 0.0, 50.0);
        assert!((tau - oracle).abs() < 1e-6);
    }
}

#[test]
fn opt_out_and_bad_prices() {
    let inst = instance(3, 0.5, 50.0);
    let g = inst.gammas.as_slice()[0];
    let cutoff = inst.opt_out_price(0);
    let at = best_response_fraction(cutoff, g, &inst.cfg, &inst.constants).unwrap();
    assert!(at.abs() < 1e-12);
    assert_eq!(best_response_fraction(cutoff * 1.5, g, &inst.cfg, &inst.constants).unwrap(), 0.0);
    assert!(best_response_fraction(0.0, g, &inst.cfg, &inst.constants).is_err());
    assert!(best_response_fraction(-1.0, g, &inst.cfg, &inst.constants).is_err());
}

#[test]
fn price_for_fraction_inverts_best_response() {
    let inst = instance(5, 0.4, 80.0);
    for v in 0..5 {
        for tau in [0.01, 0.2, 0.9] {
            let p = inst.price_for_fraction(v, tau);
            let back = best_response_fraction(p, inst.gammas.as_slice()[v], &inst.cfg, &inst.constants).unwrap();
            assert!((back - tau).abs() < 1e-12);
        }
    }
}

#[test]
fn threshold_examples() {
    let inst = instance(15, 0.5, 500.0);
    let t = participation_thresholds(&inst.vr_preference, &inst.constants, 500);
    assert_eq!(t.u_values[0], 0.0);
    assert_eq!(t.u_bar_values[0], 0.0);
    assert!((t.min_storage() - 222.9).abs() < 0.05, "{}", t.min_storage());
    assert!((t.min_storage_uniform() - 359.0).abs() < 0.05, "{}", t.min_storage_uniform());
    for v in 1..15 {
        assert!(t.u_bar_values[v] > t.u_values[v]);
    }
    let flat = instance(6, 0.0, 500.0);
    let t = participation_thresholds(&flat.vr_preference, &flat.constants, 500);
    assert!(t.u_values.iter().chain(&t.u_bar_values).all(|&u| u.abs() < 1e-9));
}

#[test]
fn thresholds_match_known_gamma_cutoffs() {
    // all retailers join at Q = N exactly when gamma is below about 0.98
    // (non-uniform) or 0.655 (uniform)
    let t = |g: f64| {
        let inst = instance(15, g, 500.0);
        participation_thresholds(&inst.vr_preference, &inst.constants, 500)
    };
    assert!(t(0.97).min_storage() < 500.0 && t(0.99).min_storage() > 500.0);
    assert!(t(0.64).min_storage_uniform() < 500.0 && t(0.67).min_storage_uniform() > 500.0);
}

#[test]
fn bracket_boundaries_resolve_low() {
    let th = [0.0, 10.0, 20.0];
    assert_eq!(bracket(&th, 10.0), 1);
    assert_eq!(bracket(&th, 10.0 + 1e-13), 1);
    assert_eq!(bracket(&th, 10.001), 2);
    assert_eq!(bracket(&th, 25.0), 3);
    assert_eq!(bracket(&[0.0], 1e-20), 1);
}

#[test]
fn single_retailer() {
    let inst = instance(1, 0.5, 100.0);
    let n = nups_solve(&inst).unwrap();
    let u = ups_solve(&inst).unwrap();
    let w = waterfill_solve(&inst).unwrap();
    assert_eq!(n.n_participants, 1);
    let k = inst.constants;
    let g = inst.gammas.as_slice()[0];
    let expected = k.lambda_big * g / (10.0 * (k.lambda_big + k.theta).powi(2));
    assert!(rel_close(n.prices.as_slice()[0].value().unwrap(), expected, 1e-12));
    assert!(rel_close(u.prices.as_slice()[0].value().unwrap(), expected, 1e-12));
    for o in [&n, &u, &w] {
        assert!((o.fractions.as_slice()[0] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn uniform_preference_is_symmetric() {
    let inst = instance(6, 0.0, 500.0);
    let n = nups_solve(&inst).unwrap();
    let u = ups_solve(&inst).unwrap();
    let w = waterfill_solve(&inst).unwrap();
    let p0 = n.prices.as_slice()[0].value().unwrap();
    for o in [&n, &u, &w] {
        assert_eq!(o.n_participants, 6);
        for (p, t) in o.prices.as_slice().iter().zip(o.fractions.as_slice()) {
            assert!(rel_close(p.value().unwrap(), p0, 1e-12));
            assert!((t - 1.0 / 6.0).abs() < 1e-12);
        }
    }
}

#[test]
fn reference_instance() {
    let inst = instance(15, 0.5, 500.0);
    let n = nups_solve(&inst).unwrap();
    assert_eq!(n.n_participants, 15);
    assert!(rel_close(n.report.nsp_total, nups_closed_form_profit(&inst, 15), 1e-9));
    assert!(rel_close(n.report.nsp_total, -nups_objective(&inst, 15) / inst.constants.theta, 1e-9));
    let rec = verify_equilibrium(&n, &inst).unwrap();
    assert!(rec.follower_max_gain <= VERIFY_REL_TOL && rec.leader_max_gain <= VERIFY_REL_TOL);
    assert!(rec.leader_evaluations > 1000);

    let u = ups_solve(&inst).unwrap();
    let w = waterfill_solve(&inst).unwrap();
    for (a, b) in u.fractions.as_slice().iter().zip(w.fractions.as_slice()) {
        assert!((a - b).abs() < 1e-9);
    }
    verify_equilibrium(&u, &inst).unwrap();
    verify_equilibrium(&w, &inst).unwrap();
}

#[test]
fn corrupted_price_is_caught() {
    let inst = instance(15, 0.5, 500.0);
    let n = nups_solve(&inst).unwrap();
    let mut prices = n.prices.as_slice().to_vec();
    prices[0] = Price::Posted(prices[0].value().unwrap() * 1.1);
    let bad = EquilibriumOutcome::from_prices(Scheme::Nups, &inst, prices).unwrap();
    match verify_equilibrium(&bad, &inst) {
        Err(Error::VerificationFailure { condition, magnitude }) => {
            assert!(condition.contains("leader"), "{condition}");
            assert!(magnitude > VERIFY_REL_TOL);
        }
        other => panic!("expected leader failure, got {other:?}"),
    }
}

#[test]
fn corrupted_fraction_is_caught() {
    let inst = instance(15, 0.5, 500.0);
    let n = nups_solve(&inst).unwrap();
    let mut tau = n.fractions.as_slice().to_vec();
    tau[0] += 0.05;
    // an uncompensated bump breaks the budget outright
    assert!(n.with_fractions(&inst, tau.clone()).is_err());
    tau[1] -= 0.05;
    let bad = n.with_fractions(&inst, tau).unwrap();
    match verify_equilibrium(&bad, &inst) {
        Err(Error::VerificationFailure { condition, .. }) => {
            assert!(condition.contains("best response"), "{condition}")
        }
        other => panic!("expected follower failure, got {other:?}"),
    }
}

#[test]
fn mismatched_surcharge_is_rejected() {
    let base = instance(3, 0.5, 100.0);
    let mut inst = base.clone();
    inst.cfg = EconomicConfig::with_surcharge(1.0, 1.5, 10.0, 50.0, 10.0).unwrap();
    assert!(matches!(nups_solve(&inst), Err(Error::SurchargeMismatch { .. })));
    assert!(matches!(ups_solve(&inst), Err(Error::SurchargeMismatch { .. })));
    assert!(waterfill_solve(&inst).is_ok());
}

#[test]
fn scheme_names_round_trip() {
    for s in [Scheme::Nups, Scheme::Ups, Scheme::Waterfill] {
        assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
    }
    assert_eq!("ups".parse::<Scheme>().unwrap(), Scheme::Ups);
    assert!("greedy".parse::<Scheme>().is_err());
}

#[test]
fn storage_above_catalog_is_clamped() {
    let a = instance(5, 0.8, 500.0);
    let b = instance(5, 0.8, 900.0);
    assert_eq!(a, b);
    let bad = GameInstance::new(
        SinrThreshold::new(0.01).unwrap(),
        PathLossExponent::new(4.0).unwrap(),
        500,
        0.0,
        vec![1.0],
        cfg(),
    );
    assert!(bad.is_err());
    let unsorted = GameInstance::new(
        SinrThreshold::new(0.01).unwrap(),
        PathLossExponent::new(4.0).unwrap(),
        500,
        10.0,
        vec![0.4, 0.6],
        cfg(),
    );
    assert!(unsorted.is_err());
}

#[test]
fn nsp_profit_grows_with_gamma() {
    let profits: Vec<f64> =
        (1..=10).map(|i| nups_solve(&instance(15, i as f64 / 10.0, 500.0)).unwrap().report.nsp_total).collect();
    assert!(profits.windows(2).all(|w| w[1] >= w[0]), "{profits:?}");
}

/// Maximises the sum profit over the simplex by a grid followed by a
/// shrinking pattern search along budget-preserving directions.
fn simplex_oracle(inst: &GameInstance) -> Vec<f64> {
    let prices = PriceVector::new(vec![Price::Posted(1.0); 3]).unwrap();
    let glb = |t: &[f64]| -> f64 {
        if t.iter().any(|&x| x < 0.0) {
            return f64::NEG_INFINITY;
        }
        let tau = FractionVector::new(t.to_vec()).unwrap();
        profit_report(&tau, &prices, &inst.gammas, &inst.cfg, &inst.constants).unwrap().global_total
    };
    let mut best = vec![1.0 / 3.0; 3];
    let mut best_val = glb(&best);
    let steps = 200;
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let t = [i as f64 / steps as f64, j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64];
            let val = glb(&t);
            if val > best_val {
                best_val = val;
                best = t.to_vec();
            }
        }
    }
    let mut h = 1.0 / steps as f64;
    while h > 1e-12 {
        let mut improved = false;
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let mut t = best.clone();
                t[a] += h;
                t[b] -= h;
                let val = glb(&t);
                if val > best_val {
                    best_val = val;
                    best = t;
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    best
}

#[test]
fn waterfill_matches_simplex_oracle() {
    let inst = GameInstance::new(
        SinrThreshold::new(0.01).unwrap(),
        PathLossExponent::new(4.0).unwrap(),
        500,
        100.0,
        vec![0.5, 0.3, 0.2],
        cfg(),
    )
    .unwrap();
    assert!((inst.constants.f_groups - 5.0).abs() < 1e-12);
    let w = waterfill_solve(&inst).unwrap();
    let oracle = simplex_oracle(&inst);
    for (a, b) in w.fractions.as_slice().iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-6, "{:?} vs {oracle:?}", w.fractions);
    }
}

#[test]
fn waterfill_excludes_unpopular_retailers() {
    // a steep preference with little storage leaves the tail out
    let inst = instance(15, 1.0, 10.0);
    let w = waterfill_solve(&inst).unwrap();
    assert!(w.n_participants < 15);
    assert!((w.fractions.sum() - 1.0).abs() < 1e-9);
    verify_equilibrium(&w, &inst).unwrap();
}

#[test]
fn storage_above_all_thresholds_admits_everyone() {
    for gamma in [0.2, 0.5, 0.9] {
        let probe = instance(15, gamma, 500.0);
        let t = participation_thresholds(&probe.vr_preference, &probe.constants, 500);
        let above = t.min_storage() * 1.01;
        let inst = instance(15, gamma, above);
        let n = nups_solve(&inst).unwrap();
        assert_eq!(n.n_participants, 15);
        assert_eq!(n.prices, nups_prices_for_u(15, &inst).unwrap());
    }
}

fn params() -> impl Strategy<Value = (usize, f64, f64)> {
    (1usize..=15, 0.01f64..=1.0, 10.0f64..=500.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thresholds_strictly_increase(v in 2usize..=50, gamma in 0.01f64..=1.0) {
        let inst = instance(v, gamma, 500.0);
        let t = participation_thresholds(&inst.vr_preference, &inst.constants, 500);
        prop_assert!(t.u_values.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(t.u_bar_values.iter().zip(&t.u_values).all(|(b, u)| b >= u));
    }

    #[test]
    fn outcomes_are_budget_tight_prefixes((v, gamma, q) in params()) {
        let inst = instance(v, gamma, q);
        for o in [nups_solve(&inst).unwrap(), ups_solve(&inst).unwrap(), waterfill_solve(&inst).unwrap()] {
            prop_assert!((o.fractions.sum() - 1.0).abs() < 1e-9);
            let n = o.n_participants;
            prop_assert!(n >= 1);
            prop_assert_eq!(o.prices.posted_count(), n);
            for (i, (&t, p)) in o.fractions.as_slice().iter().zip(o.prices.as_slice()).enumerate() {
                prop_assert_eq!(i < n, t > 0.0);
                prop_assert_eq!(i < n, !p.is_excluded());
                if let Price::Posted(s) = p {
                    let br = best_response_fraction(*s, inst.gammas.as_slice()[i], &inst.cfg, &inst.constants).unwrap();
                    prop_assert!((br - t).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn scheme_dominance((v, gamma, q) in params()) {
        let inst = instance(v, gamma, q);
        let n = nups_solve(&inst).unwrap();
        let u = ups_solve(&inst).unwrap();
        prop_assert!(n.report.nsp_total >= u.report.nsp_total - 1e-9 * n.report.nsp_total.abs());
        prop_assert!(u.report.nsp_backhaul_saving >= n.report.nsp_backhaul_saving - 1e-9 * u.report.nsp_backhaul_saving.abs());
        prop_assert!(n.n_participants >= u.n_participants);
    }

    #[test]
    fn uniform_pricing_is_waterfilling((v, gamma, q) in params()) {
        let inst = instance(v, gamma, q);
        let u = ups_solve(&inst).unwrap();
        let w = waterfill_solve(&inst).unwrap();
        prop_assert_eq!(u.n_participants, w.n_participants);
        for (a, b) in u.fractions.as_slice().iter().zip(w.fractions.as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn nups_prices_follow_popularity((v, gamma, q) in params()) {
        let inst = instance(v, gamma, q);
        let n = nups_solve(&inst).unwrap();
        let posted: Vec<f64> = n.prices.as_slice().iter().filter_map(|p| p.value()).collect();
        prop_assert!(posted.windows(2).all(|w| w[0] >= w[1] * (1.0 - 1e-12)));
        prop_assert!(rel_close(n.report.nsp_total, nups_closed_form_profit(&inst, n.n_participants), 1e-9));
    }

    #[test]
    fn ups_posts_one_price((v, gamma, q) in params()) {
        let inst = instance(v, gamma, q);
        let u = ups_solve(&inst).unwrap();
        let posted: Vec<f64> = u.prices.as_slice().iter().filter_map(|p| p.value()).collect();
        prop_assert!(posted.iter().all(|&p| p == posted[0]));
        prop_assert!(rel_close(posted[0], ups_price_for_u(&inst, u.n_participants), 1e-15));
    }

    #[test]
    fn every_scheme_verifies((v, gamma, q) in (1usize..=8, 0.01f64..=1.0, 10.0f64..=500.0)) {
        let inst = instance(v, gamma, q);
        for o in [nups_solve(&inst).unwrap(), ups_solve(&inst).unwrap(), waterfill_solve(&inst).unwrap()] {
            let rec = verify_equilibrium(&o, &inst);
            prop_assert!(rec.is_ok(), "{} failed: {:?}", o.scheme, rec);
        }
    }
}
