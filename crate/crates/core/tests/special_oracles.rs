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

//! Special functions against adaptive quadrature of their integral forms.

use proptest::prelude::*;
use vidcache_core::special::{
    a_factor, beta_function, c_factor, hyp2f1_unit_a, ln_gamma, PathLossExponent, SinrThreshold,
};

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, 1e-13, 50)
}

/// B(x, y), splitting at 1/2 and substituting `t = u^(1/x)` (and the mirror
/// image) so both endpoint singularities disappear.
fn beta_quad(x: f64, y: f64) -> f64 {
    let half = |p: f64, q: f64| integrate(|u: f64| (1.0 - u.powf(1.0 / p)).powf(q - 1.0), 0.0, 0.5f64.powf(p)) / p;
    half(x, y) + half(y, x)
}

/// 2F1(1, 1-b; 2-b; -delta) with b = 2/alpha, from the Euler integral
/// after `t = s^(1/(1-b))`: `int_0^1 ds / (1 + delta s^(1/(1-b)))`.
fn hyp_quad(alpha: f64, delta: f64) -> f64 {
    let b = 2.0 / alpha;
    integrate(|s: f64| 1.0 / (1.0 + delta * s.powf(1.0 / (1.0 - b))), 0.0, 1.0)
}

fn al(a: f64) -> PathLossExponent {
    PathLossExponent::new(a).unwrap()
}

fn de(d: f64) -> SinrThreshold {
    SinrThreshold::new(d).unwrap()
}

#[test]
fn ln_gamma_known_values() {
    let pi = std::f64::consts::PI;
    for (x, want) in
        [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5 * pi.ln()), (5.0, 24f64.ln()), (10.5, 1133278.3889487855f64.ln())]
    {
        assert!((ln_gamma(x) - want).abs() < 1e-12, "{x}");
    }
    // Gamma(0.1) = 9.513507698668732
    assert!((ln_gamma(0.1) - 9.513507698668732f64.ln()).abs() < 1e-12);
}

#[test]
fn beta_matches_quadrature() {
    for (x, y) in [(0.5, 0.5), (0.4, 0.6), (0.8, 0.2), (0.25, 0.75), (2.0, 3.0), (0.9, 0.1)] {
        let got = beta_function(x, y).unwrap();
        let want = beta_quad(x, y);
        assert!((got - want).abs() < 1e-9 * want, "B({x},{y}) = {got} vs {want}");
    }
    assert!((beta_function(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-13);
    assert!(beta_function(0.0, 1.0).is_err());
}

#[test]
fn alpha_four_closed_form() {
    for d in [1e-4f64, 0.01, 0.3, 1.0, 5.0, 50.0, 1e4] {
        let want = d.sqrt().atan() / d.sqrt();
        let got = hyp2f1_unit_a(al(4.0), de(d));
        assert!((got - want).abs() < 1e-12 * want.max(1e-3), "delta={d}: {got} vs {want}");
    }
}

#[test]
fn reference_constants() {
    let a = a_factor(de(0.01), al(4.0));
    let c = c_factor(de(0.01), al(4.0));
    assert!((a - 0.009966865249116203).abs() < 1e-15);
    assert!((c - 0.05 * std::f64::consts::PI).abs() < 1e-14);
    assert!((hyp2f1_unit_a(al(2.5), de(100.0)) - 0.4230714153500188).abs() < 1e-12);
}

#[test]
fn regime_switches_are_seamless() {
    for alpha in [2.2, 3.0, 4.0, 6.0] {
        for d in [0.5, 8.0] {
            let lo = hyp2f1_unit_a(al(alpha), de(d * (1.0 - 1e-12)));
            let hi = hyp2f1_unit_a(al(alpha), de(d * (1.0 + 1e-12)));
            assert!((lo - hi).abs() < 1e-10, "alpha={alpha} delta={d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyp2f1_matches_quadrature(alpha in 2.1f64..8.0, log_delta in -4.0f64..4.0) {
        let delta = 10f64.powf(log_delta);
        let got = hyp2f1_unit_a(al(alpha), de(delta));
        let want = hyp_quad(alpha, delta);
        prop_assert!((got - want).abs() < 1e-9 * want, "alpha={} delta={}: {} vs {}", alpha, delta, got, want);
    }

    #[test]
    fn hyp2f1_decreases_in_delta(alpha in 2.1f64..8.0, log_delta in -4.0f64..4.0) {
        let d = 10f64.powf(log_delta);
        let f = |x| hyp2f1_unit_a(al(alpha), de(x));
        let v = f(d);
        prop_assert!(v > 0.0 && v <= 1.0);
        prop_assert!(f(d * 1.1) < v);
    }

    #[test]
    fn c_factor_matches_beta_quadrature(alpha in 2.1f64..8.0, log_delta in -4.0f64..2.0) {
        let delta = 10f64.powf(log_delta);
        let b = 2.0 / alpha;
        let want = b * delta.powf(b) * beta_quad(b, 1.0 - b);
        let got = c_factor(de(delta), al(alpha));
        prop_assert!((got - want).abs() < 1e-9 * want);
    }

    #[test]
    fn theta_is_positive(alpha in 2.01f64..10.0, log_delta in -6.0f64..6.0) {
        let d = de(10f64.powf(log_delta));
        let a = al(alpha);
        prop_assert!(a_factor(d, a) - c_factor(d, a) + 1.0 > 0.0);
    }
}
