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

//! Special functions behind the coverage constants.
//!
//! Only the argument pattern that the hit-probability formula needs is
//! supported: `2F1(1, 1 - 2/alpha; 2 - 2/alpha; -delta)` with `alpha > 2` and
//! `delta > 0`, and the Beta function on positive reals.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Path-loss exponent `alpha`; must exceed 2 for the interference integrals
/// to converge.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PathLossExponent(f64);

impl PathLossExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::domain(format!("path-loss exponent must be > 2, got {alpha}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Linear-scale SINR threshold `delta`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SinrThreshold(f64);

impl SinrThreshold {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && delta > 0.0 {
            Ok(Self(delta))
        } else {
            Err(Error::domain(format!("SINR threshold must be > 0, got {delta}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published coefficients, kept verbatim
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta_function(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!("beta requires positive arguments, got ({x}, {y})")));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

const SERIES_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 100_000;

/// `2F1(1, b; b+1; -delta)` with `b = 1 - 2/alpha`.
///
/// Three regimes keep every series geometrically convergent with ratio at
/// most about 8/9:
///
/// - `delta <= 0.5`: the defining series `sum_n b/(b+n) (-delta)^n`.
/// - `0.5 < delta <= 8`: Pfaff transformation onto `w = delta/(1+delta)`,
///   giving `(1+delta)^-1 2F1(1, 1; b+1; w)` with positive terms.
/// - `delta > 8`: expansion in `1/delta` of the Euler integral
///   `b ∫_0^1 t^(b-1)/(1+delta t) dt`.
pub fn hyp2f1_unit_a(alpha: PathLossExponent, delta: SinrThreshold) -> f64 {
    let b = 1.0 - 2.0 / alpha.get();
    let d = delta.get();
    if d <= 0.5 {
        direct_series(b, d)
    } else if d <= 8.0 {
        pfaff_series(b, d)
    } else {
        large_argument(b, d)
    }
}

fn direct_series(b: f64, d: f64) -> f64 {
    let mut sum = 1.0;
    let mut power = 1.0;
    for n in 1..MAX_TERMS {
        power *= -d;
        let term = b / (b + n as f64) * power;
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() {
            break;
        }
    }
    sum
}

fn pfaff_series(b: f64, d: f64) -> f64 {
    let w = d / (1.0 + d);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (n + 1.0) / (b + 1.0 + n) * w;
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum / (1.0 + d)
}

fn large_argument(b: f64, d: f64) -> f64 {
    let leading = b * d.powf(-b) * PI / (PI * b).sin();
    let inv = 1.0 / d;
    let mut power = inv;
    let mut tail = 0.0;
    for k in 0..MAX_TERMS {
        let term = power / (k as f64 + 1.0 - b);
        tail += term;
        if term.abs() < SERIES_EPS * leading {
            break;
        }
        power *= -inv;
    }
    leading - b * tail
}

/// `A(delta, alpha) = 2 delta/(alpha - 2) * 2F1(1, 1-2/alpha; 2-2/alpha; -delta)`,
/// the exponent contributed by interferers that share the serving SBS's
/// thinned process.
pub fn a_factor(delta: SinrThreshold, alpha: PathLossExponent) -> f64 {
    2.0 * delta.get() / (alpha.get() - 2.0) * hyp2f1_unit_a(alpha, delta)
}

/// `C(delta, alpha) = (2/alpha) delta^(2/alpha) B(2/alpha, 1 - 2/alpha)`,
/// the exponent contributed by all other SBSs.
pub fn c_factor(delta: SinrThreshold, alpha: PathLossExponent) -> f64 {
    let k = 2.0 / alpha.get();
    let b = beta_function(k, 1.0 - k).expect("alpha > 2 keeps both Beta arguments positive");
    k * delta.get().powf(k) * b
}
