// Copyright 2026 The flatcrit Authors
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

//! Caller-supplied thickness profiles and diameter–systole fits.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub t: f64,
    pub eps: f64,
    /// Number of components of the thick part.
    pub components: u32,
    /// Sum of the component diameters.
    pub sum_diameters: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessProfile {
    samples: Vec<ProfileSample>,
}

impl ThicknessProfile {
    pub fn new(samples: Vec<ProfileSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(precondition("profile needs at least two samples"));
        }
        for (i, s) in samples.iter().enumerate() {
            let positive = s.eps > 0.0 && s.components >= 1 && s.sum_diameters > 0.0 && s.delta > 0.0;
            if !positive || !s.t.is_finite() {
                return Err(precondition(alloc::format!("profile row {} has a non-positive entry", i + 1)));
            }
            if i > 0 && !(s.t > samples[i - 1].t) {
                return Err(precondition(alloc::format!("profile grid not increasing at row {}", i + 1)));
            }
        }
        Ok(ThicknessProfile { samples })
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Growing,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::Growing => "growing",
        }
    }
}

/// Compares the average growth of a running integral on the second half of
/// its grid with the first half; a hundredfold slowdown reads as converging.
pub fn growth_verdict(t: &[f64], integral: &[f64]) -> Verdict {
    let n = t.len();
    if n < 3 {
        return Verdict::Growing;
    }
    let m = n / 2;
    let first = (integral[m] - integral[0]) / (t[m] - t[0]);
    let last = (integral[n - 1] - integral[m]) / (t[n - 1] - t[m]);
    if last <= 0.01 * first {
        Verdict::Converging
    } else {
        Verdict::Growing
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm12 {
    pub integral: f64,
    /// Running integral at each grid point.
    pub running: Vec<f64>,
    pub verdict: Verdict,
}

/// Trapezoid rule for `∫ (ε^{−2}ΣD + (C − 1)/δ)^{−2} dt` on the profile grid.
pub fn thm12_criterion(profile: &ThicknessProfile) -> Thm12 {
    let s = &profile.samples;
    let f = |p: &ProfileSample| {
        let g = p.sum_diameters / (p.eps * p.eps) + (p.components as f64 - 1.0) / p.delta;
        1.0 / (g * g)
    };
    let mut running = Vec::with_capacity(s.len());
    let mut acc = 0.0;
    running.push(0.0);
    for w in s.windows(2) {
        acc += 0.5 * (w[1].t - w[0].t) * (f(&w[0]) + f(&w[1]));
        running.push(acc);
    }
    let t: Vec<f64> = s.iter().map(|p| p.t).collect();
    let verdict = growth_verdict(&t, &running);
    Thm12 { integral: acc, running, verdict }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasurSmillie {
    /// `max D·δ` over samples above the gate.
    pub k: f64,
    /// Samples above the gate.
    pub used: usize,
    /// Samples above the gate with `D·δ > k0`.
    pub violations: usize,
}

/// Diameter gate below which the bound is not applied.
pub fn masur_smillie_gate() -> f64 {
    Float::sqrt(2.0 / core::f64::consts::PI)
}

/// Empirical constant in `D ≤ K/δ` from `(δ, D)` samples.
pub fn masur_smillie_check(samples: &[(f64, f64)], k0: f64) -> Result<MasurSmillie> {
    if samples.is_empty() || samples.iter().any(|&(d, dd)| !(d > 0.0 && dd > 0.0)) {
        return Err(precondition("samples must be nonempty and positive"));
    }
    let gate = masur_smillie_gate();
    let gated: Vec<f64> = samples.iter().filter(|s| s.1 > gate).map(|&(d, dd)| d * dd).collect();
    if gated.is_empty() {
        return Err(Error::GateNotMet);
    }
    Ok(MasurSmillie {
        k: gated.iter().copied().fold(0.0, f64::max),
        used: gated.len(),
        violations: gated.iter().filter(|&&p| p > k0).count(),
    })
}
