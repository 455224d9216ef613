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

//! Shortest saddle connections along the Teichmüller geodesic and the
//! quantitative criteria built from them.

mod profile;

pub use profile::{
    growth_verdict, masur_smillie_check, masur_smillie_gate, thm12_criterion, MasurSmillie, ProfileSample, ThicknessProfile, Thm12,
    Verdict,
};

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{precondition, Result};
use crate::geom::Vec2;
use crate::num::{Scalar, Sign};
use crate::saddle::enumerate_in_metric;
use crate::surface::TranslationSurface;

/// Width of the windows on which the enumeration radius is fixed.
pub const WINDOW: f64 = 0.25;

/// One piece of the envelope: `δ'_t² = x²e^{−2t} + y²e^{2t} + c` on `[t0, t1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePiece<S> {
    pub t0: f64,
    pub t1: f64,
    pub x2: f64,
    pub y2: f64,
    /// Zero for envelopes computed from a surface.
    pub c: f64,
    pub witness: Option<Vec2<S>>,
}

impl<S> EnvelopePiece<S> {
    pub fn value_sq(&self, t: f64) -> f64 {
        self.x2 * Float::exp(-2.0 * t) + self.y2 * Float::exp(2.0 * t) + self.c
    }

    fn antiderivative(&self, t: f64) -> f64 {
        -0.5 * self.x2 * Float::exp(-2.0 * t) + 0.5 * self.y2 * Float::exp(2.0 * t) + self.c * t
    }

    /// `∫ δ'_t² dt` over `[a, b] ∩ [t0, t1]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let (a, b) = (a.max(self.t0), b.min(self.t1));
        if b <= a {
            return 0.0;
        }
        self.antiderivative(b) - self.antiderivative(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystoleEnvelope<S> {
    pub horizon: f64,
    pub pieces: Vec<EnvelopePiece<S>>,
    /// Every window passed the doubling test.
    pub certified: bool,
}

impl<S> SystoleEnvelope<S> {
    /// The envelope `δ'_t² = value` on `[0, horizon]`.
    pub fn constant(value: f64, horizon: f64) -> Self {
        SystoleEnvelope {
            horizon,
            pieces: alloc::vec![EnvelopePiece { t0: 0.0, t1: horizon, x2: 0.0, y2: 0.0, c: value, witness: None }],
            certified: true,
        }
    }

    fn piece_at(&self, t: f64) -> &EnvelopePiece<S> {
        let i = self.pieces.partition_point(|p| p.t1 < t);
        &self.pieces[i.min(self.pieces.len() - 1)]
    }

    pub fn value_sq(&self, t: f64) -> f64 {
        self.piece_at(t).value_sq(t)
    }

    /// `δ'_t`.
    pub fn delta(&self, t: f64) -> f64 {
        Float::sqrt(self.value_sq(t))
    }

    /// `d'(t) = −log δ'_t`.
    pub fn d_prime(&self, t: f64) -> f64 {
        -0.5 * Float::ln(self.value_sq(t))
    }

    /// `∫_0^t δ'_s² ds`.
    pub fn integral_to(&self, t: f64) -> f64 {
        self.pieces.iter().map(|p| p.integral(0.0, t)).sum()
    }

    /// Minimum of `δ'_t` over the horizon.
    pub fn min_delta(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let mut m = p.value_sq(p.t0).min(p.value_sq(p.t1));
                if p.x2 > 0.0 && p.y2 > 0.0 {
                    let t = 0.25 * Float::ln(p.x2 / p.y2);
                    if t > p.t0 && t < p.t1 {
                        m = m.min(p.value_sq(t));
                    }
                }
                m
            })
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }
}

#[derive(Debug, Clone)]
struct Candidate<S> {
    x2: f64,
    y2: f64,
    holonomy: Vec2<S>,
}

impl<S> Candidate<S> {
    fn value(&self, t: f64) -> f64 {
        self.x2 * Float::exp(-2.0 * t) + self.y2 * Float::exp(2.0 * t)
    }

    fn slope(&self, t: f64) -> f64 {
        -2.0 * self.x2 * Float::exp(-2.0 * t) + 2.0 * self.y2 * Float::exp(2.0 * t)
    }
}

/// Holonomy up to sign, normalized to point into the right half-plane.
fn unsigned<S: Scalar>(v: &Vec2<S>) -> Vec2<S> {
    match v.x.sign() {
        Sign::Negative => -v.clone(),
        Sign::Zero if v.y.sign() == Sign::Negative => -v.clone(),
        _ => v.clone(),
    }
}

/// Lower envelope of the candidates on `[ta, tb]` as `(t0, t1, index)`.
fn sweep<S>(c: &[Candidate<S>], ta: f64, tb: f64) -> Vec<(f64, f64, usize)> {
    let better = |i: usize, j: usize, t: f64| {
        c[i].value(t).total_cmp(&c[j].value(t)).then(c[i].slope(t).total_cmp(&c[j].slope(t))).then(i.cmp(&j)).is_lt()
    };
    let mut cur = (1..c.len()).fold(0, |b, j| if better(j, b, ta) { j } else { b });
    let mut t = ta;
    let mut out = Vec::new();
    loop {
        let mut next: Option<(f64, usize)> = None;
        for (j, cj) in c.iter().enumerate() {
            let ci = &c[cur];
            if j == cur || !(cj.y2 < ci.y2 && cj.x2 > ci.x2) {
                continue;
            }
            let ts = 0.25 * Float::ln((ci.x2 - cj.x2) / (cj.y2 - ci.y2));
            if ts > t && ts < tb {
                let take = match next {
                    None => true,
                    Some((tn, n)) => ts < tn || (ts == tn && cj.y2 < c[n].y2),
                };
                if take {
                    next = Some((ts, j));
                }
            }
        }
        match next {
            None => {
                out.push((t, tb, cur));
                return out;
            }
            Some((ts, j)) => {
                out.push((t, ts, cur));
                t = ts;
                cur = j;
            }
        }
    }
}

fn candidates<S: Scalar>(tri: &crate::surface::Triangulation<S>, metric: &[f64; 4], radius: f64) -> Vec<Candidate<S>> {
    let mut out: Vec<Candidate<S>> = Vec::new();
    for c in enumerate_in_metric(tri, metric, radius).connections {
        let h = unsigned(&c.holonomy);
        if out.iter().any(|o| o.holonomy == h) {
            continue;
        }
        let f = h.to_f64();
        out.push(Candidate { x2: f.x * f.x, y2: f.y * f.y, holonomy: h });
    }
    out
}

/// Lower envelope of `t ↦ |g_t v|²` over all saddle connections `v`, for
/// `t ∈ [0, horizon]`.
///
/// On each window `[ta, tb]` the triangulation is made Delaunay for `g_ta`.
/// Its shortest edge bounds the envelope by `M²`, and any connection that is
/// minimal somewhere in the window has `|g_ta v| ≤ M e^{tb − ta}`; the
/// connections inside that radius are enumerated, and the enumeration is
/// repeated at twice the radius to check that the envelope does not change.
pub fn systole_envelope<S: Scalar>(s: &TranslationSurface<S>, horizon: f64) -> Result<SystoleEnvelope<S>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(precondition("horizon must be positive"));
    }
    if s.has_boundary() {
        return Err(precondition("envelope needs a closed surface"));
    }
    let mut tri = s.triangulate()?;
    let mut pieces: Vec<EnvelopePiece<S>> = Vec::new();
    let mut certified = true;
    let windows = Float::ceil(horizon / WINDOW) as usize;
    for k in 0..windows {
        let ta = k as f64 * WINDOW;
        let tb = ((k + 1) as f64 * WINDOW).min(horizon);
        let metric = [Float::exp(-ta), 0.0, 0.0, Float::exp(ta)];
        tri.make_delaunay(metric);
        let m2 = tri
            .tris
            .iter()
            .flat_map(|t| (0..3).map(move |e| t.edge_vector(e).to_f64()))
            .map(|v| {
                let (x2, y2) = (v.x * v.x, v.y * v.y);
                let f = |t: f64| x2 * Float::exp(-2.0 * t) + y2 * Float::exp(2.0 * t);
                f(ta).max(f(tb))
            })
            .fold(f64::INFINITY, f64::min);
        let mut radius = Float::sqrt(m2) * Float::exp(tb - ta);
        let mut cands = candidates(&tri, &metric, radius);
        let mut env = sweep(&cands, ta, tb);
        loop {
            radius *= 2.0;
            let wider = candidates(&tri, &metric, radius);
            let check = sweep(&wider, ta, tb);
            let same = check.len() == env.len()
                && check.iter().zip(&env).all(|(a, b)| {
                    wider[a.2].holonomy == cands[b.2].holonomy && (a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12
                });
            if same {
                break;
            }
            certified = false;
            cands = wider;
            env = check;
        }
        for (t0, t1, i) in env {
            let c = &cands[i];
            if let Some(last) = pieces.last_mut() {
                if last.witness.as_ref() == Some(&c.holonomy) {
                    last.t1 = t1;
                    continue;
                }
            }
            pieces.push(EnvelopePiece { t0, t1, x2: c.x2, y2: c.y2, c: 0.0, witness: Some(c.holonomy.clone()) });
        }
    }
    Ok(SystoleEnvelope { horizon, pieces, certified })
}

/// `∫_0^T δ'_t² dt` in closed form.
pub fn criterion_integral<S>(env: &SystoleEnvelope<S>) -> f64 {
    env.integral_to(env.horizon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheungEskin {
    pub c: f64,
    /// Where the supremum is attained.
    pub at: f64,
    /// `C` is finite and the supremum is attained before the horizon.
    pub satisfied: bool,
}

/// Golden-section minimum of a function that is convex on `[a, b]`.
fn convex_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        if b - a <= 1e-14 * b.abs().max(1.0) {
            break;
        }
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// `C = sup_{t ∈ [t0, T]} (d'(t) − ½ log t)`.
///
/// With `h(t) = t·δ'_t²` the quantity is `−½ log h`, and `h` is convex on
/// every piece once `t ≥ 1`, so each piece is minimized exactly.
pub fn cheung_eskin_c<S>(env: &SystoleEnvelope<S>, t0: f64) -> Result<CheungEskin> {
    if !(t0 >= 1.0) || env.horizon < t0 {
        return Err(precondition("window must satisfy 1 <= t0 <= T"));
    }
    let h = |p: &EnvelopePiece<S>, t: f64| t * p.value_sq(t);
    let mut best = (f64::INFINITY, t0);
    for p in &env.pieces {
        let (a, b) = (p.t0.max(t0), p.t1.min(env.horizon));
        if b < a {
            continue;
        }
        for t in [a, b, convex_min(|t| h(p, t), a, b)] {
            let v = h(p, t);
            if v < best.0 || (v == best.0 && t < best.1) {
                best = (v, t);
            }
        }
    }
    let c = -0.5 * Float::ln(best.0);
    let at_end = best.1 >= env.horizon * (1.0 - 1e-9);
    Ok(CheungEskin { c, at: best.1, satisfied: c.is_finite() && !at_end })
}

/// `sup_{t ∈ [t0, T]} d'(t) / log t`, a finite-horizon stand-in for the
/// limsup in the logarithmic law.
pub fn log_law_stat<S>(env: &SystoleEnvelope<S>, t0: f64) -> Result<f64> {
    if !(t0 > 1.0) || env.horizon < t0 {
        return Err(precondition("window must satisfy 1 < t0 <= T"));
    }
    let g = |p: &EnvelopePiece<S>, t: f64| -0.5 * Float::ln(p.value_sq(t)) / Float::ln(t);
    let mut best = f64::NEG_INFINITY;
    for p in &env.pieces {
        let (a, b) = (p.t0.max(t0), p.t1.min(env.horizon));
        if b < a {
            continue;
        }
        const N: usize = 64;
        let mut arg = a;
        for i in 0..=N {
            let t = a + (b - a) * i as f64 / N as f64;
            if g(p, t) > g(p, arg) {
                arg = t;
            }
        }
        let step = (b - a) / N as f64;
        let (lo, hi) = ((arg - step).max(a), (arg + step).min(b));
        let refined = convex_min(|t| -g(p, t), lo, hi);
        best = best.max(g(p, arg)).max(g(p, refined));
    }
    Ok(best)
}

#[cfg(test)]
mod tests;
