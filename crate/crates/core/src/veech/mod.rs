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

//! Affine automorphism certificates, distances in the Teichmüller disk, and
//! recurrence diagnostics.

mod cert;

pub use cert::{
    cylinder_obstruction, find_certificate, parabolic_from_cylinders, verify_affine_automorphism, AutomorphismCertificate,
    CertificateReport, Piece,
};

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{precondition, Error, Result};
use crate::geom::Mat2;
use crate::num::QuadNum;

fn unimodular(m: &Mat2) -> Result<()> {
    if m.is_unimodular() {
        Ok(())
    } else {
        Err(Error::NotAreaPreserving)
    }
}

/// Image of `i` under the Möbius action of a unimodular matrix.
fn orbit_point(m: &Mat2) -> (f64, f64) {
    let [a, b, c, d] = m.entries_f64();
    let den = c * c + d * d;
    ((a * c + b * d) / den, 1.0 / den)
}

/// Distance between `A·i` and `B·i` for curvature −4, so that
/// `dist(I, g_t) = |t|`.
pub fn hyp_distance(a: &Mat2, b: &Mat2) -> Result<f64> {
    unimodular(a)?;
    unimodular(b)?;
    let (z, w) = (orbit_point(a), orbit_point(b));
    let chord = Float::hypot(z.0 - w.0, z.1 - w.1);
    Ok(Float::asinh(chord / (2.0 * Float::sqrt(z.1 * w.1))))
}

/// `sinh(2ε) / sinh(2t)` clamped to `[0, 1]`: the bound on `|sin θ|` from the
/// hyperbolic law of sines in curvature −4.
pub fn law_of_sines_bound(epsilon: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(precondition("t must be positive"));
    }
    if !(epsilon >= 0.0) {
        return Err(precondition("epsilon must be nonnegative"));
    }
    Ok((Float::sinh(2.0 * epsilon) / Float::sinh(2.0 * t)).clamp(0.0, 1.0))
}

/// Letter `k + 1` is generator `k`, letter `−(k + 1)` its inverse.
pub type Word = Vec<i32>;

/// Reduced words of length at most `bound`, shortest first and in
/// lexicographic letter order within a length, with their products.
pub fn word_ball(generators: &[Mat2], bound: usize) -> Result<Vec<(Word, Mat2)>> {
    for g in generators {
        unimodular(g)?;
    }
    let exact = generators.iter().all(Mat2::is_exact);
    let field = generators.iter().find_map(|g| match g {
        Mat2::Exact(e) => Some(e[0].field()),
        Mat2::Approx(_) => None,
    });
    let id = match (exact, field) {
        (true, Some(f)) => Mat2::exact_identity(f),
        _ => Mat2::identity(),
    };
    let letters: Vec<(i32, Mat2)> = (0..generators.len())
        .flat_map(|k| {
            let g = if exact { generators[k].clone() } else { generators[k].to_approx() };
            [(k as i32 + 1, g.clone()), (-(k as i32 + 1), g.inverse())]
        })
        .collect();
    let mut out = vec![(Word::new(), id)];
    let mut frontier = 0;
    for _ in 0..bound {
        let end = out.len();
        for i in frontier..end {
            for (l, m) in &letters {
                if out[i].0.last() == Some(&-l) {
                    continue;
                }
                let mut w = out[i].0.clone();
                w.push(*l);
                let p = out[i].1.mul(m)?;
                out.push((w, p));
            }
        }
        frontier = end;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSample {
    pub t: f64,
    /// Distance from `g_t` to the nearest word found.
    pub epsilon: f64,
    pub best_word: Word,
}

/// For each `t`, the distance from `g_t` to the word ball of radius
/// `word_bound`, an upper bound on the distance to the group orbit.
pub fn recurrence_profile(generators: &[Mat2], times: &[f64], word_bound: usize) -> Result<Vec<RecurrenceSample>> {
    let ball = word_ball(generators, word_bound)?;
    times
        .iter()
        .map(|&t| {
            let g = Mat2::geodesic(t);
            let mut best = (f64::INFINITY, 0usize);
            for (i, (_, m)) in ball.iter().enumerate() {
                let d = hyp_distance(&g, &m.to_approx())?;
                if d < best.0 {
                    best = (d, i);
                }
            }
            Ok(RecurrenceSample { t, epsilon: best.0, best_word: ball[best.1].0.clone() })
        })
        .collect()
}

/// Smallest `s > 0` with `g_s` in the word ball: an element `[[a, 0], [0, 1/a]]`
/// with `0 < a < 1` gives `s = −log a`. Off-diagonal entries must vanish
/// exactly for exact generators and within `tol` otherwise.
pub fn is_periodic(generators: &[Mat2], word_bound: usize, tol: f64) -> Result<Option<f64>> {
    let ball = word_ball(generators, word_bound)?;
    let mut best: Option<f64> = None;
    for (_, m) in &ball {
        let a = match m {
            Mat2::Exact([a, b, c, _]) => {
                if !(b.is_zero() && c.is_zero()) {
                    continue;
                }
                let zero = QuadNum::zero(a.field());
                let one = QuadNum::one(a.field());
                if !(a > &zero && a < &one) {
                    continue;
                }
                a.to_f64()?
            }
            Mat2::Approx([a, b, c, _]) => {
                if !(Float::abs(*b) <= tol && Float::abs(*c) <= tol && *a > 0.0 && *a < 1.0 - tol) {
                    continue;
                }
                *a
            }
        };
        let s = -Float::ln(a);
        if best.is_none_or(|b| s < b) {
            best = Some(s);
        }
    }
    Ok(best)
}
