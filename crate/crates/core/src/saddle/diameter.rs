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

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::unfold::{unfold, window_distance, Arena, Event, Window, ROOT};
use super::EUCLIDEAN;
use crate::error::{precondition, Result};
use crate::geom::{strictly_between, Vec2};
use crate::num::Scalar;
use crate::surface::{TranslationSurface, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterEstimate {
    pub lower: f64,
    /// `None` when the surface has marked boundary.
    pub upper: Option<f64>,
    /// Every point lies within this distance of a sample.
    pub cover_radius: f64,
    pub samples: usize,
}

struct Sample {
    tri: usize,
    at: Vec2<f64>,
}

/// Diameter bracket from pairwise geodesic distances between sample points.
///
/// Distances are computed by straight-line development (a pair is joined
/// either by a segment or by a chain through cone points), so the lower bound
/// is a genuine distance up to rounding. The upper bound adds twice the
/// covering radius of the samples.
pub fn diameter_estimate<S: Scalar>(s: &TranslationSurface<S>, sample_count: usize) -> Result<DiameterEstimate> {
    let mut tri = s.to_approx().triangulate()?;
    tri.make_delaunay(EUCLIDEAN);
    diameter_in_triangulation(&tri, sample_count)
}

fn dist(v: &Vec2<f64>) -> f64 {
    Float::hypot(v.x, v.y)
}

pub fn diameter_in_triangulation(tri: &Triangulation<f64>, sample_count: usize) -> Result<DiameterEstimate> {
    if sample_count < 2 {
        return Err(precondition("at least two samples are needed"));
    }
    let areas: Vec<f64> = tri.tris.iter().map(|t| 0.5 * t.edge_vector(0).cross(&t.edge_vector(1))).collect();
    let total: f64 = areas.iter().sum();

    // centroids of the m² similar pieces of each triangle
    let mut samples = Vec::new();
    let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); tri.tris.len()];
    let mut cover: f64 = 0.0;
    for (t, tr) in tri.tris.iter().enumerate() {
        let m = Float::round(Float::sqrt(sample_count as f64 * areas[t] / total)).max(1.0) as usize;
        let [a, b, c] = &tr.verts;
        let (u, w) = (b - a, c - a);
        let centroid = Vec2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
        let reach = tr.verts.iter().map(|v| dist(&(v - &centroid))).fold(0.0, f64::max);
        cover = cover.max(reach / m as f64);
        let mf = m as f64;
        let mut push = |i: f64, j: f64| {
            let at = Vec2::new(a.x + (i * u.x + j * w.x) / mf, a.y + (i * u.y + j * w.y) / mf);
            by_tri[t].push(samples.len());
            samples.push(Sample { tri: t, at });
        };
        for i in 0..m {
            for j in 0..m - i {
                push(i as f64 + 1.0 / 3.0, j as f64 + 1.0 / 3.0);
                if i + j + 1 < m {
                    push(i as f64 + 2.0 / 3.0, j as f64 + 2.0 / 3.0);
                }
            }
        }
    }

    let closed = !tri.boundary_class.iter().any(|&b| b);
    let nc = tri.class_count;
    // cone graph along edges bounds every distance
    let mut graph = vec![vec![f64::INFINITY; nc]; nc];
    let mut longest: f64 = 0.0;
    for (i, row) in graph.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for tr in &tri.tris {
        for k in 0..3 {
            let len = dist(&tr.edge_vector(k));
            longest = longest.max(len);
            let (a, b) = (tr.classes[k], tr.classes[(k + 1) % 3]);
            graph[a][b] = graph[a][b].min(len);
            graph[b][a] = graph[b][a].min(len);
        }
    }
    floyd(&mut graph);
    let graph_diam = graph.iter().flatten().filter(|d| d.is_finite()).fold(0.0f64, |a, &b| a.max(b));
    // every point of a triangle is within its circumradius of a vertex
    let circum = tri.tris.iter().map(circumradius).fold(0.0, f64::max);
    let radius = 2.0 * circum.min(longest) + graph_diam;

    let mut arena = Arena::new();
    // cone-to-cone distances through visible segments
    let mut cones = vec![vec![f64::INFINITY; nc]; nc];
    for (i, row) in cones.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for tr in &tri.tris {
        for k in 0..3 {
            let (a, b) = (tr.classes[k], tr.classes[(k + 1) % 3]);
            let len = dist(&tr.edge_vector(k));
            cones[a][b] = cones[a][b].min(len);
        }
    }
    for (t, tr) in tri.tris.iter().enumerate() {
        for k in 0..3 {
            let c = tr.classes[k];
            let x = tr.verts[k].clone();
            let w = Window {
                tri: t,
                edge: (k + 1) % 3,
                off: -x.clone(),
                right: tr.edge_vector(k),
                left: &tr.verts[(k + 2) % 3] - &x,
                node: ROOT,
            };
            arena.clear();
            let row = &mut cones[c];
            unfold(tri, vec![w], &mut arena, |p, q, r, l| window_distance(&EUCLIDEAN, p, q, r, l) <= radius, |ev| {
                if let Event::Vertex { pos, class, .. } = ev {
                    row[class] = row[class].min(dist(&pos));
                }
            });
        }
    }
    floyd(&mut cones);

    let mut develop = |x: &Vec2<f64>, t: usize, f: &mut dyn FnMut(Event<'_, f64>)| {
        let tr = &tri.tris[t];
        let off = -x.clone();
        let start = (0..3)
            .map(|k| Window {
                tri: t,
                edge: k,
                off: off.clone(),
                right: &tr.verts[k] - x,
                left: &tr.verts[(k + 1) % 3] - x,
                node: ROOT,
            })
            .collect();
        arena.clear();
        unfold(tri, start, &mut arena, |p, q, r, l| window_distance(&EUCLIDEAN, p, q, r, l) <= radius, f);
    };

    // distance from each sample to each cone point, possibly through others
    let n = samples.len();
    let mut via = vec![vec![f64::INFINITY; nc]; n];
    for (i, sm) in samples.iter().enumerate() {
        let row = &mut via[i];
        for (k, v) in tri.tris[sm.tri].verts.iter().enumerate() {
            let c = tri.tris[sm.tri].classes[k];
            row[c] = row[c].min(dist(&(v - &sm.at)));
        }
        develop(&sm.at, sm.tri, &mut |ev| {
            if let Event::Vertex { pos, class, .. } = ev {
                row[class] = row[class].min(dist(&pos));
            }
        });
        let direct = row.clone();
        for c in 0..nc {
            row[c] = (0..nc).map(|d| direct[d] + cones[d][c]).fold(f64::INFINITY, f64::min);
        }
    }

    let mut lower: f64 = 0.0;
    let mut best = vec![f64::INFINITY; n];
    for (i, sm) in samples.iter().enumerate() {
        best.iter_mut().for_each(|b| *b = f64::INFINITY);
        for &j in &by_tri[sm.tri] {
            let d = &samples[j].at - &sm.at;
            best[j] = d.dot(&d);
        }
        develop(&sm.at, sm.tri, &mut |ev| {
            if let Event::Enter { tri: t, off, right, left } = ev {
                for &j in &by_tri[t] {
                    let q = &samples[j].at + off;
                    let d2 = q.dot(&q);
                    if d2 < best[j] && strictly_between(right, left, &q) {
                        best[j] = d2;
                    }
                }
            }
        });
        for j in 0..n {
            let through = (0..nc).map(|c| via[i][c] + via[j][c]).fold(f64::INFINITY, f64::min);
            let d = Float::sqrt(best[j]).min(through);
            if d.is_finite() {
                lower = lower.max(d);
            }
        }
    }
    Ok(DiameterEstimate { lower, upper: closed.then_some(lower + 2.0 * cover), cover_radius: cover, samples: n })
}

fn circumradius(t: &crate::surface::Triangle<f64>) -> f64 {
    let (a, b, c) = (dist(&t.edge_vector(0)), dist(&t.edge_vector(1)), dist(&t.edge_vector(2)));
    let twice_area = t.edge_vector(0).cross(&t.edge_vector(1));
    a * b * c / (2.0 * twice_area)
}

fn floyd(d: &mut [Vec<f64>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}
