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

//! Saddle connections, systole proxies and diameter bounds.

mod diameter;
mod unfold;

pub use diameter::{diameter_estimate, diameter_in_triangulation, DiameterEstimate};

use core::cmp::Ordering;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{precondition, Result};
use crate::geom::Vec2;
use crate::num::Scalar;
use crate::surface::{cylinder_decomposition, EdgeId, TranslationSurface, Triangulation};
use unfold::{apply, unfold, window_distance, Arena, Event, Window, ROOT};

pub const EUCLIDEAN: [f64; 4] = [1.0, 0.0, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleConnection<S> {
    pub holonomy: Vec2<S>,
    /// Cone-point indices as in [`TranslationSurface::cone_points`].
    pub start: usize,
    pub end: usize,
    /// Polygon edges entered along the way, as `(polygon, entry edge)`.
    /// Empty for enumerations on a retriangulated surface.
    pub path: Vec<EdgeId>,
}

impl<S: Scalar> SaddleConnection<S> {
    pub fn length(&self) -> f64 {
        self.holonomy.norm_f64()
    }

    pub fn length_in(&self, metric: &[f64; 4]) -> f64 {
        apply(metric, &self.holonomy.to_f64()).norm()
    }

    pub fn reversed(&self) -> Self {
        SaddleConnection {
            holonomy: -self.holonomy.clone(),
            start: self.end,
            end: self.start,
            path: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration<S> {
    /// Sorted by length, then `|x|`, start, `x`, `y`.
    pub connections: Vec<SaddleConnection<S>>,
    /// Some development reached a marked boundary edge.
    pub truncated: bool,
}

fn scalar_cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    (a.clone() - b.clone()).sign().to_ordering()
}

fn canonical_order<S: Scalar>(metric: &[f64; 4], a: &SaddleConnection<S>, b: &SaddleConnection<S>) -> Ordering {
    a.length_in(metric)
        .total_cmp(&b.length_in(metric))
        .then(a.holonomy.x.to_f64().abs().total_cmp(&b.holonomy.x.to_f64().abs()))
        .then(a.start.cmp(&b.start))
        .then_with(|| scalar_cmp(&a.holonomy.x, &b.holonomy.x))
        .then_with(|| scalar_cmp(&a.holonomy.y, &b.holonomy.y))
}

fn path_of<S>(tri: &Triangulation<S>, arena: &Arena, mut node: usize) -> Vec<EdgeId> {
    let mut out = Vec::new();
    while node != ROOT {
        let (parent, t, k) = arena[node];
        let tr = &tri.tris[t];
        if let (Some(p), Some(e)) = (tr.polygon, tr.polygon_edges[k]) {
            out.push(EdgeId::new(p, e));
        }
        node = parent;
    }
    out.reverse();
    out
}

/// All oriented saddle connections of `|G·|`-length at most `radius`.
///
/// Developments run in the triangulation's exact coordinates; the metric
/// only enters through the pruning distance and the length filter, so a
/// metric of determinant one leaves the combinatorics exact.
pub fn enumerate_in_metric<S: Scalar>(tri: &Triangulation<S>, metric: &[f64; 4], radius: f64) -> Enumeration<S> {
    let slack = radius * (1.0 + 1e-12) + 1e-300;
    let mut connections = Vec::new();
    let mut truncated = false;
    let mut arena = Arena::new();
    for (t, tr) in tri.tris.iter().enumerate() {
        for k in 0..3 {
            let start = tr.classes[k];
            let origin = tr.verts[k].clone();
            let a = tr.edge_vector(k);
            if apply(metric, &a.to_f64()).norm() <= slack {
                let end = tr.classes[(k + 1) % 3];
                connections.push(SaddleConnection { holonomy: a.clone(), start, end, path: Vec::new() });
            }
            let b = &tr.verts[(k + 2) % 3] - &origin;
            arena.clear();
            let w = Window { tri: t, edge: (k + 1) % 3, off: -origin, right: a, left: b, node: ROOT };
            let mut found = Vec::new();
            unfold(
                tri,
                vec![w],
                &mut arena,
                |p, q, r, l| window_distance(metric, p, q, r, l) <= slack,
                |ev| match ev {
                    Event::Vertex { pos, class, node } => {
                        if apply(metric, &pos.to_f64()).norm() <= slack {
                            found.push((pos, class, node));
                        }
                    }
                    Event::Boundary => truncated = true,
                    Event::Enter { .. } => {}
                },
            );
            for (pos, class, node) in found {
                connections.push(SaddleConnection { holonomy: pos, start, end: class, path: path_of(tri, &arena, node) });
            }
        }
    }
    connections.sort_by(|a, b| canonical_order(metric, a, b));
    connections.dedup_by(|a, b| a.start == b.start && a.end == b.end && a.holonomy == b.holonomy);
    Enumeration { connections, truncated }
}

/// All oriented saddle connections of length at most `l`.
pub fn enumerate_saddle_connections<S: Scalar>(s: &TranslationSurface<S>, l: f64) -> Result<Enumeration<S>> {
    if !(l > 0.0) {
        return Err(precondition("length bound must be positive"));
    }
    Ok(enumerate_in_metric(&s.triangulate()?, &EUCLIDEAN, l))
}

/// Shortest saddle connection in the metric `|G·|`, by doubling the search
/// radius from `seed`. `None` when nothing is found below `max_radius`.
pub fn shortest_in_metric<S: Scalar>(
    tri: &Triangulation<S>,
    metric: &[f64; 4],
    seed: f64,
    max_radius: f64,
) -> Option<(f64, SaddleConnection<S>)> {
    let mut r = seed.max(1e-300);
    loop {
        let e = enumerate_in_metric(tri, metric, r);
        if let Some(c) = e.connections.into_iter().next() {
            return Some((c.length_in(metric), c));
        }
        if r > max_radius {
            return None;
        }
        r *= 2.0;
    }
}

fn seed_radius<S: Scalar>(s: &TranslationSurface<S>) -> f64 {
    num_traits::Float::sqrt(2.0 * s.area().to_f64() / core::f64::consts::PI)
}

/// Shortest saddle connection and its length, with ties broken by `|x|`
/// and start cone point.
pub fn shortest_saddle_connection<S: Scalar>(s: &TranslationSurface<S>) -> Result<(f64, SaddleConnection<S>)> {
    let tri = s.triangulate()?;
    let longest = tri
        .tris
        .iter()
        .flat_map(|t| (0..3).map(move |k| t.edge_vector(k).norm_f64()))
        .fold(0.0, f64::max);
    shortest_in_metric(&tri, &EUCLIDEAN, seed_radius(s), 2.0 * longest + 1.0)
        .ok_or_else(|| precondition("no saddle connection found"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystoleEstimate {
    /// Shortest saddle connection, a lower bound for the systole.
    pub lower_proxy: f64,
    /// Shortest cylinder waist or saddle-connection loop found; infinite if none.
    pub closed_curve_upper: f64,
}

/// Systole bracket from saddle connections and cylinder waists found in the
/// directions of connections up to `search_bound`.
pub fn systole_estimate<S: Scalar>(s: &TranslationSurface<S>, search_bound: f64) -> Result<SystoleEstimate> {
    let (lower, _) = shortest_saddle_connection(s)?;
    if search_bound < lower * (1.0 - 1e-12) {
        return Err(precondition("search bound is below the shortest saddle connection"));
    }
    let e = enumerate_saddle_connections(s, search_bound)?;
    let mut upper = e
        .connections
        .iter()
        .filter(|c| c.start == c.end)
        .map(SaddleConnection::length)
        .fold(f64::INFINITY, f64::min);
    // one representative per direction, shortest first
    let mut dirs: Vec<&SaddleConnection<S>> = Vec::new();
    for c in &e.connections {
        let h = &c.holonomy;
        if !dirs.iter().any(|d| d.holonomy.cross(h).is_zero() && d.holonomy.dot(h).sign().is_positive()) {
            dirs.push(c);
        }
    }
    for d in dirs {
        if d.length() >= upper {
            break;
        }
        let dec = cylinder_decomposition(s, &d.holonomy, search_bound.min(upper))?;
        for c in &dec.cylinders {
            upper = upper.min(c.waist());
        }
    }
    Ok(SystoleEstimate { lower_proxy: lower, closed_curve_upper: upper })
}
