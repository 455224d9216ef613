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

//! Straight-line developments of a triangulated surface through windows.

use alloc::vec::Vec;

use num_traits::Float;

use crate::geom::{strictly_between, Vec2};
use crate::num::{Scalar, Sign};
use crate::surface::{Adjacency, Triangulation};

/// Edge `edge` of triangle `tri`, developed with `off` added to the
/// triangle's own coordinates and seen from the origin through the open cone
/// from `right` to `left`.
#[derive(Debug, Clone)]
pub(crate) struct Window<S> {
    pub tri: usize,
    pub edge: usize,
    pub off: Vec2<S>,
    pub right: Vec2<S>,
    pub left: Vec2<S>,
    pub node: usize,
}

pub(crate) enum Event<'a, S> {
    /// A vertex seen strictly inside the current cone.
    Vertex { pos: Vec2<S>, class: usize, node: usize },
    /// A triangle entered through a window.
    Enter { tri: usize, off: &'a Vec2<S>, right: &'a Vec2<S>, left: &'a Vec2<S> },
    Boundary,
}

pub(crate) const ROOT: usize = usize::MAX;

/// Crossing history: `(parent, triangle entered, entry edge)`.
pub(crate) type Arena = Vec<(usize, usize, usize)>;

/// Depth-first development of every window, pruned by `keep(P, Q, right, left)`
/// on the developed window segment `P Q`.
pub(crate) fn unfold<S: Scalar>(
    tri: &Triangulation<S>,
    start: Vec<Window<S>>,
    arena: &mut Arena,
    keep: impl Fn(&Vec2<S>, &Vec2<S>, &Vec2<S>, &Vec2<S>) -> bool,
    mut on: impl FnMut(Event<'_, S>),
) {
    let mut stack = start;
    while let Some(w) = stack.pop() {
        let t = &tri.tris[w.tri];
        let p = &t.verts[w.edge] + &w.off;
        let q = &t.verts[(w.edge + 1) % 3] + &w.off;
        if !keep(&p, &q, &w.right, &w.left) {
            continue;
        }
        let Adjacency::Glued { tri: t2, edge: k2 } = t.adj[w.edge] else {
            on(Event::Boundary);
            continue;
        };
        let tau = &tri.tris[t2].verts[k2] - &t.verts[(w.edge + 1) % 3];
        let off = &w.off - &tau;
        arena.push((w.node, t2, k2));
        let node = arena.len() - 1;
        on(Event::Enter { tri: t2, off: &off, right: &w.right, left: &w.left });
        let u = &tri.tris[t2];
        let o = &u.verts[(k2 + 2) % 3] + &off;
        let (e1, e2) = ((k2 + 1) % 3, (k2 + 2) % 3);
        if strictly_between(&w.right, &w.left, &o) {
            on(Event::Vertex { pos: o.clone(), class: u.classes[(k2 + 2) % 3], node });
            stack.push(Window { tri: t2, edge: e1, off: off.clone(), right: w.right.clone(), left: o.clone(), node });
            stack.push(Window { tri: t2, edge: e2, off, right: o, left: w.left, node });
        } else if w.right.cross(&o).sign() != Sign::Positive {
            stack.push(Window { tri: t2, edge: e2, off, right: w.right, left: w.left, node });
        } else {
            stack.push(Window { tri: t2, edge: e1, off, right: w.right, left: w.left, node });
        }
    }
}

pub(crate) fn apply(g: &[f64; 4], v: &Vec2<f64>) -> Vec2<f64> {
    Vec2::new(g[0] * v.x + g[1] * v.y, g[2] * v.x + g[3] * v.y)
}

/// Distance in the metric `|G·|` from the origin to the part of segment
/// `p q` inside the cone from `r` to `l`. Falls back to the whole segment
/// when rounding leaves the visible part empty.
pub(crate) fn window_distance<S: Scalar>(g: &[f64; 4], p: &Vec2<S>, q: &Vec2<S>, r: &Vec2<S>, l: &Vec2<S>) -> f64 {
    let (p, q, r, l) = (apply(g, &p.to_f64()), apply(g, &q.to_f64()), apply(g, &r.to_f64()), apply(g, &l.to_f64()));
    let d = &q - &p;
    let (mut s0, mut s1) = (0.0f64, 1.0f64);
    // cross(r, p + s d) >= 0 and cross(p + s d, l) >= 0
    for (c0, c1) in [(r.cross(&p), r.cross(&d)), (p.cross(&l), d.cross(&l))] {
        if c1 > 0.0 {
            s0 = s0.max(-c0 / c1);
        } else if c1 < 0.0 {
            s1 = s1.min(-c0 / c1);
        } else if c0 < 0.0 {
            s1 = -1.0;
        }
    }
    if !(s0 <= s1) {
        s0 = 0.0;
        s1 = 1.0;
    }
    let a = Vec2::new(p.x + s0 * d.x, p.y + s0 * d.y);
    let b = Vec2::new(p.x + s1 * d.x, p.y + s1 * d.y);
    segment_distance(&a, &b)
}

/// Distance from the origin to segment `a b`.
pub(crate) fn segment_distance(a: &Vec2<f64>, b: &Vec2<f64>) -> f64 {
    let d = b - a;
    let dd = d.dot(&d);
    let s = if dd > 0.0 { (-a.dot(&d) / dd).clamp(0.0, 1.0) } else { 0.0 };
    Float::hypot(a.x + s * d.x, a.y + s * d.y)
}
