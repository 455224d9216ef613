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

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{ConeAngle, EdgeId, EdgeLink, TranslationSurface};
use crate::error::{Error, Result};
use crate::geom::{orient, Vec2};
use crate::num::{Scalar, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    Glued { tri: usize, edge: usize },
    Boundary,
}

/// A triangle placed in its own frame. Edge `k` runs from `verts[k]` to
/// `verts[(k + 1) % 3]`; vertices are counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangle<S> {
    pub verts: [Vec2<S>; 3],
    pub classes: [usize; 3],
    pub adj: [Adjacency; 3],
    /// Source polygon while the triangle still sits in that polygon's frame.
    pub polygon: Option<usize>,
    /// Polygon edge carrying triangle edge `k`, `None` for diagonals.
    pub polygon_edges: [Option<usize>; 3],
}

impl<S: Scalar> Triangle<S> {
    pub fn edge_vector(&self, k: usize) -> Vec2<S> {
        &self.verts[(k + 1) % 3] - &self.verts[k]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation<S> {
    pub tris: Vec<Triangle<S>>,
    /// Number of vertex classes.
    pub class_count: usize,
    /// Classes touching marked boundary.
    pub boundary_class: Vec<bool>,
}

fn ear_clip<S: Scalar>(poly: &[Vec2<S>]) -> Result<Vec<[usize; 3]>> {
    let n = poly.len();
    let mut rem: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n.saturating_sub(2));
    while rem.len() > 3 {
        let m = rem.len();
        let ear = (0..m).find(|&k| {
            let (a, b, c) = (rem[(k + m - 1) % m], rem[k], rem[(k + 1) % m]);
            if orient(&poly[a], &poly[b], &poly[c]) != Sign::Positive {
                return false;
            }
            rem.iter().all(|&o| {
                o == a
                    || o == b
                    || o == c
                    || orient(&poly[a], &poly[b], &poly[o]) == Sign::Negative
                    || orient(&poly[b], &poly[c], &poly[o]) == Sign::Negative
                    || orient(&poly[c], &poly[a], &poly[o]) == Sign::Negative
            })
        });
        let Some(k) = ear else {
            return Err(Error::Triangulation(format!("no ear among {m} remaining vertices")));
        };
        out.push([rem[(k + m - 1) % m], rem[k], rem[(k + 1) % m]]);
        rem.remove(k);
    }
    if orient(&poly[rem[0]], &poly[rem[1]], &poly[rem[2]]) != Sign::Positive {
        return Err(Error::Triangulation("degenerate final triangle".into()));
    }
    out.push([rem[0], rem[1], rem[2]]);
    Ok(out)
}

impl<S: Scalar> Triangulation<S> {
    /// Ear-clipping triangulation of every polygon, kept in polygon frames.
    pub fn from_surface(s: &TranslationSurface<S>) -> Result<Self> {
        let classes = s.corner_classes();
        let cones = s.cone_points();
        let boundary_class = cones.iter().map(|c| c.angle == ConeAngle::Boundary).collect();
        let mut tris: Vec<Triangle<S>> = Vec::new();
        let mut edge_home: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
        for (p, poly) in s.polygons().iter().enumerate() {
            let n = poly.vertices.len();
            let ears = ear_clip(&poly.vertices)?;
            let mut diag: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
            let base = tris.len();
            for (local, idx) in ears.iter().enumerate() {
                let t = base + local;
                let mut pe = [None; 3];
                for k in 0..3 {
                    let (a, b) = (idx[k], idx[(k + 1) % 3]);
                    if b == (a + 1) % n {
                        pe[k] = Some(a);
                        edge_home.insert(EdgeId::new(p, a), (t, k));
                    } else {
                        diag.insert((a, b), (t, k));
                    }
                }
                tris.push(Triangle {
                    verts: [poly.vertices[idx[0]].clone(), poly.vertices[idx[1]].clone(), poly.vertices[idx[2]].clone()],
                    classes: [classes[p][idx[0]], classes[p][idx[1]], classes[p][idx[2]]],
                    adj: [Adjacency::Boundary; 3],
                    polygon: Some(p),
                    polygon_edges: pe,
                });
            }
            for (&(a, b), &(t, k)) in &diag {
                let &(t2, k2) = diag.get(&(b, a)).ok_or_else(|| Error::Triangulation("unpaired diagonal".into()))?;
                tris[t].adj[k] = Adjacency::Glued { tri: t2, edge: k2 };
            }
        }
        for (e, &(t, k)) in &edge_home {
            if let EdgeLink::Glued(f) = s.link(*e) {
                let &(t2, k2) = edge_home.get(&f).ok_or_else(|| Error::Triangulation("missing partner edge".into()))?;
                tris[t].adj[k] = Adjacency::Glued { tri: t2, edge: k2 };
            }
        }
        Ok(Triangulation { tris, class_count: cones.len(), boundary_class })
    }

    /// Translation from the frame of `tri` to the frame of the triangle
    /// across edge `edge`.
    pub fn translation(&self, tri: usize, edge: usize) -> Option<Vec2<S>> {
        match self.tris[tri].adj[edge] {
            Adjacency::Glued { tri: t2, edge: k2 } => Some(&self.tris[t2].verts[k2] - &self.tris[tri].verts[(edge + 1) % 3]),
            Adjacency::Boundary => None,
        }
    }

    /// Triangle and edge carrying polygon edge `e`.
    pub fn polygon_edge(&self, e: EdgeId) -> Option<(usize, usize)> {
        self.tris.iter().enumerate().find_map(|(t, tri)| {
            if tri.polygon != Some(e.polygon) {
                return None;
            }
            (0..3).find(|&k| tri.polygon_edges[k] == Some(e.edge)).map(|k| (t, k))
        })
    }

    pub fn map_vertices<T: Scalar>(&self, f: impl Fn(&Vec2<S>) -> Vec2<T>) -> Triangulation<T> {
        Triangulation {
            tris: self
                .tris
                .iter()
                .map(|t| Triangle {
                    verts: [f(&t.verts[0]), f(&t.verts[1]), f(&t.verts[2])],
                    classes: t.classes,
                    adj: t.adj,
                    polygon: t.polygon,
                    polygon_edges: t.polygon_edges,
                })
                .collect(),
            class_count: self.class_count,
            boundary_class: self.boundary_class.clone(),
        }
    }

    /// Replaces the diagonal of the quadrilateral formed by `tri` and its
    /// neighbour across `edge`. Returns `false` (and changes nothing) when the
    /// quadrilateral is not strictly convex or the edge is not flippable.
    pub fn flip(&mut self, tri: usize, edge: usize) -> bool {
        let Adjacency::Glued { tri: t2, edge: k2 } = self.tris[tri].adj[edge] else {
            return false;
        };
        if t2 == tri {
            return false;
        }
        let k = edge;
        let tau = self.translation(tri, k).expect("glued edge");
        let t1v = self.tris[tri].verts.clone();
        let t2v = self.tris[t2].verts.clone();
        let a = t1v[k].clone();
        let b = t1v[(k + 1) % 3].clone();
        let c = t1v[(k + 2) % 3].clone();
        let d = &t2v[(k2 + 2) % 3] - &tau;
        let oa = orient(&c, &d, &a).as_i32();
        let ob = orient(&c, &d, &b).as_i32();
        if oa * ob >= 0 {
            return false;
        }
        let c1 = self.tris[tri].classes;
        let c2 = self.tris[t2].classes;
        let (ca, cb, cc, cd) = (c1[k], c1[(k + 1) % 3], c1[(k + 2) % 3], c2[(k2 + 2) % 3]);

        // outer edges, old id -> new id
        let old_new = [
            ((tri, (k + 1) % 3), (t2, 1)),
            ((tri, (k + 2) % 3), (tri, 2)),
            ((t2, (k2 + 1) % 3), (tri, 0)),
            ((t2, (k2 + 2) % 3), (t2, 0)),
        ];
        let remap = |id: (usize, usize)| old_new.iter().find(|(o, _)| *o == id).map(|(_, n)| *n);
        let outer: Vec<(Adjacency, (usize, usize))> = old_new
            .iter()
            .map(|&((ot, oe), newid)| {
                let adj = match self.tris[ot].adj[oe] {
                    Adjacency::Glued { tri: x, edge: e } => match remap((x, e)) {
                        Some((nt, ne)) => Adjacency::Glued { tri: nt, edge: ne },
                        None => Adjacency::Glued { tri: x, edge: e },
                    },
                    Adjacency::Boundary => Adjacency::Boundary,
                };
                (adj, newid)
            })
            .collect();

        self.tris[tri] = Triangle {
            verts: [a, d.clone(), c.clone()],
            classes: [ca, cd, cc],
            adj: [Adjacency::Boundary, Adjacency::Glued { tri: t2, edge: 2 }, Adjacency::Boundary],
            polygon: None,
            polygon_edges: [None; 3],
        };
        self.tris[t2] = Triangle {
            verts: [d, b, c],
            classes: [cd, cb, cc],
            adj: [Adjacency::Boundary, Adjacency::Boundary, Adjacency::Glued { tri, edge: 1 }],
            polygon: None,
            polygon_edges: [None; 3],
        };
        for (adj, (nt, ne)) in outer {
            self.tris[nt].adj[ne] = adj;
            if let Adjacency::Glued { tri: x, edge: e } = adj {
                let is_internal = old_new.iter().any(|(_, n)| *n == (x, e));
                if !is_internal {
                    self.tris[x].adj[e] = Adjacency::Glued { tri: nt, edge: ne };
                }
            }
        }
        true
    }

    /// Flips edges until the triangulation is Delaunay for the quadratic form
    /// `|G v|²` (up to a relative tolerance). Returns the number of flips.
    pub fn make_delaunay(&mut self, metric: [f64; 4]) -> usize {
        let g = |v: &Vec2<S>| {
            let f = v.to_f64();
            (metric[0] * f.x + metric[1] * f.y, metric[2] * f.x + metric[3] * f.y)
        };
        let mut flips = 0;
        let limit = 200 * self.tris.len() + 10_000;
        let mut stack: Vec<(usize, usize)> = (0..self.tris.len()).flat_map(|t| (0..3).map(move |k| (t, k))).collect();
        while let Some((t, k)) = stack.pop() {
            if flips >= limit {
                break;
            }
            let Some(tau) = self.translation(t, k) else { continue };
            let Adjacency::Glued { tri: t2, edge: k2 } = self.tris[t].adj[k] else { continue };
            if t2 == t {
                continue;
            }
            let tr = &self.tris[t];
            let (a, b, c) = (g(&tr.verts[k]), g(&tr.verts[(k + 1) % 3]), g(&tr.verts[(k + 2) % 3]));
            let d = g(&(&self.tris[t2].verts[(k2 + 2) % 3] - &tau));
            if incircle(a, b, c, d) && self.flip(t, k) {
                flips += 1;
                for e in 0..3 {
                    stack.push((t, e));
                    stack.push((t2, e));
                }
            }
        }
        flips
    }

    pub fn twice_area(&self) -> S {
        self.tris
            .iter()
            .map(|t| t.edge_vector(0).cross(&t.edge_vector(1)))
            .reduce(|a, b| a + b)
            .expect("nonempty")
    }
}

/// `d` strictly inside the circumcircle of counterclockwise `a, b, c`, with a
/// relative tolerance so cocircular configurations do not flip back and forth.
fn incircle(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (adx, ady) = (a.0 - d.0, a.1 - d.1);
    let (bdx, bdy) = (b.0 - d.0, b.1 - d.1);
    let (cdx, cdy) = (c.0 - d.0, c.1 - d.1);
    let (al, bl, cl) = (adx * adx + ady * ady, bdx * bdx + bdy * bdy, cdx * cdx + cdy * cdy);
    let det = al * (bdx * cdy - cdx * bdy) + bl * (cdx * ady - adx * cdy) + cl * (adx * bdy - bdx * ady);
    let scale = al.max(bl).max(cl);
    det.is_finite() && det > 1e-9 * scale * scale
}
