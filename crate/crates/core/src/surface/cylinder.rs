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

//! Cylinder decompositions by separatrix tracing.

use core::cmp::Ordering;

use alloc::vec;
use alloc::vec::Vec;

use super::{Adjacency, Triangulation, TranslationSurface};
use crate::geom::Vec2;
use crate::num::{Scalar, Sign};

const MAX_STEPS: usize = 1_000_000;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder<S> {
    /// Holonomy of the core curve, a positive multiple of the direction.
    pub waist_holonomy: Vec2<S>,
    pub height: f64,
    /// Height over circumference, exact in the coordinate field.
    pub modulus: S,
    pub area: S,
    pub boundary_saddle_connections: Vec<Vec2<S>>,
}

impl<S: Scalar> Cylinder<S> {
    pub fn waist(&self) -> f64 {
        self.waist_holonomy.norm_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderDecomposition<S> {
    pub direction: Vec2<S>,
    pub cylinders: Vec<Cylinder<S>>,
    /// Saddle connections found in the direction, each listed once.
    pub saddle_connections: Vec<Vec2<S>>,
    /// Some part of the area is not covered by the reported cylinders.
    pub residual: bool,
}

fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    (a.clone() - b.clone()).sign().to_ordering()
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    a.near(b, TOL)
}

/// x-coordinate where segment `a b` meets the horizontal line at height `y`.
fn x_at<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, y: &S) -> S {
    a.x.clone() + (y.clone() - a.y.clone()) * (b.x.clone() - a.x.clone()) / (b.y.clone() - a.y.clone())
}

/// Corner `k` of a counterclockwise triangle sees `u` in the half-open
/// wedge from its outgoing edge (inclusive) to its incoming edge.
fn in_wedge<S: Scalar>(verts: &[Vec2<S>; 3], k: usize, u: &Vec2<S>) -> bool {
    let out = &verts[(k + 1) % 3] - &verts[k];
    let inc = &verts[(k + 2) % 3] - &verts[k];
    let c = out.cross(u).sign();
    (c == Sign::Positive && u.cross(&inc).sign() == Sign::Positive) || (c == Sign::Zero && out.dot(u).sign() == Sign::Positive)
}

struct Trace<S> {
    /// Signed length along `x` in rotated coordinates.
    length: S,
    closed: bool,
    forward: bool,
}

struct Tracer<'a, S> {
    tri: &'a Triangulation<S>,
    levels: Vec<Vec<S>>,
    visits: Vec<Vec<(S, usize)>>,
}

impl<S: Scalar> Tracer<'_, S> {
    fn visit(&mut self, t: usize, y: &S, id: usize) {
        self.levels[t].push(y.clone());
        self.visits[t].push((y.clone(), id));
    }

    /// Follows the horizontal separatrix leaving corner `k` of triangle `t`.
    fn trace(&mut self, t: usize, k: usize, forward: bool, id: usize, bound: f64) -> Trace<S> {
        let tris = &self.tri.tris;
        let v = &tris[t].verts;
        let y = v[k].y.clone();
        let along = &v[(k + 1) % 3] - &v[k];
        if along.y.is_zero() {
            self.visit(t, &y, id);
            if let Adjacency::Glued { tri: t2, edge: k2 } = tris[t].adj[k] {
                let y2 = tris[t2].verts[k2].y.clone();
                self.visit(t2, &y2, id);
            }
            return Trace { length: along.x.clone(), closed: true, forward };
        }
        self.visit(t, &y, id);
        let x0 = v[k].x.clone();
        let (a, b) = (&v[(k + 1) % 3], &v[(k + 2) % 3]);
        let mut x = x_at(a, b, &y);
        let mut length = x.clone() - x0;
        let (mut cur, mut edge, mut y) = (t, (k + 1) % 3, y);
        for _ in 0..MAX_STEPS {
            if length.to_f64().abs() > bound {
                break;
            }
            let Adjacency::Glued { tri: t2, edge: k2 } = tris[cur].adj[edge] else {
                break;
            };
            let tau = &tris[t2].verts[k2] - &tris[cur].verts[(edge + 1) % 3];
            x = x + tau.x.clone();
            y = y + tau.y.clone();
            cur = t2;
            edge = k2;
            self.visit(cur, &y, id);
            let w = &tris[cur].verts;
            let o = &w[(edge + 2) % 3];
            let dy = (o.y.clone() - y.clone()).sign();
            if dy == Sign::Zero {
                length = length + (o.x.clone() - x.clone());
                return Trace { length, closed: true, forward };
            }
            edge = if dy == (w[edge].y.clone() - y.clone()).sign() { (edge + 1) % 3 } else { (edge + 2) % 3 };
            let nx = x_at(&w[edge], &w[(edge + 1) % 3], &y);
            length = length + (nx.clone() - x);
            x = nx;
        }
        Trace { length, closed: false, forward }
    }
}

struct Trap<S> {
    lo: S,
    hi: S,
    left: usize,
    right: usize,
    width: S,
}

fn traps_of<S: Scalar>(verts: &[Vec2<S>; 3], levels: &[S]) -> Vec<Trap<S>> {
    let two = levels[0].from_i64_like(2);
    levels
        .windows(2)
        .map(|w| {
            let mid = (w[0].clone() + w[1].clone()) / two.clone();
            let mut hits: Vec<(S, usize)> = (0..3)
                .filter(|&k| {
                    let (a, b) = (&verts[k].y, &verts[(k + 1) % 3].y);
                    cmp(a, &mid) != cmp(b, &mid) && cmp(a, &mid) != Ordering::Equal && cmp(b, &mid) != Ordering::Equal
                })
                .map(|k| (x_at(&verts[k], &verts[(k + 1) % 3], &mid), k))
                .collect();
            hits.sort_by(|p, q| cmp(&p.0, &q.0));
            let (l, r) = (hits[0].clone(), hits[1].clone());
            Trap { lo: w[0].clone(), hi: w[1].clone(), left: l.1, right: r.1, width: r.0 - l.0 }
        })
        .collect()
}

/// Cylinders in direction `direction` with waist at most `length_bound`,
/// found by tracing every separatrix in that direction up to the bound.
pub fn cylinder_decomposition<S: Scalar>(
    s: &TranslationSurface<S>,
    direction: &Vec2<S>,
    length_bound: f64,
) -> crate::Result<CylinderDecomposition<S>> {
    if direction.is_zero() {
        return Err(crate::error::precondition("direction must be nonzero"));
    }
    let (dx, dy) = (direction.x.clone(), direction.y.clone());
    let n2 = direction.dot(direction);
    let norm = num_traits::Float::sqrt(n2.to_f64());
    let rot = s.triangulate()?.map_vertices(|v| {
        Vec2::new(dx.clone() * v.x.clone() + dy.clone() * v.y.clone(), dx.clone() * v.y.clone() - dy.clone() * v.x.clone())
    });
    let bound = length_bound * norm * (1.0 + 1e-12);
    let nt = rot.tris.len();
    let mut tracer = Tracer { tri: &rot, levels: vec![Vec::new(); nt], visits: vec![Vec::new(); nt] };
    for (t, tr) in rot.tris.iter().enumerate() {
        for v in &tr.verts {
            tracer.levels[t].push(v.y.clone());
        }
    }

    let zero = dx.zero_like();
    let one = dx.from_i64_like(1);
    let mut traces = Vec::new();
    let mut resolved = true;
    for t in 0..nt {
        for k in 0..3 {
            for forward in [true, false] {
                let u = Vec2::new(if forward { one.clone() } else { -one.clone() }, zero.clone());
                if in_wedge(&rot.tris[t].verts, k, &u) {
                    let tr = tracer.trace(t, k, forward, traces.len(), bound);
                    resolved &= tr.closed;
                    traces.push(tr);
                }
            }
        }
    }
    let scale_back = |len: &S| direction.scale(&(len.clone() / n2.clone()));
    let saddle_connections: Vec<Vec2<S>> =
        traces.iter().filter(|t| t.closed && t.forward).map(|t| scale_back(&t.length)).collect();

    let Tracer { levels, visits, .. } = tracer;
    let levels: Vec<Vec<S>> = levels
        .into_iter()
        .map(|mut l| {
            l.sort_by(cmp);
            l.dedup_by(|a, b| same(a, b));
            l
        })
        .collect();
    let traps: Vec<Vec<Trap<S>>> = rot.tris.iter().zip(&levels).map(|(t, l)| traps_of(&t.verts, l)).collect();

    let find = |t: usize, lo: &S, hi: &S| -> Option<usize> {
        let j = traps[t].iter().position(|tp| same(&tp.lo, lo))?;
        same(&traps[t][j].hi, hi).then_some(j)
    };
    let mut seen: Vec<Vec<bool>> = traps.iter().map(|v| vec![false; v.len()]).collect();
    let mut cylinders = Vec::new();
    let mut covered = zero.clone();
    for t0 in 0..nt {
        for j0 in 0..traps[t0].len() {
            if seen[t0][j0] {
                continue;
            }
            let mut chain = vec![(t0, j0)];
            let (mut t, mut j) = (t0, j0);
            let (mut lo, mut hi) = (traps[t][j].lo.clone(), traps[t][j].hi.clone());
            let mut closed = false;
            while chain.len() <= 3 * nt * 4 + traps.iter().map(Vec::len).sum::<usize>() {
                let tp = &traps[t][j];
                let Adjacency::Glued { tri: t2, edge: k2 } = rot.tris[t].adj[tp.right] else { break };
                let tau = &rot.tris[t2].verts[k2] - &rot.tris[t].verts[(tp.right + 1) % 3];
                lo = lo + tau.y.clone();
                hi = hi + tau.y.clone();
                let Some(j2) = find(t2, &lo, &hi) else { break };
                if traps[t2][j2].left != k2 {
                    break;
                }
                if (t2, j2) == (t0, j0) {
                    closed = true;
                    break;
                }
                if seen[t2][j2] || chain.contains(&(t2, j2)) {
                    break;
                }
                chain.push((t2, j2));
                (t, j) = (t2, j2);
            }
            for &(a, b) in &chain {
                seen[a][b] = true;
            }
            if !closed {
                continue;
            }
            let width = chain.iter().map(|&(a, b)| traps[a][b].width.clone()).reduce(|p, q| p + q).expect("nonempty");
            let first = &traps[t0][j0];
            let h = first.hi.clone() - first.lo.clone();
            if width.to_f64() > bound {
                continue;
            }
            let area_r = width.clone() * h.clone();
            covered = covered + area_r.clone();
            let mut ids: Vec<usize> = chain
                .iter()
                .flat_map(|&(a, b)| {
                    let tp = &traps[a][b];
                    visits[a].iter().filter(move |(y, _)| same(y, &tp.lo) || same(y, &tp.hi)).map(|(_, id)| *id)
                })
                .filter(|&id| traces[id].forward && traces[id].closed)
                .collect();
            ids.sort_unstable();
            ids.dedup();
            cylinders.push(Cylinder {
                waist_holonomy: scale_back(&width),
                height: h.to_f64() / norm,
                modulus: h / width,
                area: area_r / n2.clone(),
                boundary_saddle_connections: ids.iter().map(|&id| scale_back(&traces[id].length)).collect(),
            });
        }
    }
    cylinders.sort_by(|a, b| a.waist().total_cmp(&b.waist()).then(a.height.total_cmp(&b.height)));
    let total = rot.twice_area() / one.from_i64_like(2);
    let residual = !resolved || !same(&covered, &total);
    Ok(CylinderDecomposition { direction: direction.clone(), cylinders, saddle_connections, residual })
}
