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

//! Straight-line flow, first-return maps, ergodic averages and truncated
//! infinite-genus examples.

mod chamanara;

pub use chamanara::{baker_certificate, chamanara_surface};

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::error::{precondition, Error, Result};
use crate::geom::{angle_cmp, clip_convex, twice_area, Vec2};
use crate::num::Scalar;
use crate::surface::{EdgeId, EdgeLink, Triangulation, TranslationSurface};

/// Crossings within this distance of a polygon vertex count as hitting it.
pub const GUARD: f64 = 1e-12;

type P = Vec2<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed,
    HitSingularity,
    Escaped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::HitSingularity => "hitSingularity",
            Status::Escaped => "escaped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub polygon: usize,
    pub entry: P,
    pub exit: P,
}

impl Segment {
    pub fn length(&self) -> f64 {
        (&self.exit - &self.entry).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start_polygon: usize,
    pub start: P,
    /// Unit direction.
    pub direction: P,
    pub segments: Vec<Segment>,
    pub status: Status,
    /// Distance travelled before stopping; the escape time when escaped.
    pub length: f64,
}

impl Trajectory {
    pub fn end(&self) -> (usize, P) {
        match self.segments.last() {
            Some(s) => (s.polygon, s.exit.clone()),
            None => (self.start_polygon, self.start.clone()),
        }
    }
}

struct Step<'a> {
    polygon: usize,
    entry: &'a P,
    exit: &'a P,
    /// Edge the segment leaves through, if it reaches one.
    edge: Option<usize>,
}

struct Walk {
    status: Status,
    travelled: f64,
}

/// Floating-point copy of a surface prepared for repeated tracing.
pub struct Tracer {
    polys: Vec<Vec<P>>,
    links: Vec<Vec<EdgeLink>>,
    shifts: Vec<Vec<P>>,
    has_boundary: bool,
}

impl Tracer {
    pub fn new<S: Scalar>(s: &TranslationSurface<S>) -> Self {
        let polys: Vec<Vec<P>> = s.polygons().iter().map(|p| p.vertices.iter().map(Vec2::to_f64).collect()).collect();
        let mut links = Vec::new();
        let mut shifts = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            let n = p.len();
            links.push((0..n).map(|k| s.link(EdgeId::new(i, k))).collect());
            shifts.push(
                (0..n)
                    .map(|k| s.gluing_translation(EdgeId::new(i, k)).map(|v| v.to_f64()).unwrap_or(Vec2::new(0.0, 0.0)))
                    .collect(),
            );
        }
        Tracer { polys, links, shifts, has_boundary: s.has_boundary() }
    }

    fn check_start(&self, polygon: usize, p: &P) -> Result<()> {
        let poly = self.polys.get(polygon).ok_or_else(|| precondition("start polygon does not exist"))?;
        if poly.iter().any(|v| (p - v).norm() <= GUARD) {
            return Err(Error::StartsAtSingularity);
        }
        if !inside(poly, p) {
            return Err(precondition("start point is outside its polygon"));
        }
        Ok(())
    }

    /// First edge crossed by the ray `p + t·d`, as `(edge, t, exit point)`,
    /// or `None` if the ray runs into a vertex first.
    fn exit(&self, polygon: usize, p: &P, d: &P) -> Option<(usize, f64, P)> {
        let poly = &self.polys[polygon];
        let n = poly.len();
        let mut best: Option<(usize, f64, f64)> = None;
        for k in 0..n {
            let (a, b) = (&poly[k], &poly[(k + 1) % n]);
            let e = b - a;
            let denom = d.cross(&e);
            // outgoing edges only: the direction crosses from left to right
            if !(denom > 0.0) {
                continue;
            }
            let ap = a - p;
            let t = ap.cross(&e) / denom;
            let u = ap.cross(d) / denom;
            let len = e.norm();
            if t < -GUARD || u * len < -GUARD || (u - 1.0) * len > GUARD {
                continue;
            }
            if best.is_none_or(|(_, bt, _)| t < bt) {
                best = Some((k, t, u));
            }
        }
        let (k, t, u) = best?;
        let len = (&poly[(k + 1) % n] - &poly[k]).norm();
        if u * len <= GUARD || (1.0 - u) * len <= GUARD {
            return None;
        }
        let t = t.max(0.0);
        Some((k, t, p + &d.scale(&t)))
    }

    /// Flows from `p` for `length`, reporting each segment; `visit` returning
    /// false stops the walk with status `Completed`.
    fn walk(&self, polygon: usize, p: P, d: &P, length: f64, mut visit: impl FnMut(Step<'_>) -> bool) -> Walk {
        let (mut poly, mut p) = (polygon, p);
        let mut travelled = 0.0;
        loop {
            let remaining = length - travelled;
            let Some((k, t, x)) = self.exit(poly, &p, d) else {
                // a vertex lies ahead; find out whether it is within reach
                let reach = self.vertex_distance(poly, &p, d);
                if reach > remaining {
                    let q = &p + &d.scale(&remaining);
                    visit(Step { polygon: poly, entry: &p, exit: &q, edge: None });
                    return Walk { status: Status::Completed, travelled: length };
                }
                let q = &p + &d.scale(&reach);
                visit(Step { polygon: poly, entry: &p, exit: &q, edge: None });
                return Walk { status: Status::HitSingularity, travelled: travelled + reach };
            };
            if t >= remaining {
                let q = &p + &d.scale(&remaining);
                visit(Step { polygon: poly, entry: &p, exit: &q, edge: None });
                return Walk { status: Status::Completed, travelled: length };
            }
            travelled += t;
            if !visit(Step { polygon: poly, entry: &p, exit: &x, edge: Some(k) }) {
                return Walk { status: Status::Completed, travelled };
            }
            match self.links[poly][k] {
                EdgeLink::Glued(f) => {
                    p = &x + &self.shifts[poly][k];
                    poly = f.polygon;
                }
                _ => return Walk { status: Status::Escaped, travelled },
            }
        }
    }

    /// Distance along `d` to the vertex the ray from `p` runs into.
    fn vertex_distance(&self, polygon: usize, p: &P, d: &P) -> f64 {
        self.polys[polygon]
            .iter()
            .filter_map(|v| {
                let w = v - p;
                let t = w.dot(d);
                (t >= -GUARD && Float::abs(w.cross(d)) <= 1e-9).then_some(t.max(0.0))
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn trace(&self, polygon: usize, start: &P, direction: &P, length: f64) -> Result<Trajectory> {
        self.check_start(polygon, start)?;
        let d = unit(direction)?;
        let mut segments = Vec::new();
        let w = self.walk(polygon, start.clone(), &d, length, |s| {
            segments.push(Segment { polygon: s.polygon, entry: s.entry.clone(), exit: s.exit.clone() });
            true
        });
        Ok(Trajectory { start_polygon: polygon, start: start.clone(), direction: d, segments, status: w.status, length: w.travelled })
    }

    /// Integral of `f` along the orbit for time `t`, with the walk's status.
    fn integrate(&self, polygon: usize, start: &P, d: &P, t: f64, f: &Observable) -> (f64, Walk) {
        let mut acc = 0.0;
        let w = self.walk(polygon, start.clone(), d, t, |s| {
            acc += f.segment_integral(s.entry, s.exit);
            true
        });
        (acc, w)
    }
}

fn unit(d: &P) -> Result<P> {
    let n = d.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(precondition("direction must be nonzero"));
    }
    Ok(Vec2::new(d.x / n, d.y / n))
}

/// Closed point-in-polygon test with a `GUARD` band on the boundary.
fn inside(poly: &[P], p: &P) -> bool {
    let n = poly.len();
    let mut wind = false;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        let e = b - a;
        let len = e.norm();
        let t = (p - a).dot(&e) / (len * len);
        if (-1e-15..=1.0 + 1e-15).contains(&t) && Float::abs(e.cross(&(p - a))) / len <= GUARD {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * e.x / e.y {
            wind = !wind;
        }
    }
    wind
}

/// Follows the flow in `direction` from `start` (a point of polygon
/// `polygon`, in its coordinates) for arc length `length`.
pub fn trace<S: Scalar>(s: &TranslationSurface<S>, polygon: usize, start: &P, direction: &Vec2<S>, length: f64) -> Result<Trajectory> {
    Tracer::new(s).trace(polygon, start, &direction.to_f64(), length)
}

/// An interval exchange on `[0, Σ lengths)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Iet {
    pub lengths: Vec<f64>,
    /// `permutation[i]` is the position of interval `i` after the exchange.
    pub permutation: Vec<usize>,
    /// Translation applied to interval `i`.
    pub shifts: Vec<f64>,
}

impl Iet {
    pub fn total(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn apply(&self, x: f64) -> f64 {
        let mut lo = 0.0;
        for (i, l) in self.lengths.iter().enumerate() {
            if x < lo + l || i + 1 == self.lengths.len() {
                return x + self.shifts[i];
            }
            lo += l;
        }
        x
    }
}

/// First-return map of the flow in `direction` to the edge `transversal`,
/// measured by arc length from the edge's start vertex.
pub fn first_return_iet<S: Scalar>(
    s: &TranslationSurface<S>,
    transversal: EdgeId,
    direction: &Vec2<S>,
    max_length: f64,
) -> Result<Iet> {
    let tr = Tracer::new(s);
    let poly = tr.polys.get(transversal.polygon).ok_or_else(|| precondition("transversal polygon does not exist"))?;
    let n = poly.len();
    if transversal.edge >= n {
        return Err(precondition("transversal edge does not exist"));
    }
    let d = unit(&direction.to_f64())?;
    let a = poly[transversal.edge].clone();
    let e = &poly[(transversal.edge + 1) % n] - &a;
    let len = e.norm();
    if !(e.cross(&d) > 1e-12 * len) {
        return Err(precondition("direction must cross the transversal into its polygon"));
    }
    let position = |x: &P| (x - &a).dot(&e) / len;
    let target = EdgeLink::Glued(transversal);

    // breaks are where backward separatrices first meet the transversal
    let back = -d.clone();
    let mut breaks = vec![0.0, len];
    for (pi, q) in tr.polys.iter().enumerate() {
        let m = q.len();
        for k in 0..m {
            let (next, prev) = (&q[(k + 1) % m] - &q[k], &q[(k + m - 1) % m] - &q[k]);
            let inside_wedge = angle_cmp(&next, &back, &next) == core::cmp::Ordering::Greater
                && angle_cmp(&next, &back, &prev) == core::cmp::Ordering::Less;
            if !inside_wedge {
                continue;
            }
            let start = &q[k] + &back.scale(&1e-9);
            tr.walk(pi, start, &back, max_length, |st| {
                if st.polygon == transversal.polygon && st.edge == Some(transversal.edge) {
                    breaks.push(position(st.exit));
                    return false;
                }
                true
            });
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| Float::abs(*x - *y) <= 1e-12);

    let mut lengths = Vec::new();
    let mut shifts = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let start = &a + &e.scale(&(mid / len));
        let mut landed = None;
        tr.walk(transversal.polygon, start, &d, max_length, |st| {
            if let Some(k) = st.edge {
                if tr.links[st.polygon][k] == target {
                    landed = Some(position(&(st.exit + &tr.shifts[st.polygon][k])));
                    return false;
                }
            }
            true
        });
        let to = landed.ok_or(Error::NoReturn { lo, hi, max_length })?;
        lengths.push(hi - lo);
        shifts.push(to - mid);
    }
    let images: Vec<f64> = (0..lengths.len()).map(|i| breaks[i] + shifts[i]).collect();
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by(|&i, &j| images[i].total_cmp(&images[j]));
    let mut permutation = vec![0; order.len()];
    for (rank, &i) in order.iter().enumerate() {
        permutation[i] = rank;
    }
    Ok(Iet { lengths, permutation, shifts })
}

/// Built-in observables in polygon coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    Constant(f64),
    /// Indicator of `lo ≤ x < hi`.
    StripX { lo: f64, hi: f64 },
    /// Indicator of `lo ≤ y < hi`.
    StripY { lo: f64, hi: f64 },
    CosX(u32),
    SinX(u32),
    CosY(u32),
    SinY(u32),
}

impl Observable {
    pub fn range(&self) -> (f64, f64) {
        match self {
            Observable::Constant(c) => (*c, *c),
            Observable::StripX { .. } | Observable::StripY { .. } => (0.0, 1.0),
            _ => (-1.0, 1.0),
        }
    }

    fn segment_integral(&self, p: &P, q: &P) -> f64 {
        let len = (q - p).norm();
        if len == 0.0 {
            return 0.0;
        }
        let strip = |a: f64, b: f64, lo: f64, hi: f64| {
            if Float::abs(b - a) <= 1e-15 * len {
                return if (lo..hi).contains(&a) { len } else { 0.0 };
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            (v.min(hi) - u.max(lo)).max(0.0) * len / (v - u)
        };
        let wave = |a: f64, b: f64, k: u32, cos: bool| {
            let w = 2.0 * core::f64::consts::PI * k as f64;
            if k == 0 {
                return if cos { len } else { 0.0 };
            }
            if Float::abs(b - a) <= 1e-12 * len {
                let m = 0.5 * (a + b);
                return len * if cos { Float::cos(w * m) } else { Float::sin(w * m) };
            }
            let r = len / (w * (b - a));
            if cos {
                r * (Float::sin(w * b) - Float::sin(w * a))
            } else {
                r * (Float::cos(w * a) - Float::cos(w * b))
            }
        };
        match *self {
            Observable::Constant(c) => c * len,
            Observable::StripX { lo, hi } => strip(p.x, q.x, lo, hi),
            Observable::StripY { lo, hi } => strip(p.y, q.y, lo, hi),
            Observable::CosX(k) => wave(p.x, q.x, k, true),
            Observable::SinX(k) => wave(p.x, q.x, k, false),
            Observable::CosY(k) => wave(p.y, q.y, k, true),
            Observable::SinY(k) => wave(p.y, q.y, k, false),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffStart {
    /// `None` when the orbit stopped before time `T`.
    pub average: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffReport {
    pub starts: Vec<BirkhoffStart>,
    /// Largest difference between two valid averages.
    pub dispersion: f64,
}

/// Time average of `f` over `[0, t]` from one start.
pub fn time_average(tracer: &Tracer, polygon: usize, start: &P, direction: &P, f: &Observable, t: f64) -> Result<BirkhoffStart> {
    if !(t > 0.0) {
        return Err(precondition("T must be positive"));
    }
    tracer.check_start(polygon, start)?;
    let d = unit(direction)?;
    let (acc, w) = tracer.integrate(polygon, start, &d, t, f);
    Ok(match w.status {
        Status::Completed => BirkhoffStart { average: Some(acc / t), status: Status::Completed },
        s => BirkhoffStart { average: None, status: s },
    })
}

pub fn birkhoff_average<S: Scalar>(
    s: &TranslationSurface<S>,
    direction: &Vec2<S>,
    f: &Observable,
    t: f64,
    starts: &[(usize, P)],
) -> Result<BirkhoffReport> {
    let tracer = Tracer::new(s);
    let d = direction.to_f64();
    let starts: Vec<BirkhoffStart> =
        starts.iter().map(|(p, x)| time_average(&tracer, *p, x, &d, f, t)).collect::<Result<_>>()?;
    Ok(BirkhoffReport { dispersion: dispersion(&starts), starts })
}

pub fn dispersion(starts: &[BirkhoffStart]) -> f64 {
    let v: Vec<f64> = starts.iter().filter_map(|s| s.average).collect();
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equidistribution {
    /// Bins per polygon along x and y of its bounding box.
    pub bins: (usize, usize),
    /// Fraction of orbit time per bin, polygon by polygon, row-major.
    pub occupancy: Vec<f64>,
    /// Fraction of surface area per bin, in the same order.
    pub area_fraction: Vec<f64>,
    pub discrepancy: f64,
    pub status: Status,
}

/// Occupancy-time histogram of one orbit over a grid on each polygon's
/// bounding box, compared with area.
pub fn equidistribution_test<S: Scalar>(
    s: &TranslationSurface<S>,
    direction: &Vec2<S>,
    t: f64,
    bins: (usize, usize),
    start: (usize, &P),
) -> Result<Equidistribution> {
    if !(t > 0.0) {
        return Err(precondition("T must be positive"));
    }
    if bins.0 == 0 || bins.1 == 0 {
        return Err(precondition("bin counts must be positive"));
    }
    let tracer = Tracer::new(s);
    tracer.check_start(start.0, start.1)?;
    let d = unit(&direction.to_f64())?;
    let (nx, ny) = bins;
    let boxes: Vec<(P, P)> = tracer
        .polys
        .iter()
        .map(|p| {
            let lo = Vec2::new(p.iter().map(|v| v.x).fold(f64::INFINITY, f64::min), p.iter().map(|v| v.y).fold(f64::INFINITY, f64::min));
            let hi = Vec2::new(p.iter().map(|v| v.x).fold(f64::NEG_INFINITY, f64::max), p.iter().map(|v| v.y).fold(f64::NEG_INFINITY, f64::max));
            (lo, hi)
        })
        .collect();
    let mut area = Vec::with_capacity(boxes.len() * nx * ny);
    for (poly, (lo, hi)) in tracer.polys.iter().zip(&boxes) {
        let (w, h) = ((hi.x - lo.x) / nx as f64, (hi.y - lo.y) / ny as f64);
        for j in 0..ny {
            for i in 0..nx {
                let (x0, y0) = (lo.x + i as f64 * w, lo.y + j as f64 * h);
                let rect = [Vec2::new(x0, y0), Vec2::new(x0 + w, y0), Vec2::new(x0 + w, y0 + h), Vec2::new(x0, y0 + h)];
                let c = clip_convex(poly, &rect);
                area.push(if c.len() < 3 { 0.0 } else { 0.5 * twice_area(&c) });
            }
        }
    }
    let total: f64 = area.iter().sum();
    let area_fraction: Vec<f64> = area.iter().map(|a| a / total).collect();
    let mut occupancy = vec![0.0; area.len()];
    let w = tracer.walk(start.0, start.1.clone(), &d, t, |st| {
        let (lo, hi) = &boxes[st.polygon];
        let (bw, bh) = ((hi.x - lo.x) / nx as f64, (hi.y - lo.y) / ny as f64);
        let v = st.exit - st.entry;
        let len = v.norm();
        if len == 0.0 {
            return true;
        }
        let mut cuts = vec![0.0, 1.0];
        let mut grid = |a: f64, b: f64, origin: f64, step: f64, count: usize| {
            for k in 1..count {
                let g = origin + k as f64 * step;
                if (g - a) * (g - b) < 0.0 {
                    cuts.push((g - a) / (b - a));
                }
            }
        };
        grid(st.entry.x, st.exit.x, lo.x, bw, nx);
        grid(st.entry.y, st.exit.y, lo.y, bh, ny);
        cuts.sort_by(f64::total_cmp);
        for c in cuts.windows(2) {
            let m = 0.5 * (c[0] + c[1]);
            let x = st.entry.x + m * v.x;
            let y = st.entry.y + m * v.y;
            let i = (((x - lo.x) / bw) as usize).min(nx - 1);
            let j = (((y - lo.y) / bh) as usize).min(ny - 1);
            occupancy[st.polygon * nx * ny + j * nx + i] += (c[1] - c[0]) * len;
        }
        true
    });
    let spent = w.travelled.max(f64::MIN_POSITIVE);
    for o in occupancy.iter_mut() {
        *o /= spent;
    }
    let discrepancy = occupancy.iter().zip(&area_fraction).map(|(o, a)| Float::abs(o - a)).fold(0.0, f64::max);
    Ok(Equidistribution { bins, occupancy, area_fraction, discrepancy, status: w.status })
}

/// Points distributed uniformly by area, as `(polygon, point)`.
pub fn area_uniform_points<S: Scalar, R: Rng + ?Sized>(s: &TranslationSurface<S>, count: usize, rng: &mut R) -> Result<Vec<(usize, P)>> {
    let approx = s.to_approx();
    let tri = Triangulation::from_surface(&approx)?;
    let weights: Vec<f64> = tri.tris.iter().map(|t| 0.5 * t.edge_vector(0).cross(&t.edge_vector(1))).collect();
    let total: f64 = weights.iter().sum();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut r = rng.random::<f64>() * total;
        let mut k = 0;
        while k + 1 < weights.len() && r >= weights[k] {
            r -= weights[k];
            k += 1;
        }
        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        let t = &tri.tris[k];
        let p = &(&t.verts[0] + &t.edge_vector(0).scale(&u)) + &(&t.verts[2] - &t.verts[0]).scale(&v);
        out.push((t.polygon.ok_or_else(|| precondition("triangle outside every polygon"))?, p));
    }
    Ok(out)
}

/// Fraction of area-uniform starts whose orbit crosses marked boundary
/// before time `t`. Surfaces without boundary give zero.
pub fn escape_mass_estimate<S: Scalar, R: Rng + ?Sized>(
    s: &TranslationSurface<S>,
    direction: &Vec2<S>,
    t: f64,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if samples == 0 {
        return Err(precondition("sample count must be positive"));
    }
    let tracer = Tracer::new(s);
    let d = unit(&direction.to_f64())?;
    if !tracer.has_boundary || !(t > 0.0) {
        return Ok(0.0);
    }
    let starts = area_uniform_points(s, samples, rng)?;
    let escaped = starts
        .iter()
        .filter(|(p, x)| tracer.walk(*p, x.clone(), &d, t, |_| true).status == Status::Escaped)
        .count();
    Ok(escaped as f64 / samples as f64)
}

#[cfg(test)]
mod tests;
