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

//! Translation surfaces presented as polygons glued by translations.

mod cylinder;
pub mod fixtures;
mod triangulation;

pub use cylinder::{cylinder_decomposition, Cylinder, CylinderDecomposition};
pub use triangulation::{Adjacency, Triangle, Triangulation};

use core::cmp::Ordering;
use core::fmt;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{precondition, Error, Result};
use crate::geom::{angle_cmp, polygon_problems, twice_area, Mat2, Vec2};
use crate::num::{QuadNum, Scalar};

pub type ExactSurface = TranslationSurface<QuadNum>;
pub type ApproxSurface = TranslationSurface<f64>;

/// Edge `edge` of polygon `polygon`, running from vertex `edge` to vertex `edge + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeId {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeId { polygon, edge }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<S> {
    pub name: String,
    pub vertices: Vec<Vec2<S>>,
}

/// A pair of identified edges. `reversed` records an orientation-reversing
/// identification, which no translation surface admits; it exists so such
/// input can be represented and rejected by [`TranslationSurface::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gluing {
    pub a: EdgeId,
    pub b: EdgeId,
    pub reversed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLink {
    Glued(EdgeId),
    Boundary,
    Unglued,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeAngle {
    /// Total angle `2π·k`.
    Multiple(u32),
    /// The vertex class touches a marked boundary edge.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePoint {
    pub corners: Vec<(usize, usize)>,
    pub angle: ConeAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    BadEdgeReference,
    UngluedEdge,
    MultiplyGlued,
    HolonomyMismatch,
    NotTranslation,
    NonSimplePolygon,
    NotPositivelyOriented,
    DegeneratePolygon,
    BadConeAngle,
    FieldMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationSurface<S> {
    field: u64,
    label: String,
    polygons: Vec<Polygon<S>>,
    gluings: Vec<Gluing>,
    boundary: Vec<EdgeId>,
    links: Vec<Vec<EdgeLink>>,
}

impl<S: Scalar> TranslationSurface<S> {
    /// Builds and validates a surface; any violation is an error.
    pub fn new(
        field: u64,
        label: impl Into<String>,
        polygons: Vec<Polygon<S>>,
        gluings: Vec<Gluing>,
        boundary: Vec<EdgeId>,
    ) -> Result<Self> {
        let s = Self::new_unchecked(field, label, polygons, gluings, boundary);
        let report = s.validate();
        if report.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidSurface(report.into_iter().map(|v| v.message).collect()))
        }
    }

    /// Builds without validation; edge links are filled in where the gluing
    /// data allows.
    pub fn new_unchecked(
        field: u64,
        label: impl Into<String>,
        polygons: Vec<Polygon<S>>,
        mut gluings: Vec<Gluing>,
        mut boundary: Vec<EdgeId>,
    ) -> Self {
        for g in gluings.iter_mut() {
            if g.b < g.a {
                core::mem::swap(&mut g.a, &mut g.b);
            }
        }
        gluings.sort();
        boundary.sort();
        boundary.dedup();
        let mut links: Vec<Vec<EdgeLink>> = polygons.iter().map(|p| vec![EdgeLink::Unglued; p.vertices.len()]).collect();
        let valid = |e: &EdgeId| e.polygon < polygons.len() && e.edge < polygons[e.polygon].vertices.len();
        for g in &gluings {
            if valid(&g.a) && valid(&g.b) {
                links[g.a.polygon][g.a.edge] = EdgeLink::Glued(g.b);
                links[g.b.polygon][g.b.edge] = EdgeLink::Glued(g.a);
            }
        }
        for e in &boundary {
            if valid(e) && links[e.polygon][e.edge] == EdgeLink::Unglued {
                links[e.polygon][e.edge] = EdgeLink::Boundary;
            }
        }
        TranslationSurface { field, label: label.into(), polygons, gluings, boundary, links }
    }

    pub fn field(&self) -> u64 {
        self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn polygons(&self) -> &[Polygon<S>] {
        &self.polygons
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn boundary(&self) -> &[EdgeId] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        !self.boundary.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn link(&self, e: EdgeId) -> EdgeLink {
        self.links[e.polygon][e.edge]
    }

    pub fn edge_count(&self, polygon: usize) -> usize {
        self.polygons[polygon].vertices.len()
    }

    pub fn vertex(&self, polygon: usize, i: usize) -> &Vec2<S> {
        let vs = &self.polygons[polygon].vertices;
        &vs[i % vs.len()]
    }

    /// Holonomy of an edge: end vertex minus start vertex.
    pub fn holonomy(&self, e: EdgeId) -> Vec2<S> {
        self.vertex(e.polygon, e.edge + 1) - self.vertex(e.polygon, e.edge)
    }

    /// Translation taking points of edge `e` to the glued partner edge.
    pub fn gluing_translation(&self, e: EdgeId) -> Option<Vec2<S>> {
        match self.link(e) {
            EdgeLink::Glued(f) => Some(self.vertex(f.polygon, f.edge) - self.vertex(e.polygon, e.edge + 1)),
            _ => None,
        }
    }

    fn edge_name(&self, e: EdgeId) -> String {
        format!("polygon {} edge {}", self.polygons[e.polygon].name, e.edge)
    }

    /// All invariant violations; empty iff this is a valid translation
    /// surface (possibly with marked boundary).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, message: String| out.push(Violation { kind, message });

        for p in &self.polygons {
            if let Some(v) = p.vertices.iter().find(|v| v.x.field() != self.field || v.y.field() != self.field) {
                push(
                    ViolationKind::FieldMismatch,
                    format!("polygon {} has coordinate in field {} (surface field {})", p.name, v.x.field(), self.field),
                );
            }
            for problem in polygon_problems(&p.vertices) {
                let kind = match problem {
                    "non-simple polygon" => ViolationKind::NonSimplePolygon,
                    "polygon not positively oriented" => ViolationKind::NotPositivelyOriented,
                    _ => ViolationKind::DegeneratePolygon,
                };
                push(kind, format!("{problem}: polygon {}", p.name));
            }
        }

        let valid = |e: &EdgeId| e.polygon < self.polygons.len() && e.edge < self.polygons[e.polygon].vertices.len();
        let mut uses: Vec<Vec<u32>> = self.polygons.iter().map(|p| vec![0; p.vertices.len()]).collect();
        for g in &self.gluings {
            for e in [g.a, g.b] {
                if !valid(&e) {
                    push(ViolationKind::BadEdgeReference, format!("gluing references missing edge {}.{}", e.polygon, e.edge));
                } else {
                    uses[e.polygon][e.edge] += 1;
                }
            }
            if !valid(&g.a) || !valid(&g.b) {
                continue;
            }
            if g.a == g.b {
                push(ViolationKind::NotTranslation, format!("edge glued to itself: {}", self.edge_name(g.a)));
                continue;
            }
            let ha = self.holonomy(g.a);
            let hb = self.holonomy(g.b);
            let negated = ha.x.near(&-hb.x.clone(), 1e-9) && ha.y.near(&-hb.y.clone(), 1e-9);
            let same = ha.x.near(&hb.x, 1e-9) && ha.y.near(&hb.y, 1e-9);
            if g.reversed || (same && !negated) {
                push(
                    ViolationKind::NotTranslation,
                    format!("gluing not a translation: {} <-> {}", self.edge_name(g.a), self.edge_name(g.b)),
                );
            } else if !negated {
                let (x, y) = if hb.norm_f64() > ha.norm_f64() { (g.b, g.a) } else { (g.a, g.b) };
                push(
                    ViolationKind::HolonomyMismatch,
                    format!("holonomy mismatch {} <-> {}", self.edge_name(x), self.edge_name(y)),
                );
            }
        }
        for e in &self.boundary {
            if !valid(e) {
                push(ViolationKind::BadEdgeReference, format!("boundary references missing edge {}.{}", e.polygon, e.edge));
            } else {
                uses[e.polygon][e.edge] += 1;
            }
        }
        for (p, row) in uses.iter().enumerate() {
            for (i, &n) in row.iter().enumerate() {
                let e = EdgeId::new(p, i);
                if n == 0 {
                    push(ViolationKind::UngluedEdge, format!("unglued edge {}", self.edge_name(e)));
                } else if n > 1 {
                    push(ViolationKind::MultiplyGlued, format!("edge used {} times: {}", n, self.edge_name(e)));
                }
            }
        }
        if out.is_empty() {
            for (i, c) in self.cone_points().iter().enumerate() {
                if c.angle == ConeAngle::Multiple(0) {
                    out.push(Violation {
                        kind: ViolationKind::BadConeAngle,
                        message: format!("vertex class {i} has cone angle that is not a positive multiple of 2pi"),
                    });
                }
            }
        }
        out
    }

    /// Sum of polygon areas (shoelace).
    pub fn area(&self) -> S {
        let two = self.polygons[0].vertices[0].x.from_i64_like(2);
        let total = self
            .polygons
            .iter()
            .map(|p| twice_area(&p.vertices))
            .reduce(|a, b| a + b)
            .expect("at least one polygon");
        total / two
    }

    /// Counterclockwise neighbour of a corner around its vertex, if the
    /// incoming edge is glued.
    fn ccw_corner(&self, (p, i): (usize, usize)) -> Option<(usize, usize)> {
        let n = self.edge_count(p);
        match self.link(EdgeId::new(p, (i + n - 1) % n)) {
            EdgeLink::Glued(f) => Some((f.polygon, f.edge)),
            _ => None,
        }
    }

    fn cw_corner(&self, (p, i): (usize, usize)) -> Option<(usize, usize)> {
        match self.link(EdgeId::new(p, i)) {
            EdgeLink::Glued(f) => Some((f.polygon, (f.edge + 1) % self.edge_count(f.polygon))),
            _ => None,
        }
    }

    /// Vertex classes with their total angles, computed by walking around
    /// each vertex and counting how often the swept angle passes a fixed
    /// reference direction (exact sign tests only).
    pub fn cone_points(&self) -> Vec<ConePoint> {
        let mut seen: Vec<Vec<bool>> = self.polygons.iter().map(|p| vec![false; p.vertices.len()]).collect();
        let mut out = Vec::new();
        for p in 0..self.polygons.len() {
            for i in 0..self.edge_count(p) {
                if seen[p][i] {
                    continue;
                }
                // walk clockwise to the first corner of an open fan, or stay put
                let total: usize = seen.iter().map(Vec::len).sum();
                let mut first = (p, i);
                for _ in 0..total {
                    match self.cw_corner(first) {
                        None => break,
                        Some(c) if c == (p, i) => {
                            first = (p, i);
                            break;
                        }
                        Some(c) => first = c,
                    }
                }
                let mut corners = Vec::new();
                let mut cur = first;
                let mut open = false;
                loop {
                    if seen[cur.0][cur.1] {
                        break;
                    }
                    seen[cur.0][cur.1] = true;
                    corners.push(cur);
                    match self.ccw_corner(cur) {
                        Some(c) => cur = c,
                        None => {
                            open = true;
                            break;
                        }
                    }
                }
                let angle = if open || cur != first {
                    ConeAngle::Boundary
                } else {
                    ConeAngle::Multiple(self.turns(&corners))
                };
                out.push(ConePoint { corners, angle });
            }
        }
        out
    }

    fn turns(&self, corners: &[(usize, usize)]) -> u32 {
        let dirs = |&(p, i): &(usize, usize)| {
            let n = self.edge_count(p);
            let v = self.vertex(p, i);
            (self.vertex(p, i + 1) - v, self.vertex(p, i + n - 1) - v)
        };
        let reference = dirs(&corners[0]).0;
        corners
            .iter()
            .filter(|c| {
                let (u, w) = dirs(c);
                angle_cmp(&reference, &w, &u) != Ordering::Greater
            })
            .count() as u32
    }

    /// Cone-point index of every corner.
    pub fn corner_classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.polygons.iter().map(|p| vec![usize::MAX; p.vertices.len()]).collect();
        for (k, c) in self.cone_points().iter().enumerate() {
            for &(p, i) in &c.corners {
                out[p][i] = k;
            }
        }
        out
    }

    /// Euler characteristic from the cone angles: `Σ (k_i − 1) = 2g − 2`.
    pub fn genus(&self) -> Option<u32> {
        let mut excess: i64 = 0;
        for c in self.cone_points() {
            match c.angle {
                ConeAngle::Multiple(k) => excess += k as i64 - 1,
                ConeAngle::Boundary => return None,
            }
        }
        Some(((excess + 2) / 2) as u32)
    }

    fn map_vertices<T: Scalar>(&self, field: u64, f: impl Fn(&Vec2<S>) -> Vec2<T>) -> TranslationSurface<T> {
        let polygons = self
            .polygons
            .iter()
            .map(|p| Polygon { name: p.name.clone(), vertices: p.vertices.iter().map(&f).collect() })
            .collect();
        TranslationSurface::new_unchecked(field, self.label.clone(), polygons, self.gluings.clone(), self.boundary.clone())
    }

    pub fn to_approx(&self) -> ApproxSurface {
        self.map_vertices(0, |v| v.to_f64())
    }

    /// `M·S` in the approximate kind; `M` must have unit determinant.
    pub fn apply_approx(&self, m: &Mat2) -> Result<ApproxSurface> {
        if !m.is_unimodular() {
            return Err(Error::NotAreaPreserving);
        }
        Ok(self.map_vertices(0, |v| m.apply_f64(&v.to_f64())))
    }

    /// Teichmüller deformation `g_t · S`.
    pub fn geodesic_deform(&self, t: f64) -> ApproxSurface {
        if t == 0.0 {
            return self.to_approx();
        }
        self.apply_approx(&Mat2::geodesic(t)).expect("g_t is unimodular")
    }

    pub fn triangulate(&self) -> Result<Triangulation<S>> {
        Triangulation::from_surface(self)
    }
}

impl ExactSurface {
    /// `M·S` for an exact unimodular `M` with entries in the surface field.
    pub fn apply_exact(&self, m: &Mat2) -> Result<ExactSurface> {
        let Mat2::Exact(entries) = m else {
            return Err(precondition("exact action requires an exact matrix"));
        };
        if let Some(e) = entries.iter().find(|e| e.field() != self.field) {
            return Err(Error::FieldMismatch(self.field, e.field()));
        }
        if !m.is_unimodular() {
            return Err(Error::NotAreaPreserving);
        }
        Ok(self.map_vertices(self.field, |v| m.apply_exact(v).expect("field checked")))
    }

    /// Exact constant in the surface field.
    pub fn constant(&self, v: i64) -> QuadNum {
        QuadNum::from_i64(v, self.field)
    }
}

/// Result of the generic `apply_matrix` operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Deformed {
    Exact(ExactSurface),
    Approx(ApproxSurface),
}

/// `M·S`: exact when `M` is exact, approximate otherwise.
pub fn apply_matrix(s: &ExactSurface, m: &Mat2) -> Result<Deformed> {
    match m {
        Mat2::Exact(_) => s.apply_exact(m).map(Deformed::Exact),
        Mat2::Approx(_) => s.apply_approx(m).map(Deformed::Approx),
    }
}
