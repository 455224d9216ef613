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

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{precondition, Result};
use crate::geom::{clip_convex, is_convex_ccw, on_closed_segment, twice_area, twice_overlap_area, Mat2, Vec2};
use crate::num::{QuadNum, Rational, Scalar};
use crate::surface::{Adjacency, CylinderDecomposition, EdgeId, EdgeLink, ExactSurface, Triangulation};

type V = Vec2<QuadNum>;

/// A convex piece of a polygon of `M·S`, carried by a translation into a
/// polygon of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    /// Polygon of `M·S` containing the piece.
    pub source: usize,
    /// Counterclockwise vertices in the source polygon's coordinates.
    pub vertices: Vec<V>,
    pub translation: V,
    /// Polygon of `S` receiving the translated piece.
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismCertificate {
    pub matrix: Mat2,
    pub pieces: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CertificateReport {
    pub failures: Vec<String>,
    /// Some piece edge lies on marked boundary, where gluings cannot be checked.
    pub truncated: bool,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn shifted(poly: &[V], by: &V) -> Vec<V> {
    poly.iter().map(|v| v + by).collect()
}

fn polygon_triangles(t: &Triangulation<QuadNum>, p: usize) -> Vec<Vec<V>> {
    t.tris.iter().filter(|x| x.polygon == Some(p)).map(|x| x.verts.to_vec()).collect()
}

/// Pieces must lie in their polygons, be disjoint, and exhaust the area.
fn check_tiling(s: &ExactSurface, pieces: &[(usize, Vec<V>)], side: &str, out: &mut Vec<String>) -> Result<()> {
    let tri = s.triangulate()?;
    let zero = s.constant(0);
    for p in 0..s.polygons().len() {
        let tris = polygon_triangles(&tri, p);
        let mine: Vec<(usize, &Vec<V>)> =
            pieces.iter().enumerate().filter(|(_, (q, _))| *q == p).map(|(i, (_, v))| (i, v)).collect();
        let mut covered = zero.clone();
        for (i, v) in &mine {
            let area = twice_area(v);
            let inside = tris.iter().fold(zero.clone(), |acc, t| acc + twice_overlap_area(v, t));
            if inside != area {
                out.push(format!("piece {} leaves {side} polygon {}", i + 1, s.polygons()[p].name));
            }
            covered = covered + area;
        }
        for (a, (i, v)) in mine.iter().enumerate() {
            for (j, w) in &mine[a + 1..] {
                if !twice_overlap_area(v, w).is_zero() {
                    out.push(format!("pieces {} and {} overlap in {side} polygon {}", i + 1, j + 1, s.polygons()[p].name));
                }
            }
        }
        if covered != twice_area(&s.polygons()[p].vertices) {
            out.push(format!("pieces do not cover {side} polygon {}", s.polygons()[p].name));
        }
    }
    Ok(())
}

/// Position of `x` along `p → q`, as a fraction of the segment.
fn param(p: &V, q: &V, x: &V) -> QuadNum {
    let d = q - p;
    (x - p).dot(&d) / d.dot(&d)
}

fn lerp(p: &V, q: &V, t: &QuadNum) -> V {
    p + &(q - p).scale(t)
}

/// Splits `p → q` at the polygon vertices lying on it.
fn split_at_vertices(p: &V, q: &V, poly: &[V]) -> Vec<(V, V)> {
    let zero = p.x.zero_like();
    let one = p.x.from_i64_like(1);
    let mut ts = alloc::vec![zero.clone(), one.clone()];
    for v in poly {
        if on_closed_segment(p, q, v) {
            let t = param(p, q, v);
            if t > zero && t < one {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).expect("same field"));
    ts.dedup();
    ts.windows(2).map(|w| (lerp(p, q, &w[0]), lerp(p, q, &w[1]))).collect()
}

fn edge_containing(poly: &[V], p: &V, q: &V) -> Option<usize> {
    let n = poly.len();
    (0..n).find(|&j| on_closed_segment(&poly[j], &poly[(j + 1) % n], p) && on_closed_segment(&poly[j], &poly[(j + 1) % n], q))
}

struct Sides<'a> {
    image: &'a ExactSurface,
    s: &'a ExactSurface,
    pieces: &'a [Piece],
}

impl Sides<'_> {
    /// Checks that the images of `x0 → x1` (a common edge of pieces `i` and
    /// `r`, with `g` carrying `i`'s frame to `r`'s) are identified in `S`.
    fn respects(&self, i: usize, r: usize, g: &V, x0: &V, x1: &V, truncated: &mut bool) -> bool {
        let (pi, rho) = (&self.pieces[i], &self.pieces[r]);
        let d = &(&rho.translation + g) - &pi.translation;
        if d.is_zero() && pi.target == rho.target {
            return true;
        }
        let t = &self.s.polygons()[pi.target].vertices;
        let (y0, y1) = (x0 + &pi.translation, x1 + &pi.translation);
        split_at_vertices(&y0, &y1, t).iter().all(|(a, b)| {
            let Some(h) = edge_containing(t, a, b) else { return false };
            let e = EdgeId::new(pi.target, h);
            match self.s.link(e) {
                EdgeLink::Glued(f) => f.polygon == rho.target && self.s.gluing_translation(e).as_ref() == Some(&d),
                EdgeLink::Boundary => {
                    *truncated = true;
                    true
                }
                EdgeLink::Unglued => false,
            }
        })
    }

    fn check_edges(&self, out: &mut Vec<String>, truncated: &mut bool) {
        let zero = self.s.constant(0);
        let one = self.s.constant(1);
        for (i, pi) in self.pieces.iter().enumerate() {
            let poly = &self.image.polygons()[pi.source].vertices;
            let n = pi.vertices.len();
            for k in 0..n {
                let (a, b) = (&pi.vertices[k], &pi.vertices[(k + 1) % n]);
                let mut ok = true;
                for (p, q) in split_at_vertices(a, b, poly) {
                    let (g, other) = match edge_containing(poly, &p, &q) {
                        Some(j) => {
                            let e = EdgeId::new(pi.source, j);
                            match self.image.link(e) {
                                EdgeLink::Glued(f) => (self.image.gluing_translation(e).expect("glued"), f.polygon),
                                _ => {
                                    *truncated = true;
                                    continue;
                                }
                            }
                        }
                        None => (Vec2::new(zero.clone(), zero.clone()), pi.source),
                    };
                    let mut covered = zero.clone();
                    for (r, rho) in self.pieces.iter().enumerate().filter(|(_, x)| x.source == other) {
                        let m = rho.vertices.len();
                        for e in 0..m {
                            let c = &rho.vertices[e] - &g;
                            let d = &rho.vertices[(e + 1) % m] - &g;
                            let dir = &q - &p;
                            if !dir.cross(&(&c - &p)).is_zero() || !dir.cross(&(&d - &p)).is_zero() {
                                continue;
                            }
                            if !dir.dot(&(&d - &c)).sign().is_negative() {
                                continue;
                            }
                            // d comes first along p → q
                            let (t0, t1) = (param(&p, &q, &d), param(&p, &q, &c));
                            let lo = if t0 > zero { t0 } else { zero.clone() };
                            let hi = if t1 < one { t1 } else { one.clone() };
                            if !(hi > lo) {
                                continue;
                            }
                            covered = covered + (hi.clone() - lo.clone());
                            let (x0, x1) = (lerp(&p, &q, &lo), lerp(&p, &q, &hi));
                            if !self.respects(i, r, &g, &x0, &x1, truncated) {
                                out.push(format!("gluing mismatch: piece {} edge {} against piece {}", i + 1, k, r + 1));
                            }
                        }
                    }
                    if covered != one {
                        ok = false;
                    }
                }
                if !ok {
                    out.push(format!("piece {} edge {} is not matched by neighbouring pieces", i + 1, k));
                }
            }
        }
    }
}

/// Exact check that the certificate describes an affine automorphism of `s`
/// with derivative `cert.matrix`.
pub fn verify_affine_automorphism(s: &ExactSurface, cert: &AutomorphismCertificate) -> Result<CertificateReport> {
    let mut report = CertificateReport::default();
    let Mat2::Exact(entries) = &cert.matrix else {
        return Err(precondition("certificates need an exact matrix"));
    };
    if let Some(e) = entries.iter().find(|e| e.field() != s.field()) {
        report.failures.push(format!("matrix field {} differs from surface field {}", e.field(), s.field()));
        return Ok(report);
    }
    if !cert.matrix.is_unimodular() {
        report.failures.push("not area-preserving".into());
        return Ok(report);
    }
    let image = s.apply_exact(&cert.matrix)?;
    for (i, p) in cert.pieces.iter().enumerate() {
        if p.source >= image.polygons().len() || p.target >= s.polygons().len() {
            report.failures.push(format!("piece {} names a missing polygon", i + 1));
        } else if p.vertices.iter().chain([&p.translation]).any(|v| v.field() != s.field()) {
            report.failures.push(format!("piece {} has coordinates outside the surface field", i + 1));
        } else if !is_convex_ccw(&p.vertices) {
            report.failures.push(format!("piece {} is not a convex counterclockwise polygon", i + 1));
        }
    }
    if !report.failures.is_empty() {
        return Ok(report);
    }
    let src: Vec<(usize, Vec<V>)> = cert.pieces.iter().map(|p| (p.source, p.vertices.clone())).collect();
    check_tiling(&image, &src, "source", &mut report.failures)?;
    let dst: Vec<(usize, Vec<V>)> = cert.pieces.iter().map(|p| (p.target, shifted(&p.vertices, &p.translation))).collect();
    check_tiling(s, &dst, "target", &mut report.failures)?;
    if report.failures.is_empty() {
        let sides = Sides { image: &image, s, pieces: &cert.pieces };
        let mut truncated = false;
        sides.check_edges(&mut report.failures, &mut truncated);
        report.truncated = truncated;
    }
    report.failures.dedup();
    Ok(report)
}

const MAX_PAIRS: usize = 200_000;

/// Searches for a certificate by overlaying the triangles of `M·S` on
/// translated triangles of `S`, starting from every way of matching one
/// corner. Returns the first candidate that verifies.
pub fn find_certificate(s: &ExactSurface, m: &Mat2) -> Result<Option<AutomorphismCertificate>> {
    let image = s.apply_exact(m)?;
    let ti = image.triangulate()?;
    let ts = s.triangulate()?;
    let zero = s.constant(0);
    let overlap = |i: usize, j: usize, tau: &V| {
        let moved: Vec<V> = ts.tris[j].verts.iter().map(|v| v - tau).collect();
        clip_convex(&ti.tris[i].verts, &moved)
    };
    let target_area: Vec<QuadNum> = ti.tris.iter().map(|t| t.edge_vector(0).cross(&t.edge_vector(1))).collect();
    for j0 in 0..ts.tris.len() {
        for k0 in 0..3 {
            let tau0 = &ts.tris[j0].verts[k0] - &ti.tris[0].verts[0];
            let first = overlap(0, j0, &tau0);
            if first.len() < 3 || twice_area(&first).is_zero() {
                continue;
            }
            let mut seen: Vec<(usize, usize, V)> = alloc::vec![(0, j0, tau0.clone())];
            let mut queue = alloc::collections::VecDeque::from([(0usize, j0, tau0)]);
            let mut pieces = Vec::new();
            let mut area: Vec<QuadNum> = alloc::vec![zero.clone(); ti.tris.len()];
            let mut failed = false;
            while let Some((i, j, tau)) = queue.pop_front() {
                let poly = overlap(i, j, &tau);
                if poly.len() < 3 || twice_area(&poly).is_zero() {
                    continue;
                }
                area[i] = area[i].clone() + twice_area(&poly);
                if area[i] > target_area[i] || seen.len() > MAX_PAIRS {
                    failed = true;
                    break;
                }
                pieces.push(Piece {
                    source: ti.tris[i].polygon.expect("unflipped"),
                    translation: tau.clone(),
                    target: ts.tris[j].polygon.expect("unflipped"),
                    vertices: poly.clone(),
                });
                let moved: Vec<V> = ts.tris[j].verts.iter().map(|v| v - &tau).collect();
                let mut next = Vec::new();
                let n = poly.len();
                for k in 0..n {
                    let (p, q) = (&poly[k], &poly[(k + 1) % n]);
                    let e = edge_containing(&ti.tris[i].verts, p, q);
                    let f = edge_containing(&moved, p, q);
                    let si = e.and_then(|e| match ti.tris[i].adj[e] {
                        Adjacency::Glued { tri, .. } => Some((tri, ti.translation(i, e).expect("glued"))),
                        Adjacency::Boundary => None,
                    });
                    let sj = f.and_then(|f| match ts.tris[j].adj[f] {
                        Adjacency::Glued { tri, .. } => Some((tri, ts.translation(j, f).expect("glued"))),
                        Adjacency::Boundary => None,
                    });
                    match (si, sj) {
                        (Some((i2, a)), Some((j2, b))) => next.push((i2, j2, &(&tau - &a) + &b)),
                        (Some((i2, a)), None) if f.is_none() => next.push((i2, j, &tau - &a)),
                        (None, Some((j2, b))) if e.is_none() => next.push((i, j2, &tau + &b)),
                        _ => {}
                    }
                }
                for (i2, j2, t2) in next {
                    if !seen.iter().any(|(a, b, c)| *a == i2 && *b == j2 && *c == t2) {
                        seen.push((i2, j2, t2.clone()));
                        queue.push_back((i2, j2, t2));
                    }
                }
            }
            if failed || area != target_area {
                continue;
            }
            let cert = AutomorphismCertificate { matrix: m.clone(), pieces };
            if verify_affine_automorphism(s, &cert)?.passed() {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

fn rational_part(q: &QuadNum) -> Option<Rational> {
    q.is_rational().then(|| q.a().clone())
}

/// The parabolic element fixing the decomposition's direction that acts on
/// every cylinder as a power of a Dehn twist: its shear is the least common
/// multiple of the inverse moduli.
pub fn parabolic_from_cylinders(dec: &CylinderDecomposition<QuadNum>) -> Result<Mat2> {
    if dec.residual || dec.cylinders.is_empty() {
        return Err(precondition("direction is not completely periodic within the search bound"));
    }
    let inv: Vec<QuadNum> = dec.cylinders.iter().map(|c| c.modulus.recip()).collect::<Result<_>>()?;
    let (mut num, mut den) = (BigInt::zero(), BigInt::zero());
    for r in &inv {
        let q = rational_part(&(r / &inv[0])).ok_or_else(|| precondition("cylinder moduli are not commensurable"))?;
        num = num.lcm(q.numer());
        den = den.gcd(q.denom());
        if num.is_zero() {
            num = q.numer().clone();
        }
    }
    let field = inv[0].field();
    let lcm = QuadNum::rational(Rational::new(num, den)?, field);
    let t = &lcm * &inv[0];
    let d = &dec.direction;
    let k = &t / &d.dot(d);
    let one = QuadNum::one(field);
    // I + k · d (d^⊥)ᵀ with d^⊥ = (−dy, dx)
    let (dx, dy) = (&d.x, &d.y);
    Mat2::exact(
        &one - &(&k * &(dx * dy)),
        &k * &(dx * dx),
        -(&k * &(dy * dy)),
        &one + &(&k * &(dx * dy)),
    )
}

/// A verified automorphism with derivative `diag(a, 1/a)`, `a ≠ ±1`, forbids
/// horizontal cylinders; finding both is an inconsistency.
pub fn cylinder_obstruction<S: Scalar>(m: &Mat2, horizontal: &CylinderDecomposition<S>) -> Result<()> {
    let [a, b, c, _] = m.entries_f64();
    let hyperbolic_diagonal = b == 0.0 && c == 0.0 && (a.abs() - 1.0).abs() > 1e-12;
    if !horizontal.direction.y.is_zero() {
        return Err(precondition("decomposition must be horizontal"));
    }
    if hyperbolic_diagonal && !horizontal.cylinders.is_empty() {
        return Err(precondition(format!(
            "inconsistent: diagonal automorphism verified but {} horizontal cylinder(s) found",
            horizontal.cylinders.len()
        )));
    }
    Ok(())
}
