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

//! Plane vectors, 2×2 matrices and exact orientation predicates.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::num::{QuadNum, Scalar, Sign};

#[derive(Clone, PartialEq)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    pub fn zero_like(&self) -> Self {
        Vec2 { x: self.x.zero_like(), y: self.x.zero_like() }
    }

    pub fn cross(&self, other: &Self) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec2 { x: self.x.clone() * k.clone(), y: self.y.clone() * k.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> Vec2<f64> {
        Vec2 { x: self.x.to_f64(), y: self.y.to_f64() }
    }

    pub fn norm_f64(&self) -> f64 {
        let v = self.to_f64();
        Float::hypot(v.x, v.y)
    }

    pub fn field(&self) -> u64 {
        self.x.field()
    }
}

impl Vec2<f64> {
    pub fn norm(&self) -> f64 {
        Float::hypot(self.x, self.y)
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: Self) -> Self {
        Vec2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl<'a, S: Scalar> Add<&'a Vec2<S>> for &'a Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: &'a Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x.clone() + o.x.clone(), y: self.y.clone() + o.y.clone() }
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: Self) -> Self {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl<'a, S: Scalar> Sub<&'a Vec2<S>> for &'a Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: &'a Vec2<S>) -> Vec2<S> {
        Vec2 { x: self.x.clone() - o.x.clone(), y: self.y.clone() - o.y.clone() }
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Vec2<S>;
    fn neg(self) -> Self {
        Vec2 { x: -self.x, y: -self.y }
    }
}

impl<S: fmt::Debug> fmt::Debug for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// Orientation of `c` relative to the directed line `a -> b`.
pub fn orient<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>) -> Sign {
    (b - a).cross(&(c - a)).sign()
}

/// Orders directions `u`, `w` by counterclockwise angle measured from
/// `reference`, with `reference` itself at angle zero.
pub fn angle_cmp<S: Scalar>(reference: &Vec2<S>, u: &Vec2<S>, w: &Vec2<S>) -> Ordering {
    let half = |v: &Vec2<S>| -> u8 {
        match reference.cross(v).sign() {
            Sign::Positive => 0,
            Sign::Zero if reference.dot(v).sign() == Sign::Positive => 0,
            _ => 1,
        }
    };
    let (hu, hw) = (half(u), half(w));
    if hu != hw {
        return hu.cmp(&hw);
    }
    // same half plane: ccw order is decided by the cross product
    match u.cross(w).sign() {
        Sign::Positive => Ordering::Less,
        Sign::Negative => Ordering::Greater,
        Sign::Zero => Ordering::Equal,
    }
}

/// `v` strictly inside the open cone swept counterclockwise from `right` to
/// `left`; the cone is assumed to be narrower than a half-turn.
pub fn strictly_between<S: Scalar>(right: &Vec2<S>, left: &Vec2<S>, v: &Vec2<S>) -> bool {
    right.cross(v).sign() == Sign::Positive && v.cross(left).sign() == Sign::Positive
}

/// Twice the signed (shoelace) area.
pub fn twice_area<S: Scalar>(poly: &[Vec2<S>]) -> S {
    let zero = poly[0].x.zero_like();
    let n = poly.len();
    (0..n).fold(zero, |acc, i| acc + poly[i].cross(&poly[(i + 1) % n]))
}

pub fn on_closed_segment<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, p: &Vec2<S>) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let ab = b - a;
    let ap = p - a;
    let t = ap.dot(&ab);
    t.sign() != Sign::Negative && (ab.dot(&ab) - t).sign() != Sign::Negative
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>, d: &Vec2<S>) -> bool {
    let o1 = orient(a, b, c).as_i32();
    let o2 = orient(a, b, d).as_i32();
    let o3 = orient(c, d, a).as_i32();
    let o4 = orient(c, d, b).as_i32();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_closed_segment(a, b, c) || on_closed_segment(a, b, d) || on_closed_segment(c, d, a) || on_closed_segment(c, d, b)
}

/// Simple, positively oriented polygon with no repeated vertices.
pub fn polygon_problems<S: Scalar>(poly: &[Vec2<S>]) -> Vec<&'static str> {
    let mut out = Vec::new();
    let n = poly.len();
    if n < 3 {
        out.push("fewer than three vertices");
        return out;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i] == poly[j] {
                out.push("repeated vertex");
                return out;
            }
        }
    }
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (&poly[j], &poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // shared endpoint only: the edges must not fold back onto each other
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient(p, shared, q).is_zero() && (p - shared).dot(&(q - shared)).sign() == Sign::Positive {
                    out.push("non-simple polygon");
                    return out;
                }
            } else if segments_intersect(a, b, c, d) {
                out.push("non-simple polygon");
                return out;
            }
        }
    }
    if twice_area(poly).sign() != Sign::Positive {
        out.push("polygon not positively oriented");
    }
    out
}

/// Point in the closed convex polygon `poly` (counterclockwise).
pub fn in_closed_convex<S: Scalar>(poly: &[Vec2<S>], p: &Vec2<S>) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) != Sign::Negative)
}

/// Sutherland–Hodgman clip of `subject` against the convex counterclockwise
/// polygon `clip`. The result may be degenerate (zero area) or empty.
pub fn clip_convex<S: Scalar>(subject: &[Vec2<S>], clip: &[Vec2<S>]) -> Vec<Vec2<S>> {
    let mut out: Vec<Vec2<S>> = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let (a, b) = (&clip[i], &clip[(i + 1) % m]);
        let input = core::mem::take(&mut out);
        let k = input.len();
        let side = |p: &Vec2<S>| (b - a).cross(&(p - a));
        for j in 0..k {
            let cur = &input[j];
            let prev = &input[(j + k - 1) % k];
            let sc = side(cur);
            let sp = side(prev);
            let cin = sc.sign() != Sign::Negative;
            let pin = sp.sign() != Sign::Negative;
            if cin {
                if !pin {
                    out.push(line_point(prev, cur, &sp, &sc));
                }
                out.push(cur.clone());
            } else if pin && sp.sign() == Sign::Positive {
                out.push(line_point(prev, cur, &sp, &sc));
            }
        }
    }
    dedup_cyclic(out)
}

fn line_point<S: Scalar>(p: &Vec2<S>, q: &Vec2<S>, sp: &S, sq: &S) -> Vec2<S> {
    let t = sp.clone() / (sp.clone() - sq.clone());
    p + &(q - p).scale(&t)
}

fn dedup_cyclic<S: Scalar>(mut pts: Vec<Vec2<S>>) -> Vec<Vec2<S>> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

/// Area of the intersection of two convex counterclockwise polygons, doubled.
pub fn twice_overlap_area<S: Scalar>(p: &[Vec2<S>], q: &[Vec2<S>]) -> S {
    let c = clip_convex(p, q);
    if c.len() < 3 {
        p[0].x.zero_like()
    } else {
        twice_area(&c)
    }
}

pub fn is_convex_ccw<S: Scalar>(poly: &[Vec2<S>]) -> bool {
    let n = poly.len();
    n >= 3
        && (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]) != Sign::Negative)
        && twice_area(poly).sign() == Sign::Positive
}

/// A 2×2 matrix `[[a, b], [c, d]]`, exact or approximate.
#[derive(Clone, PartialEq, Debug)]
pub enum Mat2 {
    Exact([QuadNum; 4]),
    Approx([f64; 4]),
}

impl Mat2 {
    pub fn exact(a: QuadNum, b: QuadNum, c: QuadNum, d: QuadNum) -> Result<Self> {
        let f = a.field();
        if [&b, &c, &d].iter().any(|e| e.field() != f) {
            let other = [&b, &c, &d].iter().map(|e| e.field()).find(|&g| g != f).unwrap_or(f);
            return Err(Error::FieldMismatch(f, other));
        }
        Ok(Mat2::Exact([a, b, c, d]))
    }

    pub fn approx(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::Approx([a, b, c, d])
    }

    pub fn identity() -> Self {
        Mat2::Approx([1.0, 0.0, 0.0, 1.0])
    }

    pub fn exact_identity(field: u64) -> Self {
        Mat2::Exact([QuadNum::one(field), QuadNum::zero(field), QuadNum::zero(field), QuadNum::one(field)])
    }

    /// `g_t = diag(e^-t, e^t)`.
    pub fn geodesic(t: f64) -> Self {
        Mat2::Approx([Float::exp(-t), 0.0, 0.0, Float::exp(t)])
    }

    /// Upper unipotent `[[1, s], [0, 1]]`.
    pub fn horocycle(s: f64) -> Self {
        Mat2::Approx([1.0, s, 0.0, 1.0])
    }

    /// Lower unipotent `[[1, 0], [s, 1]]`.
    pub fn lower_horocycle(s: f64) -> Self {
        Mat2::Approx([1.0, 0.0, s, 1.0])
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (Float::sin(theta), Float::cos(theta));
        Mat2::Approx([c, -s, s, c])
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mat2::Exact(_))
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        match self {
            Mat2::Exact(e) => [e[0].to_f64_or_inf(), e[1].to_f64_or_inf(), e[2].to_f64_or_inf(), e[3].to_f64_or_inf()],
            Mat2::Approx(e) => *e,
        }
    }

    pub fn det_f64(&self) -> f64 {
        let [a, b, c, d] = self.entries_f64();
        a * d - b * c
    }

    /// Determinant one: exactly for the exact kind, to `1e-12` otherwise.
    pub fn is_unimodular(&self) -> bool {
        match self {
            Mat2::Exact([a, b, c, d]) => (a * d - b * c) == QuadNum::one(a.field()),
            Mat2::Approx(_) => Float::abs(self.det_f64() - 1.0) <= 1e-12,
        }
    }

    pub fn to_approx(&self) -> Mat2 {
        Mat2::Approx(self.entries_f64())
    }

    /// Matrix product `self · other`; exact when both factors are exact.
    pub fn mul(&self, other: &Mat2) -> Result<Mat2> {
        match (self, other) {
            (Mat2::Exact([a, b, c, d]), Mat2::Exact([e, f, g, h])) => Ok(Mat2::Exact([
                a.checked_mul(e)?.checked_add(&b.checked_mul(g)?)?,
                a.checked_mul(f)?.checked_add(&b.checked_mul(h)?)?,
                c.checked_mul(e)?.checked_add(&d.checked_mul(g)?)?,
                c.checked_mul(f)?.checked_add(&d.checked_mul(h)?)?,
            ])),
            _ => {
                let [a, b, c, d] = self.entries_f64();
                let [e, f, g, h] = other.entries_f64();
                Ok(Mat2::Approx([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]))
            }
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2 {
        match self {
            Mat2::Exact([a, b, c, d]) => Mat2::Exact([d.clone(), -b.clone(), -c.clone(), a.clone()]),
            Mat2::Approx([a, b, c, d]) => {
                let det = a * d - b * c;
                Mat2::Approx([d / det, -b / det, -c / det, a / det])
            }
        }
    }

    pub fn apply_f64(&self, v: &Vec2<f64>) -> Vec2<f64> {
        let [a, b, c, d] = self.entries_f64();
        Vec2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn apply_exact(&self, v: &Vec2<QuadNum>) -> Result<Vec2<QuadNum>> {
        match self {
            Mat2::Exact([a, b, c, d]) => Ok(Vec2::new(
                a.checked_mul(&v.x)?.checked_add(&b.checked_mul(&v.y)?)?,
                c.checked_mul(&v.x)?.checked_add(&d.checked_mul(&v.y)?)?,
            )),
            Mat2::Approx(_) => Err(Error::Precondition("exact application needs an exact matrix".into())),
        }
    }
}

trait ToF64OrInf {
    fn to_f64_or_inf(&self) -> f64;
}

impl ToF64OrInf for QuadNum {
    fn to_f64_or_inf(&self) -> f64 {
        self.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn angle_order() {
        let r = v(1.0, 0.0);
        assert_eq!(angle_cmp(&r, &v(1.0, 0.0), &v(0.0, 1.0)), Ordering::Less);
        assert_eq!(angle_cmp(&r, &v(-1.0, 0.0), &v(0.0, -1.0)), Ordering::Less);
        assert_eq!(angle_cmp(&r, &v(0.0, -1.0), &v(1.0, 1.0)), Ordering::Greater);
        assert_eq!(angle_cmp(&r, &v(2.0, 2.0), &v(1.0, 1.0)), Ordering::Equal);
    }

    #[test]
    fn simple_polygons() {
        let sq = [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)];
        assert!(polygon_problems(&sq).is_empty());
        let bow = [v(0.0, 0.0), v(1.0, 1.0), v(1.0, 0.0), v(0.0, 1.0)];
        assert!(!polygon_problems(&bow).is_empty());
        let cw = [v(0.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), v(1.0, 0.0)];
        assert_eq!(polygon_problems(&cw), ["polygon not positively oriented"]);
        let collinear = [v(0.0, 0.0), v(0.5, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)];
        assert!(polygon_problems(&collinear).is_empty());
    }

    #[test]
    fn clipping_overlap() {
        let a = [v(0.0, 0.0), v(2.0, 0.0), v(2.0, 2.0), v(0.0, 2.0)];
        let b = [v(1.0, 1.0), v(3.0, 1.0), v(3.0, 3.0), v(1.0, 3.0)];
        assert_eq!(twice_overlap_area(&a, &b), 2.0);
        let c = [v(2.0, 0.0), v(4.0, 0.0), v(4.0, 2.0), v(2.0, 2.0)];
        assert_eq!(twice_overlap_area(&a, &c), 0.0);
    }

    #[test]
    fn matrices() {
        assert!(Mat2::geodesic(0.7).is_unimodular());
        assert!(!Mat2::approx(2.0, 0.0, 0.0, 2.0).is_unimodular());
        let h = Mat2::horocycle(1.0);
        let p = h.mul(&h.inverse()).unwrap().entries_f64();
        assert_eq!(p, [1.0, 0.0, 0.0, 1.0]);
        let g = Mat2::geodesic(core::f64::consts::LN_2).apply_f64(&v(1.0, 1.0));
        assert!((g.x - 0.5).abs() < 1e-15 && (g.y - 2.0).abs() < 1e-15);
    }
}
