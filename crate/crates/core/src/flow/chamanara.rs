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

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{precondition, Result};
use crate::geom::{Mat2, Vec2};
use crate::num::{QuadNum, Rational};
use crate::surface::{EdgeId, ExactSurface, Gluing, Polygon, TranslationSurface};
use crate::veech::{AutomorphismCertificate, Piece};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

fn r(n: i64, d: i64) -> QuadNum {
    QuadNum::rational(Rational::new(n, d).expect("nonzero denominator"), 0)
}

fn pt(x: QuadNum, y: QuadNum) -> Vec2<QuadNum> {
    Vec2::new(x, y)
}

/// Unit square truncation of Chamanara's surface. On each side the segments
/// of length `2^-k`, `k = 1..=levels`, are glued bottom to top and left to
/// right, mirrored so that `diag(2, 1/2)` shifts vertical levels up and
/// horizontal levels down; what remains of each side is marked boundary.
pub fn chamanara_surface(levels: u32) -> Result<ExactSurface> {
    if levels == 0 {
        return Err(precondition("level must be at least 1"));
    }
    if levels > 60 {
        return Err(precondition("level must be at most 60"));
    }
    let n = levels as i64;
    let pow = |k: i64| 1i64 << k;
    let zero = r(0, 1);
    let one = r(1, 1);
    // (vertex, side and level of the edge leaving it; level 0 is the remainder)
    let mut verts: Vec<(Vec2<QuadNum>, Side, i64)> = Vec::new();
    verts.push((pt(zero.clone(), zero.clone()), Side::Bottom, 0));
    for k in (1..=n).rev() {
        verts.push((pt(r(1, pow(k)), zero.clone()), Side::Bottom, k));
    }
    verts.push((pt(one.clone(), zero.clone()), Side::Right, 1));
    for k in 1..=n {
        let y = r(pow(k) - 1, pow(k));
        verts.push((pt(one.clone(), y), Side::Right, if k == n { 0 } else { k + 1 }));
    }
    verts.push((pt(one.clone(), one.clone()), Side::Top, 0));
    for k in (1..=n).rev() {
        verts.push((pt(r(pow(k) - 1, pow(k)), one.clone()), Side::Top, k));
    }
    verts.push((pt(zero.clone(), one.clone()), Side::Left, 1));
    for k in 1..=n {
        verts.push((pt(zero.clone(), r(1, pow(k))), Side::Left, if k == n { 0 } else { k + 1 }));
    }
    let find = |side: Side, level: i64| verts.iter().position(|(_, s, l)| *s == side && *l == level).expect("edge exists");
    let mut gluings = Vec::new();
    for k in 1..=n {
        gluings.push(Gluing { a: EdgeId::new(0, find(Side::Bottom, k)), b: EdgeId::new(0, find(Side::Top, k)), reversed: false });
        gluings.push(Gluing { a: EdgeId::new(0, find(Side::Left, k)), b: EdgeId::new(0, find(Side::Right, k)), reversed: false });
    }
    let boundary = [Side::Bottom, Side::Right, Side::Top, Side::Left].iter().map(|&s| EdgeId::new(0, find(s, 0))).collect();
    let polygon = Polygon { name: "Q".to_string(), vertices: verts.into_iter().map(|(v, _, _)| v).collect() };
    TranslationSurface::new(0, alloc::format!("chamanara-{levels}"), vec![polygon], gluings, boundary)
}

/// The baker map with derivative `diag(2, 1/2)`: the image rectangle
/// `[0, 2] × [0, 1/2]` is cut in half and the right half stacked on top.
pub fn baker_certificate() -> AutomorphismCertificate {
    let z = r(0, 1);
    let half = r(1, 2);
    let v = |x: i64, y: &QuadNum| pt(r(x, 1), y.clone());
    AutomorphismCertificate {
        matrix: Mat2::exact(r(2, 1), z.clone(), z.clone(), half.clone()).expect("one field"),
        pieces: vec![
            Piece { source: 0, vertices: vec![v(0, &z), v(1, &z), v(1, &half), v(0, &half)], translation: pt(z.clone(), z.clone()), target: 0 },
            Piece { source: 0, vertices: vec![v(1, &z), v(2, &z), v(2, &half), v(1, &half)], translation: pt(r(-1, 1), half.clone()), target: 0 },
        ],
    }
}
