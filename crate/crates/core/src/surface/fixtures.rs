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

//! Standard example surfaces.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{ExactSurface, EdgeId, Gluing, Polygon, TranslationSurface};
use crate::geom::Vec2;
use crate::num::{QuadNum, Rational};

fn q(a: i64, b: i64, d: u64) -> QuadNum {
    QuadNum::new(Rational::from(a), Rational::from(b), d).expect("valid field")
}

fn half(x: QuadNum) -> QuadNum {
    let two = QuadNum::from_i64(2, x.field());
    x / two
}

fn opposite_gluings(n: usize) -> Vec<Gluing> {
    (0..n / 2).map(|i| Gluing { a: EdgeId::new(0, i), b: EdgeId::new(0, i + n / 2), reversed: false }).collect()
}

fn single(field: u64, label: &str, vertices: Vec<Vec2<QuadNum>>) -> ExactSurface {
    let n = vertices.len();
    TranslationSurface::new(field, label, vec![Polygon { name: "P".to_string(), vertices }], opposite_gluings(n), vec![])
        .expect("fixture is valid")
}

/// Unit square with opposite sides glued.
pub fn torus() -> ExactSurface {
    let v = |x, y| Vec2::new(QuadNum::from_i64(x, 0), QuadNum::from_i64(y, 0));
    single(0, "torus", vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)])
}

/// Regular octagon of side 1 with opposite sides glued; genus two, one cone
/// point of angle `6π`.
pub fn octagon() -> ExactSurface {
    let r = half(q(0, 1, 2));
    let z = QuadNum::zero(2);
    let one = QuadNum::from_i64(1, 2);
    let v = |x: &QuadNum, y: &QuadNum| Vec2::new(x.clone(), y.clone());
    let (op, rp) = (&one + &r, &one + &(&r + &r));
    single(
        2,
        "octagon",
        vec![
            v(&z, &z),
            v(&one, &z),
            v(&op, &r),
            v(&op, &op),
            v(&one, &rp),
            v(&z, &rp),
            v(&-r.clone(), &op),
            v(&-r.clone(), &r),
        ],
    )
}

/// The unit square torus sheared by `[[1, 0], [-φ, 1]]`, which carries the
/// direction of slope `φ` to the horizontal.
pub fn golden_torus() -> ExactSurface {
    let phi = half(q(1, 1, 5));
    let z = QuadNum::zero(5);
    let one = QuadNum::from_i64(1, 5);
    single(
        5,
        "golden",
        vec![
            Vec2::new(z.clone(), z.clone()),
            Vec2::new(one.clone(), -phi.clone()),
            Vec2::new(one.clone(), &one - &phi),
            Vec2::new(z, one),
        ],
    )
}
