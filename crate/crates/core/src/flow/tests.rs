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

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::num::{QuadNum, Rational};
use crate::surface::{cylinder_decomposition, fixtures};
use crate::veech::{is_periodic, verify_affine_automorphism};
use crate::Mat2;

fn p(x: f64, y: f64) -> P {
    Vec2::new(x, y)
}

fn qv(x: i64, y: i64, d: u64) -> Vec2<QuadNum> {
    Vec2::new(QuadNum::from_i64(x, d), QuadNum::from_i64(y, d))
}

fn golden_dir() -> Vec2<QuadNum> {
    let phi = QuadNum::new(Rational::new(1, 2).unwrap(), Rational::new(1, 2).unwrap(), 5).unwrap();
    Vec2::new(QuadNum::one(5), phi)
}

const PHI: f64 = 1.618_033_988_749_895;

#[test]
fn horizontal_torus_orbit_closes() {
    let t = fixtures::torus();
    let tr = trace(&t, 0, &p(0.5, 0.5), &qv(1, 0, 0), 2.0).unwrap();
    assert_eq!(tr.status, Status::Completed);
    let (poly, end) = tr.end();
    assert_eq!(poly, 0);
    assert!((&end - &p(0.5, 0.5)).norm() < 1e-12);
    assert_eq!(tr.segments.len(), 3);
}

#[test]
fn diagonal_hits_corner() {
    let t = fixtures::torus();
    let tr = trace(&t, 0, &p(0.5, 0.5), &qv(1, 1, 0), core::f64::consts::FRAC_1_SQRT_2).unwrap();
    assert_eq!(tr.status, Status::HitSingularity);
    let long = trace(&t, 0, &p(0.5, 0.5), &qv(1, 1, 0), 10.0).unwrap();
    assert_eq!(long.status, Status::HitSingularity);
    assert!((long.length - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn start_checks() {
    let t = fixtures::torus();
    assert_eq!(trace(&t, 0, &p(0.0, 0.0), &qv(1, 0, 0), 1.0), Err(Error::StartsAtSingularity));
    assert!(trace(&t, 0, &p(2.0, 0.5), &qv(1, 0, 0), 1.0).is_err());
    assert!(trace(&t, 0, &p(0.5, 0.5), &qv(0, 0, 0), 1.0).is_err());
    // edge starts flow either way
    let tr = trace(&t, 0, &p(0.5, 0.0), &qv(0, -1, 0), 0.25).unwrap();
    assert!((&tr.end().1 - &p(0.5, 0.75)).norm() < 1e-12);
}

fn reversibility(s: &crate::surface::ExactSurface, seed: u64) {
    let tracer = Tracer::new(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = area_uniform_points(s, 1000, &mut rng).unwrap();
    let mut checked = 0;
    for (poly, x) in starts {
        let th: f64 = rng.random_range(0.0..core::f64::consts::TAU);
        let d = p(th.cos(), th.sin());
        let len = rng.random_range(1.0..20.0);
        let f = tracer.trace(poly, &x, &d, len).unwrap();
        if f.status != Status::Completed {
            continue;
        }
        let (q, y) = f.end();
        let b = tracer.trace(q, &y, &(-d.clone()), len).unwrap();
        assert_eq!(b.status, Status::Completed);
        let (q2, z) = b.end();
        assert_eq!(q2, poly);
        assert!((&z - &x).norm() < 1e-9, "{x:?} {z:?}");
        checked += 1;
    }
    assert!(checked > 990);
}

#[test]
fn reversible_on_torus() {
    reversibility(&fixtures::torus(), 1);
}

#[test]
fn reversible_on_octagon() {
    reversibility(&fixtures::octagon(), 2);
}

#[test]
fn golden_iet() {
    let t = fixtures::torus();
    let iet = first_return_iet(&t, EdgeId::new(0, 0), &golden_dir(), 10.0).unwrap();
    assert_eq!(iet.lengths.len(), 2);
    assert!((iet.lengths[0] - (1.0 - 1.0 / PHI)).abs() < 1e-9);
    assert!((iet.lengths[1] - 1.0 / PHI).abs() < 1e-9);
    assert_eq!(iet.permutation, vec![1, 0]);
    assert!((iet.total() - 1.0).abs() < 1e-12);
}

#[test]
fn rational_iets() {
    let t = fixtures::torus();
    let v = first_return_iet(&t, EdgeId::new(0, 0), &qv(0, 1, 0), 10.0).unwrap();
    assert_eq!(v.lengths, vec![1.0]);
    assert_eq!(v.permutation, vec![0]);
    assert!(v.shifts[0].abs() < 1e-12);
    let h = first_return_iet(&t, EdgeId::new(0, 0), &qv(1, 2, 0), 10.0).unwrap();
    assert_eq!(h.lengths.len(), 2);
    assert!((h.lengths[0] - 0.5).abs() < 1e-12);
    assert_eq!(h.permutation, vec![1, 0]);
}

#[test]
fn iet_errors() {
    let t = fixtures::torus();
    assert!(matches!(first_return_iet(&t, EdgeId::new(0, 0), &qv(1, 0, 0), 10.0), Err(Error::Precondition(_))));
    assert!(matches!(first_return_iet(&t, EdgeId::new(0, 0), &qv(1, 1000, 0), 0.5), Err(Error::NoReturn { .. })));
}

#[test]
fn iet_is_a_measure_preserving_bijection() {
    let t = fixtures::torus();
    let iet = first_return_iet(&t, EdgeId::new(0, 0), &golden_dir(), 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
    let mut ys: Vec<f64> = xs.iter().map(|&x| iet.apply(iet.apply(x))).collect();
    ys.sort_by(f64::total_cmp);
    assert!(ys.windows(2).all(|w| w[1] - w[0] > 0.0));
    let n = ys.len() as f64;
    let ks = ys.iter().enumerate().map(|(i, y)| ((i as f64 + 1.0) / n - y).abs().max((y - i as f64 / n).abs())).fold(0.0, f64::max);
    assert!(ks <= 0.02, "ks={ks}");
}

#[test]
fn birkhoff_golden_strip() {
    let t = fixtures::torus();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let starts = area_uniform_points(&t, 10, &mut rng).unwrap();
    let r = birkhoff_average(&t, &golden_dir(), &Observable::StripX { lo: 0.0, hi: 0.5 }, 1e4, &starts).unwrap();
    for s in &r.starts {
        let a = s.average.unwrap();
        assert!((a - 0.5).abs() < 0.02, "{a}");
    }
    assert!(r.dispersion < 0.04);
}

#[test]
fn birkhoff_trivial_cases() {
    let t = fixtures::torus();
    let one = birkhoff_average(&t, &golden_dir(), &Observable::Constant(1.0), 50.0, &[(0, p(0.3, 0.7))]).unwrap();
    assert!((one.starts[0].average.unwrap() - 1.0).abs() < 1e-12);
    let per = birkhoff_average(&t, &qv(1, 1, 0), &Observable::StripX { lo: 0.0, hi: 0.5 }, 10.0 * 2f64.sqrt(), &[(0, p(0.0, 0.25))]).unwrap();
    assert!((per.starts[0].average.unwrap() - 0.5).abs() < 1e-9);
    let sing = birkhoff_average(&t, &qv(1, 1, 0), &Observable::Constant(1.0), 5.0, &[(0, p(0.5, 0.5))]).unwrap();
    assert_eq!(sing.starts[0], BirkhoffStart { average: None, status: Status::HitSingularity });
}

#[test]
fn harmonics_average_out() {
    let t = fixtures::torus();
    for f in [Observable::CosX(1), Observable::SinY(2), Observable::CosY(3), Observable::SinX(1)] {
        let r = birkhoff_average(&t, &golden_dir(), &f, 1e4, &[(0, p(0.2, 0.3))]).unwrap();
        let a = r.starts[0].average.unwrap();
        assert!(a.abs() < 0.01, "{f:?} {a}");
        let (lo, hi) = f.range();
        assert!(lo <= a && a <= hi);
    }
}

#[test]
fn equidistribution_cases() {
    let t = fixtures::torus();
    let g = equidistribution_test(&t, &golden_dir(), 1e4, (10, 10), (0, &p(0.2, 0.3))).unwrap();
    assert!(g.discrepancy <= 0.05, "{}", g.discrepancy);
    let per = equidistribution_test(&t, &qv(1, 1, 0), 1e4, (10, 10), (0, &p(0.0, 0.25))).unwrap();
    // a closed diagonal of length √2 spends 0.05 of its time in each bin it meets; the
    // unfinished last period perturbs this by at most √2 / T
    assert!((per.discrepancy - 0.04).abs() < 2e-4, "{}", per.discrepancy);
    let short = equidistribution_test(&t, &golden_dir(), 1e-6, (10, 10), (0, &p(0.25, 0.35))).unwrap();
    assert!((short.discrepancy - 0.99).abs() < 1e-9);
}

#[test]
fn chamanara_levels() {
    for n in 1..=8 {
        let c = chamanara_surface(n).unwrap();
        assert_eq!(c.area(), QuadNum::one(0));
        assert!(c.validate().is_empty());
        assert_eq!(c.gluings().len(), 2 * n as usize);
        assert_eq!(c.boundary().len(), 4);
    }
    let one = chamanara_surface(1).unwrap();
    let rem: f64 = one.boundary().iter().map(|e| one.holonomy(*e).norm_f64()).sum();
    assert!((rem - 2.0).abs() < 1e-12);
    assert!(chamanara_surface(0).is_err());
}

#[test]
fn chamanara_baker_is_consistent() {
    let c = chamanara_surface(5).unwrap();
    let rep = verify_affine_automorphism(&c, &baker_certificate()).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.truncated);
    let inv = Mat2::exact(
        QuadNum::rational(Rational::new(1, 2).unwrap(), 0),
        QuadNum::zero(0),
        QuadNum::zero(0),
        QuadNum::from_i64(2, 0),
    )
    .unwrap();
    let s = is_periodic(&[inv], 3, 1e-12).unwrap().unwrap();
    assert!((s - core::f64::consts::LN_2).abs() < 1e-12);
    let h = cylinder_decomposition(&c, &qv(1, 0, 0), 4.0).unwrap();
    assert!(h.cylinders.is_empty());

    let mut bad = baker_certificate();
    bad.pieces[1].translation = qv(-1, 0, 0);
    assert!(!verify_affine_automorphism(&c, &bad).unwrap().passed());
}

#[test]
fn chamanara_slope_one_escapes() {
    let c = chamanara_surface(3).unwrap();
    let tr = trace(&c, 0, &p(0.5 + 1e-3, 0.5), &qv(1, 1, 0), 100.0).unwrap();
    assert_eq!(tr.status, Status::Escaped);
    assert!(tr.length < 100.0);
}

#[test]
fn escape_fractions() {
    let t = fixtures::torus();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert_eq!(escape_mass_estimate(&t, &qv(1, 1, 0), 100.0, 10, &mut rng).unwrap(), 0.0);
    let c = chamanara_surface(4).unwrap();
    assert_eq!(escape_mass_estimate(&c, &qv(1, 1, 0), 0.0, 10, &mut rng).unwrap(), 0.0);
    let at = |n: u32, t: f64| {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        escape_mass_estimate(&chamanara_surface(n).unwrap(), &qv(1, 1, 0), t, 1000, &mut rng).unwrap()
    };
    for n in 3..=8 {
        assert!(at(n, 100.0) <= 8.0 / f64::from(1u32 << n));
    }
    assert!(at(5, 10.0) <= at(5, 100.0));
}

