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
use crate::num::QuadNum;
use crate::saddle::shortest_saddle_connection;
use crate::surface::fixtures::{golden_torus, octagon, torus};
use crate::surface::ExactSurface;

// Values for the golden-slope lattice come from Lagrange reduction at 60
// digits on a 40001-point grid over [0, 20].
const GOLDEN_MIN_DELTA: f64 = 0.874032088115334;
const GOLDEN_INTEGRAL_20: f64 = 18.5371377484309;
const GOLDEN_INTEGRAL_10: f64 = 9.248798570586477;

fn horizontal_torus_envelope(t: f64) -> SystoleEnvelope<QuadNum> {
    systole_envelope(&torus(), t).unwrap()
}

#[test]
fn torus_envelope_is_one_piece() {
    let env = horizontal_torus_envelope(2.0);
    assert_eq!(env.pieces.len(), 1);
    assert!(env.certified);
    let w = env.pieces[0].witness.clone().unwrap();
    assert_eq!(w, Vec2::new(QuadNum::from_i64(1, 0), QuadNum::from_i64(0, 0)));
    for t in [0.0, 0.7, 2.0] {
        assert!((env.delta(t) - (-t).exp()).abs() < 1e-15);
    }
}

#[test]
fn torus_criterion_closed_forms() {
    let i2 = criterion_integral(&horizontal_torus_envelope(2.0));
    assert!((i2 - (1.0 - (-4.0f64).exp()) / 2.0).abs() < 1e-12);
    assert!((i2 - 0.490842).abs() < 1e-6);
    let i5 = criterion_integral(&horizontal_torus_envelope(5.0));
    assert!((i5 - (1.0 - (-10.0f64).exp()) / 2.0).abs() < 1e-12);
    let i10 = criterion_integral(&horizontal_torus_envelope(10.0));
    assert!(i10 - i5 < 1e-4);
}

#[test]
fn constant_envelope() {
    let env: SystoleEnvelope<f64> = SystoleEnvelope::constant(1.0, 3.0);
    assert_eq!(criterion_integral(&env), 3.0);
    let ce = cheung_eskin_c(&env, 1.0).unwrap();
    assert_eq!(ce.c, 0.0);
    assert_eq!(log_law_stat(&env, core::f64::consts::E).unwrap(), 0.0);
}

#[test]
fn two_exponentials() {
    // envelope of (1, 0) and (0, 1) alone
    let c = vec![
        Candidate { x2: 1.0, y2: 0.0, holonomy: Vec2::new(1.0, 0.0) },
        Candidate { x2: 0.0, y2: 1.0, holonomy: Vec2::new(0.0, 1.0) },
    ];
    let s = sweep(&c, 0.0, 3.0);
    assert_eq!(s, vec![(0.0, 3.0, 0)]);
    let s = sweep(&c, -3.0, 3.0);
    assert_eq!(s.len(), 2);
    assert_eq!(s[0].2, 1);
    assert!(s[0].1.abs() < 1e-15);
}

#[test]
fn golden_envelope() {
    let env = systole_envelope(&golden_torus(), 20.0).unwrap();
    assert!(env.certified);
    assert!(env.pieces.len() >= 5);
    assert!((env.min_delta() - GOLDEN_MIN_DELTA).abs() < 1e-6, "{}", env.min_delta());
    assert!(env.min_delta() >= 0.8);
    assert!((criterion_integral(&env) - GOLDEN_INTEGRAL_20).abs() < 1e-4);
    assert!((env.integral_to(10.0) - GOLDEN_INTEGRAL_10).abs() < 1e-4);
    for w in env.pieces.windows(2) {
        assert_eq!(w[0].t1, w[1].t0);
        let (a, b) = (w[0].value_sq(w[0].t1), w[1].value_sq(w[1].t0));
        assert!((a - b).abs() <= 1e-12 * a);
    }
    let ce = cheung_eskin_c(&env, 1.0).unwrap();
    assert!(ce.c <= 0.25 && ce.satisfied, "{ce:?}");
    let ll = log_law_stat(&env, core::f64::consts::E).unwrap();
    assert!(ll <= 0.223, "{ll}");
}

#[test]
fn horizontal_cheung_eskin_grows() {
    let env = horizontal_torus_envelope(10.0);
    let ce = cheung_eskin_c(&env, 1.0).unwrap();
    assert!((ce.c - (10.0 - 0.5 * 10f64.ln())).abs() < 1e-9);
    assert!(!ce.satisfied);
    let ll = log_law_stat(&env, core::f64::consts::E).unwrap();
    assert!((ll - 10.0 / 10f64.ln()).abs() < 1e-9);
}

fn spot_check(s: &ExactSurface, horizon: f64, seed: u64) {
    let env = systole_envelope(s, horizon).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let t: f64 = rng.random_range(0.0..horizon);
        let (direct, _) = shortest_saddle_connection(&s.geodesic_deform(t)).unwrap();
        assert!((env.delta(t) - direct).abs() <= 1e-9 * direct, "t = {t}: {} vs {direct}", env.delta(t));
    }
}

#[test]
fn envelope_matches_direct_minimum() {
    spot_check(&octagon(), 3.0, 7);
    spot_check(&golden_torus(), 6.0, 11);
}

#[test]
fn am_gm_minimum_of_witnesses() {
    let env = systole_envelope(&octagon(), 4.0).unwrap();
    for p in &env.pieces {
        if p.x2 > 0.0 && p.y2 > 0.0 {
            let t = 0.25 * (p.x2 / p.y2).ln();
            assert!((p.value_sq(t) - 2.0 * (p.x2 * p.y2).sqrt()).abs() < 1e-12);
        }
    }
}

#[test]
fn integral_is_monotone_and_additive() {
    let env = systole_envelope(&octagon(), 3.0).unwrap();
    let mut last = 0.0;
    for k in 0..=30 {
        let v = env.integral_to(k as f64 * 0.1);
        assert!(v >= last);
        last = v;
    }
    let split: f64 = env.pieces.iter().map(|p| p.integral(0.0, 1.3) + p.integral(1.3, 3.0)).sum();
    assert!((split - criterion_integral(&env)).abs() < 1e-12);
}

#[test]
fn systole_ordering_along_orbit() {
    let o = octagon();
    let env = systole_envelope(&o, 2.0).unwrap();
    for t in [0.0, 0.5, 1.5] {
        let est = crate::saddle::systole_estimate(&o.geodesic_deform(t), 8.0).unwrap();
        assert!((est.lower_proxy - env.delta(t)).abs() < 1e-9);
        assert!(est.lower_proxy <= est.closed_curve_upper);
    }
}

#[test]
fn boundary_refused() {
    let s = torus();
    let p = s.polygons().to_vec();
    let g = vec![s.gluings()[0]];
    let b = vec![crate::EdgeId::new(0, 1), crate::EdgeId::new(0, 3)];
    let cut = crate::TranslationSurface::new(0, "cut", p, g, b).unwrap();
    assert!(systole_envelope(&cut, 1.0).is_err());
}

#[test]
fn profile_integral_constant() {
    let rows: Vec<ProfileSample> = (0..=1000)
        .map(|k| ProfileSample { t: k as f64 * 0.01, eps: 0.1, components: 1, sum_diameters: 1.0, delta: 1.0 })
        .collect();
    let r = thm12_criterion(&ThicknessProfile::new(rows).unwrap());
    assert!((r.integral - 1e-3).abs() < 1e-9);
    assert_eq!(r.verdict, Verdict::Growing);
}

#[test]
fn profile_integral_exponential_converges() {
    let n = 200_000;
    let rows: Vec<ProfileSample> = (0..=n)
        .map(|k| {
            let t = 20.0 * k as f64 / n as f64;
            ProfileSample { t, eps: 1.0, components: 2, sum_diameters: 1.0, delta: (-t).exp() }
        })
        .collect();
    let r = thm12_criterion(&ThicknessProfile::new(rows).unwrap());
    assert!((r.integral - (2f64.ln() - 0.5)).abs() < 1e-4);
    assert_eq!(r.verdict, Verdict::Converging);
}

#[test]
fn profile_validation() {
    let row = |t: f64| ProfileSample { t, eps: 1.0, components: 1, sum_diameters: 1.0, delta: 1.0 };
    assert!(ThicknessProfile::new(vec![row(0.0), row(0.0)]).is_err());
    assert!(ThicknessProfile::new(vec![row(0.0)]).is_err());
    let mut bad = row(1.0);
    bad.eps = 0.0;
    assert!(ThicknessProfile::new(vec![row(0.0), bad]).is_err());
}

#[test]
fn masur_smillie_fit() {
    let r = masur_smillie_check(&[(0.5, 1.0), (0.25, 2.2)], 0.54).unwrap();
    assert!((r.k - 0.55).abs() < 1e-15);
    assert_eq!((r.used, r.violations), (2, 1));
    assert_eq!(masur_smillie_check(&[(1.0, 0.7)], 1.0).unwrap_err(), crate::Error::GateNotMet);
    let r = masur_smillie_check(&[(1.0, 0.7), (0.5, 1.0308)], 1.0).unwrap();
    assert_eq!(r.used, 1);
    assert!((r.k - 0.5154).abs() < 1e-12);
}
