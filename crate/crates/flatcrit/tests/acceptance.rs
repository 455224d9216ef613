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

//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatcrit::cli::escape_fraction;
use flatcrit_core::flow::{
    area_uniform_points, baker_certificate, birkhoff_average, chamanara_surface, first_return_iet, Observable, Status, Tracer,
};
use flatcrit_core::saddle::{diameter_estimate, enumerate_saddle_connections, shortest_saddle_connection};
use flatcrit_core::surface::{cylinder_decomposition, fixtures, ExactSurface};
use flatcrit_core::teich::{
    cheung_eskin_c, criterion_integral, masur_smillie_check, systole_envelope, thm12_criterion, ProfileSample, ThicknessProfile,
    Verdict,
};
use flatcrit_core::veech::{
    cylinder_obstruction, find_certificate, hyp_distance, is_periodic, law_of_sines_bound, parabolic_from_cylinders,
    verify_affine_automorphism, AutomorphismCertificate,
};
use flatcrit_core::{EdgeId, Mat2, QuadNum, Rational, Vec2};

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn q(n: i64, d: u64) -> QuadNum {
    QuadNum::from_i64(n, d)
}

fn phi() -> QuadNum {
    QuadNum::new(Rational::new(1, 2).unwrap(), Rational::new(1, 2).unwrap(), 5).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn c1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_flatcrit"))
        .args(["criterion", "--surface", fixture("torus.tsf").to_str().unwrap(), "--T", "5"])
        .output()
        .map_err(e)?;
    let elapsed = start.elapsed().as_secs_f64();
    check(out.status.success(), String::from_utf8_lossy(&out.stderr))?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(e)?;
    let i5 = report["outputs"]["integral"]["value"].as_f64().ok_or("no integral")?;
    let exact = (1.0 - (-10f64).exp()) / 2.0;
    check((i5 - exact).abs() < 1e-9, format!("integral {i5} vs {exact}"))?;
    check(elapsed < 1.0, format!("runtime {elapsed:.3}s"))?;
    let i10 = criterion_integral(&systole_envelope(&fixtures::torus(), 10.0).map_err(e)?);
    check(i10 - i5 < 1e-4, format!("growth {}", i10 - i5))?;
    Ok(format!("integral {i5:.10} (exact {exact:.10}), growth to T=10 {:.2e}, {elapsed:.3}s", i10 - i5))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let env = systole_envelope(&fixtures::golden_torus(), 20.0).map_err(e)?;
    let (min, integral) = (env.min_delta(), criterion_integral(&env));
    check(min >= 0.8, format!("min delta' {min}"))?;
    check(integral >= 12.0, format!("integral {integral}"))?;
    let torus = fixtures::torus();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let starts = area_uniform_points(&torus, 10, &mut rng).map_err(e)?;
    let dir = Vec2::new(QuadNum::one(5), phi());
    let r = birkhoff_average(&torus, &dir, &Observable::StripX { lo: 0.0, hi: 0.5 }, 1e4, &starts).map_err(e)?;
    let worst = r
        .starts
        .iter()
        .map(|s| s.average.map_or(f64::INFINITY, |a| (a - 0.5).abs()))
        .fold(0.0, f64::max);
    check(worst <= 0.02, format!("Birkhoff deviation {worst}"))?;
    let elapsed = start.elapsed().as_secs_f64();
    check(elapsed < 30.0, format!("runtime {elapsed:.1}s"))?;
    Ok(format!("min delta' {min:.6}, integral {integral:.4}, max |avg - 1/2| {worst:.2e}, {elapsed:.2}s"))
}

fn c3() -> Outcome {
    let golden = cheung_eskin_c(&systole_envelope(&fixtures::golden_torus(), 20.0).map_err(e)?, 1.0).map_err(e)?;
    check(golden.c <= 0.25 && golden.satisfied, format!("golden {golden:?}"))?;
    let horizontal = cheung_eskin_c(&systole_envelope(&fixtures::torus(), 20.0).map_err(e)?, 1.0).map_err(e)?;
    check(!horizontal.satisfied, format!("horizontal {horizontal:?}"))?;
    Ok(format!("golden C {:.4} (stable), horizontal C {:.2} growing at the horizon", golden.c, horizontal.c))
}

fn primitive_count(l: f64) -> usize {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let m = l.floor() as i64;
    let mut n = 0;
    for a in -m..=m {
        for b in -m..=m {
            if gcd(a, b) == 1 && ((a * a + b * b) as f64) <= l * l {
                n += 1;
            }
        }
    }
    n
}

/// Count at `l`, and the count at `l` read off an enumeration to `2l`.
fn counts(s: &ExactSurface, l: f64) -> Result<(usize, usize), String> {
    let a = enumerate_saddle_connections(s, l).map_err(e)?;
    let b = enumerate_saddle_connections(s, 2.0 * l).map_err(e)?;
    check(!a.truncated && !b.truncated, "truncated enumeration")?;
    Ok((a.connections.len(), b.connections.iter().filter(|c| c.length() <= l).count()))
}

fn c4() -> Outcome {
    let torus = fixtures::torus();
    let mut found = Vec::new();
    for l in [1.5, 5.0, 10.0, 30.0] {
        let (n, doubled) = counts(&torus, l)?;
        let oracle = primitive_count(l);
        check(n == oracle, format!("torus L={l}: {n} vs {oracle}"))?;
        check(doubled == n, format!("torus L={l}: doubling gives {doubled}"))?;
        found.push(n);
    }
    let (n, doubled) = counts(&fixtures::octagon(), 1.01)?;
    check(n == 8 && doubled == 8, format!("octagon {n}, doubled {doubled}"))?;
    Ok(format!("torus {found:?}, octagon 8"))
}

fn tamper_each(s: &ExactSurface, c: &AutomorphismCertificate) -> Result<usize, String> {
    let eps = QuadNum::rational(Rational::new(1, 1_000_000_000).unwrap(), s.field());
    for i in 0..c.pieces.len() {
        let mut t = c.clone();
        let tr = &mut t.pieces[i].translation;
        if i % 2 == 0 {
            tr.x = &tr.x + &eps;
        } else {
            tr.y = &tr.y + &eps;
        }
        check(!verify_affine_automorphism(s, &t).map_err(e)?.passed(), format!("tampered piece {i} passed"))?;
    }
    Ok(c.pieces.len())
}

fn c5() -> Outcome {
    let torus = fixtures::torus();
    let shear = Mat2::exact(q(1, 0), q(1, 0), q(0, 0), q(1, 0)).map_err(e)?;
    let tc = find_certificate(&torus, &shear).map_err(e)?.ok_or("no torus certificate")?;
    check(verify_affine_automorphism(&torus, &tc).map_err(e)?.passed(), "torus shear rejected")?;
    let octagon = fixtures::octagon();
    let cyl = cylinder_decomposition(&octagon, &Vec2::new(q(1, 2), q(0, 2)), 20.0).map_err(e)?;
    check(cyl.cylinders.len() == 2, format!("{} horizontal cylinders", cyl.cylinders.len()))?;
    let m = parabolic_from_cylinders(&cyl).map_err(e)?;
    let oc = find_certificate(&octagon, &m).map_err(e)?.ok_or("no octagon certificate")?;
    let rep = verify_affine_automorphism(&octagon, &oc).map_err(e)?;
    check(rep.passed() && !rep.truncated, format!("octagon: {:?}", rep.failures))?;
    let n = tamper_each(&torus, &tc)? + tamper_each(&octagon, &oc)?;
    let entries = match &m {
        Mat2::Exact(x) => x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
        Mat2::Approx(x) => e(x),
    };
    Ok(format!("torus shear and octagon [{entries}] verified; {n} tampered pieces rejected"))
}

fn c6() -> Outcome {
    let s = chamanara_surface(5).map_err(e)?;
    let rep = verify_affine_automorphism(&s, &baker_certificate()).map_err(e)?;
    let half = QuadNum::rational(Rational::new(1, 2).unwrap(), 0);
    let inv = Mat2::exact(half, q(0, 0), q(0, 0), q(2, 0)).map_err(e)?;
    let period = is_periodic(&[inv], 2, 1e-12).map_err(e)?;
    let h = cylinder_decomposition(&s, &Vec2::new(q(1, 0), q(0, 0)), 4.0).map_err(e)?;
    check(rep.passed(), format!("baker: {:?}", rep.failures))?;
    let p = period.ok_or("not periodic")?;
    check((p - 2f64.ln()).abs() <= 1e-12, format!("period {p}"))?;
    check(h.cylinders.is_empty(), format!("{} horizontal cylinders", h.cylinders.len()))?;
    check(cylinder_obstruction(&baker_certificate().matrix, &h).is_ok(), "obstruction reports an inconsistency")?;
    Ok(format!("baker verified (truncated {}), period ln 2 {:+.1e}, no cylinders to waist 4", rep.truncated, p - 2f64.ln()))
}

fn c7() -> Outcome {
    let id = Mat2::identity();
    let mut worst: f64 = 0.0;
    for k in -50..=50 {
        let t = k as f64 / 10.0;
        worst = worst.max((hyp_distance(&id, &Mat2::geodesic(t)).map_err(e)? - t.abs()).abs());
    }
    check(worst <= 1e-12, format!("grid error {worst}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut random = || {
        let (a, b, c): (f64, f64, f64) = (rng.random_range(0.3..3.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        Mat2::approx(a, b * a, c / a, (1.0 + b * c) / a)
    };
    let mut inv: f64 = 0.0;
    for _ in 0..100 {
        let (g, a, b) = (random(), random(), random());
        let d0 = hyp_distance(&a, &b).map_err(e)?;
        let d1 = hyp_distance(&g.mul(&a).map_err(e)?, &g.mul(&b).map_err(e)?).map_err(e)?;
        inv = inv.max((d0 - d1).abs());
    }
    check(inv <= 1e-9, format!("left-invariance error {inv}"))?;
    let b = law_of_sines_bound(0.1, 1.0).map_err(e)?;
    check((b - 0.055516).abs() <= 1e-5, format!("law of sines {b}"))?;
    Ok(format!("grid {worst:.1e}, invariance {inv:.1e}, law of sines {b:.6}"))
}

fn c8() -> Outcome {
    let rows: Vec<ProfileSample> = (0..=1000)
        .map(|k| ProfileSample { t: k as f64 * 0.01, eps: 0.1, components: 1, sum_diameters: 1.0, delta: 1.0 })
        .collect();
    let constant = thm12_criterion(&ThicknessProfile::new(rows).map_err(e)?);
    check((constant.integral - 1e-3).abs() < 1e-9, format!("constant {}", constant.integral))?;
    let n = 200_000;
    let rows: Vec<ProfileSample> = (0..=n)
        .map(|k| {
            let t = 20.0 * k as f64 / n as f64;
            ProfileSample { t, eps: 1.0, components: 2, sum_diameters: 1.0, delta: (-t).exp() }
        })
        .collect();
    let exp = thm12_criterion(&ThicknessProfile::new(rows).map_err(e)?);
    let target = 2f64.ln() - 0.5;
    check((exp.integral - target).abs() < 1e-4, format!("exponential {}", exp.integral))?;
    check(exp.verdict == Verdict::Converging, format!("verdict {}", exp.verdict.as_str()))?;
    Ok(format!("constant {:.12}, exponential {:.6} ({})", constant.integral, exp.integral, exp.verdict.as_str()))
}

fn reversibility(s: &ExactSurface, seed: u64) -> Result<f64, String> {
    let tracer = Tracer::new(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = area_uniform_points(s, 1000, &mut rng).map_err(e)?;
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for (poly, x) in starts {
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let d = Vec2::new(th.cos(), th.sin());
        let len = rng.random_range(1.0..20.0);
        let f = tracer.trace(poly, &x, &d, len).map_err(e)?;
        if f.status != Status::Completed {
            skipped += 1;
            continue;
        }
        let (q, y) = f.end();
        let b = tracer.trace(q, &y, &Vec2::new(-d.x, -d.y), len).map_err(e)?;
        let (q2, z) = b.end();
        check(b.status == Status::Completed && q2 == poly, "backward trace did not return")?;
        worst = worst.max(((z.x - x.x).powi(2) + (z.y - x.y).powi(2)).sqrt());
    }
    check(skipped <= 10, format!("{skipped} traces hit a singularity"))?;
    check(worst <= 1e-9, format!("reversibility error {worst}"))?;
    Ok(worst)
}

fn c9() -> Outcome {
    let rt = reversibility(&fixtures::torus(), 91)?;
    let ro = reversibility(&fixtures::octagon(), 92)?;
    let torus = fixtures::torus();
    let iet = first_return_iet(&torus, EdgeId::new(0, 0), &Vec2::new(QuadNum::one(5), phi()), 10.0).map_err(e)?;
    let mut lengths = iet.lengths.clone();
    lengths.sort_by(f64::total_cmp);
    let want = [0.381_966_011_250_105_1, 0.618_033_988_749_894_8];
    check(lengths.len() == 2 && lengths.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9), format!("IET {lengths:?}"))?;
    let d = Vec2::new(1.0, 1.0);
    let mut fractions = Vec::new();
    for n in 3..=8 {
        let s = chamanara_surface(n).map_err(e)?;
        fractions.push(escape_fraction(&s, &d, 100.0, 100_000, 2026).map_err(e)?);
    }
    let ratios: Vec<f64> = fractions.windows(2).map(|w| w[0] / w[1]).collect();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    check(min >= 1.8, format!("escape fractions {fractions:?}, ratios {ratios:?}"))?;
    Ok(format!(
        "reversibility {rt:.1e}/{ro:.1e}, IET {:.9}/{:.9}, escape {:?}, min ratio {min:.3}",
        lengths[0],
        lengths[1],
        fractions.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>()
    ))
}

fn c10() -> Outcome {
    let octagon = fixtures::octagon();
    let area = octagon.area().to_f64().map_err(e)?;
    let n = 96;
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for k in 0..=6 {
        let s = octagon.geodesic_deform(0.5 * k as f64);
        let (delta, _) = shortest_saddle_connection(&s).map_err(e)?;
        let d1 = diameter_estimate(&s, n).map_err(e)?.lower;
        let d2 = diameter_estimate(&s, 2 * n).map_err(e)?.lower;
        let scale = area.sqrt();
        coarse.push((delta / scale, d1 / scale));
        fine.push((delta / scale, d2 / scale));
    }
    let a = masur_smillie_check(&coarse, f64::INFINITY).map_err(e)?;
    let b = masur_smillie_check(&fine, a.k).map_err(e)?;
    let fine_self = masur_smillie_check(&fine, b.k).map_err(e)?;
    check(a.k.is_finite() && b.k.is_finite(), "K not finite")?;
    let rel = (b.k - a.k).abs() / a.k;
    check(rel <= 0.05, format!("K {} vs {} ({:.1}%)", a.k, b.k, 100.0 * rel))?;
    check(fine_self.violations == 0, "fitted K violated by a gated sample")?;
    Ok(format!("K {:.5} ({} samples) vs {:.5} ({}), change {:.2}%, {} gated points", a.k, n, b.k, 2 * n, 100.0 * rel, b.used))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("torus horizontal criterion integral", c1),
        ("torus golden direction", c2),
        ("Cheung-Eskin constant", c3),
        ("saddle connection counts", c4),
        ("affine automorphism certificates", c5),
        ("periodicity and cylinder obstruction", c6),
        ("hyperbolic geometry", c7),
        ("profile integral evaluator", c8),
        ("flow correctness", c9),
        ("Masur-Smillie bound", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
