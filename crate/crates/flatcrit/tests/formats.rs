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

use std::path::PathBuf;

use flatcrit::cert_file::{parse_certificate, write_certificate};
use flatcrit::surface_file::{parse_surface, read_surface, write_surface};
use flatcrit_core::flow::{baker_certificate, chamanara_surface};
use flatcrit_core::surface::fixtures;
use flatcrit_core::surface::ExactSurface;
use flatcrit_core::veech::{find_certificate, verify_affine_automorphism};
use flatcrit_core::{Mat2, QuadNum};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Set FLATCRIT_BLESS=1 to regenerate.
fn check(name: &str, expected: &str) {
    let path = fixture(name);
    if std::env::var_os("FLATCRIT_BLESS").is_some() {
        std::fs::write(&path, expected).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, expected, "{name} is stale");
}

fn surfaces() -> Vec<(&'static str, ExactSurface)> {
    vec![
        ("torus.tsf", fixtures::torus()),
        ("octagon.tsf", fixtures::octagon()),
        ("golden.tsf", fixtures::golden_torus()),
        ("chamanara-4.tsf", chamanara_surface(4).unwrap()),
    ]
}

#[test]
fn surface_fixtures_match_builders_and_round_trip() {
    for (name, s) in surfaces() {
        let text = write_surface(&s);
        check(name, &text);
        let back = read_surface(&text).unwrap();
        assert_eq!(back, s, "{name}");
        assert_eq!(write_surface(&back), text);
    }
}

fn shear() -> Mat2 {
    let i = |v| QuadNum::from_i64(v, 0);
    Mat2::exact(i(1), i(1), i(0), i(1)).unwrap()
}

#[test]
fn certificate_fixtures_verify_and_round_trip() {
    let torus = fixtures::torus();
    let c = find_certificate(&torus, &shear()).unwrap().unwrap();
    let text = write_certificate(&c, &torus).unwrap();
    check("torus-shear.cert", &text);
    let back = parse_certificate(&text, &torus).unwrap();
    assert_eq!(back, c);
    assert!(verify_affine_automorphism(&torus, &back).unwrap().passed());

    let ch = chamanara_surface(4).unwrap();
    let b = baker_certificate();
    let text = write_certificate(&b, &ch).unwrap();
    check("chamanara-baker.cert", &text);
    let back = parse_certificate(&text, &ch).unwrap();
    assert_eq!(back, b);
    let rep = verify_affine_automorphism(&ch, &back).unwrap();
    assert!(rep.passed() && rep.truncated);
}

#[test]
fn comments_blank_lines_and_order_are_ignored() {
    let text = "# a torus\n\n[field]\nD = 0\nlabel = t\n\n[polygon P]\n0, 0\n1, 0  # corner\n1, 1\n0, 1\n[gluing]\nP.2 <-> P.0\nP.1 <-> P.3\n";
    assert_eq!(read_surface(text).unwrap().polygons(), fixtures::torus().polygons());
}

#[test]
fn exact_quadratic_coordinates_survive() {
    let s = fixtures::octagon();
    let text = write_surface(&s);
    assert!(text.contains("sqrt"), "{text}");
    assert_eq!(read_surface(&text).unwrap().area(), s.area());
}

#[test]
fn malformed_files_are_rejected_with_context() {
    for (text, needle) in [
        ("[polygon P]\n0, 0\n", "field"),
        ("[field]\nD = 4\n", "square"),
        ("[field]\nD = 0\n[polygon P]\n0, 0\n1\n", "x, y"),
        ("[field]\nD = 0\n[polygon P]\n0,0\n1,0\n1,1\n0,1\n[gluing]\nP.0 <-> Q.1\n", "Q"),
        ("[field]\nD = 0\n[polygon P]\n0,0\n1,0\n0,1\n[wat]\n", "wat"),
    ] {
        let e = parse_surface(text).map(|_| ()).unwrap_err().to_string();
        assert!(e.contains(needle), "{text:?}: {e}");
    }
}

#[test]
fn holonomy_mismatch_is_reported() {
    let text = std::fs::read_to_string(fixture("broken.tsf")).unwrap();
    let e = read_surface(&text).unwrap_err().to_string();
    assert!(e.contains("holonomy mismatch polygon P edge 2"), "{e}");
}
