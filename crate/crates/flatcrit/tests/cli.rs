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

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    code: i32,
    stderr: String,
    report: Value,
    raw: String,
}

fn flatcrit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_flatcrit")).args(args).output().unwrap();
    let raw = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        report: serde_json::from_str(&raw).unwrap_or(Value::Null),
        raw,
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn value(r: &Run, key: &str) -> Value {
    r.report["outputs"][key]["value"].clone()
}

#[test]
fn criterion_on_torus() {
    let torus = fixture("torus.tsf");
    let r = flatcrit(&["criterion", "--surface", p(&torus), "--T", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("integral = 0.49997730"), "{}", r.stderr);
    let i = value(&r, "integral").as_f64().unwrap();
    assert!((i - (1.0 - (-10f64).exp()) / 2.0).abs() < 1e-9);
    assert_eq!(r.report["outputs"]["integral"]["horizon"], 5.0);
}

#[test]
fn broken_surface_exits_two_naming_the_edge() {
    let r = flatcrit(&["validate", "--surface", p(&fixture("broken.tsf"))]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("holonomy mismatch polygon P edge 2"), "{}", r.stderr);
    assert_eq!(r.report["error"]["kind"], "bad-input");
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(flatcrit(&["area", "--surface", "/nonexistent.tsf"]).code, 2);
    assert_eq!(flatcrit(&["criterion", "--surface", p(&fixture("torus.tsf"))]).code, 2);
    assert_eq!(flatcrit(&["frobnicate"]).code, 2);
}

#[test]
fn random_commands_require_a_seed() {
    let torus = fixture("torus.tsf");
    let r = flatcrit(&["birkhoff", "--surface", p(&torus), "--direction", "1, 0.5", "--T", "10"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--seed"), "{}", r.stderr);
    assert_eq!(flatcrit(&["escape", "--level", "3", "--T", "10"]).code, 2);
    assert_eq!(flatcrit(&["equidist", "--surface", p(&torus), "--direction", "1, 0.5", "--T", "10"]).code, 2);
}

#[test]
fn failed_certificate_exits_three() {
    let r = flatcrit(&["veech-verify", "--surface", p(&fixture("octagon.tsf")), "--matrix", "1, 1; 0, 1"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(r.report["error"]["kind"], "precondition");
}

#[test]
fn shipped_certificates_verify() {
    let r = flatcrit(&["veech-verify", "--surface", p(&fixture("torus.tsf")), "--cert", p(&fixture("torus-shear.cert"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(value(&r, "passed"), true);
    let r = flatcrit(&[
        "veech-verify",
        "--surface",
        p(&fixture("chamanara-4.tsf")),
        "--cert",
        p(&fixture("chamanara-baker.cert")),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(value(&r, "truncated"), true);
}

#[test]
fn octagon_parabolic_from_cylinders() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.cert");
    let octagon = fixture("octagon.tsf");
    let r = flatcrit(&["veech-verify", "--surface", p(&octagon), "--parabolic", "1, 0", "--out", p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(value(&r, "matrix"), serde_json::json!(["1", "2 + 2*sqrt(2)", "0", "1"]));
    let again = flatcrit(&["veech-verify", "--surface", p(&octagon), "--cert", p(&out)]);
    assert_eq!(again.code, 0, "{}", again.stderr);
}

#[test]
fn systole_curve_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let r = flatcrit(&["systole-curve", "--surface", p(&fixture("octagon.tsf")), "--T", "3", "--out", p(&csv)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,delta_prime,d_prime,integral_to_t"));
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert_eq!(flatcrit(&["plot", "--csv", p(&csv), "--kind", "systole", "--out", p(&a)]).code, 0);
    assert_eq!(flatcrit(&["plot", "--csv", p(&csv), "--kind", "systole", "--out", p(&b)]).code, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn three_row_systole_plot_has_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    std::fs::write(&csv, "t,delta_prime,d_prime,integral_to_t\n0,1,0,0\n1,0.5,0.5,0.7\n2,0.25,1,0.8\n").unwrap();
    let svg = dir.path().join("s.svg");
    assert_eq!(flatcrit(&["plot", "--csv", p(&csv), "--kind", "systole", "--out", p(&svg)]).code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 1);
    let pts = text.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(pts.split_whitespace().count(), 3);
}

#[test]
fn empty_and_mismatched_csv_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("e.csv");
    std::fs::write(&empty, "").unwrap();
    let svg = dir.path().join("e.svg");
    let r = flatcrit(&["plot", "--csv", p(&empty), "--kind", "systole", "--out", p(&svg)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no rows"), "{}", r.stderr);
    let header_only = dir.path().join("h.csv");
    std::fs::write(&header_only, "t,delta_prime,d_prime,integral_to_t\n").unwrap();
    assert!(flatcrit(&["plot", "--csv", p(&header_only), "--kind", "systole", "--out", p(&svg)]).stderr.contains("no rows"));
    let wrong = dir.path().join("w.csv");
    std::fs::write(&wrong, "a,b\n1,2\n").unwrap();
    assert_eq!(flatcrit(&["plot", "--csv", p(&wrong), "--kind", "recurrence", "--out", p(&svg)]).code, 2);
}

#[test]
fn reports_match_schema_with_seventeen_digits() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let torus = fixture("torus.tsf");
    let runs = [
        flatcrit(&["criterion", "--surface", p(&torus), "--T", "5"]),
        flatcrit(&["validate", "--surface", p(&fixture("broken.tsf"))]),
        flatcrit(&["chamanara", "--level", "3"]),
        flatcrit(&["birkhoff", "--surface", p(&torus), "--direction", "1, 0.5", "--T", "10", "--starts", "3", "--seed", "1"]),
    ];
    for r in &runs {
        assert!(validator.is_valid(&r.report), "{}", r.raw);
    }
    let re = |s: &str| {
        let mut n = 0;
        for tok in s.split(|c: char| c == ',' || c == ':' || c == '[' || c == ']' || c == '}') {
            if tok.contains('e') && tok.chars().next().is_some_and(|c| c == '-' || c.is_ascii_digit()) {
                let mantissa = tok.split('e').next().unwrap().trim_start_matches('-');
                assert_eq!(mantissa.replace('.', "").len(), 17, "{tok}");
                n += 1;
            }
        }
        n
    };
    assert!(re(&runs[0].raw) >= 3);
}

#[test]
fn report_file_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let r = flatcrit(&["--report", p(&path), "area", "--surface", p(&fixture("octagon.tsf"))]);
    assert_eq!(r.code, 0);
    assert!(r.raw.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["outputs"]["area_exact"]["value"], "2 + 2*sqrt(2)");
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let golden = fixture("golden.tsf");
    let base = ["birkhoff", "--surface", p(&golden), "--direction", "1, 0.3", "--T", "50", "--starts", "16", "--seed", "5"];
    let one = flatcrit(&[&["--threads", "1"], &base[..]].concat());
    let four = flatcrit(&[&["--threads", "4"], &base[..]].concat());
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.report["outputs"], four.report["outputs"]);
    let esc = |t: &str| flatcrit(&["--threads", t, "escape", "--level", "3", "--T", "20", "--samples", "500", "--seed", "2"]).raw;
    assert_eq!(esc("1"), esc("3"));
}

#[test]
fn same_seed_same_digest_and_outputs() {
    let torus = fixture("torus.tsf");
    let args = ["equidist", "--surface", p(&torus), "--direction", "1, 0.61803398874989", "--T", "200", "--seed", "11"];
    let (a, b) = (flatcrit(&args), flatcrit(&args));
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.raw, b.raw);
}

#[test]
fn flow_dumps_segments() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let r = flatcrit(&[
        "flow",
        "--surface",
        p(&fixture("octagon.tsf")),
        "--start",
        "P: 0.3, 0.2",
        "--direction",
        "1, 0.7",
        "--length",
        "10",
        "--out",
        p(&csv),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count() as u64, value(&r, "segments").as_u64().unwrap() + 1);
}

#[test]
fn profile_command_on_constant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let mut text = String::from("t,eps,C,sumD,delta\n");
    for i in 0..=100 {
        text.push_str(&format!("{},0.1,1,1,0.1\n", i as f64 * 0.1));
    }
    std::fs::write(&csv, text).unwrap();
    let r = flatcrit(&["thm12", "--profile", p(&csv)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(value(&r, "integral").as_f64().unwrap() > 0.0);
}
