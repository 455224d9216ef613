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

//! The `flatcrit` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use flatcrit_core::flow::{self, Observable, Status, Tracer};
use flatcrit_core::num::Scalar;
use flatcrit_core::saddle::enumerate_saddle_connections;
use flatcrit_core::surface::{cylinder_decomposition, ConeAngle, ExactSurface};
use flatcrit_core::teich::{self, ThicknessProfile};
use flatcrit_core::veech::{self, AutomorphismCertificate};
use flatcrit_core::{Mat2, QuadNum, Vec2};

use crate::cert_file::{parse_certificate, write_certificate};
use crate::csvio;
use crate::error::{bad, Error, Result};
use crate::plot::{plot, PlotKind};
use crate::report::{floats, to_json, Report};
use crate::surface_file::{parse_surface, write_surface};

#[derive(Parser, Debug)]
#[command(name = "flatcrit", version, about = "Ergodicity criteria and flow diagnostics for translation surfaces")]
pub struct Cli {
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArg {
    /// Surface file (.tsf).
    #[arg(long)]
    pub surface: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a surface file and report its cone points.
    Validate(SurfaceArg),
    /// Exact area.
    Area(SurfaceArg),
    /// Saddle connections up to a length.
    Saddle {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long = "L", alias = "length")]
        length: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized systole along the Teichmüller geodesic, as CSV.
    SystoleCurve {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integral of the squared normalized systole over [0, T].
    Criterion {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long = "T")]
        horizon: f64,
    },
    /// Cheung–Eskin constant and the logarithmic-law statistic.
    CheungEskin {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
    },
    /// Profile integral from a thickness profile CSV (t,eps,C,sumD,delta).
    Thm12 {
        #[arg(long)]
        profile: PathBuf,
        /// Also fit the diameter bound D ≤ K/δ and count samples above this K.
        #[arg(long)]
        k0: Option<f64>,
    },
    /// Verify, find or derive an affine automorphism certificate.
    VeechVerify {
        #[command(flatten)]
        s: SurfaceArg,
        /// Certificate file to verify.
        #[arg(long, conflicts_with_all = ["matrix", "parabolic"])]
        cert: Option<PathBuf>,
        /// Search for a certificate with this derivative, "a, b; c, d".
        #[arg(long, conflicts_with = "parabolic")]
        matrix: Option<String>,
        /// Derive the parabolic element from the cylinders in direction "x, y".
        #[arg(long)]
        parabolic: Option<String>,
        /// Waist bound for the cylinder search.
        #[arg(long, default_value_t = 20.0)]
        bound: f64,
        /// Write the found certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance from g_t to a word ball in the given generators.
    Recurrence {
        /// Generator "a, b; c, d"; repeat for more.
        #[arg(long = "generator")]
        generators: Vec<String>,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 4)]
        word_bound: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace one trajectory.
    Flow {
        #[command(flatten)]
        s: SurfaceArg,
        /// Start "polygon: x, y".
        #[arg(long)]
        start: String,
        #[arg(long)]
        direction: String,
        #[arg(long)]
        length: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Birkhoff averages from seeded area-uniform starts.
    Birkhoff {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        direction: String,
        /// const:c, strip-x:lo:hi, strip-y:lo:hi, cos-x:k, sin-x:k, cos-y:k or sin-y:k.
        #[arg(long, default_value = "strip-x:0:0.5")]
        observable: String,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Occupancy histogram of one seeded orbit against area.
    Equidist {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        direction: String,
        #[arg(long = "T")]
        horizon: f64,
        /// Bins per polygon, "NXxNY".
        #[arg(long, default_value = "10x10")]
        bins: String,
        #[arg(long)]
        seed: u64,
        /// Histogram JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Histogram CSV output, for plotting.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a Chamanara truncation and check its baker automorphism.
    Chamanara {
        #[arg(long)]
        level: u32,
        /// Waist bound for the horizontal cylinder search.
        #[arg(long, default_value_t = 4.0)]
        waist: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fraction of seeded area-uniform starts that escape through marked boundary.
    Escape {
        #[arg(long, conflicts_with = "level", required_unless_present = "level")]
        surface: Option<PathBuf>,
        /// Use the Chamanara truncation of this level.
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value = "1, 1")]
        direction: String,
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Render a CSV output as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        /// systole, recurrence or histogram.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Area(_) => "area",
            Command::Saddle { .. } => "saddle",
            Command::SystoleCurve { .. } => "systole-curve",
            Command::Criterion { .. } => "criterion",
            Command::CheungEskin { .. } => "cheung-eskin",
            Command::Thm12 { .. } => "thm12",
            Command::VeechVerify { .. } => "veech-verify",
            Command::Recurrence { .. } => "recurrence",
            Command::Flow { .. } => "flow",
            Command::Birkhoff { .. } => "birkhoff",
            Command::Equidist { .. } => "equidist",
            Command::Chamanara { .. } => "chamanara",
            Command::Escape { .. } => "escape",
            Command::Plot { .. } => "plot",
        }
    }
}

fn read(path: &Path, report: &mut Report) -> Result<String> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    report.input(text.as_bytes());
    Ok(text)
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Internal(format!("{}: {e}", path.display())))
}

fn load(path: &Path, report: &mut Report) -> Result<ExactSurface> {
    let s = parse_surface(&read(path, report)?)?;
    let v = s.validate();
    if !v.is_empty() {
        return Err(bad(v.iter().map(|v| v.message.clone()).collect::<Vec<_>>().join("; ")));
    }
    Ok(s)
}

fn number(s: &str, field: u64) -> Result<QuadNum> {
    if let Ok(q) = QuadNum::parse_in_field(s, field) {
        return Ok(q);
    }
    let f: f64 = s.trim().parse().map_err(|_| bad(format!("cannot parse number {s:?} in field sqrt({field})")))?;
    if !f.is_finite() {
        return Err(bad(format!("number {s:?} is not finite")));
    }
    Ok(QuadNum::zero(field).from_f64_like(f))
}

fn vector(s: &str, field: u64) -> Result<Vec2<QuadNum>> {
    let (x, y) = s.split_once(',').ok_or_else(|| bad(format!("expected \"x, y\", got {s:?}")))?;
    Ok(Vec2::new(number(x, field)?, number(y, field)?))
}

/// "a, b; c, d": exact when every entry parses exactly in one field.
fn matrix(s: &str, field: Option<u64>) -> Result<Mat2> {
    let entries: Vec<&str> = s.split([',', ';']).collect();
    if entries.len() != 4 {
        return Err(bad(format!("expected \"a, b; c, d\", got {s:?}")));
    }
    let exact: std::result::Result<Vec<QuadNum>, _> = match field {
        Some(f) => entries.iter().map(|e| QuadNum::parse_in_field(e, f)).collect(),
        None => entries.iter().map(|e| e.parse::<QuadNum>()).collect(),
    };
    if let Ok(mut q) = exact {
        let f = field.unwrap_or_else(|| q.iter().map(|x| x.field()).max().unwrap_or(0));
        if q.iter().all(|x| x.field() == f || x.field() == 0) {
            q = q.into_iter().map(|x| if x.field() == f { x } else { QuadNum::new(x.a().clone(), x.b().clone(), f).expect("rational lifts") }).collect();
            let [a, b, c, d]: [QuadNum; 4] = q.try_into().expect("four entries");
            return Ok(Mat2::exact(a, b, c, d)?);
        }
    }
    let f: Vec<f64> = entries
        .iter()
        .map(|e| e.trim().parse::<f64>().map_err(|_| bad(format!("cannot parse matrix entry {e:?}"))))
        .collect::<Result<_>>()?;
    Ok(Mat2::approx(f[0], f[1], f[2], f[3]))
}

fn observable(s: &str) -> Result<Observable> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |i: usize| -> Result<f64> {
        parts.get(i).ok_or_else(|| bad(format!("observable {s:?} is missing a parameter")))?.parse().map_err(|_| bad(format!("bad observable parameter in {s:?}")))
    };
    let k = |i: usize| -> Result<u32> {
        parts.get(i).ok_or_else(|| bad(format!("observable {s:?} is missing a frequency")))?.parse().map_err(|_| bad(format!("bad frequency in {s:?}")))
    };
    Ok(match parts[0] {
        "const" => Observable::Constant(num(1)?),
        "strip-x" => Observable::StripX { lo: num(1)?, hi: num(2)? },
        "strip-y" => Observable::StripY { lo: num(1)?, hi: num(2)? },
        "cos-x" => Observable::CosX(k(1)?),
        "sin-x" => Observable::SinX(k(1)?),
        "cos-y" => Observable::CosY(k(1)?),
        "sin-y" => Observable::SinY(k(1)?),
        o => return Err(bad(format!("unknown observable {o:?}"))),
    })
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("--{name} must be positive and finite")))
    }
}

fn status_str(s: Status) -> &'static str {
    s.as_str()
}

fn run_command(cmd: &Command, r: &mut Report) -> Result<()> {
    match cmd {
        Command::Validate(a) => {
            let text = read(&a.surface, r)?;
            let s = parse_surface(&text)?;
            let v = s.validate();
            r.put("polygons", s.polygons().len(), "count");
            r.put("violations", v.iter().map(|v| v.message.clone()).collect::<Vec<_>>(), "messages");
            r.put("valid", v.is_empty(), "flag");
            if !v.is_empty() {
                return Err(bad(v.iter().map(|v| v.message.clone()).collect::<Vec<_>>().join("; ")));
            }
            let cones: Vec<Value> = s
                .cone_points()
                .iter()
                .map(|c| match c.angle {
                    ConeAngle::Multiple(k) => json!(k),
                    ConeAngle::Boundary => json!("boundary"),
                })
                .collect();
            r.put("cone_angles", cones, "multiples of 2pi");
            r.put("genus", s.genus(), "count");
            eprintln!("valid: {} polygon(s), {} vertex class(es), genus {:?}", s.polygons().len(), s.cone_points().len(), s.genus());
        }
        Command::Area(a) => {
            let s = load(&a.surface, r)?;
            let area = s.area();
            r.put("area_exact", area.to_string(), "area");
            r.put("area", area.to_f64()?, "area");
            eprintln!("area = {area}");
        }
        Command::Saddle { s, length, out } => {
            let surf = load(&s.surface, r)?;
            let l = positive("L", *length)?;
            let e = enumerate_saddle_connections(&surf, l)?;
            r.put("count", e.connections.len(), "oriented connections").horizon(l);
            r.put("truncated", e.truncated, "flag");
            if let Some(c) = e.connections.first() {
                r.put("shortest", c.length(), "length");
            }
            if let Some(p) = out {
                let mut buf = Vec::new();
                csvio::write_connections(&mut buf, &e.connections)?;
                write(p, &buf)?;
            }
            eprintln!("{} saddle connection(s) of length <= {l}", e.connections.len());
        }
        Command::SystoleCurve { s, horizon, samples, out } => {
            let surf = load(&s.surface, r)?;
            let t = positive("T", *horizon)?;
            if *samples == 0 {
                return Err(bad("--samples must be positive"));
            }
            let env = teich::systole_envelope(&surf, t)?;
            let mut buf = Vec::new();
            csvio::write_systole(&mut buf, &env, *samples)?;
            write(out, &buf)?;
            r.put("min_delta_prime", env.min_delta(), "length").horizon(t);
            r.put("integral_to_t", env.integral_to(t), "time").horizon(t);
            r.put("certified", env.certified, "flag");
            r.put("rows", samples + 1, "count");
            eprintln!("wrote {} rows to {}", samples + 1, out.display());
        }
        Command::Criterion { s, horizon } => {
            let surf = load(&s.surface, r)?;
            let t = positive("T", *horizon)?;
            let env = teich::systole_envelope(&surf, t)?;
            let i = teich::criterion_integral(&env);
            r.put("integral", i, "time").horizon(t).tolerance(1e-9);
            r.put("min_delta_prime", env.min_delta(), "length").horizon(t);
            r.put("certified", env.certified, "flag");
            r.put("pieces", env.pieces.len(), "count");
            if !env.certified {
                r.warn("envelope changed under the doubling check");
            }
            eprintln!("integral = {i}");
        }
        Command::CheungEskin { s, horizon, t0 } => {
            let surf = load(&s.surface, r)?;
            let t = positive("T", *horizon)?;
            let env = teich::systole_envelope(&surf, t)?;
            let ce = teich::cheung_eskin_c(&env, *t0)?;
            r.put("C", ce.c, "log length").horizon(t);
            r.put("attained_at", ce.at, "time").horizon(t);
            r.put("stable", ce.satisfied, "flag");
            r.put("unbounded_growth", !ce.satisfied, "flag");
            let lt0 = t0.max(2.0);
            if t > lt0 {
                r.put("log_law", teich::log_law_stat(&env, lt0)?, "ratio").horizon(t);
            }
            eprintln!("C = {} at t = {} ({})", ce.c, ce.at, if ce.satisfied { "stable" } else { "grows to the horizon" });
        }
        Command::Thm12 { profile, k0 } => {
            let text = read(profile, r)?;
            let samples = csvio::read_profile(text.as_bytes())?;
            let p = ThicknessProfile::new(samples)?;
            let res = teich::thm12_criterion(&p);
            let horizon = p.samples().last().map(|s| s.t).unwrap_or(0.0);
            r.put("integral", res.integral, "time").horizon(horizon);
            r.put("running", floats(&res.running), "time");
            r.put("verdict", res.verdict.as_str(), "label");
            if let Some(k0) = k0 {
                let pairs: Vec<(f64, f64)> = p.samples().iter().map(|s| (s.delta, s.sum_diameters)).collect();
                let ms = teich::masur_smillie_check(&pairs, *k0)?;
                r.put("masur_smillie_k", ms.k, "length^2");
                r.put("masur_smillie_used", ms.used, "count");
                r.put("masur_smillie_violations", ms.violations, "count");
            }
            eprintln!("integral = {} ({})", res.integral, res.verdict.as_str());
        }
        Command::VeechVerify { s, cert, matrix: m, parabolic, bound, out } => {
            let surf = load(&s.surface, r)?;
            let certificate: AutomorphismCertificate = if let Some(path) = cert {
                parse_certificate(&read(path, r)?, &surf)?
            } else {
                let mat = match (m, parabolic) {
                    (Some(m), _) => matrix(m, Some(surf.field()))?,
                    (None, Some(d)) => {
                        let dir = vector(d, surf.field())?;
                        let dec = cylinder_decomposition(&surf, &dir, *bound)?;
                        r.put("cylinders", dec.cylinders.len(), "count").horizon(*bound);
                        veech::parabolic_from_cylinders(&dec)?
                    }
                    (None, None) => return Err(bad("give one of --cert, --matrix or --parabolic")),
                };
                match veech::find_certificate(&surf, &mat)? {
                    Some(c) => c,
                    None => {
                        r.put("found", false, "flag");
                        return Err(Error::Precondition("no certificate found for the matrix".into()));
                    }
                }
            };
            if let Mat2::Exact(e) = &certificate.matrix {
                r.put("matrix", e.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "entries");
            }
            r.put("pieces", certificate.pieces.len(), "count");
            let rep = veech::verify_affine_automorphism(&surf, &certificate)?;
            r.put("passed", rep.passed(), "flag");
            r.put("truncated", rep.truncated, "flag");
            r.put("failures", rep.failures.clone(), "messages");
            if let Some(p) = out {
                write(p, write_certificate(&certificate, &surf)?.as_bytes())?;
            }
            if !rep.passed() {
                return Err(Error::Precondition(format!("certificate rejected: {}", rep.failures.join("; "))));
            }
            eprintln!("certificate verified{}", if rep.truncated { " (truncated at marked boundary)" } else { "" });
        }
        Command::Recurrence { generators, horizon, step, word_bound, tol, out } => {
            let gens: Vec<Mat2> = generators.iter().map(|g| matrix(g, None)).collect::<Result<_>>()?;
            let t = positive("T", *horizon)?;
            let dt = positive("step", *step)?;
            let n = (t / dt).round() as usize;
            let times: Vec<f64> = (0..=n).map(|i| (i as f64 * dt).min(t)).collect();
            let prof = veech::recurrence_profile(&gens, &times, *word_bound)?;
            let eps: Vec<f64> = prof.iter().map(|p| p.epsilon).collect();
            r.put("max_epsilon", eps.iter().copied().fold(0.0, f64::max), "hyperbolic distance").horizon(t);
            r.put("word_bound", *word_bound, "letters");
            let periodic = veech::is_periodic(&gens, *word_bound, *tol)?;
            r.put("period", periodic, "time").tolerance(*tol);
            if let Some(p) = out {
                let mut buf = Vec::new();
                csvio::write_recurrence(&mut buf, &prof)?;
                write(p, &buf)?;
            }
            eprintln!("max epsilon {} over [0, {t}]; period {:?}", eps.iter().copied().fold(0.0, f64::max), periodic);
        }
        Command::Flow { s, start, direction, length, out } => {
            let surf = load(&s.surface, r)?;
            let (name, point) = start.split_once(':').ok_or_else(|| bad("--start must be \"polygon: x, y\""))?;
            let poly = surf
                .polygons()
                .iter()
                .position(|p| p.name == name.trim())
                .ok_or_else(|| bad(format!("unknown polygon {:?}", name.trim())))?;
            let p = vector(point, surf.field())?.to_f64();
            let d = vector(direction, surf.field())?;
            let tr = flow::trace(&surf, poly, &p, &d, *length)?;
            let (ep, end) = tr.end();
            r.put("status", status_str(tr.status), "label");
            r.put("length", tr.length, "length").horizon(*length);
            r.put("segments", tr.segments.len(), "count");
            r.put("end_polygon", surf.polygons()[ep].name.clone(), "name");
            r.put("end", floats(&[end.x, end.y]), "coordinates");
            if let Some(o) = out {
                let mut buf = Vec::new();
                csvio::write_trajectory(&mut buf, &tr)?;
                write(o, &buf)?;
            }
            eprintln!("{} after {} ({} segments)", status_str(tr.status), tr.length, tr.segments.len());
        }
        Command::Birkhoff { s, direction, observable: obs, horizon, starts, seed } => {
            let surf = load(&s.surface, r)?;
            let d = vector(direction, surf.field())?.to_f64();
            let f = observable(obs)?;
            let t = positive("T", *horizon)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts = flow::area_uniform_points(&surf, *starts, &mut rng)?;
            let tracer = Tracer::new(&surf);
            let res: Vec<flow::BirkhoffStart> =
                pts.par_iter().map(|(p, x)| flow::time_average(&tracer, *p, x, &d, &f, t)).collect::<flatcrit_core::Result<_>>()?;
            let avgs: Vec<Option<f64>> = res.iter().map(|b| b.average).collect();
            r.put("averages", avgs.iter().map(|a| a.map(Value::from).unwrap_or(Value::Null)).collect::<Vec<_>>(), "observable").horizon(t);
            r.put("status", res.iter().map(|b| status_str(b.status)).collect::<Vec<_>>(), "labels");
            r.put("dispersion", flow::dispersion(&res), "observable").horizon(t);
            let flagged = res.iter().filter(|b| b.status != Status::Completed).count();
            r.put("flagged", flagged, "count");
            if flagged > 0 {
                r.warn(format!("{flagged} start(s) stopped early and were excluded"));
            }
            eprintln!("dispersion {} over {} start(s)", flow::dispersion(&res), res.len());
        }
        Command::Equidist { s, direction, horizon, bins, seed, out, csv } => {
            let surf = load(&s.surface, r)?;
            let d = vector(direction, surf.field())?;
            let (nx, ny) = bins
                .split_once('x')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| bad("--bins must look like 10x10"))?;
            let t = positive("T", *horizon)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (poly, start) = flow::area_uniform_points(&surf, 1, &mut rng)?.remove(0);
            let h = flow::equidistribution_test(&surf, &d, t, (nx, ny), (poly, &start))?;
            r.put("discrepancy", h.discrepancy, "fraction").horizon(t);
            r.put("status", status_str(h.status), "label");
            if h.status != Status::Completed {
                r.warn(format!("orbit stopped early: {}", status_str(h.status)));
            }
            if let Some(p) = out {
                let j = json!({ "bins": [nx, ny], "occupancy": floats(&h.occupancy), "area_fraction": floats(&h.area_fraction), "discrepancy": h.discrepancy });
                write(p, to_json(&j).as_bytes())?;
            }
            if let Some(p) = csv {
                let mut buf = Vec::new();
                csvio::write_histogram(&mut buf, &h)?;
                write(p, &buf)?;
            }
            eprintln!("discrepancy {}", h.discrepancy);
        }
        Command::Chamanara { level, waist, out } => chamanara(*level, *waist, out.as_deref(), r)?,
        Command::Escape { surface, level, direction, horizon, samples, seed } => {
            let surf = match (surface, level) {
                (Some(p), _) => load(p, r)?,
                (None, Some(n)) => flow::chamanara_surface(*n)?,
                _ => return Err(bad("give --surface or --level")),
            };
            if *samples == 0 {
                return Err(bad("--samples must be positive"));
            }
            let d = vector(direction, surf.field())?.to_f64();
            let frac = escape_fraction(&surf, &d, *horizon, *samples, *seed)?;
            r.put("fraction", frac, "fraction of area").horizon(*horizon);
            r.put("samples", *samples, "count");
            eprintln!("escaped fraction {frac}");
        }
        Command::Plot { csv, kind, out } => {
            let kind: PlotKind = kind.parse()?;
            let text = read(csv, r)?;
            let svg = plot(text.as_bytes(), kind)?;
            write(out, svg.as_bytes())?;
            r.put("bytes", svg.len(), "bytes");
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

/// Parallel equivalent of `flow::escape_mass_estimate` with the same starts.
pub fn escape_fraction(s: &ExactSurface, d: &Vec2<f64>, t: f64, samples: usize, seed: u64) -> Result<f64> {
    if !s.has_boundary() || !(t > 0.0) {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = flow::area_uniform_points(s, samples, &mut rng)?;
    let tracer = Tracer::new(s);
    let escaped = pts
        .par_iter()
        .filter(|(p, x)| matches!(tracer.trace(*p, x, d, t), Ok(tr) if tr.status == Status::Escaped))
        .count();
    Ok(escaped as f64 / samples as f64)
}

/// Certificate, periodicity and the horizontal cylinder search must agree.
pub fn chamanara(level: u32, waist: f64, out: Option<&Path>, r: &mut Report) -> Result<()> {
    let s = flow::chamanara_surface(level)?;
    if let Some(p) = out {
        write(p, write_surface(&s).as_bytes())?;
    }
    r.put("area", s.area().to_string(), "area");
    let rep = veech::verify_affine_automorphism(&s, &flow::baker_certificate())?;
    r.put("baker_passed", rep.passed(), "flag");
    r.put("baker_truncated", rep.truncated, "flag");
    let half = QuadNum::rational(flatcrit_core::Rational::new(1, 2)?, 0);
    let inv = Mat2::exact(half, QuadNum::zero(0), QuadNum::zero(0), QuadNum::from_i64(2, 0))?;
    let period = veech::is_periodic(&[inv], 2, 1e-12)?;
    r.put("period", period, "time").tolerance(1e-12);
    let h = cylinder_decomposition(&s, &Vec2::new(QuadNum::one(0), QuadNum::zero(0)), waist)?;
    r.put("horizontal_cylinders", h.cylinders.len(), "count").horizon(waist);
    let baker = flow::baker_certificate().matrix;
    let consistent = rep.passed() && period.is_some() && veech::cylinder_obstruction(&baker, &h).is_ok();
    r.put("consistent", consistent, "flag");
    eprintln!(
        "level {level}: baker certificate {}, period {:?}, {} horizontal cylinder(s)",
        if rep.passed() { "verified" } else { "rejected" },
        period,
        h.cylinders.len()
    );
    if !consistent {
        return Err(Error::Precondition("certificate, periodicity and cylinder search disagree".into()));
    }
    Ok(())
}

/// Arguments that can change results: `--threads` and `--report` are dropped.
fn digest_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if std::mem::take(&mut skip) {
            continue;
        }
        match a.as_str() {
            "--threads" | "--report" => skip = true,
            _ if a.starts_with("--threads=") || a.starts_with("--report=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

/// Runs the CLI on `args` (including the program name), writing the JSON
/// report, and returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut report = Report::new(cli.command.name(), &digest_args(&args[1..]));
    let result = match cli.threads {
        Some(0) => Err(bad("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_command(&cli.command, &mut report)),
            Err(e) => Err(Error::Internal(e.to_string())),
        },
        None => run_command(&cli.command, &mut report),
    };
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    let code = result.as_ref().err().map_or(0, Error::exit_code);
    let json = to_json(&report.to_value(&result)) + "\n";
    let written = match &cli.report {
        Some(p) => fs::write(p, json.as_bytes()).map_err(|e| e.to_string()),
        None => std::io::stdout().write_all(json.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            1
        }
    }
}
