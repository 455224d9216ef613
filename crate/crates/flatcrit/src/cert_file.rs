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

//! The `.cert` format for affine automorphism certificates.
//!
//! ```text
//! [field]
//! D = 0
//! [matrix]
//! 1, 1
//! 0, 1
//! [piece]
//! source = P
//! target = P
//! translation = -1, 0
//! 1, 0
//! 2, 1
//! 1, 1
//! ```
//!
//! `source` names a polygon of `M·S` (polygon names are kept by the action),
//! piece vertices are in its coordinates, and `translation` carries the
//! piece into the `target` polygon of `S`.

use std::fmt::Write;

use flatcrit_core::surface::ExactSurface;
use flatcrit_core::veech::{AutomorphismCertificate, Piece};
use flatcrit_core::Mat2;

use crate::error::{bad, Result};
use crate::surface_file::{key_value, parse_field, parse_point, write_point, Lines};

pub fn parse_certificate(text: &str, s: &ExactSurface) -> Result<AutomorphismCertificate> {
    let sections = Lines::new(text).sections()?;
    let first = sections.first().ok_or_else(|| bad("empty certificate file"))?;
    if first.header != "field" {
        return Err(bad(format!("line {}: the first section must be [field]", first.line)));
    }
    let (field, _) = parse_field(first)?;
    if field != s.field() {
        return Err(bad(format!("certificate field sqrt({field}) differs from surface field sqrt({})", s.field())));
    }
    let find = |n: usize, name: &str| {
        s.polygons().iter().position(|p| p.name == name).ok_or_else(|| bad(format!("line {n}: unknown polygon {name:?}")))
    };
    let mut matrix = None;
    let mut pieces = Vec::new();
    for sec in &sections[1..] {
        match sec.header {
            "matrix" => {
                if sec.body.len() != 2 {
                    return Err(bad(format!("line {}: [matrix] needs two rows", sec.line)));
                }
                let r0 = parse_point(sec.body[0].0, sec.body[0].1, field)?;
                let r1 = parse_point(sec.body[1].0, sec.body[1].1, field)?;
                matrix = Some(Mat2::exact(r0.x, r0.y, r1.x, r1.y)?);
            }
            "piece" => {
                let (mut source, mut target, mut translation) = (None, None, None);
                let mut vertices = Vec::new();
                for &(n, l) in &sec.body {
                    if l.contains('=') {
                        match key_value(n, l)? {
                            ("source", v) => source = Some(find(n, v)?),
                            ("target", v) => target = Some(find(n, v)?),
                            ("translation", v) => translation = Some(parse_point(n, v, field)?),
                            (k, _) => return Err(bad(format!("line {n}: unknown key {k:?} in [piece]"))),
                        }
                    } else {
                        vertices.push(parse_point(n, l, field)?);
                    }
                }
                let missing = |what: &str| bad(format!("line {}: piece without {what}", sec.line));
                pieces.push(Piece {
                    source: source.ok_or_else(|| missing("source"))?,
                    target: target.ok_or_else(|| missing("target"))?,
                    translation: translation.ok_or_else(|| missing("translation"))?,
                    vertices,
                });
            }
            h => return Err(bad(format!("line {}: unknown section [{h}]", sec.line))),
        }
    }
    Ok(AutomorphismCertificate { matrix: matrix.ok_or_else(|| bad("certificate without [matrix]"))?, pieces })
}

pub fn write_certificate(c: &AutomorphismCertificate, s: &ExactSurface) -> Result<String> {
    let Mat2::Exact([a, b, cc, d]) = &c.matrix else {
        return Err(bad("certificates need an exact matrix"));
    };
    let mut out = String::new();
    writeln!(out, "[field]\nD = {}\n[matrix]\n{a}, {b}\n{cc}, {d}", s.field()).expect("string write");
    for p in &c.pieces {
        let name = |i: usize| s.polygons().get(i).map(|p| p.name.clone()).ok_or_else(|| bad("piece names a missing polygon"));
        writeln!(out, "[piece]\nsource = {}\ntarget = {}", name(p.source)?, name(p.target)?).expect("string write");
        out.push_str("translation = ");
        write_point(&mut out, &p.translation);
        for v in &p.vertices {
            write_point(&mut out, v);
        }
    }
    Ok(out)
}
