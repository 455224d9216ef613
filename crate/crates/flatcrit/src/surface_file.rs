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

//! The `.tsf` surface format.
//!
//! ```text
//! # comment
//! [field]
//! D = 2
//! label = octagon
//! [polygon P]
//! 0, 0
//! 1, 0
//! ...
//! [gluing]
//! P.0 <-> P.4
//! [boundary]
//! Q.3
//! ```
//!
//! Coordinates use the exact syntax `p/q + r/s*sqrt(D)`. A gluing line may
//! end in `reversed` to record an orientation-reversing identification.

use std::fmt::Write;

use flatcrit_core::surface::{ExactSurface, Gluing, Polygon};
use flatcrit_core::{EdgeId, QuadNum, TranslationSurface, Vec2};

use crate::error::{bad, Result};

pub(crate) struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
}

/// A section header and its body lines.
pub(crate) struct Section<'a> {
    pub line: usize,
    pub header: &'a str,
    pub body: Vec<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines }
    }

    pub fn sections(&self) -> Result<Vec<Section<'a>>> {
        let mut out: Vec<Section<'a>> = Vec::new();
        for &(n, l) in &self.lines {
            if let Some(h) = l.strip_prefix('[') {
                let h = h.strip_suffix(']').ok_or_else(|| bad(format!("line {n}: unterminated section header")))?;
                out.push(Section { line: n, header: h.trim(), body: Vec::new() });
            } else {
                out.last_mut().ok_or_else(|| bad(format!("line {n}: content before the first section")))?.body.push((n, l));
            }
        }
        Ok(out)
    }
}

pub(crate) fn key_value(n: usize, l: &str) -> Result<(&str, &str)> {
    let (k, v) = l.split_once('=').ok_or_else(|| bad(format!("line {n}: expected key = value")))?;
    Ok((k.trim(), v.trim()))
}

pub(crate) fn parse_point(n: usize, l: &str, field: u64) -> Result<Vec2<QuadNum>> {
    let (x, y) = l.split_once(',').ok_or_else(|| bad(format!("line {n}: expected \"x, y\"")))?;
    let p = |s: &str| QuadNum::parse_in_field(s, field).map_err(|e| bad(format!("line {n}: {e}")));
    Ok(Vec2::new(p(x)?, p(y)?))
}

pub(crate) fn write_point(out: &mut String, v: &Vec2<QuadNum>) {
    writeln!(out, "{}, {}", v.x, v.y).expect("string write");
}

pub(crate) fn parse_field(s: &Section<'_>) -> Result<(u64, Option<String>)> {
    let mut field = None;
    let mut label = None;
    for &(n, l) in &s.body {
        match key_value(n, l)? {
            ("D", v) => field = Some(v.parse::<u64>().map_err(|_| bad(format!("line {n}: D must be a nonnegative integer")))?),
            ("label", v) => label = Some(v.to_string()),
            (k, _) => return Err(bad(format!("line {n}: unknown key {k:?} in [field]"))),
        }
    }
    let d = field.ok_or_else(|| bad(format!("line {}: [field] needs D", s.line)))?;
    flatcrit_core::num::check_field(d).map_err(|e| bad(format!("line {}: {e}", s.line)))?;
    Ok((d, label))
}

fn edge_ref(n: usize, s: &str, names: &[String]) -> Result<EdgeId> {
    let (p, e) = s.trim().rsplit_once('.').ok_or_else(|| bad(format!("line {n}: expected polygon.edge, got {s:?}")))?;
    let polygon = names.iter().position(|x| x == p.trim()).ok_or_else(|| bad(format!("line {n}: unknown polygon {p:?}")))?;
    let edge = e.trim().parse().map_err(|_| bad(format!("line {n}: bad edge index {e:?}")))?;
    Ok(EdgeId::new(polygon, edge))
}

/// Parses a surface without validating it.
pub fn parse_surface(text: &str) -> Result<ExactSurface> {
    let sections = Lines::new(text).sections()?;
    let first = sections.first().ok_or_else(|| bad("empty surface file"))?;
    if first.header != "field" {
        return Err(bad(format!("line {}: the first section must be [field]", first.line)));
    }
    let (field, label) = parse_field(first)?;
    let mut polygons = Vec::new();
    for s in &sections[1..] {
        if let Some(name) = s.header.strip_prefix("polygon") {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('.') {
                return Err(bad(format!("line {}: polygon names must be nonempty words without '.'", s.line)));
            }
            if polygons.iter().any(|p: &Polygon<QuadNum>| p.name == name) {
                return Err(bad(format!("line {}: duplicate polygon {name}", s.line)));
            }
            let vertices = s.body.iter().map(|&(n, l)| parse_point(n, l, field)).collect::<Result<Vec<_>>>()?;
            if vertices.len() < 3 {
                return Err(bad(format!("line {}: polygon {name} needs at least 3 vertices", s.line)));
            }
            polygons.push(Polygon { name: name.to_string(), vertices });
        }
    }
    if polygons.is_empty() {
        return Err(bad("no polygons"));
    }
    let names: Vec<String> = polygons.iter().map(|p| p.name.clone()).collect();
    let mut gluings = Vec::new();
    let mut boundary = Vec::new();
    for s in &sections[1..] {
        match s.header {
            "gluing" => {
                for &(n, l) in &s.body {
                    let (l, reversed) = match l.strip_suffix("reversed") {
                        Some(rest) => (rest.trim(), true),
                        None => (l, false),
                    };
                    let (a, b) = l.split_once("<->").ok_or_else(|| bad(format!("line {n}: expected \"P.i <-> Q.j\"")))?;
                    gluings.push(Gluing { a: edge_ref(n, a, &names)?, b: edge_ref(n, b, &names)?, reversed });
                }
            }
            "boundary" => {
                for &(n, l) in &s.body {
                    boundary.push(edge_ref(n, l, &names)?);
                }
            }
            h if h.starts_with("polygon") => {}
            h => return Err(bad(format!("line {}: unknown section [{h}]", s.line))),
        }
    }
    for e in gluings.iter().flat_map(|g| [g.a, g.b]).chain(boundary.iter().copied()) {
        if e.edge >= polygons[e.polygon].vertices.len() {
            return Err(bad(format!("edge {}.{} does not exist", names[e.polygon], e.edge)));
        }
    }
    Ok(TranslationSurface::new_unchecked(field, label.unwrap_or_default(), polygons, gluings, boundary))
}

/// Parses and validates; violations are reported together.
pub fn read_surface(text: &str) -> Result<ExactSurface> {
    let s = parse_surface(text)?;
    let v = s.validate();
    if v.is_empty() {
        Ok(s)
    } else {
        Err(bad(v.iter().map(|v| v.message.clone()).collect::<Vec<_>>().join("; ")))
    }
}

pub fn write_surface(s: &ExactSurface) -> String {
    let mut out = String::new();
    writeln!(out, "[field]\nD = {}", s.field()).expect("string write");
    if !s.label().is_empty() {
        writeln!(out, "label = {}", s.label()).expect("string write");
    }
    for p in s.polygons() {
        writeln!(out, "[polygon {}]", p.name).expect("string write");
        for v in &p.vertices {
            write_point(&mut out, v);
        }
    }
    let name = |e: &EdgeId| format!("{}.{}", s.polygons()[e.polygon].name, e.edge);
    if !s.gluings().is_empty() {
        out.push_str("[gluing]\n");
        for g in s.gluings() {
            writeln!(out, "{} <-> {}{}", name(&g.a), name(&g.b), if g.reversed { " reversed" } else { "" }).expect("string write");
        }
    }
    if !s.boundary().is_empty() {
        out.push_str("[boundary]\n");
        for e in s.boundary() {
            writeln!(out, "{}", name(e)).expect("string write");
        }
    }
    out
}
