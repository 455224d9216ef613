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

//! Deterministic SVG plots of the CSV outputs: fixed size, fixed number
//! formatting, no timestamps.

use std::fmt::Write;
use std::io::Read;
use std::str::FromStr;

use crate::csvio::read_columns;
use crate::error::{bad, Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Systole,
    Recurrence,
    Histogram,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "systole" => Ok(PlotKind::Systole),
            "recurrence" => Ok(PlotKind::Recurrence),
            "histogram" => Ok(PlotKind::Histogram),
            _ => Err(bad(format!("unknown plot kind {s:?}"))),
        }
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let range = |v: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-300 {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        Frame { x: range(&mut xs.clone()), y: range(&mut ys.clone()) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str, xlabel: &str, ylabel: &str, f: &Frame) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(out, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>", WIDTH / 2.0);
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(out, "<path d=\"M{x0} {y1}V{y0}H{x1}\" fill=\"none\" stroke=\"black\"/>");
    let text = |out: &mut String, x: f64, y: f64, anchor: &str, s: &str| {
        let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"11\">{s}</text>");
    };
    text(out, x0, y0 + 16.0, "middle", &format!("{:.4}", f.x.0));
    text(out, x1, y0 + 16.0, "middle", &format!("{:.4}", f.x.1));
    text(out, x0 - 4.0, y0, "end", &format!("{:.4}", f.y.0));
    text(out, x0 - 4.0, y1 + 4.0, "end", &format!("{:.4}", f.y.1));
    text(out, WIDTH / 2.0, HEIGHT - 12.0, "middle", xlabel);
    text(out, 14.0, HEIGHT / 2.0, "middle", ylabel);
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], colour: &str) {
    let pts: Vec<String> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y)))
        .collect();
    let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>", pts.join(" "));
}

/// Renders a CSV of the given kind.
pub fn plot<R: Read>(csv: R, kind: PlotKind) -> Result<String> {
    let mut out = String::new();
    match kind {
        PlotKind::Systole | PlotKind::Recurrence => {
            let (col, title) = match kind {
                PlotKind::Systole => ("delta_prime", "normalized systole"),
                _ => ("epsilon", "distance to the word ball"),
            };
            let rows = read_columns(csv, &["t", col])?;
            let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
            let f = Frame::new(xs.iter().copied(), ys.iter().copied());
            header(&mut out, title, "t", col, &f);
            polyline(&mut out, &f, &xs, &ys, "steelblue");
        }
        PlotKind::Histogram => {
            let rows = read_columns(csv, &["occupancy", "area_fraction"])?;
            let idx: Vec<f64> = (0..=rows.len()).map(|i| i as f64).collect();
            let f = Frame::new(idx.iter().copied(), rows.iter().flat_map(|r| [r[0], r[1], 0.0]));
            header(&mut out, "occupancy by bin", "bin", "fraction", &f);
            for (i, r) in rows.iter().enumerate() {
                let (x0, x1) = (f.px(i as f64), f.px(i as f64 + 1.0));
                let (ytop, ybase) = (f.py(r[0]), f.py(0.0));
                let _ = writeln!(
                    out,
                    "<rect x=\"{x0:.2}\" y=\"{ytop:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"steelblue\"/>",
                    (x1 - x0).max(0.0),
                    (ybase - ytop).max(0.0)
                );
            }
            let mid: Vec<f64> = (0..rows.len()).map(|i| i as f64 + 0.5).collect();
            let area: Vec<f64> = rows.iter().map(|r| r[1]).collect();
            polyline(&mut out, &f, &mid, &area, "darkorange");
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
