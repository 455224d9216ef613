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

//! CSV files read and written by the command-line tools.

use std::io::{Read, Write};

use flatcrit_core::flow::{Equidistribution, Trajectory};
use flatcrit_core::saddle::SaddleConnection;
use flatcrit_core::teich::{ProfileSample, SystoleEnvelope};
use flatcrit_core::veech::RecurrenceSample;
use flatcrit_core::QuadNum;

use crate::error::{bad, Result};
use crate::report::format_f64;

pub const SYSTOLE_HEADER: [&str; 4] = ["t", "delta_prime", "d_prime", "integral_to_t"];
pub const CONNECTION_HEADER: [&str; 5] = ["start", "end", "x", "y", "length"];
pub const RECURRENCE_HEADER: [&str; 3] = ["t", "epsilon", "word"];
pub const PROFILE_HEADER: [&str; 5] = ["t", "eps", "C", "sumD", "delta"];
pub const TRAJECTORY_HEADER: [&str; 6] = ["segment", "polygon", "entry_x", "entry_y", "exit_x", "exit_y"];
pub const HISTOGRAM_HEADER: [&str; 5] = ["polygon", "ix", "iy", "occupancy", "area_fraction"];

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(header)?;
    Ok(c)
}

/// `samples + 1` equally spaced times on `[0, T]`.
pub fn write_systole<S, W: Write>(w: W, env: &SystoleEnvelope<S>, samples: usize) -> Result<()> {
    let mut c = writer(w, &SYSTOLE_HEADER)?;
    for i in 0..=samples {
        let t = env.horizon * i as f64 / samples as f64;
        c.write_record([format_f64(t), format_f64(env.delta(t)), format_f64(env.d_prime(t)), format_f64(env.integral_to(t))])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_connections<W: Write>(w: W, cs: &[SaddleConnection<QuadNum>]) -> Result<()> {
    let mut c = writer(w, &CONNECTION_HEADER)?;
    for s in cs {
        c.write_record([
            s.start.to_string(),
            s.end.to_string(),
            s.holonomy.x.to_string(),
            s.holonomy.y.to_string(),
            format_f64(s.length()),
        ])?;
    }
    c.flush()?;
    Ok(())
}

pub fn word_string(w: &[i32]) -> String {
    w.iter().map(i32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_recurrence<W: Write>(w: W, samples: &[RecurrenceSample]) -> Result<()> {
    let mut c = writer(w, &RECURRENCE_HEADER)?;
    for s in samples {
        c.write_record([format_f64(s.t), format_f64(s.epsilon), word_string(&s.best_word)])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_trajectory<W: Write>(w: W, t: &Trajectory) -> Result<()> {
    let mut c = writer(w, &TRAJECTORY_HEADER)?;
    for (i, s) in t.segments.iter().enumerate() {
        c.write_record([
            i.to_string(),
            s.polygon.to_string(),
            format_f64(s.entry.x),
            format_f64(s.entry.y),
            format_f64(s.exit.x),
            format_f64(s.exit.y),
        ])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_histogram<W: Write>(w: W, h: &Equidistribution) -> Result<()> {
    let mut c = writer(w, &HISTOGRAM_HEADER)?;
    let (nx, ny) = h.bins;
    for (k, (o, a)) in h.occupancy.iter().zip(&h.area_fraction).enumerate() {
        let (p, r) = (k / (nx * ny), k % (nx * ny));
        c.write_record([p.to_string(), (r % nx).to_string(), (r / nx).to_string(), format_f64(*o), format_f64(*a)])?;
    }
    c.flush()?;
    Ok(())
}

/// Reads the named float columns of a CSV, checking the header contains them.
pub fn read_columns<R: Read>(r: R, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut c = csv::Reader::from_reader(r);
    let header = c.headers()?.clone();
    if header.is_empty() {
        return Err(bad("no rows"));
    }
    let idx: Vec<usize> = names
        .iter()
        .map(|n| header.iter().position(|h| h.trim() == *n).ok_or_else(|| bad(format!("missing column {n:?}"))))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, rec) in c.records().enumerate() {
        let rec = rec?;
        let row = idx
            .iter()
            .map(|&j| {
                let f = rec.get(j).unwrap_or("").trim();
                f.parse::<f64>().map_err(|_| bad(format!("row {}: column {:?} is not a number: {f:?}", i + 1, names[idx.iter().position(|&x| x == j).unwrap_or(0)])))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no rows"));
    }
    Ok(rows)
}

pub fn read_profile<R: Read>(r: R) -> Result<Vec<ProfileSample>> {
    let rows = read_columns(r, &PROFILE_HEADER)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            let c = row[2];
            if !(c >= 1.0 && c.fract() == 0.0 && c <= u32::MAX as f64) {
                return Err(bad(format!("row {}: C must be a positive integer", i + 1)));
            }
            Ok(ProfileSample { t: row[0], eps: row[1], components: c as u32, sum_diameters: row[3], delta: row[4] })
        })
        .collect()
}
