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

//! JSON run reports. Floats are written with 17 significant digits;
//! non-finite values become `null`.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;

pub const SCHEMA_ID: &str = "https://flatcrit.invalid/schema/report-v1.json";

/// The published report schema.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub value: Value,
    pub units: String,
    pub horizon: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Default)]
pub struct Report {
    pub command: String,
    digest: Sha256,
    pub outputs: BTreeMap<String, Output>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, args: &[String]) -> Self {
        let mut r = Report { command: command.to_string(), ..Default::default() };
        for a in args {
            r.digest.update(a.as_bytes());
            r.digest.update([0u8]);
        }
        r
    }

    /// Adds an input file's bytes to the digest.
    pub fn input(&mut self, bytes: &[u8]) {
        self.digest.update((bytes.len() as u64).to_le_bytes());
        self.digest.update(bytes);
    }

    pub fn put(&mut self, name: &str, value: impl Into<Value>, units: &str) -> &mut Output {
        self.outputs
            .entry(name.to_string())
            .insert_entry(Output { value: value.into(), units: units.to_string(), horizon: None, tolerance: None })
            .into_mut()
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        log::warn!("{w}");
        self.warnings.push(w);
    }

    pub fn to_value(&self, result: &std::result::Result<(), Error>) -> Value {
        let digest: String = self.digest.clone().finalize().iter().map(|b| format!("{b:02x}")).collect();
        let outputs: Map<String, Value> = self
            .outputs
            .iter()
            .map(|(k, o)| {
                let mut m = Map::new();
                m.insert("value".into(), o.value.clone());
                m.insert("units".into(), o.units.clone().into());
                if let Some(h) = o.horizon {
                    m.insert("horizon".into(), h.into());
                }
                if let Some(t) = o.tolerance {
                    m.insert("tolerance".into(), t.into());
                }
                (k.clone(), Value::Object(m))
            })
            .collect();
        let (code, error) = match result {
            Ok(()) => (0, Value::Null),
            Err(e) => (e.exit_code(), json!({ "kind": e.kind(), "message": e.to_string() })),
        };
        json!({
            "schema": SCHEMA_ID,
            "command": self.command,
            "inputs_digest": digest,
            "outputs": outputs,
            "warnings": self.warnings,
            "exit_code": code,
            "error": error,
        })
    }
}

impl Output {
    pub fn horizon(&mut self, h: f64) -> &mut Self {
        self.horizon = Some(h);
        self
    }

    pub fn tolerance(&mut self, t: f64) -> &mut Self {
        self.tolerance = Some(t);
        self
    }
}

/// A float array value; non-finite entries become `null`.
pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::from(x)).collect())
}

struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

/// 17 significant digits in exponent form, e.g. `4.9999773000000001e-1`.
pub fn format_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn to_json(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    v.serialize(&mut ser).expect("values serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}
