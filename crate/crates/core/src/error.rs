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

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field mismatch: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(u64, u64),
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("magnitude overflow")]
    MagnitudeOverflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid surface: {}", join(.0))]
    InvalidSurface(Vec<String>),
    #[error("not area-preserving")]
    NotAreaPreserving,
    #[error("starts at singularity")]
    StartsAtSingularity,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no return within {max_length}: subinterval [{lo}, {hi}]")]
    NoReturn { lo: f64, hi: f64, max_length: f64 },
    #[error("gate not met")]
    GateNotMet,
    #[error("surface has marked boundary")]
    MarkedBoundary,
    #[error("triangulation failed: {0}")]
    Triangulation(String),
}

fn join(items: &[String]) -> String {
    let mut out = String::new();
    for (i, s) in items.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(s);
    }
    out
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
