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

use flatcrit_core::Error as CoreError;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures of the front end, each tied to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or invalid input: exit code 2.
    #[error("{0}")]
    BadInput(String),
    /// The input is well formed but the computation's precondition fails: exit code 3.
    #[error("{0}")]
    Precondition(String),
    /// Exit code 1.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadInput(_) => 2,
            Error::Precondition(_) => 3,
            Error::Internal(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadInput(_) => "bad-input",
            Error::Precondition(_) => "precondition",
            Error::Internal(_) => "internal",
        }
    }
}

pub fn bad(msg: impl Into<String>) -> Error {
    Error::BadInput(msg.into())
}

impl From<CoreError> for Error {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Parse(_) | CoreError::InvalidSurface(_) | CoreError::FieldMismatch(..) => Error::BadInput(msg),
            CoreError::ZeroDivisor | CoreError::MagnitudeOverflow | CoreError::Triangulation(_) => Error::Internal(msg),
            _ => Error::Precondition(msg),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::BadInput(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::BadInput(e.to_string())
    }
}
