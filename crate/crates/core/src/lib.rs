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

//! Computational toolkit for translation surfaces.
//!
//! Surfaces are given as polygons with exact coordinates in a real quadratic
//! field, glued along edges by translations. On top of that representation the
//! crate enumerates saddle connections, follows the shortest one along the
//! Teichmüller geodesic `g_t = diag(e^-t, e^t)`, evaluates integrability
//! criteria for unique ergodicity, checks affine automorphisms against
//! cut-and-translate certificates and simulates the straight-line flow.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the command-line
//! front end and threading live in the `flatcrit` companion crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod flow;
pub mod geom;
pub mod num;
pub mod saddle;
pub mod surface;
pub mod teich;
pub mod veech;

pub use error::{Error, Result};
pub use geom::{Mat2, Vec2};
pub use num::{QuadNum, Rational, Scalar, Sign};
pub use surface::{EdgeId, TranslationSurface};
