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

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use super::{QuadNum, Rational, Sign};

/// Coordinate type shared by the exact and approximate code paths.
///
/// [`QuadNum`] gives exact combinatorics; `f64` is the approximate kind used
/// after transcendental deformations. Sign tests on `f64` use the computed
/// value as is; code that needs a guard band asks for one explicitly through
/// [`Scalar::near`].
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    /// Exact image of a binary64 value in this scalar's field.
    fn from_f64_like(&self, v: f64) -> Self;
    fn sign(&self) -> Sign;
    fn to_f64(&self) -> f64;
    /// Field discriminant (`0` for rationals and for `f64`).
    fn field(&self) -> u64;
    /// Equality for exact kinds; relative closeness (`tol·max(1,|a|,|b|)`) for `f64`.
    fn near(&self, other: &Self, tol: f64) -> bool;

    fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }
}

impl Scalar for QuadNum {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        QuadNum::zero(self.field())
    }

    fn from_i64_like(&self, v: i64) -> Self {
        QuadNum::from_i64(v, self.field())
    }

    fn from_f64_like(&self, v: f64) -> Self {
        QuadNum::rational(Rational::from_f64(v).expect("finite value"), self.field())
    }

    fn sign(&self) -> Sign {
        QuadNum::sign(self)
    }

    fn to_f64(&self) -> f64 {
        QuadNum::to_f64(self).unwrap_or(f64::INFINITY)
    }

    fn field(&self) -> u64 {
        QuadNum::field(self)
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        0.0
    }

    fn from_i64_like(&self, v: i64) -> Self {
        v as f64
    }

    fn from_f64_like(&self, v: f64) -> Self {
        v
    }

    fn sign(&self) -> Sign {
        if *self > 0.0 {
            Sign::Positive
        } else if *self < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn field(&self) -> u64 {
        0
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0f64.max(Float::abs(*self)).max(Float::abs(*other));
        Float::abs(*self - *other) <= tol * scale
    }
}
