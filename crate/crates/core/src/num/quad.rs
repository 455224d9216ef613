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

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use alloc::format;
use alloc::string::String;

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::Signed;

use super::{Rational, Sign};
use crate::error::{Error, Result};

/// An element `a + b·sqrt(d)` of the real quadratic field `Q(sqrt(d))`.
///
/// `d` is either `0` (plain rationals, `b` is then always zero) or a
/// square-free integer `>= 2`. Two values only combine when they carry the
/// same `d`; the operator impls panic on a mismatch, the `checked_*`
/// methods report [`Error::FieldMismatch`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
    d: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn check_field(d: u64) -> Result<()> {
    if d == 0 || is_square_free(d) {
        Ok(())
    } else {
        Err(Error::Parse(format!("field discriminant {d} is not square-free (or is 1)")))
    }
}

impl QuadNum {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        check_field(d)?;
        if d == 0 && !b.is_zero() {
            return Err(Error::Parse(String::from("irrational part requires a field with d > 0")));
        }
        Ok(QuadNum { a, b, d })
    }

    pub fn rational(a: Rational, d: u64) -> Self {
        QuadNum { a, b: Rational::zero(), d }
    }

    pub fn from_i64(v: i64, d: u64) -> Self {
        QuadNum::rational(Rational::from(v), d)
    }

    pub fn zero(d: u64) -> Self {
        QuadNum::from_i64(0, d)
    }

    pub fn one(d: u64) -> Self {
        QuadNum::from_i64(1, d)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_d(d: u64) -> Result<Self> {
        QuadNum::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadNum { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &Rational::from(self.d as i64))
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadNum { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadNum { a: &self.a - &other.a, b: &self.b - &other.b, d: self.d })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let dd = Rational::from(self.d as i64);
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * &dd);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        Ok(QuadNum { a, b, d: self.d })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        // d is not a perfect square, so the norm of a nonzero element is nonzero.
        let n = other.norm();
        let num = self.checked_mul(&other.conjugate())?;
        Ok(QuadNum { a: &num.a / &n, b: &num.b / &n, d: self.d })
    }

    pub fn recip(&self) -> Result<Self> {
        QuadNum::one(self.d).checked_div(self)
    }

    /// Exact sign, decided by comparing `a²` with `d·b²`.
    pub fn sign(&self) -> Sign {
        let sa = self.a.signum();
        let sb = self.b.signum();
        let s = if sb == 0 {
            sa
        } else if sa == 0 || sa == sb {
            sb
        } else {
            let a2 = &self.a * &self.a;
            let b2d = &(&self.b * &self.b) * &Rational::from(self.d as i64);
            match a2.cmp(&b2d) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => 0,
            }
        };
        Sign::from_i32(s)
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.sign().to_ordering())
    }

    /// Nearest binary64 value.
    ///
    /// The irrational part is evaluated with an integer square root at a
    /// working precision chosen so the approximation has relative error below
    /// 2^-64 before the final round-to-nearest-even; the result is therefore
    /// within one unit in the last place of the exact value.
    pub fn to_f64(&self) -> Result<f64> {
        let out = if self.b.is_zero() {
            self.a.inner().to_f64_lossy()
        } else {
            self.irrational_to_f64()
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::MagnitudeOverflow)
        }
    }

    fn irrational_to_f64(&self) -> f64 {
        // value = (n + m·sqrt(d)) / den
        let (p, q) = (self.a.numer(), self.a.denom());
        let (r, s) = (self.b.numer(), self.b.denom());
        let n = p * s;
        let m = r * q;
        let den = q * s;
        let m2d = (&m * &m) * BigInt::from(self.d);
        let target_bits = den.bits() + 66;
        let mut k: u64 = 64 + target_bits;
        loop {
            let scaled = &m2d << (2 * k);
            let root = scaled.magnitude().sqrt();
            let root = BigInt::from_biguint(BigSign::Plus, root);
            let root = if m.is_negative() { -root } else { root };
            let approx = (&n << k) + root;
            if approx.bits() >= target_bits {
                let value = BigRational::new(approx, den.clone() << k);
                return value.to_f64_lossy();
            }
            k += 64;
        }
    }
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// The `qn_arith` entry point: field arithmetic with explicit error reporting.
pub fn qn_arith(x: &QuadNum, y: &QuadNum, op: ArithOp) -> Result<QuadNum> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! op_impl {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
        impl<'a> $tr<&'a QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'a QuadNum) -> QuadNum {
                self.$checked(rhs).expect("field mismatch")
            }
        }
    };
}

op_impl!(Add, add, checked_add);
op_impl!(Sub, sub, checked_sub);
op_impl!(Mul, mul, checked_mul);
op_impl!(Div, div, checked_div);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -self.a, b: -self.b, d: self.d }
    }
}

impl<'a> Neg for &'a QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -&self.a, b: -&self.b, d: self.d }
    }
}

/// Canonical text form: `p/q`, `r/s*sqrt(D)`, `p/q + r/s*sqrt(D)` or
/// `p/q - r/s*sqrt(D)`.
impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = self.b.abs();
        let root = if coeff == 1 {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", coeff, self.d)
        };
        let neg = self.b.signum() < 0;
        if self.a.is_zero() {
            if neg {
                write!(f, "-{root}")
            } else {
                write!(f, "{root}")
            }
        } else {
            write!(f, "{} {} {}", self.a, if neg { '-' } else { '+' }, root)
        }
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl QuadNum {
    /// Parses coordinate syntax, requiring any `sqrt(D)` to match `field`.
    /// Whitespace is ignored.
    pub fn parse_in_field(s: &str, field: u64) -> Result<Self> {
        let (a, b, d) = parse_terms(s)?;
        match d {
            Some(d) if d != field => Err(Error::FieldMismatch(d, field)),
            _ => QuadNum::new(a, b, field),
        }
    }
}

/// Parses `p/q`, `p/q + r/s*sqrt(D)` and close variants; the field is taken
/// from the `sqrt(D)` term, or is `0` when there is none.
impl FromStr for QuadNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b, d) = parse_terms(s)?;
        QuadNum::new(a, b, d.unwrap_or(0))
    }
}

fn parse_terms(s: &str) -> Result<(Rational, Rational, Option<u64>)> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse(String::from("empty number")));
    }
    let bytes = compact.as_bytes();
    let mut terms = alloc::vec::Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let c = bytes[i];
        let prev = bytes[i - 1];
        if (c == b'+' || c == b'-') && !matches!(prev, b'/' | b'*' | b'(' | b'+' | b'-') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut a = Rational::zero();
    let mut b = Rational::zero();
    let mut field: Option<u64> = None;
    for term in terms {
        let (negative, body) = match term.as_bytes()[0] {
            b'-' => (true, &term[1..]),
            b'+' => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        if let Some(pos) = body.find("sqrt(") {
            let close = body[pos..]
                .find(')')
                .map(|c| c + pos)
                .ok_or_else(|| Error::Parse(format!("unclosed sqrt in {s:?}")))?;
            if close + 1 != body.len() {
                return Err(Error::Parse(format!("trailing text after sqrt in {s:?}")));
            }
            let d: u64 = body[pos + 5..close]
                .parse()
                .map_err(|_| Error::Parse(format!("bad sqrt argument in {s:?}")))?;
            check_field(d)?;
            if d == 0 {
                return Err(Error::Parse(String::from("sqrt(0) is not a field generator")));
            }
            if let Some(prev) = field {
                if prev != d {
                    return Err(Error::FieldMismatch(prev, d));
                }
            }
            field = Some(d);
            let coeff_text = &body[..pos];
            let coeff = if coeff_text.is_empty() {
                Rational::one()
            } else {
                let c = coeff_text
                    .strip_suffix('*')
                    .ok_or_else(|| Error::Parse(format!("expected '*' before sqrt in {s:?}")))?;
                c.parse::<Rational>()?
            };
            b = if negative { &b - &coeff } else { &b + &coeff };
        } else {
            let r: Rational = body.parse()?;
            a = if negative { &a - &r } else { &a + &r };
        }
    }
    Ok((a, b, field))
}

impl From<Rational> for QuadNum {
    fn from(r: Rational) -> Self {
        QuadNum::rational(r, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(s: &str) -> QuadNum {
        QuadNum::parse_in_field(s, 2).unwrap()
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(q("1 + sqrt(2)") * q("1 - sqrt(2)"), q("-1"));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q("3/4") + q("1/4"), q("1"));
    }

    #[test]
    fn self_division() {
        assert_eq!(q("1+sqrt(2)") / q("1+sqrt(2)"), q("1"));
    }

    #[test]
    fn errors() {
        let x = QuadNum::parse_in_field("1", 2).unwrap();
        let y = QuadNum::parse_in_field("1", 3).unwrap();
        assert_eq!(qn_arith(&x, &y, ArithOp::Add), Err(Error::FieldMismatch(2, 3)));
        assert_eq!(qn_arith(&x, &QuadNum::zero(2), ArithOp::Div), Err(Error::ZeroDivisor));
    }

    #[test]
    fn signs() {
        // (1 + sqrt 2) - 5/2 < 0 since 2 < 9/4
        assert_eq!((q("1 + sqrt(2)") - q("5/2")).sign(), Sign::Negative);
        assert_eq!(q("0").sign(), Sign::Zero);
        assert_eq!(q("-1 + sqrt(2)").sign(), Sign::Positive);
        assert_eq!(q("3/2 - sqrt(2)").sign(), Sign::Positive);
        assert_eq!(q("7/5 - sqrt(2)").sign(), Sign::Negative);
    }

    #[test]
    fn to_f64_values() {
        assert_eq!(q("3/4").to_f64().unwrap(), 0.75);
        assert_eq!(q("0").to_f64().unwrap(), 0.0);
        assert_eq!(q("1 + sqrt(2)").to_f64().unwrap(), 2.414213562373095);
        // heavy cancellation; reference from a 40-digit evaluation
        let v = q("99/70 - sqrt(2)").to_f64().unwrap();
        assert!((v - 7.215191261923691e-5).abs() <= 2.0 * f64::EPSILON * 7.3e-5);
    }

    #[test]
    fn overflow() {
        let big = QuadNum::parse_in_field("1", 2).unwrap();
        let mut x = big.clone();
        for _ in 0..1100 {
            x = &x * &QuadNum::from_i64(2, 2);
        }
        assert_eq!(x.to_f64(), Err(Error::MagnitudeOverflow));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "-3/7", "sqrt(2)", "-sqrt(2)", "1/2 + 3/4*sqrt(2)", "2 - 5*sqrt(2)"] {
            let x = q(s);
            assert_eq!(q(&x.to_string()), x);
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn parse_variants() {
        assert_eq!(q(" 1/2+1/2 * sqrt( 2 ) "), q("1/2 + 1/2*sqrt(2)"));
        assert_eq!(q("sqrt(2) + 1"), q("1 + sqrt(2)"));
        assert!(QuadNum::parse_in_field("sqrt(3)", 2).is_err());
        assert!("sqrt(4)".parse::<QuadNum>().is_err());
        assert!("1 +".parse::<QuadNum>().is_err());
        assert_eq!("sqrt(5)".parse::<QuadNum>().unwrap().field(), 5);
    }
}
