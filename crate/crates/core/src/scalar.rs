//! Scalar field abstraction.
//!
//! Everything is computed over exact rationals ([`Q`]) unless a caller opts
//! into `f64`, in which case equality checks use an absolute/relative
//! tolerance (default `1e-9`, adjustable with [`set_float_tolerance`]).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOLERANCE: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Sets the tolerance used by `f64` equality checks process-wide.
pub fn set_float_tolerance(tol: f64) {
    FLOAT_TOLERANCE.store(tol.to_bits(), Ordering::Relaxed);
}

pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOLERANCE.load(Ordering::Relaxed))
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Sum
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_rational(q: &Q) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality used by every invariant check: exact for rationals.
    fn approx_eq(&self, other: &Self) -> bool;

    fn is_negligible(&self) -> bool {
        self.approx_eq(&Self::zero())
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Q::from_integer(BigInt::from(n)))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Q::new(BigInt::from(num), BigInt::from(den)))
    }

    fn json(&self) -> serde_json::Value;

    fn is_exact() -> bool;
}

impl Scalar for Q {
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Q) -> Self {
        q.to_f64_lossy()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let tol = float_tolerance();
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }

    fn json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn is_exact() -> bool {
        false
    }
}

trait LossyFloat {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyFloat for Q {
    fn to_f64_lossy(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Scale down huge numerators/denominators before dividing.
                let bits = self.numer().bits().max(self.denom().bits()) as i64 - 900;
                let shift = bits.max(0) as usize;
                let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
                let d = (self.denom() >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }
}

/// Formats a rational as `"p/q"` (or `"p"` when the denominator is 1).
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let text = text.trim();
    if let Ok(q) = Q::from_str(text) {
        return Ok(q);
    }
    let bad = || Error::InvalidInput(format!("cannot parse scalar {text:?}"));
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').ok_or_else(bad)?;
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = BigInt::from_str(&digits).map_err(|_| bad())? * sign;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(Q::new(numer, denom))
}

/// Reads a JSON scalar: either a `"p/q"` string or a JSON number.
pub fn rational_from_json(value: &serde_json::Value) -> Result<Q> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string())
            }
        }
        other => Err(Error::InvalidInput(format!("expected scalar, got {other}"))),
    }
}

pub(crate) fn abs<T: Scalar>(x: &T) -> T {
    if *x < T::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}
