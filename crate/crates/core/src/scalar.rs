//! Number types the game machinery is generic over.
//!
//! Every algorithm that only needs field operations and ordering is written
//! once against [`Scalar`] and runs either in 64-bit floating point or in
//! exact rational arithmetic ([`Rational`]). The exact mode is what makes
//! cycle certification and the small-network equivalence checks
//! tolerance-free.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number used by the exact arithmetic mode.
pub type Rational = BigRational;

/// Ordered field element with the conversions the crate needs.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Signed + Send + Sync + 'static
{
    /// `true` for exact representations.
    const EXACT: bool;

    /// Hashable identity used for exact profile comparison. Floating values
    /// have none; see [`Scalar::exact_key`].
    type Key: Hash + Eq + Clone + fmt::Debug + Send + Sync;

    fn from_f64(value: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn parse_number(text: &str) -> Result<Self, NumberError>;
    /// Canonical textual form: 17 significant digits for floats, `p/q` for
    /// rationals.
    fn format_number(&self) -> String;
    fn exact_key(&self) -> Option<Self::Key>;
    /// Pivot test for elimination: exact zero, or below `1e-12` in floating
    /// mode.
    fn negligible(&self) -> bool;

    fn is_finite(&self) -> bool {
        true
    }

    fn from_usize(value: usize) -> Self {
        Self::from_ratio(value as i64, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{0}`")]
pub struct NumberError(pub String);

impl Scalar for f64 {
    const EXACT: bool = false;
    type Key = ();

    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn parse_number(text: &str) -> Result<Self, NumberError> {
        let text = text.trim();
        let value = match text.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().map_err(|_| NumberError(text.into()))?;
                let q: f64 = q.trim().parse().map_err(|_| NumberError(text.into()))?;
                if q == 0.0 {
                    return Err(NumberError(text.into()));
                }
                p / q
            }
            None => text.parse().map_err(|_| NumberError(text.into()))?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(NumberError(text.into()))
        }
    }

    /// Shortest decimal that parses back to the same value.
    fn format_number(&self) -> String {
        format!("{self}")
    }

    fn exact_key(&self) -> Option<()> {
        None
    }

    fn negligible(&self) -> bool {
        self.abs() < 1e-12
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    type Key = Rational;

    fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn parse_number(text: &str) -> Result<Self, NumberError> {
        let text = text.trim();
        if text.contains('/') {
            let value = BigRational::from_str(text).map_err(|_| NumberError(text.into()))?;
            return Ok(value);
        }
        parse_decimal(text).ok_or_else(|| NumberError(text.into()))
    }

    fn format_number(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn exact_key(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Parses a decimal literal such as `-1.25e-3` into its exact rational value.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

/// `|a - b| <= tol`, with `tol == 0` meaning exact equality.
pub fn within<T: Scalar>(a: &T, b: &T, tol: f64) -> bool {
    let diff = (a.clone() - b.clone()).abs();
    if diff.is_zero() {
        return true;
    }
    tol > 0.0 && diff.to_f64() <= tol
}

pub fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}
