//! Scalar abstraction shared by the matrix code.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::Rational;

/// Field element usable as a matrix entry.
///
/// Exact types (rationals) make comparisons such as `λ ≥ 1` or `‖A^m‖ < 1/2`
/// decisive; float types trade that for speed.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact rational value, for exact types only.
    fn to_exact(&self) -> Option<Rational>;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(numer: i64, denom: i64) -> Self {
                (numer as f64 / denom as f64) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_exact(&self) -> Option<Rational> {
                None
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        crate::ratio(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_exact(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<num_bigint::BigInt>() {
        return Some(Rational::from_integer(n));
    }
    let (int, frac) = s.split_once('.')?;
    let negative = int.starts_with('-');
    let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
    let numer: num_bigint::BigInt = digits.parse().ok()?;
    let denom = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
    let r = Rational::new(numer, denom);
    Some(if negative { -r } else { r })
}

/// Serializes an optional rational as `"p/q"` or `null`.
pub fn serialize_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// Serializes an optional rational vector as a list of `"p/q"` strings or `null`.
pub fn serialize_opt_rational_vec<S: serde::Serializer>(
    v: &Option<Vec<Rational>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(rs) => s.collect_seq(rs.iter().map(format_rational)),
        None => s.serialize_none(),
    }
}
