//! Exact rational helpers: canonical text form and float conversion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical reduced text: `"p"` for integers, `"p/q"` otherwise.
pub fn to_text(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-1.25"`.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fraction);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fraction.len());
        let r = Rational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Nearest `f64`, robust for huge numerators and denominators.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    // scale to ~2^60 before dividing
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Exact value of an `f64` (every finite float is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub mod serde_text {
    //! Serde adapter encoding rationals as canonical strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
