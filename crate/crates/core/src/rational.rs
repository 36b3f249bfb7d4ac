//! Exact rational numbers and their `"p/q"` text form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a rational (expected \"p/q\" or an integer)")]
pub struct ParseRationalError(pub String);

/// `n/d` as a rational. Panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"-p/q"` or a bare integer `"p"`.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Wrapper that displays a rational in canonical text form.
pub struct Display<'a>(pub &'a Rational);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self.0))
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite binary float.
pub fn from_f64_exact(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn best_approximation(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let exact = from_f64_exact(x)?;
    let max_den = BigInt::from(max_den);
    let negative = exact.is_negative();
    let target = exact.abs();

    // Convergents h/k of the continued fraction of `target`.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    let mut best: Option<Rational> = None;
    loop {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > max_den {
            // Largest admissible semiconvergent between the last two convergents.
            let steps = (&max_den - &k_prev) / &k;
            if !k.is_zero() && steps > BigInt::zero() {
                let semi = Rational::new(&steps * &h + &h_prev, &steps * &k + &k_prev);
                let conv = Rational::new(h.clone(), k.clone());
                let pick = if (&semi - &target).abs() < (&conv - &target).abs() {
                    semi
                } else {
                    conv
                };
                best = Some(pick);
            }
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        best = Some(Rational::new(h.clone(), k.clone()));
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    best.map(|b| if negative { -b } else { b })
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod serde_text {
    use super::{format, parse, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(D::Error::custom)
    }
}

/// Newtype that (de)serializes as a `"p/q"` string; used inside document structs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatText(pub Rational);

impl serde::Serialize for RatText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_text::serialize(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for RatText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_text::deserialize(d).map(RatText)
    }
}

impl From<Rational> for RatText {
    fn from(r: Rational) -> Self {
        RatText(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse(" -3 / 6 ").unwrap(), ratio(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert_eq!(format(&ratio(6, 8)), "3/4");
        assert_eq!(format(&int(1)), "1");
    }

    #[test]
    fn snapping_recovers_simple_fractions() {
        let c = (std::f64::consts::PI / 6.0).cos();
        assert_eq!(best_approximation(c * c, 1_000_000).unwrap(), ratio(3, 4));
        assert_eq!(best_approximation(1.0 / 3.0, 1000).unwrap(), ratio(1, 3));
        assert_eq!(best_approximation(0.0, 10).unwrap(), int(0));
        assert_eq!(best_approximation(-0.25, 10).unwrap(), ratio(-1, 4));
        // pi with denominator bound 100 is 311/99
        assert_eq!(
            best_approximation(std::f64::consts::PI, 100).unwrap(),
            ratio(311, 99)
        );
    }
}
