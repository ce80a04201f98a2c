//! Exact rational coefficients. Weights such as ½ and ⅓ are carried
//! exactly and written to JSON as `"p/q"` strings; numbers are accepted on
//! input and snapped to the nearest fraction with a small denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest denominator tried when snapping a float to a fraction.
pub const MAX_SNAP_DENOMINATOR: i64 = 10_000;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p` or `p/q`.
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Unicode vulgar fractions for the common cases, `p/q` otherwise.
pub fn pretty(q: &Rational) -> String {
    let table = [
        (ratio(1, 2), "½"),
        (ratio(1, 3), "⅓"),
        (ratio(2, 3), "⅔"),
        (ratio(1, 4), "¼"),
        (ratio(3, 4), "¾"),
        (ratio(1, 6), "⅙"),
    ];
    table
        .iter()
        .find(|(v, _)| v == q)
        .map(|(_, s)| s.to_string())
        .unwrap_or_else(|| format(q))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents), accepted only if within `tol`.
pub fn from_f64(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0))?;
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0))?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        best = Some((h2, k2));
        if (h2 as f64 / k2 as f64 - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
        let frac = rest - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    let (h, k) = best?;
    let q = ratio(h, k);
    ((to_f64(&q) - x).abs() <= tol).then_some(q)
}

/// Parses `"p/q"`, an integer, or a decimal (snapped to a fraction).
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}`: zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a number or fraction")))?;
    from_f64(x, MAX_SNAP_DENOMINATOR, 1e-12)
        .ok_or_else(|| Error::Parse(format!("`{s}` has no small-denominator fraction")))
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

/// Serde adapter: writes `"p/q"`, reads strings or JSON numbers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(pub Rational);

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(&self.0))
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CoeffVisitor;
        impl Visitor<'_> for CoeffVisitor {
            type Value = Coeff;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a \"p/q\" fraction string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coeff, E> {
                parse(v).map(Coeff).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coeff, E> {
                Ok(Coeff(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coeff, E> {
                Ok(Coeff(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Coeff, E> {
                from_f64(v, MAX_SNAP_DENOMINATOR, 1e-12)
                    .map(Coeff)
                    .ok_or_else(|| E::custom(format!("{v} has no small-denominator fraction")))
            }
        }
        d.deserialize_any(CoeffVisitor)
    }
}
