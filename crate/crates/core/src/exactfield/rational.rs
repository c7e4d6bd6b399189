//! Rational numbers and their string wire form.
//!
//! Rationals are `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. On the wire a rational is a string
//! `"p/q"`, or `"p"` when the denominator is one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on huge operands; fall back to a scaled quotient.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Positive divisors of `n`, or `None` when `n` is too large to factor by
/// trial division at desk scale.
pub(crate) fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    const LIMIT: u64 = 1 << 40;
    let n = n.abs().to_u64().filter(|&v| v <= LIMIT)?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Rational roots of a polynomial with rational coefficients (lowest degree
/// first), by the rational root theorem. `None` when the coefficients are too
/// large to enumerate divisors.
pub(crate) fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut coeffs: Vec<Rational> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let lead_zero = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zero > 0 {
        roots.push(Rational::zero());
        coeffs.drain(..lead_zero);
    }
    if coeffs.len() <= 1 {
        return Some(roots);
    }
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let low = divisors(&ints[0])?;
    let high = divisors(ints.last().unwrap())?;
    let eval = |x: &Rational| {
        coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    };
    let mut seen = std::collections::BTreeSet::new();
    for p in &low {
        for q in &high {
            for sign in [1, -1] {
                let cand = BigRational::new(p * sign, q.clone());
                if seen.insert(cand.clone()) && eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

pub(crate) mod serde_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

pub(crate) mod serde_string_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<RationalWire> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

pub(crate) mod serde_string_vec2 {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(
        v: &[Vec<Rational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let raw: Vec<Vec<RationalWire>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|w| w.0).collect())
            .collect())
    }
}

/// Wire wrapper accepting `"p/q"`, `"p"` or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalWire(pub Rational);

impl<'de> serde::Deserialize<'de> for RationalWire {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(RationalWire)
    }
}

impl serde::Serialize for RationalWire {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\", \"p\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(BigRational::from_integer(BigInt::from(v)))
    }
}
