//! Elements of cyclotomic fields Q(ζ_n).
//!
//! An element is stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` at its
//! minimal conductor `n` (never ≡ 2 mod 4). Since the representation is
//! canonical, structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, frac, int, parse_rational, to_f64, Rational, RationalWire};
use super::tables::{self, canonical_conductor, euler_phi, gcd, lcm, prime_factors};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u64,
    c: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic on two cyclotomic numbers of possibly different conductors.
pub fn cyc_arith(a: &CycNum, b: &CycNum, op: ArithOp) -> Result<CycNum> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl CycNum {
    /// Builds `Σ c_i ζ_n^i`, reduced modulo Φ_n and moved to its minimal conductor.
    pub fn new(coeffs: Vec<Rational>, n: i64) -> Result<CycNum> {
        if n <= 0 {
            return Err(Error::InvalidConductor(n));
        }
        if coeffs.len() > n as usize {
            return Err(Error::Shape(format!(
                "{} coefficients given for conductor {n}",
                coeffs.len()
            )));
        }
        let n = n as u64;
        let target = if n % 4 == 2 { 2 * n } else { n };
        let scale = (target / n) as usize;
        let table = tables::table(target);
        let mut acc = vec![Rational::zero(); table.phi];
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                table.add_monomial(&mut acc, i * scale, c);
            }
        }
        Ok(Self::normalize(target, acc))
    }

    pub fn zero() -> CycNum {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> CycNum {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(v: i64) -> CycNum {
        Self::from_rational(int(v))
    }

    pub fn from_rational(q: Rational) -> CycNum {
        CycNum { n: 1, c: vec![q] }
    }

    /// ζ_m^j = e^{2πi j/m}.
    pub fn root_of_unity(j: i64, m: u64) -> CycNum {
        assert!(m >= 1, "root of unity of order 0");
        let e = j.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![Rational::zero(); e + 1];
        coeffs[e] = Rational::one();
        CycNum::new(coeffs, m as i64).expect("valid conductor")
    }

    /// e^{2πi q} for rational q.
    pub fn exp_2pi_i(q: &Rational) -> CycNum {
        let f = frac(q);
        let den: i64 = f.denom().try_into().expect("denominator fits in i64");
        let num: i64 = f.numer().try_into().expect("numerator fits in i64");
        Self::root_of_unity(num, den as u64)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.c[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.c[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.n == 1).then(|| &self.c[0])
    }

    fn normalize(mut n: u64, mut c: Vec<Rational>) -> CycNum {
        'outer: loop {
            if n == 1 {
                break;
            }
            if c[1..].iter().all(Zero::is_zero) {
                c.truncate(1);
                n = 1;
                break;
            }
            for p in prime_factors(n) {
                let d = canonical_conductor(n / p);
                if let Some(y) = tables::descent(n, d).try_descend(&c) {
                    n = d;
                    c = y;
                    continue 'outer;
                }
            }
            break;
        }
        CycNum { n, c }
    }

    /// Coordinates of `self` in the power basis of Q(ζ_m). `m` must be a
    /// multiple of the conductor.
    pub fn embed(&self, m: u64) -> Result<Vec<Rational>> {
        if m == 0 || !m.is_multiple_of(self.n) {
            return Err(Error::FieldMismatch(format!(
                "conductor {} does not divide {m}",
                self.n
            )));
        }
        let table = tables::table(m);
        if m == self.n {
            return Ok(self.c.clone());
        }
        let step = (m / self.n) as usize;
        let mut acc = vec![Rational::zero(); table.phi];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                table.add_monomial(&mut acc, i * step, c);
            }
        }
        Ok(acc)
    }

    fn common(&self, other: &CycNum) -> (u64, Vec<Rational>, Vec<Rational>) {
        let m = lcm(self.n, other.n);
        (m, self.embed(m).unwrap(), other.embed(m).unwrap())
    }

    fn scale(&self, q: &Rational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero();
        }
        CycNum {
            n: self.n,
            c: self.c.iter().map(|a| a * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(q.recip()));
        }
        // Solve (multiplication by self) · y = 1 in the ζ_n power basis.
        let table = tables::table(self.n);
        let phi = table.phi;
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let mut col = vec![Rational::zero(); phi];
            for (i, c) in self.c.iter().enumerate() {
                if !c.is_zero() {
                    table.add_monomial(&mut col, i + j, c);
                }
            }
            cols.push(col);
        }
        let mut aug: Vec<Vec<Rational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<Rational> = (0..phi).map(|j| cols[j][r].clone()).collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for col in 0..phi {
            let p = (col..phi)
                .find(|&r| !aug[r][col].is_zero())
                .expect("nonzero field element has an inverse");
            aug.swap(col, p);
            let pivot = aug[col][col].clone();
            for a in aug[col].iter_mut() {
                *a /= &pivot;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a -= &f * b;
                    }
                }
            }
        }
        let y = aug.into_iter().map(|mut row| row.pop().unwrap()).collect();
        Ok(CycNum::normalize(self.n, y))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Image under ζ_n ↦ ζ_n^k on the element's own field; `k` must be a
    /// unit modulo the conductor.
    pub(crate) fn apply_unit(&self, k: i64) -> CycNum {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as i64;
        debug_assert_eq!(gcd(k.rem_euclid(n) as u64, self.n), 1);
        let table = tables::table(self.n);
        let mut acc = vec![Rational::zero(); table.phi];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                let e = (i as i64 * k).rem_euclid(n) as usize;
                table.add_monomial(&mut acc, e, c);
            }
        }
        CycNum { n: self.n, c: acc }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> CycNum {
        self.apply_unit(-1)
    }

    /// The exponent `p/q ∈ [0, 1)` with `self = e^{2πi p/q}` when `self` is a
    /// root of unity. The roots of unity in Q(ζ_n) are exactly ±ζ_n^j, so this
    /// compares against those 2n candidates.
    pub fn root_of_unity_exponent(&self) -> Option<Rational> {
        if self.is_zero() || !self.c.iter().all(|c| c.is_integer() && c.abs() <= Rational::one()) {
            return None;
        }
        let n = self.n;
        let table = tables::table(n);
        let as_int: Vec<i64> = self
            .c
            .iter()
            .map(|c| i64::try_from(c.to_integer()).unwrap())
            .collect();
        for (j, row) in table.powers.iter().enumerate() {
            let base = Rational::new(BigInt::from(j), BigInt::from(n));
            if *row == as_int {
                return Some(base);
            }
            if row.iter().zip(&as_int).all(|(a, b)| *a == -*b) {
                return Some(frac(&(base + Rational::new(1.into(), 2.into()))));
            }
        }
        None
    }

    /// Least m with self^m = 1, if self is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        self.root_of_unity_exponent()
            .map(|q| u64::try_from(q.denom()).expect("order fits in u64"))
    }

    /// Value under the embedding ζ_n ↦ e^{2πi/n}.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            let v = to_f64(c);
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    pub fn phi(&self) -> u64 {
        euler_phi(self.n)
    }
}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

impl From<i64> for CycNum {
    fn from(v: i64) -> Self {
        CycNum::from_int(v)
    }
}

impl From<Rational> for CycNum {
    fn from(q: Rational) -> Self {
        CycNum::from_rational(q)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;

    fn add(self, other: &CycNum) -> CycNum {
        if self.n == 1 && other.n == 1 {
            return CycNum::from_rational(&self.c[0] + &other.c[0]);
        }
        if self.n == other.n {
            let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
            return CycNum::normalize(self.n, c);
        }
        let (m, a, b) = self.common(other);
        CycNum::normalize(m, a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;

    fn sub(self, other: &CycNum) -> CycNum {
        self + &(-other)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;

    fn neg(self) -> CycNum {
        CycNum {
            n: self.n,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;

    fn mul(self, other: &CycNum) -> CycNum {
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        let (m, a, b) = if self.n == other.n {
            (self.n, self.c.clone(), other.c.clone())
        } else {
            self.common(other)
        };
        let table = tables::table(m);
        let mut acc = vec![Rational::zero(); table.phi];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    table.add_monomial(&mut acc, i + j, &(x * y));
                }
            }
        }
        CycNum::normalize(m, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, other: CycNum) -> CycNum {
                (&self).$m(&other)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, other: &CycNum) -> CycNum {
                (&self).$m(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;

    fn neg(self) -> CycNum {
        -&self
    }
}

/// Canonical order: by conductor, then coefficients lexicographically.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write!(f, "{}", format_rational(&self.c[0]));
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&a))?,
                (_, true) => write!(f, "z{}^{}", self.n, i)?,
                (_, false) => write!(f, "{}*z{}^{}", format_rational(&a), self.n, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

#[derive(Serialize)]
struct CycWireOut {
    n: u64,
    c: Vec<[String; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CycWireFull {
    n: i64,
    c: Vec<CoeffWire>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffWire {
    Pair([String; 2]),
    Single(RationalWire),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycWireIn {
    Rational(RationalWire),
    Full(CycWireFull),
}

impl Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycWireOut {
            n: self.n,
            c: self
                .c
                .iter()
                .map(|q| [q.numer().to_string(), q.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CycWireIn::deserialize(d)? {
            CycWireIn::Rational(q) => Ok(CycNum::from_rational(q.0)),
            CycWireIn::Full(full) => {
                let coeffs = full
                    .c
                    .into_iter()
                    .map(|w| match w {
                        CoeffWire::Single(q) => Ok(q.0),
                        CoeffWire::Pair([p, q]) => parse_rational(&format!("{p}/{q}")),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                CycNum::new(coeffs, full.n).map_err(D::Error::custom)
            }
        }
    }
}
