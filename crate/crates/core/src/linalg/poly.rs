use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::exactfield::{lcm, CycNum};

/// Univariate polynomial over the cyclotomic numbers, lowest degree first.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<CycNum>", into = "Vec<CycNum>")]
pub struct Polynomial {
    coeffs: Vec<CycNum>,
}

impl From<Vec<CycNum>> for Polynomial {
    fn from(v: Vec<CycNum>) -> Self {
        Polynomial::new(v)
    }
}

impl From<Polynomial> for Vec<CycNum> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<CycNum>) -> Polynomial {
        while coeffs.last().is_some_and(CycNum::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&v| CycNum::from_int(v)).collect())
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Polynomial {
        Polynomial::new(vec![CycNum::one()])
    }

    /// Π (x - r) over the given roots.
    pub fn from_roots(roots: &[CycNum]) -> Polynomial {
        roots.iter().fold(Polynomial::one(), |acc, r| {
            acc.mul(&Polynomial::new(vec![-r, CycNum::one()]))
        })
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CycNum {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycNum> {
        self.coeffs.last()
    }

    pub fn conductor(&self) -> u64 {
        self.coeffs.iter().fold(1, |acc, c| lcm(acc, c.conductor()))
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                Polynomial::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        self.coeffs
            .iter()
            .rev()
            .fold(CycNum::zero(), |acc, c| &(&acc * x) + c)
    }

    /// p(A) for a square matrix A.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        self.coeffs.iter().rev().fold(Matrix::zeros(n, n), |acc, c| {
            (&acc * a)
                .add(&Matrix::scalar(n, c))
                .expect("square matrices")
        })
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![CycNum::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Polynomial::new(out)
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![CycNum::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * d);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p(x) / (x - r), assuming r is a root.
    pub fn deflate(&self, r: &CycNum) -> Polynomial {
        self.div_rem(&Polynomial::new(vec![-r, CycNum::one()])).0
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
