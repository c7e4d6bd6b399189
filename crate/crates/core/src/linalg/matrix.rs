use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::exactfield::{lcm, CycNum, Rational};

/// Dense row-major matrix over the cyclotomic numbers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

pub fn mat_arith(a: &Matrix, b: &Matrix, op: MatOp) -> Result<Matrix> {
    match op {
        MatOp::Add => a.add(b),
        MatOp::Sub => a.sub(b),
        MatOp::Mul => a.mul(b),
    }
}

pub fn mat_inverse(a: &Matrix) -> Result<Matrix> {
    a.inverse()
}

pub fn rank_and_kernel_dim(a: &Matrix) -> (usize, usize) {
    let r = a.rank();
    (r, a.cols - r)
}

pub fn charpoly(a: &Matrix) -> Result<Polynomial> {
    a.charpoly()
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Matrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| CycNum::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![CycNum::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::scalar(n, &CycNum::one())
    }

    pub fn scalar(n: usize, c: &CycNum) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(d: &[CycNum]) -> Matrix {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in d.iter().enumerate() {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Least common multiple of the entry conductors.
    pub fn conductor(&self) -> u64 {
        self.entries.iter().fold(1, |acc, e| lcm(acc, e.conductor()))
    }

    pub fn map(&self, f: impl Fn(&CycNum) -> CycNum) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&CycNum) -> Result<CycNum>) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = CycNum::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    pub fn scale(&self, c: &CycNum) -> Matrix {
        self.map(|e| e * c)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn trace(&self) -> CycNum {
        (0..self.rows.min(self.cols)).fold(CycNum::zero(), |acc, i| &acc + self.get(i, i))
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Row echelon form by elimination in index order. Returns the reduced
    /// rows, the pivot columns and the number of row swaps.
    fn echelon(&self) -> (Vec<Vec<CycNum>>, Vec<usize>, usize) {
        let mut m: Vec<Vec<CycNum>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            if p != row {
                m.swap(p, row);
                swaps += 1;
            }
            let inv = m[row][col].inv().expect("pivot is nonzero");
            for r in row + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                let (upper, lower) = m.split_at_mut(r);
                let pivot_row = &upper[row];
                for (x, p) in lower[0].iter_mut().zip(pivot_row).skip(col) {
                    if !p.is_zero() {
                        *x = &*x - &(&f * p);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, swaps)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn det(&self) -> Result<CycNum> {
        self.require_square()?;
        if self.rows == 2 {
            let ad = self.get(0, 0) * self.get(1, 1);
            let bc = self.get(0, 1) * self.get(1, 0);
            return Ok(&ad - &bc);
        }
        let (m, pivots, swaps) = self.echelon();
        if pivots.len() < self.rows {
            return Ok(CycNum::zero());
        }
        let mut d = (0..self.rows).fold(CycNum::one(), |acc, i| &acc * &m[i][i]);
        if swaps % 2 == 1 {
            d = -d;
        }
        Ok(d)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        if n == 2 {
            let det = self.det()?;
            if det.is_zero() {
                return Err(Error::NotInvertible);
            }
            let inv = det.inv()?;
            return Ok(Matrix {
                rows: 2,
                cols: 2,
                entries: vec![
                    self.get(1, 1) * &inv,
                    -(self.get(0, 1) * &inv),
                    -(self.get(1, 0) * &inv),
                    self.get(0, 0) * &inv,
                ],
            });
        }
        let mut aug: Vec<Vec<CycNum>> = (0..n)
            .map(|i| {
                let mut row = self.entries[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        CycNum::one()
                    } else {
                        CycNum::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::NotInvertible)?;
            aug.swap(col, p);
            let inv = aug[col][col].inv()?;
            for e in aug[col].iter_mut() {
                *e = &*e * &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *e = &*e - &(&f * p);
                    }
                }
            }
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            entries: aug.into_iter().flat_map(|row| row[n..].to_vec()).collect(),
        })
    }

    pub fn pow(&self, e: u64) -> Result<Matrix> {
        self.require_square()?;
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Characteristic polynomial det(xI - A), by the Faddeev-LeVerrier
    /// trace recursion.
    pub fn charpoly(&self) -> Result<Polynomial> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![CycNum::zero(); n + 1];
        coeffs[n] = CycNum::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let am = self.mul(&m)?;
            m = am.add(&Matrix::scalar(n, &coeffs[n - k + 1]))?;
            let t = self.mul(&m)?.trace();
            let kq = CycNum::from_rational(Rational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = &t * &kq;
        }
        Ok(Polynomial::new(coeffs))
    }

    /// The scalar c when the matrix equals c·I (square matrices only).
    pub fn as_scalar(&self) -> Option<CycNum> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    /// Row-major flattening, used as coordinates in the matrix algebra.
    pub fn to_vector(&self) -> Vec<CycNum> {
        self.entries.clone()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on incompatible shapes; use [`Matrix::mul`] for a checked product.
    fn mul(self, other: &Matrix) -> Matrix {
        Matrix::mul(self, other).expect("compatible shapes")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MatrixWire::deserialize(d)?;
        Matrix::new(w.rows, w.cols, w.entries).map_err(serde::de::Error::custom)
    }
}
