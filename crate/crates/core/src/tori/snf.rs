//! Diagonal (Smith-type) form of integer matrices with unimodular
//! transforms, and the rational congruence solver built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactfield::rational::frac;
use crate::exactfield::Rational;

/// P·A·Q = diag(d_1, …, d_rank, 0, …) with P, Q unimodular and d_i > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
    pub d: Vec<BigInt>,
}

impl Diagonalization {
    pub fn rank(&self) -> usize {
        self.d.len()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    let src_row = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&src_row) {
        *x -= f * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] -= f * y;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Diagonalizes an m×n integer matrix (`cols` is n, needed when m = 0).
pub fn diagonalize(a: &[Vec<i64>], cols: usize) -> Diagonalization {
    let m = a.len();
    let n = cols;
    let mut w: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut p = identity(m);
    let mut q = identity(n);
    let mut d = Vec::new();

    for t in 0..m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| w[i][j].abs() < w[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap(t, bi);
        p.swap(t, bi);
        swap_cols(&mut w, t, bj);
        swap_cols(&mut q, t, bj);

        loop {
            let mut done = true;
            for i in t + 1..m {
                if w[i][t].is_zero() {
                    continue;
                }
                let f = w[i][t].div_floor(&w[t][t]);
                row_axpy(&mut w, i, t, &f);
                row_axpy(&mut p, i, t, &f);
                if !w[i][t].is_zero() {
                    // remainder is smaller than the pivot
                    w.swap(t, i);
                    p.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..n {
                if w[t][j].is_zero() {
                    continue;
                }
                let f = w[t][j].div_floor(&w[t][t]);
                col_axpy(&mut w, j, t, &f);
                col_axpy(&mut q, j, t, &f);
                if !w[t][j].is_zero() {
                    swap_cols(&mut w, t, j);
                    swap_cols(&mut q, t, j);
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w[t][t].is_negative() {
            for x in w[t].iter_mut() {
                *x = -&*x;
            }
            for x in p[t].iter_mut() {
                *x = -&*x;
            }
        }
        d.push(w[t][t].clone());
    }
    Diagonalization { p, q, d }
}

/// Some τ ∈ [0, 1)^n with L·τ ≡ θ (mod Z^m), or `None` when there is none.
pub fn solve_congruence(l: &[Vec<i64>], theta: &[Rational], n: usize) -> Option<Vec<Rational>> {
    debug_assert_eq!(l.len(), theta.len());
    let dz = diagonalize(l, n);
    let p_theta: Vec<Rational> = dz
        .p
        .iter()
        .map(|row| {
            row.iter()
                .zip(theta)
                .fold(Rational::zero(), |acc, (pij, t)| acc + t * Rational::from_integer(pij.clone()))
        })
        .collect();
    let rank = dz.rank();
    if p_theta[rank..].iter().any(|x| !x.is_integer()) {
        return None;
    }
    let mut y = vec![Rational::zero(); n];
    for i in 0..rank {
        y[i] = &p_theta[i] / Rational::from_integer(dz.d[i].clone());
    }
    let tau = dz
        .q
        .iter()
        .map(|row| {
            let v = row
                .iter()
                .zip(&y)
                .fold(Rational::zero(), |acc, (qij, yj)| acc + yj * Rational::from_integer(qij.clone()));
            frac(&v)
        })
        .collect();
    Some(tau)
}
