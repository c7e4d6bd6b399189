//! Per-conductor lookup tables for arithmetic modulo cyclotomic polynomials.
//!
//! Tables are immutable once built and memoized per thread, so values can be
//! shared freely across threads while every thread keeps its own cache.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use super::rational::Rational;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Q(ζ_n) = Q(ζ_{2n}) for odd n; conductors are kept off the class 2 mod 4.
pub fn canonical_conductor(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// The n-th cyclotomic polynomial, monic, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

#[derive(Debug)]
pub struct CycloTable {
    pub phi: usize,
    /// `powers[e]` is ζ_n^e reduced modulo Φ_n, for 0 ≤ e < n.
    pub powers: Vec<Vec<i64>>,
}

impl CycloTable {
    fn build(n: u64) -> Self {
        let phi_poly = cyclotomic_poly(n);
        let phi = phi_poly.len() - 1;
        let mut powers: Vec<Vec<i64>> = Vec::with_capacity(n as usize);
        for e in 0..n as usize {
            if e < phi {
                let mut v = vec![0i64; phi];
                v[e] = 1;
                powers.push(v);
            } else {
                let prev = &powers[e - 1];
                let top = prev[phi - 1];
                let mut v = vec![0i64; phi];
                v[1..phi].copy_from_slice(&prev[..phi - 1]);
                if top != 0 {
                    for (i, slot) in v.iter_mut().enumerate() {
                        *slot -= top * phi_poly[i];
                    }
                }
                powers.push(v);
            }
        }
        CycloTable { phi, powers }
    }

    /// Adds `c · ζ_n^e` into `acc` (length φ(n)).
    pub fn add_monomial(&self, acc: &mut [Rational], e: usize, c: &Rational) {
        let e = e % self.powers.len();
        if e < self.phi {
            acc[e] += c;
            return;
        }
        for (slot, &k) in acc.iter_mut().zip(&self.powers[e]) {
            match k {
                0 => {}
                1 => *slot += c,
                -1 => *slot -= c,
                k => *slot += c * Rational::from_integer(k.into()),
            }
        }
    }
}

/// Linear data to rewrite an element of Q(ζ_n) lying in Q(ζ_d), d | n, in
/// the power basis of ζ_d.
#[derive(Debug)]
pub struct Descent {
    /// Image of ζ_d^i in the ζ_n power basis.
    basis: Vec<Vec<i64>>,
    /// When every basis image is a unit vector: its position.
    unit_positions: Option<Vec<usize>>,
    pivots: Vec<usize>,
    inverse: Vec<Vec<Rational>>,
}

impl Descent {
    fn build(n: u64, d: u64) -> Self {
        let big = table(n);
        let small_phi = euler_phi(d) as usize;
        let step = (n / d) as usize;
        let basis: Vec<Vec<i64>> = (0..small_phi)
            .map(|i| big.powers[(i * step) % n as usize].clone())
            .collect();
        let unit_positions = basis
            .iter()
            .map(|b| {
                let nz: Vec<usize> = (0..b.len()).filter(|&j| b[j] != 0).collect();
                (nz.len() == 1 && b[nz[0]] == 1).then(|| nz[0])
            })
            .collect::<Option<Vec<usize>>>();
        let (pivots, inverse) = if unit_positions.is_some() {
            (Vec::new(), Vec::new())
        } else {
            pivot_inverse(&basis, big.phi)
        };
        Descent {
            basis,
            unit_positions,
            pivots,
            inverse,
        }
    }

    /// Coordinates in the ζ_d basis when `x` lies in Q(ζ_d).
    pub fn try_descend(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        if let Some(pos) = &self.unit_positions {
            let mut used = vec![false; x.len()];
            for &p in pos {
                used[p] = true;
            }
            if x.iter().zip(&used).any(|(c, &u)| !u && !c.is_zero()) {
                return None;
            }
            return Some(pos.iter().map(|&p| x[p].clone()).collect());
        }
        let y: Vec<Rational> = self
            .inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.pivots)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, &p)| acc + a * &x[p])
            })
            .collect();
        let mut back = vec![Rational::zero(); x.len()];
        for (yi, b) in y.iter().zip(&self.basis) {
            if yi.is_zero() {
                continue;
            }
            for (slot, &k) in back.iter_mut().zip(b) {
                if k != 0 {
                    *slot += yi * Rational::from_integer(k.into());
                }
            }
        }
        (back.as_slice() == x).then_some(y)
    }
}

/// Picks independent rows of the `rows × cols` matrix whose columns are
/// `basis`, and inverts the resulting square submatrix.
fn pivot_inverse(basis: &[Vec<i64>], rows: usize) -> (Vec<usize>, Vec<Vec<Rational>>) {
    let cols = basis.len();
    let entry = |r: usize, c: usize| Rational::from_integer(basis[c][r].into());
    // Greedy row selection by incremental elimination.
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut pivots = Vec::new();
    for r in 0..rows {
        if pivots.len() == cols {
            break;
        }
        let mut v: Vec<Rational> = (0..cols).map(|c| entry(r, c)).collect();
        for (pc, ev) in &echelon {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone() / &ev[*pc];
                for (a, b) in v.iter_mut().zip(ev) {
                    *a -= &f * b;
                }
            }
        }
        if let Some(pc) = v.iter().position(|a| !a.is_zero()) {
            echelon.push((pc, v));
            pivots.push(r);
        }
    }
    assert_eq!(pivots.len(), cols, "subfield basis must be independent");
    // Gauss-Jordan on [S | I].
    let mut aug: Vec<Vec<Rational>> = pivots
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut row: Vec<Rational> = (0..cols).map(|c| entry(r, c)).collect();
            row.extend((0..cols).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..cols {
        let p = (c..cols).find(|&i| !aug[i][c].is_zero()).expect("invertible");
        aug.swap(c, p);
        let inv = Rational::one() / &aug[c][c];
        for a in aug[c].iter_mut() {
            *a *= &inv;
        }
        for i in 0..cols {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                let pivot_row = aug[c].clone();
                for (a, b) in aug[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
    }
    let inverse = aug.into_iter().map(|row| row[cols..].to_vec()).collect();
    (pivots, inverse)
}

thread_local! {
    static TABLES: RefCell<HashMap<u64, Rc<CycloTable>>> = RefCell::new(HashMap::new());
    static DESCENTS: RefCell<HashMap<(u64, u64), Rc<Descent>>> = RefCell::new(HashMap::new());
}

pub fn table(n: u64) -> Rc<CycloTable> {
    if let Some(t) = TABLES.with(|m| m.borrow().get(&n).cloned()) {
        return t;
    }
    let t = Rc::new(CycloTable::build(n));
    TABLES.with(|m| m.borrow_mut().insert(n, t.clone()));
    t
}

pub fn descent(n: u64, d: u64) -> Rc<Descent> {
    if let Some(t) = DESCENTS.with(|m| m.borrow().get(&(n, d)).cloned()) {
        return t;
    }
    let t = Rc::new(Descent::build(n, d));
    DESCENTS.with(|m| m.borrow_mut().insert((n, d), t.clone()));
    t
}
