use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::solve_congruence;
use crate::exactfield::rational::{frac, RationalWire};
use crate::exactfield::Rational;
use crate::{Error, Result};

/// {q ∈ (Q/Z)^N : ⟨q − τ, v⟩ ∈ Z for every row v of L}.
///
/// Rows need not span a saturated lattice, so finite subgroups such as
/// {x² = 1} are single cosets. An empty coset has no translate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "CosetWire", into = "CosetWire")]
pub struct TorsionCoset {
    n: usize,
    l: Vec<Vec<i64>>,
    tau: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosetWire {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: Vec<Vec<i64>>,
    pub tau: Option<Vec<RationalWire>>,
}

impl TryFrom<CosetWire> for TorsionCoset {
    type Error = Error;

    fn try_from(w: CosetWire) -> Result<Self> {
        match w.tau {
            Some(t) => TorsionCoset::new(w.n, w.l, t.into_iter().map(|x| x.0).collect()),
            None => {
                TorsionCoset::new(w.n, w.l, vec![Rational::zero(); w.n])?;
                Ok(TorsionCoset::empty(w.n))
            }
        }
    }
}

impl From<TorsionCoset> for CosetWire {
    fn from(c: TorsionCoset) -> Self {
        CosetWire {
            n: c.n,
            l: c.l,
            tau: c.tau.map(|t| t.into_iter().map(RationalWire).collect()),
        }
    }
}

impl TorsionCoset {
    pub fn new(n: usize, l: Vec<Vec<i64>>, tau: Vec<Rational>) -> Result<TorsionCoset> {
        if n == 0 {
            return Err(Error::Shape("ambient dimension must be positive".into()));
        }
        if tau.len() != n {
            return Err(Error::Shape(format!("translate has length {}, expected {n}", tau.len())));
        }
        if let Some(row) = l.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!("relation row has length {}, expected {n}", row.len())));
        }
        let tau = tau.iter().map(frac).collect();
        Ok(TorsionCoset { n, l, tau: Some(tau) })
    }

    /// Coset {z^v = 1 for all rows v}.
    pub fn subgroup(n: usize, l: Vec<Vec<i64>>) -> Result<TorsionCoset> {
        TorsionCoset::new(n, l, vec![Rational::zero(); n])
    }

    /// The whole torus.
    pub fn full(n: usize) -> TorsionCoset {
        TorsionCoset { n, l: Vec::new(), tau: Some(vec![Rational::zero(); n]) }
    }

    /// The canonical empty coset in dimension n.
    pub fn empty(n: usize) -> TorsionCoset {
        TorsionCoset { n, l: Vec::new(), tau: None }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.l
    }

    pub fn translate(&self) -> Option<&[Rational]> {
        self.tau.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_none()
    }

    /// ⟨τ, v⟩ for each relation row: the right-hand sides L·τ.
    fn rhs(&self) -> Option<Vec<Rational>> {
        let tau = self.tau.as_ref()?;
        Some(self.l.iter().map(|v| dot(v, tau)).collect())
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Shape(format!("point has length {len}, coset lives in dimension {}", self.n)));
        }
        Ok(())
    }
}

fn dot(v: &[i64], q: &[Rational]) -> Rational {
    v.iter()
        .zip(q)
        .filter(|(a, _)| **a != 0)
        .fold(Rational::zero(), |acc, (a, x)| acc + x * Rational::from_integer((*a).into()))
}

pub fn coset_membership(q: &[Rational], c: &TorsionCoset) -> Result<bool> {
    c.check_dim(q.len())?;
    let Some(tau) = &c.tau else { return Ok(false) };
    let diff: Vec<Rational> = q.iter().zip(tau).map(|(a, b)| a - b).collect();
    Ok(c.l.iter().all(|v| dot(v, &diff).is_integer()))
}

pub fn coset_intersect(a: &TorsionCoset, b: &TorsionCoset) -> Result<TorsionCoset> {
    if a.n != b.n {
        return Err(Error::Shape(format!("dimensions {} and {} differ", a.n, b.n)));
    }
    let (Some(ra), Some(rb)) = (a.rhs(), b.rhs()) else {
        return Ok(TorsionCoset::empty(a.n));
    };
    let l: Vec<Vec<i64>> = a.l.iter().chain(&b.l).cloned().collect();
    let theta: Vec<Rational> = ra.into_iter().chain(rb).collect();
    Ok(match solve_congruence(&l, &theta, a.n) {
        Some(tau) => TorsionCoset { n: a.n, l, tau: Some(tau) },
        None => TorsionCoset::empty(a.n),
    })
}

/// Preimage of `c` ⊂ (C*)^M under z ↦ (z^{A_1}, …, z^{A_M}) for an M×N
/// integer matrix A: relations become rows v·A.
pub fn monomial_preimage(c: &TorsionCoset, a: &[Vec<i64>]) -> Result<TorsionCoset> {
    if a.len() != c.n {
        return Err(Error::Shape(format!("map has {} rows, coset dimension is {}", a.len(), c.n)));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("map matrix rows must have equal positive length".into()));
    }
    let Some(theta) = c.rhs() else {
        return Ok(TorsionCoset::empty(n));
    };
    let overflow = || Error::Arithmetic("relation entries overflow i64".into());
    let mut l = Vec::with_capacity(c.l.len());
    for v in &c.l {
        let mut row = vec![0i64; n];
        for (vi, ai) in v.iter().zip(a) {
            for (x, aij) in row.iter_mut().zip(ai) {
                *x = vi.checked_mul(*aij).and_then(|p| x.checked_add(p)).ok_or_else(overflow)?;
            }
        }
        l.push(row);
    }
    Ok(match solve_congruence(&l, &theta, n) {
        Some(tau) => TorsionCoset { n, l, tau: Some(tau) },
        None => TorsionCoset::empty(n),
    })
}

/// All points of (1/B)Z^N / Z^N on the coset, B = `order_bound`, in
/// lexicographic order. Fails when the grid has more than `cap` points.
pub fn enumerate_torsion(c: &TorsionCoset, order_bound: u64, cap: u64) -> Result<Vec<Vec<Rational>>> {
    if order_bound == 0 {
        return Err(Error::Shape("order bound must be positive".into()));
    }
    let size = (order_bound as u128).checked_pow(c.n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::BudgetExceeded(format!(
            "grid of {size} points exceeds the cap of {cap}"
        )));
    }
    let Some(rhs) = c.rhs() else { return Ok(Vec::new()) };
    let b = order_bound as i128;
    // ⟨k/B − τ, v⟩ ∈ Z  ⇔  ⟨k, v⟩·den ≡ num·B (mod B·den), with ⟨τ, v⟩ = num/den
    let checks: Vec<(Vec<i128>, i128, i128)> = c
        .l
        .iter()
        .zip(&rhs)
        .map(|(v, t)| {
            let t = frac(t);
            let num = t.numer().to_i128().expect("small translate");
            let den = t.denom().to_i128().expect("small translate");
            (v.iter().map(|&x| x as i128).collect(), num * b, b * den)
        })
        .collect();
    let mut out = Vec::new();
    let mut k = vec![0i128; c.n];
    loop {
        let ok = checks.iter().all(|(v, target, modulus)| {
            let den = modulus / b;
            let s: i128 = v.iter().zip(&k).map(|(x, y)| x * y).sum();
            (s * den - target).rem_euclid(*modulus) == 0
        });
        if ok {
            out.push(k.iter().map(|&x| Rational::new((x as i64).into(), (b as i64).into())).collect());
        }
        // odometer, last coordinate fastest
        let mut i = c.n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            k[i] += 1;
            if k[i] < b {
                break;
            }
            k[i] = 0;
        }
    }
}
