use serde::{Deserialize, Serialize};

use super::cycnum::CycNum;
use super::tables::gcd;
use crate::error::{Error, Result};

/// The automorphism ζ_n ↦ ζ_n^k of Q(ζ_n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GaloisElement {
    n: u64,
    k: u64,
}

impl GaloisElement {
    /// `k` is reduced modulo `n`; for n ≤ 2 the only automorphism is the
    /// identity, stored as k = 1.
    pub fn new(n: i64, k: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidConductor(n));
        }
        let reduced = k.rem_euclid(n) as u64;
        if gcd(reduced, n as u64) != 1 {
            return Err(Error::InvalidAutomorphism { n, k });
        }
        let k = if n <= 2 { 1 } else { reduced };
        Ok(GaloisElement { n: n as u64, k })
    }

    pub fn identity(n: u64) -> Self {
        GaloisElement { n: n.max(1), k: 1 }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    /// All φ(n) automorphisms of Q(ζ_n), ordered by exponent.
    pub fn all(n: u64) -> Vec<GaloisElement> {
        if n <= 2 {
            return vec![GaloisElement::identity(n)];
        }
        (1..n)
            .filter(|&k| gcd(k, n) == 1)
            .map(|k| GaloisElement { n, k })
            .collect()
    }

    pub fn compose(&self, other: &GaloisElement) -> Result<GaloisElement> {
        if self.n != other.n {
            return Err(Error::FieldMismatch(format!(
                "automorphisms of conductors {} and {}",
                self.n, other.n
            )));
        }
        GaloisElement::new(self.n as i64, ((self.k * other.k) % self.n.max(1)) as i64)
    }
}

impl<'de> Deserialize<'de> for GaloisElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            n: i64,
            k: i64,
        }
        let w = Wire::deserialize(d)?;
        GaloisElement::new(w.n, w.k).map_err(serde::de::Error::custom)
    }
}

/// Applies ζ_n ↦ ζ_n^k to `z`. The conductor of `z` must divide `n`.
pub fn galois_apply(z: &CycNum, g: &GaloisElement) -> Result<CycNum> {
    let m = z.conductor();
    if !g.n.is_multiple_of(m) {
        return Err(Error::FieldMismatch(format!(
            "element of conductor {m} is not in Q(ζ_{})",
            g.n
        )));
    }
    Ok(z.apply_unit(g.k as i64))
}
