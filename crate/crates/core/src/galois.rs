//! Two Galois actions on local systems: conjugating matrix entries, and
//! transport through residues (which fixes rational residue data), together
//! with the torsion test for absolute-point candidates.

use serde::{Deserialize, Serialize};

use crate::derham::ResidueData;
use crate::exactfield::{galois_apply, GaloisElement};
use crate::linalg::RootSearch;
use crate::monodromy::{det_data, mon_with, rank2_classify, EigenData, MonodromyTuple};
use crate::{Error, Result};

/// Applies σ to every matrix entry.
pub fn conjugate_tuple_naive(t: &MonodromyTuple, g: &GaloisElement) -> Result<MonodromyTuple> {
    let matrices = t
        .matrices()
        .iter()
        .map(|m| m.try_map(|z| galois_apply(z, g)))
        .collect::<Result<Vec<_>>>()?;
    MonodromyTuple::new(matrices)
}

/// Applies σ to every eigenvalue.
pub fn conjugate_eigen(e: &EigenData, g: &GaloisElement) -> Result<EigenData> {
    e.map(|z| galois_apply(z, g))
}

/// Transport of Deligne residues. σ fixes Q, so rational residues and the
/// resulting local monodromy eigenvalues are unchanged.
pub fn transport_residues(rd: &ResidueData, _g: &GaloisElement) -> ResidueData {
    rd.clone()
}

/// Orbit of `e` under Gal(Q(ζ_n)/Q), n the conductor of its entries, sorted
/// and without repetitions.
pub fn galois_orbit_eigen(e: &EigenData) -> Vec<EigenData> {
    let mut orbit: Vec<EigenData> = GaloisElement::all(e.conductor())
        .iter()
        .map(|g| conjugate_eigen(e, g).expect("conductor divides n"))
        .collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbsoluteKind {
    AbsolutePointCandidate,
    NotAbsolute,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AbsoluteVerdict {
    pub is_rigid: bool,
    pub det_torsion: bool,
    pub mon_torsion: bool,
    pub verdict: AbsoluteKind,
}

/// A rank-2 tuple is an absolute-point candidate when it is rigid and both
/// det(L) and all local monodromies are quasi-unipotent.
pub fn absolute_point_test(t: &MonodromyTuple) -> Result<AbsoluteVerdict> {
    absolute_point_test_with(t, &RootSearch::default())
}

pub fn absolute_point_test_with(t: &MonodromyTuple, search: &RootSearch) -> Result<AbsoluteVerdict> {
    if t.rank() != 2 {
        return Err(Error::Shape(format!("rank 2 required, got {}", t.rank())));
    }
    let eigen = mon_with(t, search).eigen.ok_or_else(|| {
        Error::Indeterminate("characteristic polynomials do not split".into())
    })?;
    let is_rigid = match rank2_classify(t) {
        Ok(c) => c.rigid,
        Err(Error::NotApplicable(_)) => false,
        Err(e) => return Err(e),
    };
    let det_torsion = det_data(t).iter().all(|d| d.root_of_unity_order().is_some());
    let mon_torsion = eigen
        .points()
        .iter()
        .flatten()
        .all(|z| z.root_of_unity_order().is_some());
    let verdict = if is_rigid && det_torsion && mon_torsion {
        AbsoluteKind::AbsolutePointCandidate
    } else {
        AbsoluteKind::NotAbsolute
    };
    Ok(AbsoluteVerdict {
        is_rigid,
        det_torsion,
        mon_torsion,
        verdict,
    })
}
