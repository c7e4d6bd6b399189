//! Torsion-translated subtori of (C*)^N in additive (exponent) coordinates:
//! a point e^{2πi q} is encoded by q ∈ (Q/Z)^N.

mod coset;
mod formula;
pub mod snf;

pub use coset::{coset_intersect, coset_membership, enumerate_torsion, monomial_preimage, TorsionCoset};
pub use formula::{component_locus_formula, formula_eval, nonsimple_locus_formula, TorusFormula};

/// Default cap on the number of grid points scanned by [`enumerate_torsion`].
pub const DEFAULT_GRID_CAP: u64 = 1 << 22;
