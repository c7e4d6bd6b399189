//! Exact computations with monodromy tuples on the punctured projective line.
//!
//! The scalar universe is the union of the cyclotomic fields Q(ζ_n)
//! ([`exactfield`]). On top of it sit small dense linear algebra
//! ([`linalg`]), analysis of monodromy tuples ([`monodromy`]), explicit rank-2
//! moduli coordinates and the inverse construction of rigid tuples
//! ([`moduli`]), residue bookkeeping for logarithmic connections on curves
//! ([`derham`]), Galois conjugation ([`galois`]) and torsion-translated
//! subtori of algebraic tori ([`tori`]).

pub mod derham;
mod error;
pub mod exactfield;
pub mod galois;
pub mod linalg;
pub mod moduli;
pub mod monodromy;
pub mod tori;

pub use error::{Error, ErrorClass, Result};
pub use exactfield::{CycNum, GaloisElement, Rational};
pub use linalg::{Matrix, Polynomial};
