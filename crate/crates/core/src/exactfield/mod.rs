//! Exact arithmetic in cyclotomic fields Q(ζ_n), root-of-unity recognition
//! and the automorphisms ζ_n ↦ ζ_n^k.

mod cycnum;
mod galois;
pub mod rational;
pub(crate) mod tables;

pub use cycnum::{cyc_arith, ArithOp, CycNum};
pub use galois::{galois_apply, GaloisElement};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use tables::{euler_phi, lcm};

/// Least m with z^m = 1 when z is a root of unity.
pub fn root_of_unity_order(z: &CycNum) -> Option<u64> {
    z.root_of_unity_order()
}

/// Shorthand for `CycNum::new`.
pub fn cyc_make(coeffs: Vec<Rational>, n: i64) -> crate::Result<CycNum> {
    CycNum::new(coeffs, n)
}
