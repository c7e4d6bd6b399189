//! Exact dense linear algebra over cyclotomic numbers for small matrices.

mod matrix;
mod poly;
mod roots;

pub use matrix::{charpoly, mat_arith, mat_inverse, rank_and_kernel_dim, MatOp, Matrix};
pub use poly::Polynomial;
pub use roots::{candidate_conductors, split_roots, RootSearch};

use crate::exactfield::CycNum;

/// Eigenvalue multiset (sorted canonically) when the characteristic
/// polynomial splits over the cyclotomic fields near the matrix's own field.
pub fn eigenvalues_split(a: &Matrix) -> Option<Vec<CycNum>> {
    eigenvalues_split_with(a, &RootSearch::default())
}

pub fn eigenvalues_split_with(a: &Matrix, search: &RootSearch) -> Option<Vec<CycNum>> {
    split_roots(&a.charpoly().ok()?, search)
}
