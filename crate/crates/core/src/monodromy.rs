//! Monodromy tuples on the projective line minus s points: validation,
//! irreducibility, centralizers, the Katz count and the rank-2
//! classification by non-scalar local monodromies.

use serde::{Deserialize, Serialize};

use crate::exactfield::{lcm, CycNum};
use crate::linalg::{eigenvalues_split_with, Matrix, Polynomial, RootSearch};
use crate::{Error, Result};

/// Matrices g_1, …, g_s with g_1⋯g_s = I.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "TupleWire", into = "TupleWire")]
pub struct MonodromyTuple {
    r: usize,
    matrices: Vec<Matrix>,
}

/// Unvalidated wire form of a tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleWire {
    pub r: usize,
    pub s: usize,
    pub matrices: Vec<Matrix>,
}

impl TryFrom<TupleWire> for MonodromyTuple {
    type Error = Error;

    fn try_from(w: TupleWire) -> Result<Self> {
        if w.s != w.matrices.len() {
            return Err(Error::Shape(format!(
                "s = {} but {} matrices given",
                w.s,
                w.matrices.len()
            )));
        }
        let t = MonodromyTuple::new(w.matrices)?;
        if t.r != w.r {
            return Err(Error::Shape(format!("r = {} but matrices are {}x{}", w.r, t.r, t.r)));
        }
        Ok(t)
    }
}

impl From<MonodromyTuple> for TupleWire {
    fn from(t: MonodromyTuple) -> Self {
        TupleWire {
            r: t.r,
            s: t.matrices.len(),
            matrices: t.matrices,
        }
    }
}

impl MonodromyTuple {
    /// Validates shape, invertibility and the product relation.
    pub fn new(matrices: Vec<Matrix>) -> Result<MonodromyTuple> {
        if matrices.len() < 3 {
            return Err(Error::Shape(format!(
                "at least 3 punctures required, got {}",
                matrices.len()
            )));
        }
        let r = matrices[0].rows();
        for (i, g) in matrices.iter().enumerate() {
            if g.rows() != r || g.cols() != r {
                return Err(Error::Shape(format!(
                    "matrix {} is {}x{}, expected {r}x{r}",
                    i + 1,
                    g.rows(),
                    g.cols()
                )));
            }
        }
        for g in &matrices {
            if g.det()?.is_zero() {
                return Err(Error::NotInvertible);
            }
        }
        let prod = matrices
            .iter()
            .skip(1)
            .fold(matrices[0].clone(), |acc, g| &acc * g);
        if prod != Matrix::identity(r) {
            return Err(Error::RelationViolation(format!(
                "g_1 ... g_s = {prod:?}"
            )));
        }
        Ok(MonodromyTuple { r, matrices })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn punctures(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<Matrix> {
        self.matrices
    }

    /// Conductor of the smallest cyclotomic field containing all entries.
    pub fn conductor(&self) -> u64 {
        self.matrices.iter().fold(1, |acc, g| lcm(acc, g.conductor()))
    }

    /// (h g_1 h⁻¹, …, h g_s h⁻¹).
    pub fn conjugate_by(&self, h: &Matrix) -> Result<MonodromyTuple> {
        if h.rows() != self.r || h.cols() != self.r {
            return Err(Error::Shape("conjugating matrix has the wrong size".into()));
        }
        let hinv = h.inverse()?;
        let matrices = self.matrices.iter().map(|g| &(h * g) * &hinv).collect();
        Ok(MonodromyTuple {
            r: self.r,
            matrices,
        })
    }
}

pub fn validate_tuple(matrices: Vec<Matrix>) -> Result<MonodromyTuple> {
    MonodromyTuple::new(matrices)
}

/// Per-point eigenvalue multisets, each stored in canonical sorted order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "EigenWire", into = "EigenWire")]
pub struct EigenData {
    r: usize,
    points: Vec<Vec<CycNum>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenWire {
    pub r: usize,
    pub s: usize,
    pub points: Vec<Vec<CycNum>>,
}

impl TryFrom<EigenWire> for EigenData {
    type Error = Error;

    fn try_from(w: EigenWire) -> Result<Self> {
        if w.s != w.points.len() {
            return Err(Error::Shape(format!(
                "s = {} but {} points given",
                w.s,
                w.points.len()
            )));
        }
        EigenData::new(w.r, w.points)
    }
}

impl From<EigenData> for EigenWire {
    fn from(e: EigenData) -> Self {
        EigenWire {
            r: e.r,
            s: e.points.len(),
            points: e.points,
        }
    }
}

impl EigenData {
    pub fn new(r: usize, points: Vec<Vec<CycNum>>) -> Result<EigenData> {
        if r == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        let mut points = points;
        for (i, p) in points.iter_mut().enumerate() {
            if p.len() != r {
                return Err(Error::Shape(format!(
                    "point {} has {} eigenvalues, expected {r}",
                    i + 1,
                    p.len()
                )));
            }
            if p.iter().any(CycNum::is_zero) {
                return Err(Error::NotOnModuli(format!("zero eigenvalue at point {}", i + 1)));
            }
            p.sort();
        }
        Ok(EigenData { r, points })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn punctures(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<CycNum>] {
        &self.points
    }

    /// Eigenvalues at the 1-based point `i`.
    pub fn point(&self, i: usize) -> &[CycNum] {
        &self.points[i - 1]
    }

    pub fn conductor(&self) -> u64 {
        self.points
            .iter()
            .flatten()
            .fold(1, |acc, z| lcm(acc, z.conductor()))
    }

    /// Product of all r·s eigenvalues.
    pub fn total_product(&self) -> CycNum {
        self.points
            .iter()
            .flatten()
            .fold(CycNum::one(), |acc, z| &acc * z)
    }

    pub fn map(&self, f: impl Fn(&CycNum) -> Result<CycNum>) -> Result<EigenData> {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        EigenData::new(self.r, points)
    }
}

/// dim {X : XA = AX}, the kernel dimension of X ↦ XA − AX on r×r matrices.
pub fn centralizer_dim(a: &Matrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Shape("centralizer of a non-square matrix".into()));
    }
    let r = a.rows();
    let n = r * r;
    let mut op = Matrix::zeros(n, n);
    // row (i,j) of XA − AX, column (p,q) of X
    for i in 0..r {
        for j in 0..r {
            for p in 0..r {
                for q in 0..r {
                    let mut v = CycNum::zero();
                    if p == i {
                        v = &v + a.get(q, j);
                    }
                    if q == j {
                        v = &v - a.get(i, p);
                    }
                    if !v.is_zero() {
                        op.set(i * r + j, p * r + q, v);
                    }
                }
            }
        }
    }
    Ok(op.kernel_dim())
}

/// Incrementally maintained echelon basis of a subspace of K^n.
struct SpanBasis {
    rows: Vec<(usize, Vec<CycNum>)>,
}

impl SpanBasis {
    fn new() -> Self {
        SpanBasis { rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent; returns whether it was added.
    fn insert(&mut self, mut v: Vec<CycNum>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero pivot");
        let v: Vec<CycNum> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let f = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Dimension of the algebra generated by the g_i and g_i⁻¹.
pub fn generated_algebra_dim(t: &MonodromyTuple) -> usize {
    let r = t.rank();
    let mut gens: Vec<Matrix> = Vec::new();
    for g in t.matrices() {
        if g.as_scalar().is_none() {
            gens.push(g.clone());
            gens.push(g.inverse().expect("validated tuple"));
        }
    }
    let mut basis = SpanBasis::new();
    basis.insert(Matrix::identity(r).to_vector());
    let mut frontier = vec![Matrix::identity(r)];
    while !frontier.is_empty() && basis.dim() < r * r {
        let mut next = Vec::new();
        for b in &frontier {
            for g in &gens {
                let w = g * b;
                if basis.insert(w.to_vector()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    basis.dim()
}

/// Burnside: irreducible iff the g_i generate the full matrix algebra.
pub fn is_irreducible(t: &MonodromyTuple) -> bool {
    generated_algebra_dim(t) == t.rank() * t.rank()
}

/// Rank 2 only: whether all g_i share an eigenvector.
///
/// An eigenvector (t, 1) of [[a, b], [c, d]] solves c t² + (d − a) t − b = 0,
/// and (1, 0) is one iff c = 0.
pub fn common_eigenvector_rank2(t: &MonodromyTuple) -> Result<bool> {
    if t.rank() != 2 {
        return Err(Error::Shape("common eigenvector test needs rank 2".into()));
    }
    let nonscalar: Vec<&Matrix> = t
        .matrices()
        .iter()
        .filter(|g| g.as_scalar().is_none())
        .collect();
    if nonscalar.iter().all(|g| g.get(1, 0).is_zero()) {
        return Ok(true);
    }
    let mut acc: Option<Polynomial> = None;
    for g in nonscalar {
        let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
        let p = Polynomial::new(vec![-b, d - a, c.clone()]);
        acc = Some(match acc {
            None => p.monic(),
            Some(q) => q.gcd(&p),
        });
    }
    Ok(acc.and_then(|p| p.degree()).is_some_and(|d| d >= 1))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityVerdict {
    Rigid,
    NotRigid,
    NotApplicable,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RigidityReport {
    pub centralizer_dims: Vec<usize>,
    pub sum: i64,
    pub threshold: i64,
    pub defect: i64,
    pub is_irreducible: bool,
    pub verdict: RigidityVerdict,
}

/// Katz count: an irreducible tuple is rigid iff Σ dim Z_i = (s − 2) r² + 2.
pub fn katz_report(t: &MonodromyTuple) -> RigidityReport {
    let dims: Vec<usize> = t
        .matrices()
        .iter()
        .map(|g| centralizer_dim(g).expect("square"))
        .collect();
    let sum = dims.iter().sum::<usize>() as i64;
    let r = t.rank() as i64;
    let threshold = (t.punctures() as i64 - 2) * r * r + 2;
    let defect = threshold - sum;
    let irreducible = is_irreducible(t);
    let verdict = match (irreducible, defect == 0) {
        (false, _) => RigidityVerdict::NotApplicable,
        (true, true) => RigidityVerdict::Rigid,
        (true, false) => RigidityVerdict::NotRigid,
    };
    RigidityReport {
        centralizer_dims: dims,
        sum,
        threshold,
        defect,
        is_irreducible: irreducible,
        verdict,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Rank2Classification {
    /// 1-based indices of points with non-scalar local monodromy.
    pub nonscalar_points: Vec<usize>,
    pub rigid: bool,
    pub component_triple: Option<[usize; 3]>,
}

/// 1-based indices of the non-scalar g_i.
pub fn nonscalar_points(t: &MonodromyTuple) -> Vec<usize> {
    t.matrices()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.as_scalar().is_none())
        .map(|(i, _)| i + 1)
        .collect()
}

/// An irreducible rank-2 tuple is rigid iff exactly three local monodromies
/// are non-scalar; that triple names its component.
pub fn rank2_classify(t: &MonodromyTuple) -> Result<Rank2Classification> {
    if t.rank() != 2 {
        return Err(Error::Shape(format!("rank 2 required, got {}", t.rank())));
    }
    if !is_irreducible(t) {
        return Err(Error::NotApplicable("tuple is reducible".into()));
    }
    let ns = nonscalar_points(t);
    let rigid = ns.len() == 3;
    let component_triple = rigid.then(|| [ns[0], ns[1], ns[2]]);
    Ok(Rank2Classification {
        nonscalar_points: ns,
        rigid,
        component_triple,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MonData {
    pub charpolys: Vec<Polynomial>,
    pub eigen: Option<EigenData>,
}

/// Characteristic polynomials of the local monodromies, and their roots when
/// all of them split.
pub fn mon(t: &MonodromyTuple) -> MonData {
    mon_with(t, &RootSearch::default())
}

pub fn mon_with(t: &MonodromyTuple, search: &RootSearch) -> MonData {
    let search = RootSearch {
        extra_conductor: lcm(search.extra_conductor.max(1), t.conductor()),
        ..*search
    };
    let charpolys: Vec<Polynomial> = t
        .matrices()
        .iter()
        .map(|g| g.charpoly().expect("square"))
        .collect();
    let eigen = t
        .matrices()
        .iter()
        .map(|g| eigenvalues_split_with(g, &search))
        .collect::<Option<Vec<_>>>()
        .and_then(|pts| EigenData::new(t.rank(), pts).ok());
    MonData { charpolys, eigen }
}

/// (det g_1, …, det g_s): the local monodromies of det(L).
pub fn det_data(t: &MonodromyTuple) -> Vec<CycNum> {
    t.matrices()
        .iter()
        .map(|g| g.det().expect("square"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre() -> MonodromyTuple {
        MonodromyTuple::new(vec![
            Matrix::from_i64(&[&[1, -1], &[4, -3]]),
            Matrix::from_i64(&[&[1, 1], &[0, 1]]),
            Matrix::from_i64(&[&[1, 0], &[-4, 1]]),
        ])
        .unwrap()
    }

    #[test]
    fn validation() {
        let i = Matrix::identity(2);
        assert!(MonodromyTuple::new(vec![i.clone(), i.clone(), i.clone()]).is_ok());
        assert!(matches!(
            MonodromyTuple::new(vec![i.clone(), i.clone()]),
            Err(Error::Shape(_))
        ));
        let two = Matrix::scalar(2, &CycNum::from_int(2));
        assert!(matches!(
            MonodromyTuple::new(vec![two.clone(), i.clone(), i.clone()]),
            Err(Error::RelationViolation(_))
        ));
        let sing = Matrix::from_i64(&[&[1, 1], &[0, 0]]);
        assert_eq!(
            MonodromyTuple::new(vec![sing, i.clone(), i]),
            Err(Error::NotInvertible)
        );
        legendre();
    }

    #[test]
    fn centralizers() {
        let a = CycNum::root_of_unity(1, 3);
        let b = CycNum::from_int(-2);
        assert_eq!(centralizer_dim(&Matrix::diagonal(&[a.clone(), b])).unwrap(), 2);
        assert_eq!(centralizer_dim(&Matrix::scalar(2, &a)).unwrap(), 4);
        let mut j = Matrix::scalar(2, &a);
        j.set(0, 1, CycNum::one());
        assert_eq!(centralizer_dim(&j).unwrap(), 2);
        assert_eq!(centralizer_dim(&Matrix::identity(3)).unwrap(), 9);
    }

    #[test]
    fn legendre_report() {
        let t = legendre();
        assert!(is_irreducible(&t));
        assert!(!common_eigenvector_rank2(&t).unwrap());
        let rep = katz_report(&t);
        assert_eq!(rep.centralizer_dims, vec![2, 2, 2]);
        assert_eq!((rep.sum, rep.threshold, rep.defect), (6, 6, 0));
        assert_eq!(rep.verdict, RigidityVerdict::Rigid);
        let c = rank2_classify(&t).unwrap();
        assert_eq!(c.nonscalar_points, vec![1, 2, 3]);
        assert_eq!(c.component_triple, Some([1, 2, 3]));
        assert_eq!(det_data(&t), vec![CycNum::one(); 3]);
        let m = mon(&t);
        assert_eq!(m.charpolys[0], Polynomial::from_i64(&[1, 2, 1]));
        let e = m.eigen.unwrap();
        assert_eq!(e.point(1), &[CycNum::from_int(-1), CycNum::from_int(-1)]);
        assert_eq!(e.point(2), &[CycNum::one(), CycNum::one()]);
    }

    #[test]
    fn diagonal_tuples_are_reducible() {
        let w = CycNum::root_of_unity(1, 3);
        let d1 = Matrix::diagonal(&[w.clone(), CycNum::one()]);
        let d2 = Matrix::diagonal(&[w.clone(), w.clone()]);
        let d3 = (&d1 * &d2).inverse().unwrap();
        let t = MonodromyTuple::new(vec![d1, d2, d3]).unwrap();
        assert!(!is_irreducible(&t));
        assert!(common_eigenvector_rank2(&t).unwrap());
        assert_eq!(katz_report(&t).verdict, RigidityVerdict::NotApplicable);
        assert!(matches!(rank2_classify(&t), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = legendre();
        let s = serde_json::to_string(&t).unwrap();
        let back: MonodromyTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
