//! Rank-2 moduli coordinates: the trace chart for three punctures, the
//! reducible locus in eigenvalue coordinates, the components indexed by
//! triples of non-scalar points, and the construction of a rigid tuple from
//! its eigenvalue data.

use serde::{Deserialize, Serialize};

use crate::exactfield::CycNum;
use crate::linalg::Matrix;
use crate::monodromy::{EigenData, MonodromyTuple};
use crate::{Error, Result};

/// (tr g_1, tr g_2, tr g_1g_2, det(g_1)⁻¹, det(g_2)⁻¹).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceChartPoint {
    pub t1: CycNum,
    pub t2: CycNum,
    pub t12: CycNum,
    pub d1inv: CycNum,
    pub d2inv: CycNum,
}

pub fn trace_chart(t: &MonodromyTuple) -> Result<TraceChartPoint> {
    if t.rank() != 2 || t.punctures() != 3 {
        return Err(Error::Shape(format!(
            "trace chart needs r = 2, s = 3; got r = {}, s = {}",
            t.rank(),
            t.punctures()
        )));
    }
    let g = t.matrices();
    Ok(TraceChartPoint {
        t1: g[0].trace(),
        t2: g[1].trace(),
        t12: (&g[0] * &g[1]).trace(),
        d1inv: g[0].det()?.inv()?,
        d2inv: g[1].det()?.inv()?,
    })
}

fn require_rank2(e: &EigenData) -> Result<()> {
    if e.rank() != 2 {
        return Err(Error::Shape(format!("rank 2 required, got {}", e.rank())));
    }
    Ok(())
}

/// Whether some choice x_{1i} x_{2j} x_{3k} equals 1, i.e. whether the
/// eigenvalue data lies on the reducible locus.
pub fn nonsimple_test_s3(e: &EigenData) -> Result<bool> {
    require_rank2(e)?;
    if e.punctures() != 3 {
        return Err(Error::Shape(format!("3 points required, got {}", e.punctures())));
    }
    if !e.total_product().is_one() {
        return Err(Error::NotOnModuli(format!(
            "product of eigenvalues is {}",
            e.total_product()
        )));
    }
    Ok(any_choice_is_one(&e.points()[..3], &CycNum::one()))
}

fn any_choice_is_one(pairs: &[Vec<CycNum>], scalar: &CycNum) -> bool {
    for x in &pairs[0] {
        for y in &pairs[1] {
            let xy = x * y;
            for z in &pairs[2] {
                if (&(&xy * z) * scalar).is_one() {
                    return true;
                }
            }
        }
    }
    false
}

/// A component of the rank-2 rigid moduli: the three points with non-scalar
/// local monodromy (1-based, ascending).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "SpecWire")]
pub struct ComponentSpec {
    s: usize,
    triple: [usize; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    s: usize,
    triple: [usize; 3],
}

impl TryFrom<SpecWire> for ComponentSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        ComponentSpec::new(w.s, w.triple)
    }
}

impl ComponentSpec {
    pub fn new(s: usize, triple: [usize; 3]) -> Result<ComponentSpec> {
        let mut t = triple;
        t.sort_unstable();
        if s < 3 || t[0] == 0 || t[2] > s || t[0] == t[1] || t[1] == t[2] {
            return Err(Error::Shape(format!(
                "invalid triple {triple:?} for s = {s}"
            )));
        }
        Ok(ComponentSpec { s, triple: t })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn triple(&self) -> [usize; 3] {
        self.triple
    }

    pub fn contains(&self, point: usize) -> bool {
        self.triple.contains(&point)
    }

    /// All C(s, 3) specs in lexicographic order of their triples.
    pub fn enumerate(s: usize) -> Vec<ComponentSpec> {
        let mut out = Vec::new();
        for a in 1..=s {
            for b in a + 1..=s {
                for c in b + 1..=s {
                    out.push(ComponentSpec { s, triple: [a, b, c] });
                }
            }
        }
        out
    }
}

/// Membership of eigenvalue data in the component of `spec`: the global
/// product is 1, points off the triple are scalar, and no choice of one
/// eigenvalue per triple point times the scalars gives 1.
pub fn component_membership(e: &EigenData, spec: &ComponentSpec) -> Result<bool> {
    require_rank2(e)?;
    if e.punctures() != spec.s {
        return Err(Error::Shape(format!(
            "data has {} points, spec expects {}",
            e.punctures(),
            spec.s
        )));
    }
    if !e.total_product().is_one() {
        return Ok(false);
    }
    let mut c = CycNum::one();
    for p in 1..=spec.s {
        if spec.contains(p) {
            continue;
        }
        let pair = e.point(p);
        if pair[0] != pair[1] {
            return Ok(false);
        }
        c = &c * &pair[0];
    }
    let pairs: Vec<Vec<CycNum>> = spec.triple.iter().map(|&p| e.point(p).to_vec()).collect();
    Ok(!any_choice_is_one(&pairs, &c))
}

/// Tuple realizing `e` in the component of `spec`.
///
/// With (α₁, α₂), (β₁, β₂), (γ₁, γ₂) at the triple and c the product of the
/// scalars elsewhere: g_b = [[β₁, 1], [0, β₂]], g_c = [[γ₁, 0], [u, γ₂]] with
/// u = (cα₁)⁻¹ + (cα₂)⁻¹ − β₁γ₁ − β₂γ₂, g_a = (c g_b g_c)⁻¹, λ I elsewhere.
pub fn construct_representative(e: &EigenData, spec: &ComponentSpec) -> Result<MonodromyTuple> {
    if !component_membership(e, spec)? {
        return Err(Error::NotInComponent(format!(
            "data is not in the component of triple {:?}",
            spec.triple
        )));
    }
    let [a, b, c_idx] = spec.triple;
    let alpha = e.point(a);
    let beta = e.point(b);
    let gamma = e.point(c_idx);
    let c = (1..=spec.s)
        .filter(|p| !spec.contains(*p))
        .fold(CycNum::one(), |acc, p| &acc * &e.point(p)[0]);

    let ca1 = (&c * &alpha[0]).inv()?;
    let ca2 = (&c * &alpha[1]).inv()?;
    let u = &(&(&ca1 + &ca2) - &(&beta[0] * &gamma[0])) - &(&beta[1] * &gamma[1]);
    let gb = Matrix::from_rows(vec![
        vec![beta[0].clone(), CycNum::one()],
        vec![CycNum::zero(), beta[1].clone()],
    ])?;
    let gc = Matrix::from_rows(vec![
        vec![gamma[0].clone(), CycNum::zero()],
        vec![u, gamma[1].clone()],
    ])?;
    let ga = (&gb * &gc).scale(&c).inverse()?;

    let mut matrices = Vec::with_capacity(spec.s);
    for p in 1..=spec.s {
        let g = match p {
            _ if p == a => ga.clone(),
            _ if p == b => gb.clone(),
            _ if p == c_idx => gc.clone(),
            _ => Matrix::scalar(2, &e.point(p)[0]),
        };
        matrices.push(g);
    }
    // The scalars commute past everything, so the product is g_a g_b g_c · c.
    MonodromyTuple::new(matrices)
}
