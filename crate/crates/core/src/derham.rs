//! Residues of logarithmic connections on a curve: Deligne-normalized
//! residues from quasi-unipotent monodromy, the degree relation and the
//! Hilbert polynomial.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactfield::rational::{is_integer, serde_string, serde_string_vec, serde_string_vec2};
use crate::exactfield::{CycNum, Rational};
use crate::monodromy::EigenData;
use crate::{Error, Result};

/// Per-point residue exponents in [0, 1), each point sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "ResidueWire", into = "ResidueWire")]
pub struct ResidueData {
    r: usize,
    points: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueWire {
    pub r: usize,
    pub s: usize,
    #[serde(with = "serde_string_vec2")]
    pub points: Vec<Vec<Rational>>,
}

impl TryFrom<ResidueWire> for ResidueData {
    type Error = Error;

    fn try_from(w: ResidueWire) -> Result<Self> {
        if w.s != w.points.len() {
            return Err(Error::Shape(format!(
                "s = {} but {} points given",
                w.s,
                w.points.len()
            )));
        }
        ResidueData::new(w.r, w.points)
    }
}

impl From<ResidueData> for ResidueWire {
    fn from(rd: ResidueData) -> Self {
        ResidueWire {
            r: rd.r,
            s: rd.points.len(),
            points: rd.points,
        }
    }
}

impl ResidueData {
    pub fn new(r: usize, mut points: Vec<Vec<Rational>>) -> Result<ResidueData> {
        if r == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        for (i, p) in points.iter_mut().enumerate() {
            if p.len() != r {
                return Err(Error::Shape(format!(
                    "point {} has {} residues, expected {r}",
                    i + 1,
                    p.len()
                )));
            }
            if p.iter().any(|a| a < &Rational::zero() || a >= &Rational::one()) {
                return Err(Error::Shape(format!("residue at point {} outside [0, 1)", i + 1)));
            }
            p.sort();
        }
        Ok(ResidueData { r, points })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn punctures(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Residues of all points concatenated, point by point.
    pub fn flat(&self) -> Vec<Rational> {
        self.points.iter().flatten().cloned().collect()
    }

    /// Σ_i Tr Γ_i.
    pub fn trace_sum(&self) -> Rational {
        self.points
            .iter()
            .flatten()
            .fold(Rational::zero(), |acc, a| acc + a)
    }
}

/// Genus and polarization degree of the compact curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "GeometryWire")]
pub struct CurveGeometry {
    pub genus: u64,
    #[serde(rename = "degH")]
    pub deg_h: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryWire {
    genus: u64,
    #[serde(rename = "degH")]
    deg_h: u64,
}

impl TryFrom<GeometryWire> for CurveGeometry {
    type Error = Error;

    fn try_from(w: GeometryWire) -> Result<Self> {
        CurveGeometry::new(w.genus, w.deg_h)
    }
}

impl CurveGeometry {
    pub fn new(genus: u64, deg_h: u64) -> Result<CurveGeometry> {
        if deg_h == 0 {
            return Err(Error::Shape("degH must be positive".into()));
        }
        Ok(CurveGeometry { genus, deg_h })
    }
}

/// Residues a ∈ [0, 1) with λ = e^{2πi a} for every eigenvalue λ.
pub fn deligne_residues(e: &EigenData) -> Result<ResidueData> {
    let points = e
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .map(|z| {
                    z.root_of_unity_exponent()
                        .ok_or_else(|| Error::NotQuasiUnipotent(z.to_string()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ResidueData::new(e.rank(), points)
}

/// Entry-wise z ↦ e^{2πi z}.
pub fn exp_residues(rd: &ResidueData) -> EigenData {
    let points = rd
        .points()
        .iter()
        .map(|p| p.iter().map(CycNum::exp_2pi_i).collect())
        .collect();
    EigenData::new(rd.rank(), points).expect("roots of unity are nonzero")
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FuchsDegree {
    #[serde(with = "serde_string")]
    pub value: Rational,
    /// False when the value is not an integer, so no connection has this data.
    pub integral: bool,
}

/// deg E = −Σ Tr Γ_i.
pub fn fuchs_degree(rd: &ResidueData) -> FuchsDegree {
    let value = -rd.trace_sum();
    let integral = is_integer(&value);
    FuchsDegree { value, integral }
}

/// Coefficients [constant, slope] of r·degH·t + r(1 − g) − Σ Tr Γ_i.
pub fn hilbert_poly(rd: &ResidueData, geom: &CurveGeometry) -> Vec<Rational> {
    let r = Rational::from_integer((rd.rank() as i64).into());
    let slope = &r * Rational::from_integer((geom.deg_h as i64).into());
    let one_minus_g = Rational::from_integer((1 - geom.genus as i64).into());
    let constant = &r * one_minus_g - rd.trace_sum();
    vec![constant, slope]
}

/// Serializable wrapper for a rational polynomial, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoly(#[serde(with = "serde_string_vec")] pub Vec<Rational>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;

    fn legendre_residues() -> ResidueData {
        ResidueData::new(
            2,
            vec![vec![rat(1, 2), rat(1, 2)], vec![rat(0, 1); 2], vec![rat(0, 1); 2]],
        )
        .unwrap()
    }

    #[test]
    fn residues_of_roots_of_unity() {
        let e = EigenData::new(
            2,
            vec![
                vec![CycNum::one(), CycNum::from_int(-1)],
                vec![CycNum::root_of_unity(2, 3), CycNum::root_of_unity(1, 3)],
            ],
        )
        .unwrap();
        let rd = deligne_residues(&e).unwrap();
        assert_eq!(rd.points()[0], vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(rd.points()[1], vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(exp_residues(&rd), e);
        let bad = EigenData::new(1, vec![vec![CycNum::from_int(2)]]).unwrap();
        assert!(matches!(deligne_residues(&bad), Err(Error::NotQuasiUnipotent(_))));
    }

    #[test]
    fn degree_and_hilbert() {
        let rd = legendre_residues();
        assert_eq!(fuchs_degree(&rd).value, rat(-1, 1));
        assert!(fuchs_degree(&rd).integral);
        let g = CurveGeometry::new(0, 1).unwrap();
        assert_eq!(hilbert_poly(&rd, &g), vec![rat(1, 1), rat(2, 1)]);
        let zero = ResidueData::new(2, vec![vec![rat(0, 1); 2]; 3]).unwrap();
        assert_eq!(hilbert_poly(&zero, &g), vec![rat(2, 1), rat(2, 1)]);
        let g1 = CurveGeometry::new(1, 1).unwrap();
        assert_eq!(hilbert_poly(&zero, &g1), vec![rat(0, 1), rat(2, 1)]);
        let third = ResidueData::new(2, vec![vec![rat(1, 3), rat(2, 3)], vec![rat(0, 1); 2]]).unwrap();
        assert_eq!(fuchs_degree(&third).value, rat(-1, 1));
        let half = ResidueData::new(1, vec![vec![rat(1, 2)]]).unwrap();
        assert!(!fuchs_degree(&half).integral);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ResidueData::new(1, vec![vec![rat(1, 1)]]).is_err());
        assert!(ResidueData::new(1, vec![vec![rat(-1, 3)]]).is_err());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(legendre_residues()).unwrap();
        assert_eq!(v["points"][0][0], "1/2");
        assert_eq!(v["s"], 3);
    }
}
