use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coset::{coset_membership, TorsionCoset};
use crate::exactfield::Rational;
use crate::moduli::ComponentSpec;
use crate::{Error, Result};

/// Boolean combination of torsion cosets, evaluated pointwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TorusFormula {
    Coset(TorsionCoset),
    Union(Vec<TorusFormula>),
    Intersection(Vec<TorusFormula>),
    Complement(Box<TorusFormula>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FormulaWire {
    Node {
        op: String,
        args: Vec<TorusFormula>,
    },
    Leaf(TorsionCoset),
}

impl Serialize for TorusFormula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            TorusFormula::Coset(c) => FormulaWire::Leaf(c.clone()),
            TorusFormula::Union(a) => FormulaWire::Node { op: "union".into(), args: a.clone() },
            TorusFormula::Intersection(a) => FormulaWire::Node {
                op: "intersection".into(),
                args: a.clone(),
            },
            TorusFormula::Complement(f) => FormulaWire::Node {
                op: "complement".into(),
                args: vec![(**f).clone()],
            },
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusFormula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FormulaWire::deserialize(d)? {
            FormulaWire::Leaf(c) => Ok(TorusFormula::Coset(c)),
            FormulaWire::Node { op, mut args } => match op.as_str() {
                "union" => Ok(TorusFormula::Union(args)),
                "intersection" => Ok(TorusFormula::Intersection(args)),
                "complement" if args.len() == 1 => {
                    Ok(TorusFormula::Complement(Box::new(args.pop().unwrap())))
                }
                "complement" => Err(D::Error::custom("complement takes exactly one argument")),
                other => Err(D::Error::custom(format!("unknown formula op {other:?}"))),
            },
        }
    }
}

impl TorusFormula {
    pub fn complement(f: TorusFormula) -> TorusFormula {
        TorusFormula::Complement(Box::new(f))
    }
}

pub fn formula_eval(f: &TorusFormula, q: &[Rational]) -> Result<bool> {
    match f {
        TorusFormula::Coset(c) => coset_membership(q, c),
        TorusFormula::Union(args) => {
            for a in args {
                if formula_eval(a, q)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        TorusFormula::Intersection(args) => {
            for a in args {
                if !formula_eval(a, q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        TorusFormula::Complement(a) => Ok(!formula_eval(a, q)?),
    }
}

fn unit_row(n: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut row = vec![0; n];
    for &(i, v) in entries {
        row[i] += v;
    }
    row
}

/// Ambient conditions in coordinates 2p + j (0-based point p, eigenvalue j):
/// the product of all coordinates is 1 and points off the triple are scalar.
fn ambient(s: usize, triple: [usize; 3]) -> Vec<TorusFormula> {
    let n = 2 * s;
    let mut out = vec![TorusFormula::Coset(
        TorsionCoset::subgroup(n, vec![vec![1; n]]).expect("valid shape"),
    )];
    for p in (1..=s).filter(|p| !triple.contains(p)) {
        let row = unit_row(n, &[(2 * (p - 1), 1), (2 * (p - 1) + 1, -1)]);
        out.push(TorusFormula::Coset(TorsionCoset::subgroup(n, vec![row]).expect("valid shape")));
    }
    out
}

/// Union over eigenvalue choices of the subtori where
/// x_{a i} x_{b j} x_{c k} Π_{p off the triple} x_{p m} = 1.
fn reducible_factors(s: usize, triple: [usize; 3]) -> TorusFormula {
    let n = 2 * s;
    let others: Vec<usize> = (1..=s).filter(|p| !triple.contains(p)).collect();
    let ms: &[usize] = if others.is_empty() { &[0] } else { &[0, 1] };
    let mut leaves = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for &m in ms {
                    let mut entries = vec![
                        (2 * (triple[0] - 1) + i, 1),
                        (2 * (triple[1] - 1) + j, 1),
                        (2 * (triple[2] - 1) + k, 1),
                    ];
                    entries.extend(others.iter().map(|p| (2 * (p - 1) + m, 1)));
                    let row = unit_row(n, &entries);
                    leaves.push(TorusFormula::Coset(
                        TorsionCoset::subgroup(n, vec![row]).expect("valid shape"),
                    ));
                }
            }
        }
    }
    TorusFormula::Union(leaves)
}

fn checked_triple(s: usize, triple: [usize; 3]) -> Result<[usize; 3]> {
    ComponentSpec::new(s, triple)
        .map(|spec| spec.triple())
        .map_err(|_| Error::Shape(format!("invalid triple {triple:?} for s = {s}")))
}

/// The locus of eigenvalue data (as residue vectors) that is on the ambient
/// subtorus and admits a reducible representation.
pub fn nonsimple_locus_formula(s: usize, triple: [usize; 3]) -> Result<TorusFormula> {
    let triple = checked_triple(s, triple)?;
    let mut parts = ambient(s, triple);
    parts.push(reducible_factors(s, triple));
    Ok(TorusFormula::Intersection(parts))
}

/// The component of `spec` in exponent coordinates: the ambient subtorus
/// minus the reducible factors.
pub fn component_locus_formula(spec: &ComponentSpec) -> TorusFormula {
    let mut parts = ambient(spec.s(), spec.triple());
    parts.push(TorusFormula::complement(reducible_factors(spec.s(), spec.triple())));
    TorusFormula::Intersection(parts)
}
