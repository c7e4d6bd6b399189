//! Seeded generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidsys::exactfield::{rat, CycNum};
use rigidsys::linalg::Matrix;
use rigidsys::moduli::{component_membership, ComponentSpec};
use rigidsys::monodromy::{EigenData, MonodromyTuple};
use rigidsys::tori::TorsionCoset;
use rigidsys::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small elements of Q(ζ_n): integers, halves, roots of unity and 1 + ζ_n.
pub fn pool(n: u64) -> Vec<CycNum> {
    let mut p: Vec<CycNum> = (-2..=2).map(CycNum::from_int).collect();
    p.push(CycNum::from_rational(rat(1, 2)));
    p.push(CycNum::from_rational(rat(-3, 2)));
    if n > 2 {
        for j in 1..n.min(4) as i64 {
            p.push(CycNum::root_of_unity(j, n));
        }
        p.push(&CycNum::one() + &CycNum::root_of_unity(1, n));
        p.push(&CycNum::from_int(2) * &CycNum::root_of_unity(-1, n));
    }
    p
}

pub fn pick(rng: &mut impl Rng, pool: &[CycNum]) -> CycNum {
    pool.choose(rng).unwrap().clone()
}

pub fn pick_nonzero(rng: &mut impl Rng, pool: &[CycNum]) -> CycNum {
    loop {
        let z = pick(rng, pool);
        if !z.is_zero() {
            return z;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, r: usize, pool: &[CycNum]) -> Matrix {
    Matrix::new(r, r, (0..r * r).map(|_| pick(rng, pool)).collect()).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, r: usize, pool: &[CycNum]) -> Matrix {
    loop {
        let m = random_matrix(rng, r, pool);
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// g_1, …, g_{s−1} drawn from the pool (each scalar with probability
/// `scalar_prob`), g_s = (g_1⋯g_{s−1})⁻¹.
pub fn random_tuple(rng: &mut impl Rng, r: usize, s: usize, n: u64, scalar_prob: f64) -> MonodromyTuple {
    let pool = pool(n);
    let mut mats = Vec::with_capacity(s);
    for _ in 0..s - 1 {
        let g = if rng.gen_bool(scalar_prob) {
            Matrix::scalar(r, &pick_nonzero(rng, &pool))
        } else {
            random_invertible(rng, r, &pool)
        };
        mats.push(g);
    }
    let prod = mats.iter().skip(1).fold(mats[0].clone(), |acc, g| &acc * g);
    mats.push(prod.inverse().unwrap());
    MonodromyTuple::new(mats).unwrap()
}

/// Rank-2 tuple of upper-triangular matrices (hence reducible).
pub fn random_upper_tuple(rng: &mut impl Rng, s: usize, n: u64) -> MonodromyTuple {
    let pool = pool(n);
    let mut mats = Vec::with_capacity(s);
    for _ in 0..s - 1 {
        let m = Matrix::from_rows(vec![
            vec![pick_nonzero(rng, &pool), pick(rng, &pool)],
            vec![CycNum::zero(), pick_nonzero(rng, &pool)],
        ])
        .unwrap();
        mats.push(m);
    }
    let prod = mats.iter().skip(1).fold(mats[0].clone(), |acc, g| &acc * g);
    mats.push(prod.inverse().unwrap());
    MonodromyTuple::new(mats).unwrap()
}

pub fn random_root_of_unity(rng: &mut impl Rng, n: u64) -> CycNum {
    CycNum::root_of_unity(rng.gen_range(0..n as i64), n)
}

/// Quasi-unipotent rank-2 data with eigenvalues in μ_n: random pairs at the
/// triple, random scalars elsewhere, the last eigenvalue fixing the product.
pub fn random_torsion_data(rng: &mut impl Rng, spec: &ComponentSpec, n: u64) -> EigenData {
    let s = spec.s();
    let mut points: Vec<Vec<CycNum>> = Vec::with_capacity(s);
    for p in 1..=s {
        if spec.contains(p) {
            points.push(vec![random_root_of_unity(rng, n), random_root_of_unity(rng, n)]);
        } else {
            let l = random_root_of_unity(rng, n);
            points.push(vec![l.clone(), l]);
        }
    }
    let last = spec.triple()[2] - 1;
    points[last][1] = CycNum::one();
    let prod = points.iter().flatten().fold(CycNum::one(), |acc, z| &acc * z);
    points[last][1] = prod.inv().unwrap();
    EigenData::new(2, points).unwrap()
}

/// Data in the component of a random triple, retrying until membership holds.
pub fn random_component_data(rng: &mut impl Rng, s: usize, n: u64) -> (EigenData, ComponentSpec) {
    let specs = ComponentSpec::enumerate(s);
    loop {
        let spec = *specs.choose(rng).unwrap();
        let e = random_torsion_data(rng, &spec, n);
        if component_membership(&e, &spec).unwrap() {
            return (e, spec);
        }
    }
}

/// Random s = 3 quasi-unipotent data with total product 1; with probability
/// one half a factor x_{1i} x_{2j} x_{3k} is forced to equal 1.
pub fn random_s3_torsion(rng: &mut impl Rng, n: u64) -> EigenData {
    let mut z: Vec<CycNum> = (0..6).map(|_| random_root_of_unity(rng, n)).collect();
    if rng.gen_bool(0.5) {
        // x_{1,0} x_{2,0} x_{3,0} = 1, and then the other three multiply to 1 too
        z[4] = (&z[0] * &z[2]).inv().unwrap();
        z[5] = (&z[1] * &z[3]).inv().unwrap();
    } else {
        let partial = z[..5].iter().fold(CycNum::one(), |acc, x| &acc * x);
        z[5] = partial.inv().unwrap();
    }
    EigenData::new(2, vec![z[0..2].to_vec(), z[2..4].to_vec(), z[4..6].to_vec()]).unwrap()
}

pub fn random_coset(rng: &mut impl Rng, n: usize) -> TorsionCoset {
    let rows = rng.gen_range(0..=n);
    let l: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let tau: Vec<Rational> = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=6);
            rat(rng.gen_range(0..d), d)
        })
        .collect();
    TorsionCoset::new(n, l, tau).unwrap()
}
