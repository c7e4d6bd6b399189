mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use rigidsys::derham::{deligne_residues, exp_residues, fuchs_degree, hilbert_poly, CurveGeometry, ResidueData};
use rigidsys::exactfield::{rat, CycNum};
use rigidsys::monodromy::EigenData;
use rigidsys::{Error, Rational};

fn random_residues(rng: &mut impl Rng, r: usize, s: usize) -> ResidueData {
    let points = (0..s)
        .map(|_| {
            (0..r)
                .map(|_| {
                    let d = rng.gen_range(1..=12);
                    rat(rng.gen_range(0..d), d)
                })
                .collect()
        })
        .collect();
    ResidueData::new(r, points).unwrap()
}

fn random_torsion_eigen(rng: &mut impl Rng, r: usize, s: usize, n: u64) -> EigenData {
    let points = (0..s)
        .map(|_| (0..r).map(|_| common::random_root_of_unity(rng, n)).collect())
        .collect();
    EigenData::new(r, points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_inverts_deligne(seed in any::<u64>(), r in 1usize..=3, s in 3usize..=5, n in 1u64..=24) {
        let mut rng = common::rng(seed);
        let e = random_torsion_eigen(&mut rng, r, s, n);
        prop_assert_eq!(exp_residues(&deligne_residues(&e).unwrap()), e);
    }

    #[test]
    fn deligne_inverts_exp(seed in any::<u64>(), r in 1usize..=3, s in 3usize..=5) {
        let mut rng = common::rng(seed);
        let rd = random_residues(&mut rng, r, s);
        prop_assert_eq!(deligne_residues(&exp_residues(&rd)).unwrap(), rd);
    }

    #[test]
    fn fuchs_degree_ignores_order(seed in any::<u64>(), r in 1usize..=3, s in 3usize..=5) {
        let mut rng = common::rng(seed);
        let rd = random_residues(&mut rng, r, s);
        let mut points: Vec<Vec<Rational>> = rd.points().to_vec();
        points.shuffle(&mut rng);
        for p in points.iter_mut() {
            p.shuffle(&mut rng);
        }
        let permuted = ResidueData::new(r, points).unwrap();
        prop_assert_eq!(fuchs_degree(&permuted), fuchs_degree(&rd));
    }

    #[test]
    fn hilbert_matches_fuchs(seed in any::<u64>(), r in 1usize..=3, s in 3usize..=5, g in 0u64..=4, deg_h in 1u64..=5) {
        let mut rng = common::rng(seed);
        let rd = random_residues(&mut rng, r, s);
        let geom = CurveGeometry::new(g, deg_h).unwrap();
        let p = hilbert_poly(&rd, &geom);
        let r_q = Rational::from_integer((r as i64).into());
        let base = &r_q * Rational::from_integer((1 - g as i64).into());
        prop_assert_eq!(&p[0] - &base, fuchs_degree(&rd).value);
        prop_assert_eq!(p[1].clone(), &r_q * Rational::from_integer((deg_h as i64).into()));
    }

    #[test]
    fn zero_residues_give_trivial_bundle(r in 1usize..=4, s in 3usize..=6, g in 0u64..=4, deg_h in 1u64..=5) {
        let rd = ResidueData::new(r, vec![vec![rat(0, 1); r]; s]).unwrap();
        let p = hilbert_poly(&rd, &CurveGeometry::new(g, deg_h).unwrap());
        let r = r as i64;
        prop_assert_eq!(p, vec![rat(r * (1 - g as i64), 1), rat(r * deg_h as i64, 1)]);
    }
}

#[test]
fn legendre_residues() {
    let e = EigenData::new(
        2,
        vec![
            vec![CycNum::from_int(-1); 2],
            vec![CycNum::one(); 2],
            vec![CycNum::one(); 2],
        ],
    )
    .unwrap();
    let rd = deligne_residues(&e).unwrap();
    assert_eq!(rd.points()[0], vec![rat(1, 2), rat(1, 2)]);
    assert_eq!(rd.points()[1], vec![rat(0, 1), rat(0, 1)]);
    let f = fuchs_degree(&rd);
    assert_eq!(f.value, rat(-1, 1));
    assert!(f.integral);
    let geom = CurveGeometry::new(0, 1).unwrap();
    assert_eq!(hilbert_poly(&rd, &geom), vec![rat(1, 1), rat(2, 1)]);
    let zero = ResidueData::new(2, vec![vec![rat(0, 1); 2]; 3]).unwrap();
    assert_eq!(hilbert_poly(&zero, &CurveGeometry::new(1, 1).unwrap()), vec![rat(0, 1), rat(2, 1)]);
}

#[test]
fn non_torsion_and_invalid_inputs() {
    let e = EigenData::new(1, vec![vec![CycNum::from_int(2)], vec![CycNum::one()], vec![CycNum::one()]]).unwrap();
    assert!(matches!(deligne_residues(&e), Err(Error::NotQuasiUnipotent(_))));
    assert!(ResidueData::new(1, vec![vec![rat(1, 1)], vec![rat(0, 1)], vec![rat(0, 1)]]).is_err());
    assert!(ResidueData::new(1, vec![vec![rat(-1, 3)], vec![rat(0, 1)], vec![rat(0, 1)]]).is_err());
    assert!(CurveGeometry::new(0, 0).is_err());

    let one_third = ResidueData::new(1, vec![vec![rat(1, 3)], vec![rat(0, 1)], vec![rat(0, 1)]]).unwrap();
    let f = fuchs_degree(&one_third);
    assert_eq!(f.value, rat(-1, 3));
    assert!(!f.integral);
}

#[test]
fn residue_json() {
    let json = r#"{"r": 2, "s": 3, "points": [["1/2", "1/2"], ["0", "0"], ["0", "0"]]}"#;
    let rd: ResidueData = serde_json::from_str(json).unwrap();
    assert_eq!(rd.trace_sum(), rat(1, 1));
    let back: ResidueData = serde_json::from_str(&serde_json::to_string(&rd).unwrap()).unwrap();
    assert_eq!(back, rd);
    let bad = r#"{"r": 2, "s": 3, "points": [["3/2", "1/2"], ["0", "0"], ["0", "0"]]}"#;
    assert!(serde_json::from_str::<ResidueData>(bad).is_err());
    let geom: CurveGeometry = serde_json::from_str(r#"{"genus": 0, "degH": 1}"#).unwrap();
    assert_eq!(geom.deg_h, 1);
}
