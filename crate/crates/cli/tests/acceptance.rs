//! Acceptance suite: one PASS/FAIL line per criterion, with its time limit.
//! Run with `cargo test -p rigidsys-cli --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use rigidsys::derham::{deligne_residues, exp_residues, fuchs_degree, hilbert_poly, CurveGeometry};
use rigidsys::exactfield::{rat, CycNum, GaloisElement};
use rigidsys::galois::{absolute_point_test, conjugate_eigen, conjugate_tuple_naive, transport_residues};
use rigidsys::linalg::Matrix;
use rigidsys::moduli::{construct_representative, nonsimple_test_s3, trace_chart, ComponentSpec};
use rigidsys::monodromy::{
    centralizer_dim, is_irreducible, katz_report, mon, nonscalar_points, rank2_classify,
    EigenData, MonodromyTuple, RigidityVerdict,
};
use rigidsys::tori::{
    coset_intersect, coset_membership, enumerate_torsion, formula_eval, nonsimple_locus_formula,
    DEFAULT_GRID_CAP,
};
use rigidsys::Rational;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, Check); 10] = [
        (1, "centralizer table 2, 4, 2", 1, c1_centralizers),
        (2, "Katz count iff three non-scalar points", 30, c2_katz_vs_three),
        (3, "mon after construct round trip", 60, c3_round_trip),
        (4, "Legendre fixture end to end", 1, c4_legendre),
        (5, "non-simple locus equivalence", 30, c5_locus),
        (6, "component combinatorics", 5, c6_components),
        (7, "torsion coset intersection vs brute force", 30, c7_cosets),
        (8, "exponent/multiplicative bridge", 10, c8_bridge),
        (9, "Galois stability", 30, c9_galois),
        (10, "CLI determinism and round trip", 10, c10_cli),
    ];
    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {id:>2}: {name} ({detail}; {elapsed:.2?} / {limit} s)"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {id:>2}: {name}: {why}");
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria failed");
        ExitCode::FAILURE
    }
}

fn c1_centralizers() -> Result<String, String> {
    let mut rng = common::rng(1);
    let pool: Vec<CycNum> = [3u64, 4, 5, 8, 12]
        .iter()
        .flat_map(|&n| common::pool(n))
        .filter(|z| !z.is_zero())
        .collect();
    for _ in 0..20 {
        let a = common::pick(&mut rng, &pool);
        let b = loop {
            let b = common::pick(&mut rng, &pool);
            if b != a {
                break b;
            }
        };
        let j1 = Matrix::diagonal(&[a.clone(), b]);
        let j2 = Matrix::scalar(2, &a);
        let j3 = Matrix::from_rows(vec![vec![a.clone(), CycNum::one()], vec![CycNum::zero(), a.clone()]])
            .map_err(|e| e.to_string())?;
        let dims = [j1, j2, j3].map(|m| centralizer_dim(&m).unwrap());
        ensure!(dims == [2, 4, 2], "got {dims:?} for α = {a}");
    }
    Ok("20 draws".into())
}

fn c2_katz_vs_three() -> Result<String, String> {
    let mut rng = common::rng(2);
    let mut irreducible = 0;
    let mut rigid = 0;
    for s in 3..=6usize {
        for i in 0..500 {
            let n = [1u64, 3, 4, 5][i % 4];
            let scalar_prob = [0.2, 0.4, 0.6][i % 3];
            let t = common::random_tuple(&mut rng, 2, s, n, scalar_prob);
            let report = katz_report(&t);
            if !report.is_irreducible {
                continue;
            }
            irreducible += 1;
            let three = nonscalar_points(&t).len() == 3;
            let count = report.sum == (s as i64 - 2) * 4 + 2;
            ensure!(count == three, "counterexample at s = {s}: {t:?}");
            ensure!((report.verdict == RigidityVerdict::Rigid) == three, "verdict mismatch at s = {s}");
            rigid += three as usize;
        }
    }
    Ok(format!("2000 tuples, {irreducible} irreducible, {rigid} rigid"))
}

fn c3_round_trip() -> Result<String, String> {
    let mut rng = common::rng(3);
    for i in 0..1000 {
        let s = 3 + i % 3;
        let n = rng.gen_range(2..=24);
        let (e, spec) = common::random_component_data(&mut rng, s, n);
        let t = construct_representative(&e, &spec).map_err(|err| format!("{err} for {e:?}"))?;
        ensure!(is_irreducible(&t), "reducible construction for {e:?}");
        ensure!(katz_report(&t).verdict == RigidityVerdict::Rigid, "not rigid for {e:?}");
        let triple = rank2_classify(&t).map_err(|e| e.to_string())?.component_triple;
        ensure!(triple == Some(spec.triple()), "triple {triple:?} vs {:?}", spec.triple());
        ensure!(mon(&t).eigen.as_ref() == Some(&e), "mon does not recover {e:?}");
    }
    Ok("1000 data, s in 3..=5, conductors <= 24".into())
}

fn c4_legendre() -> Result<String, String> {
    let ints = |v: &[[i64; 2]]| {
        EigenData::new(2, v.iter().map(|p| p.iter().map(|&x| CycNum::from_int(x)).collect()).collect()).unwrap()
    };
    let e = ints(&[[-1, -1], [1, 1], [1, 1]]);
    let spec = ComponentSpec::new(3, [1, 2, 3]).unwrap();
    let t = construct_representative(&e, &spec).map_err(|e| e.to_string())?;
    let expect = [
        Matrix::from_i64(&[&[1, -1], &[4, -3]]),
        Matrix::from_i64(&[&[1, 1], &[0, 1]]),
        Matrix::from_i64(&[&[1, 0], &[-4, 1]]),
    ];
    ensure!(t.matrices() == expect, "matrices {:?}", t.matrices());
    let prod = &(&expect[0] * &expect[1]) * &expect[2];
    ensure!(prod == Matrix::identity(2), "product {prod:?}");
    ensure!(katz_report(&t).defect == 0, "defect");
    let c = trace_chart(&t).map_err(|e| e.to_string())?;
    let chart = [c.t1, c.t2, c.t12, c.d1inv, c.d2inv];
    let want = [-2, 2, 2, 1, 1].map(CycNum::from_int);
    ensure!(chart == want, "chart {chart:?}");
    let rd = deligne_residues(&e).map_err(|e| e.to_string())?;
    let half = rat(1, 2);
    let zero = rat(0, 1);
    ensure!(
        rd.points() == [vec![half.clone(), half], vec![zero.clone(), zero.clone()], vec![zero.clone(), zero]],
        "residues {:?}",
        rd.points()
    );
    ensure!(fuchs_degree(&rd).value == rat(-1, 1), "Fuchs degree");
    let h = hilbert_poly(&rd, &CurveGeometry::new(0, 1).unwrap());
    ensure!(h == vec![rat(1, 1), rat(2, 1)], "Hilbert polynomial {h:?}");
    Ok("exact".into())
}

/// Rank-2, s = 3 tuples whose characteristic polynomials split.
fn split_s3_tuple(rng: &mut impl Rng, i: usize) -> MonodromyTuple {
    let n = [2u64, 3, 4, 5, 6, 8, 12][i % 7];
    let h = common::random_invertible(rng, 2, &common::pool(n));
    match i % 4 {
        0 => {
            let (e, spec) = common::random_component_data(rng, 3, n);
            construct_representative(&e, &spec).unwrap().conjugate_by(&h).unwrap()
        }
        1 => common::random_upper_tuple(rng, 3, n).conjugate_by(&h).unwrap(),
        2 => {
            // torsion data, half of it forced onto the reducible locus
            let e = common::random_s3_torsion(rng, n);
            match construct_representative(&e, &ComponentSpec::new(3, [1, 2, 3]).unwrap()) {
                Ok(t) => t.conjugate_by(&h).unwrap(),
                Err(_) => common::random_upper_tuple(rng, 3, n).conjugate_by(&h).unwrap(),
            }
        }
        _ => loop {
            let t = common::random_tuple(rng, 2, 3, n, 0.1);
            if mon(&t).eigen.is_some() {
                break t;
            }
        },
    }
}

fn c5_locus() -> Result<String, String> {
    let mut rng = common::rng(5);
    let mut irreducible = 0;
    for i in 0..500 {
        let t = split_s3_tuple(&mut rng, i);
        let e = mon(&t).eigen.ok_or("charpolys do not split")?;
        let nonsimple = nonsimple_test_s3(&e).map_err(|e| e.to_string())?;
        let irr = is_irreducible(&t);
        ensure!(irr == !nonsimple, "counterexample {t:?}");
        irreducible += irr as usize;
    }
    Ok(format!("500 tuples, {irreducible} irreducible"))
}

fn c6_components() -> Result<String, String> {
    for s in 3..=8usize {
        let specs = ComponentSpec::enumerate(s);
        ensure!(specs.len() == s * (s - 1) * (s - 2) / 6, "s = {s}: {} specs", specs.len());
    }
    let mut rng = common::rng(6);
    for i in 0..200 {
        let s = 3 + i % 6;
        let (e, spec) = common::random_component_data(&mut rng, s, [2u64, 3, 4, 6][i % 4]);
        let t = construct_representative(&e, &spec).map_err(|e| e.to_string())?;
        let triple = rank2_classify(&t).map_err(|e| e.to_string())?.component_triple;
        let accepted: Vec<ComponentSpec> = ComponentSpec::enumerate(s)
            .into_iter()
            .filter(|c| Some(c.triple()) == triple)
            .collect();
        ensure!(accepted == vec![spec], "accepted by {accepted:?}, built in {spec:?}");
    }
    Ok("s in 3..=8; 200 rigid tuples each in one component".into())
}

fn c7_cosets() -> Result<String, String> {
    const B: u64 = 12;
    let mut rng = common::rng(7);
    for i in 0..200 {
        let n = 1 + i % 3;
        let a = common::random_coset(&mut rng, n);
        let b = common::random_coset(&mut rng, n);
        let meet = coset_intersect(&a, &b).map_err(|e| e.to_string())?;
        let fast = enumerate_torsion(&meet, B, DEFAULT_GRID_CAP).map_err(|e| e.to_string())?;
        let grid_a = enumerate_torsion(&a, B, DEFAULT_GRID_CAP).map_err(|e| e.to_string())?;
        let slow: Vec<Vec<Rational>> = grid_a
            .into_iter()
            .filter(|q| coset_membership(q, &b).unwrap())
            .collect();
        ensure!(fast == slow, "mismatch for {a:?} and {b:?}");
    }
    Ok("200 pairs, order bound 12".into())
}

fn c8_bridge() -> Result<String, String> {
    let mut rng = common::rng(8);
    let f = nonsimple_locus_formula(3, [1, 2, 3]).map_err(|e| e.to_string())?;
    let mut on_locus = 0;
    for i in 0..200 {
        let e = common::random_s3_torsion(&mut rng, [2u64, 3, 4, 5, 6, 8, 12][i % 7]);
        let rd = deligne_residues(&e).map_err(|e| e.to_string())?;
        ensure!(exp_residues(&rd) == e, "exp after deligne differs for {e:?}");
        let multiplicative = nonsimple_test_s3(&e).map_err(|e| e.to_string())?;
        let additive = formula_eval(&f, &rd.flat()).map_err(|e| e.to_string())?;
        ensure!(multiplicative == additive, "locus tests disagree for {e:?}");
        on_locus += multiplicative as usize;
    }
    Ok(format!("200 data, {on_locus} on the locus"))
}

fn c9_galois() -> Result<String, String> {
    let mut rng = common::rng(9);
    for i in 0..100 {
        let n = [3u64, 4, 5, 8, 12][i % 5];
        let s = 3 + i % 3;
        let (e, spec) = common::random_component_data(&mut rng, s, n);
        let h = common::random_invertible(&mut rng, 2, &common::pool(n));
        let t = construct_representative(&e, &spec).unwrap().conjugate_by(&h).unwrap();
        let report = katz_report(&t);
        let cls = rank2_classify(&t).map_err(|e| e.to_string())?;
        let m = mon(&t).eigen.ok_or("mon does not split")?;
        let verdict = absolute_point_test(&t).map_err(|e| e.to_string())?;
        let rd = deligne_residues(&m).map_err(|e| e.to_string())?;
        let h2 = common::random_invertible(&mut rng, 2, &common::pool(n));
        let conj_h = absolute_point_test(&t.conjugate_by(&h2).unwrap()).map_err(|e| e.to_string())?;
        ensure!(conj_h == verdict, "absolute test changes under conjugation by h");
        for g in GaloisElement::all(n) {
            let c = conjugate_tuple_naive(&t, &g).map_err(|e| e.to_string())?;
            ensure!(katz_report(&c).verdict == report.verdict, "Katz verdict changes under {g:?}");
            ensure!(rank2_classify(&c).map_err(|e| e.to_string())? == cls, "classification changes under {g:?}");
            let mc = mon(&c).eigen.ok_or("conjugate does not split")?;
            ensure!(mc == conjugate_eigen(&m, &g).unwrap(), "mon not mapped by {g:?}");
            ensure!(transport_residues(&rd, &g) == rd, "transport moves residues");
            let vc = absolute_point_test(&c).map_err(|e| e.to_string())?;
            ensure!(vc == verdict, "absolute test changes under {g:?}");
        }
    }
    Ok("100 rigid tuples, n in {3, 4, 5, 8, 12}".into())
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rigidsys"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn c10_cli() -> Result<String, String> {
    let runs: [(&str, &str); 6] = [
        ("check", "legendre_tuple.json"),
        ("mon", "legendre_tuple.json"),
        ("classify", "legendre_eigen.json"),
        ("construct", "zeta3_construct.json"),
        ("derham", "legendre_derham.json"),
        ("orbit", "legendre_tuple.json"),
    ];
    for (cmd, file) in runs {
        let path = fixture(file);
        let path = path.to_str().unwrap();
        let first = cli(&[cmd, "-i", path])?;
        let second = cli(&[cmd, "-i", path])?;
        ensure!(first.0 == 0, "{cmd} on {file} exited {}", first.0);
        ensure!(first == second, "{cmd} on {file} is not deterministic");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for file in ["legendre_construct.json", "zeta3_construct.json"] {
        let built = dir.path().join(format!("{file}.tuple"));
        let checked = dir.path().join(format!("{file}.check"));
        let input = fixture(file);
        let (code, _) = cli(&["construct", "-i", input.to_str().unwrap(), "-o", built.to_str().unwrap()])?;
        ensure!(code == 0, "construct exited {code}");
        let (code, _) = cli(&["check", "-i", built.to_str().unwrap(), "-o", checked.to_str().unwrap()])?;
        ensure!(code == 0, "check exited {code}");
        let (code, out) = cli(&["mon", "-i", checked.to_str().unwrap()])?;
        ensure!(code == 0, "mon exited {code}");
        let report: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        let got: EigenData = serde_json::from_value(report["eigen"].clone()).map_err(|e| e.to_string())?;
        let fixture_json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&input).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let want: EigenData = serde_json::from_value(fixture_json["eigen"].clone()).map_err(|e| e.to_string())?;
        ensure!(got == want, "pipeline on {file} gave {got:?}");
    }
    Ok("6 commands twice, 2 pipelines".into())
}
