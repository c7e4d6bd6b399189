//! Roots of polynomials over cyclotomic fields, when they split over a
//! nearby cyclotomic field.
//!
//! A polynomial of degree d with coefficients in K = Q(ζ_N) is searched for
//! roots inside the cyclotomic fields Q(ζ_M), N | M, with φ(M) ≤ d·φ(N). Any
//! root that is a root of unity, or a rational multiple of one, generates a
//! field of this kind. Roots are taken from the squarefree part and then
//! counted with multiplicity. Routes, in order:
//!
//! 1. candidates c·ω with c rational and ω ∈ μ(Q(ζ_M)), proposed from
//!    floating-point root estimates;
//! 2. general elements of Q(ζ_M), recovered from the numeric roots of the
//!    Galois conjugates of the polynomial;
//! 3. candidates c·ω enumerated exhaustively with c from the rational root
//!    theorem;
//! 4. for a remaining quadratic, square roots of the discriminant when it is
//!    a rational multiple of a root of unity (Gauss sums supply √d).
//!
//! Every candidate is accepted only after exact evaluation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Polynomial;
use crate::exactfield::rational::{rational_roots, Rational};
use crate::exactfield::tables::gcd;
use crate::exactfield::{euler_phi, lcm, CycNum};

/// Controls the field search of [`split_roots`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootSearch {
    /// Extra conductor merged into the base field of the search.
    pub extra_conductor: u64,
    /// Candidate fields above this conductor are skipped.
    pub conductor_cap: u64,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch {
            extra_conductor: 1,
            conductor_cap: 1 << 12,
        }
    }
}

fn canonical(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// Conductors M ≥ N of the fields searched for roots of a degree-`d`
/// polynomial over Q(ζ_N), ascending.
pub fn candidate_conductors(base: u64, degree: usize, cap: u64) -> Vec<u64> {
    let base = canonical(base.max(1));
    let d = degree.max(1) as u64;
    let bound = base_phi_bound(base, d);
    let tmax = 2 * d * d + 2;
    let mut out: Vec<u64> = (1..=tmax)
        .map(|t| canonical(base * t))
        .filter(|&m| m % base == 0 && euler_phi(m) <= bound && m <= cap.max(base))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn base_phi_bound(base: u64, d: u64) -> u64 {
    euler_phi(base) * d
}

/// All roots with multiplicity, sorted canonically, when the polynomial
/// splits over the searched fields.
pub fn split_roots(p: &Polynomial, search: &RootSearch) -> Option<Vec<CycNum>> {
    let deg = p.degree()?;
    let p = p.monic();
    let base = lcm(p.conductor(), search.extra_conductor.max(1));
    let fields = candidate_conductors(base, deg, search.conductor_cap);

    let distinct = distinct_roots(squarefree_part(&p), &fields)?;
    let mut cur = p;
    let mut roots = Vec::with_capacity(deg);
    for r in &distinct {
        let linear = Polynomial::new(vec![-r, CycNum::one()]);
        loop {
            let (q, rem) = cur.div_rem(&linear);
            if !rem.is_zero() {
                break;
            }
            cur = q;
            roots.push(r.clone());
        }
    }
    if roots.len() != deg {
        return None;
    }
    roots.sort();
    Some(roots)
}

fn squarefree_part(p: &Polynomial) -> Polynomial {
    let deriv = Polynomial::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| &CycNum::from_int(i as i64) * a)
            .collect(),
    );
    if deriv.is_zero() {
        return p.clone();
    }
    p.div_rem(&p.gcd(&deriv)).0.monic()
}

/// Roots of a squarefree monic polynomial.
fn distinct_roots(mut cur: Polynomial, fields: &[u64]) -> Option<Vec<CycNum>> {
    let mut roots = Vec::new();
    for z in numeric_roots(&cur) {
        if cur.degree() == Some(0) {
            break;
        }
        if let Some(r) = guess_from_estimate(z, fields, &cur) {
            cur = cur.deflate(&r);
            roots.push(r);
        }
    }
    while let Some(d) = cur.degree().filter(|&d| d > 0) {
        if d == 1 {
            let r = -&cur.coeff(0);
            if !in_fields(&r, fields) {
                return None;
            }
            roots.push(r);
            break;
        }
        if let Some(r) = fields.iter().find_map(|&m| field_root(&cur, m)) {
            cur = cur.deflate(&r);
            roots.push(r);
            continue;
        }
        if let Some(r) = exhaustive_root(&cur, fields) {
            cur = cur.deflate(&r);
            roots.push(r);
            continue;
        }
        if d == 2 {
            if let Some(pair) = quadratic_by_discriminant(&cur, fields) {
                roots.extend(pair);
                break;
            }
        }
        return None;
    }
    Some(roots)
}

const FIELD_ROOT_MAX_PHI: u64 = 48;
const FIELD_ROOT_MAX_COMBOS: usize = 1 << 14;

/// σ_k(a) under the embedding ζ_n ↦ e^{2πik/n}.
fn conj_numeric(a: &CycNum, k: u64) -> Complex64 {
    let n = a.conductor();
    a.coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let angle = std::f64::consts::TAU * ((k * j as u64) % n) as f64 / n as f64;
            Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
        })
        .sum()
}

/// Inverse of a square complex matrix by Gauss–Jordan with partial pivoting.
fn complex_inverse(mut a: Vec<Vec<Complex64>>) -> Option<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::one() } else { Complex64::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                if f != Complex64::zero() {
                    for j in 0..n {
                        let (x, y) = (a[col][j], inv[col][j]);
                        a[i][j] -= f * x;
                        inv[i][j] -= f * y;
                    }
                }
            }
        }
    }
    Some(inv)
}

/// A root of `p` lying in Q(ζ_m), recovered from the numeric roots of the
/// Galois conjugates of `p`: a choice of one root per conjugate pair of
/// embeddings determines the power-basis coordinates through a Vandermonde
/// system, which are rounded to rationals and verified exactly.
fn field_root(p: &Polynomial, m: u64) -> Option<CycNum> {
    let phi = euler_phi(m);
    if phi > FIELD_ROOT_MAX_PHI || !m.is_multiple_of(p.conductor()) {
        return None;
    }
    let units: Vec<u64> = (1..=m).filter(|&k| gcd(k, m) == 1).collect();
    let reps: Vec<u64> = if m <= 2 {
        vec![1]
    } else {
        units.iter().copied().filter(|&k| 2 * k < m).collect()
    };
    let deg = p.degree()?;
    let combos = deg.checked_pow(reps.len() as u32)?;
    if combos > FIELD_ROOT_MAX_COMBOS {
        return None;
    }
    let conj_roots: Vec<Vec<Complex64>> = reps
        .iter()
        .map(|&k| {
            let coeffs = p.coeffs().iter().map(|a| conj_numeric(a, k)).collect::<Vec<_>>();
            numeric_roots_complex(&coeffs)
        })
        .collect();
    let vander: Vec<Vec<Complex64>> = units
        .iter()
        .map(|&k| {
            (0..phi)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * ((k * j) % m) as f64 / m as f64))
                .collect()
        })
        .collect();
    let vinv = complex_inverse(vander)?;
    let rep_index = |k: u64| -> (usize, bool) {
        match reps.iter().position(|&r| r == k) {
            Some(i) => (i, false),
            None => (reps.iter().position(|&r| r == m - k).expect("paired unit"), true),
        }
    };
    let layout: Vec<(usize, bool)> = units.iter().map(|&k| rep_index(k)).collect();

    let mut choice = vec![0usize; reps.len()];
    for _ in 0..combos {
        let values: Vec<Complex64> = layout
            .iter()
            .map(|&(i, flip)| {
                let v = conj_roots[i][choice[i]];
                if flip {
                    v.conj()
                } else {
                    v
                }
            })
            .collect();
        if let Some(cand) = recognize(&vinv, &values, m) {
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < deg {
                break;
            }
            *c = 0;
        }
    }
    None
}

fn recognize(vinv: &[Vec<Complex64>], values: &[Complex64], m: u64) -> Option<CycNum> {
    let mut coords = Vec::with_capacity(vinv.len());
    for row in vinv {
        let c: Complex64 = row.iter().zip(values).map(|(a, b)| a * b).sum();
        let scale = c.re.abs().max(1.0);
        if c.im.abs() > 1e-6 * scale {
            return None;
        }
        coords.push(approx_rational_tol(c.re, 10_000, 1e-7)?);
    }
    CycNum::new(coords, m as i64).ok()
}

fn in_fields(z: &CycNum, fields: &[u64]) -> bool {
    fields.iter().any(|m| m % z.conductor() == 0)
}

fn numeric_roots(p: &Polynomial) -> Vec<Complex64> {
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|z| {
            let (re, im) = z.to_complex();
            Complex64::new(re, im)
        })
        .collect();
    numeric_roots_complex(&c)
}

fn numeric_roots_complex(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len().saturating_sub(1);
    match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => {
            let disc = (c[1] * c[1] - c[0] * c[2] * 4.0).sqrt();
            vec![(-c[1] + disc) / (c[2] * 2.0), (-c[1] - disc) / (c[2] * 2.0)]
        }
        _ => durand_kerner(c),
    }
}

fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, a| acc * x + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::one();
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() < 1e-300 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Best rational approximation of `x` by continued fractions.
fn approx_rational(x: f64, max_den: i64) -> Option<Rational> {
    approx_rational_tol(x, max_den, 1e-9)
}

fn approx_rational_tol(x: f64, max_den: i64, rel_tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let tol = rel_tol * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol {
            return Some(BigRational::new(h1.into(), k1.into()));
        }
        let f = r - a as f64;
        if f.abs() < 1e-15 {
            break;
        }
        r = 1.0 / f;
    }
    (k1 > 0 && (h1 as f64 / k1 as f64 - x).abs() <= tol)
        .then(|| BigRational::new(h1.into(), k1.into()))
}

fn guess_from_estimate(z: Complex64, fields: &[u64], p: &Polynomial) -> Option<CycNum> {
    let modulus = z.norm();
    let c = if modulus < 1e-12 {
        Rational::zero()
    } else {
        approx_rational(modulus, 1_000_000)?
    };
    if c.is_zero() {
        let zero = CycNum::zero();
        return p.eval(&zero).is_zero().then_some(zero);
    }
    let theta = z.arg() / std::f64::consts::TAU;
    let theta = theta - theta.floor();
    let scale = CycNum::from_rational(c);
    for &m in fields {
        let l = lcm(2, m);
        let pos = theta * l as f64;
        let j = pos.round();
        if (pos - j).abs() > 1e-6 {
            continue;
        }
        let cand = &scale * &CycNum::root_of_unity(j as i64, l);
        if p.eval(&cand).is_zero() {
            return Some(cand);
        }
    }
    None
}

fn exhaustive_root(p: &Polynomial, fields: &[u64]) -> Option<CycNum> {
    if p.coeff(0).is_zero() {
        return Some(CycNum::zero());
    }
    for &m in fields {
        let l = lcm(2, m);
        for j in 0..l {
            let omega = CycNum::root_of_unity(j as i64, l);
            // q(x) = p(ωx); a rational root of q is a root of every
            // coordinate polynomial of q.
            let mut power = CycNum::one();
            let mut q = Vec::with_capacity(p.coeffs().len());
            for a in p.coeffs() {
                q.push(a * &power);
                power = &power * &omega;
            }
            let cond = q.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
            let coords: Vec<Vec<Rational>> = q.iter().map(|c| c.embed(cond).unwrap()).collect();
            let width = coords[0].len();
            let component = (0..width)
                .map(|k| coords.iter().map(|v| v[k].clone()).collect::<Vec<_>>())
                .filter(|poly| poly.iter().any(|c| !c.is_zero()))
                .min_by_key(|poly| poly.iter().rposition(|c| !c.is_zero()).unwrap())?;
            let Some(cands) = rational_roots(&component) else {
                continue;
            };
            for c in cands {
                if c.is_zero() {
                    continue;
                }
                let cand = &CycNum::from_rational(c) * &omega;
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn quadratic_by_discriminant(p: &Polynomial, fields: &[u64]) -> Option<[CycNum; 2]> {
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &(&b * &b) - &(&CycNum::from_int(4) * &c);
    let half = CycNum::from_rational(BigRational::new(1.into(), 2.into()));
    if disc.is_zero() {
        let r = -(&b * &half);
        return Some([r.clone(), r]);
    }
    let root = sqrt_rational_times_unit(&disc)?;
    let r1 = &(&(-&b) + &root) * &half;
    let r2 = &(&(-&b) - &root) * &half;
    let ok = in_fields(&r1, fields)
        && in_fields(&r2, fields)
        && p.eval(&r1).is_zero()
        && p.eval(&r2).is_zero();
    ok.then(|| {
        if r1 <= r2 {
            [r1, r2]
        } else {
            [r2, r1]
        }
    })
}

/// A square root of `d` when d = s·ω with s rational and ω a root of unity.
fn sqrt_rational_times_unit(d: &CycNum) -> Option<CycNum> {
    let l = lcm(2, d.conductor());
    for j in 0..l {
        let omega = CycNum::root_of_unity(j as i64, l);
        let s = d * &omega.conj();
        let Some(s) = s.as_rational() else {
            continue;
        };
        let half_omega = CycNum::root_of_unity(j as i64, 2 * l);
        let root_s = sqrt_rational(s)?;
        let cand = &root_s * &half_omega;
        return (&(&cand * &cand) == d).then_some(cand);
    }
    None
}

fn sqrt_rational(s: &Rational) -> Option<CycNum> {
    let neg = s.is_negative();
    let a = s.abs();
    // √(p/q) = √(p·q)/q
    let pq = a.numer() * a.denom();
    let (square, free) = squarefree_split(&pq)?;
    let mut root = CycNum::from_rational(BigRational::new(square, a.denom().clone()));
    for prime in prime_list(&free)? {
        root = &root * &sqrt_prime(prime);
    }
    if neg {
        root = &root * &CycNum::root_of_unity(1, 4);
    }
    Some(root)
}

/// n = f²·d with d squarefree; returns (f, d).
fn squarefree_split(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut v = n.to_u64().filter(|&v| v > 0 && v < 1 << 40)?;
    let mut f = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p * p <= v {
        let mut e = 0;
        while v % p == 0 {
            v /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    d *= v;
    Some((f.into(), d.into()))
}

fn prime_list(d: &BigInt) -> Option<Vec<u64>> {
    let v = d.to_u64()?;
    Some(crate::exactfield::tables::prime_factors(v))
}

/// √p as a cyclotomic number: √2 = ζ_8 + ζ_8^{-1}; for odd p the quadratic
/// Gauss sum g satisfies g² = (−1)^{(p−1)/2} p.
fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        return &CycNum::root_of_unity(1, 8) + &CycNum::root_of_unity(7, 8);
    }
    let mut coeffs = vec![Rational::zero(); p as usize];
    for a in 1..p {
        let sym = if mod_pow(a, (p - 1) / 2, p) == 1 { 1 } else { -1 };
        coeffs[a as usize] = Rational::from_integer(sym.into());
    }
    let gauss = CycNum::new(coeffs, p as i64).expect("valid conductor");
    if p % 4 == 1 {
        gauss
    } else {
        // g² = −p, so √p = −i·g
        -(&gauss * &CycNum::root_of_unity(1, 4))
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_fields_over_q() {
        assert_eq!(candidate_conductors(1, 2, 1000), vec![1, 3, 4]);
        // φ(9) = 6 exceeds 2·φ(3)
        assert_eq!(candidate_conductors(3, 2, 1000), vec![3, 12]);
    }

    #[test]
    fn gauss_sums_square_correctly() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let r = sqrt_prime(p);
            assert_eq!(&r * &r, CycNum::from_int(p as i64), "p = {p}");
        }
    }

    #[test]
    fn sqrt_of_rational_multiple_of_unit() {
        let d = &CycNum::from_int(-12) * &CycNum::root_of_unity(1, 5);
        let r = sqrt_rational_times_unit(&d).unwrap();
        assert_eq!(&r * &r, d);
    }

    #[test]
    fn approximations() {
        assert_eq!(approx_rational(0.5, 100), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(approx_rational(2.0, 100), Some(BigRational::from_integer(2.into())));
        assert_eq!(approx_rational(1.0 / 3.0, 100), Some(BigRational::new(1.into(), 3.into())));
        assert_eq!(approx_rational(std::f64::consts::PI, 100), None);
    }

    #[test]
    fn golden_ratio_is_not_split_over_q() {
        let p = Polynomial::from_i64(&[-1, -1, 1]);
        assert_eq!(split_roots(&p, &RootSearch::default()), None);
        // ... but it is over Q(ζ_5)
        let hinted = RootSearch {
            extra_conductor: 5,
            ..RootSearch::default()
        };
        let roots = split_roots(&p, &hinted).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(p.eval(r).is_zero());
        }
    }

    #[test]
    fn cubic_roots_of_unity() {
        // x^3 - 1 over Q
        let p = Polynomial::from_i64(&[-1, 0, 0, 1]);
        let roots = split_roots(&p, &RootSearch::default()).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&CycNum::root_of_unity(1, 3)));
    }

    #[test]
    fn exhaustive_route_alone() {
        // (x - 2ζ_3)(x + 1/3) over Q(ζ_3)
        let r1 = &CycNum::from_int(2) * &CycNum::root_of_unity(1, 3);
        let r2 = CycNum::from_rational(BigRational::new((-1).into(), 3.into()));
        let p = Polynomial::from_roots(&[r1.clone(), r2.clone()]);
        let fields = candidate_conductors(p.conductor(), 2, 1000);
        let found = exhaustive_root(&p, &fields).unwrap();
        assert!(found == r1 || found == r2);
    }

    #[test]
    fn discriminant_route_alone() {
        // x^2 - 2 splits over Q(ζ_8); discriminant 8 = 2²·2
        let p = Polynomial::from_i64(&[-2, 0, 1]);
        let fields = candidate_conductors(8, 2, 1000);
        let [a, b] = quadratic_by_discriminant(&p, &fields).unwrap();
        assert_eq!(&a + &b, CycNum::zero());
        assert_eq!(&a * &a, CycNum::from_int(2));
    }
}
