use std::sync::OnceLock;
use std::time::Instant;

use affchab::coleman::*;
use affchab::curvegeom::{Family, LogDifferential, Point, RationalPoint};
use affchab::padic::{iwasawa_log, parse_padic, PadicNumber, PadicPoly};
use affchab::qlinalg::{normalize, rat, PadicMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

/// #X(F_p) for y² = f(x) on the smooth complete model, by enumeration.
fn brute_count(f: &[i64], p: i64) -> i64 {
    let d = f.len() - 1;
    let mut n = 0;
    for x in 0..p {
        let v = f.iter().rev().fold(0i64, |acc, &c| (acc * x + c).rem_euclid(p));
        n += (0..p).filter(|y| (y * y - v).rem_euclid(p) == 0).count() as i64;
    }
    let lc = f[d].rem_euclid(p);
    if d % 2 == 1 {
        n + 1
    } else if (1..p).any(|y| (y * y - lc).rem_euclid(p) == 0) {
        n + 2
    } else {
        n
    }
}

fn frob(f: &[i64], p: u32, n: i64) -> FrobeniusData {
    let w = FrobeniusData::working_precision(p, f.len() - 1, n);
    FrobeniusData::new(&PadicPoly::from_ints(p, f, w), n).unwrap()
}

#[test]
fn point_count_genus_two_sextic() {
    let f = [9, 20, 2, -18, -7, 2, 1];
    let t = Instant::now();
    let fd = frob(&f, 7, 12);
    eprintln!("frobenius in {:?}, W = {}, K = {}", t.elapsed(), fd.working(), fd.terms());
    eprintln!("{:?}", fd.matrix());
    assert_eq!(fd.point_count().unwrap(), brute_count(&f, 7).into());
    assert!(fd.weil_check().unwrap());
}

#[test]
fn point_count_elliptic_curve() {
    let f = [1, 1, 0, 1];
    let fd = frob(&f, 7, 10);
    assert_eq!(fd.point_count().unwrap(), brute_count(&f, 7).into());
    assert!(fd.weil_check().unwrap());
}

fn sextic() -> &'static CurveIntegrator {
    static CI: OnceLock<CurveIntegrator> = OnceLock::new();
    CI.get_or_init(|| CurveIntegrator::new(&common::sextic_problem(12)).unwrap())
}

fn superelliptic() -> &'static CurveIntegrator {
    static CI: OnceLock<CurveIntegrator> = OnceLock::new();
    CI.get_or_init(|| CurveIntegrator::new(&common::superelliptic_problem(12)).unwrap())
}

fn pt(ci: &CurveIntegrator, x: i64, y: i64) -> Point {
    ci.point(&RationalPoint::from_ints(x, y)).unwrap()
}

fn digits(s: &str) -> PadicNumber {
    parse_padic(s, Some(7)).unwrap()
}

fn agree(x: &PadicNumber, expected: &str) -> bool {
    let e = digits(expected);
    let d = x - &e;
    d.is_zero() && d.precision() >= e.precision()
}

#[test]
fn sextic_kernel_digits() {
    let ci = sextic();
    let p0 = pt(ci, -1, 1);
    let rows: Vec<Vec<PadicNumber>> =
        [(0, 3), (1, 3)].iter().map(|&(x, y)| ci.basis_integrals(&p0, &pt(ci, x, y)).unwrap().0).collect();
    assert_eq!(rows[0].len(), 3);
    let k = PadicMatrix::from_rows(7, rows).unwrap().kernel().unwrap();
    let a = normalize(k.vectors[0].clone()).unwrap();
    assert!(agree(&a[0], "1 + O(7^8)"));
    assert!(agree(&a[1], "5 + 3*7 + 3*7^2 + 5*7^3 + 3*7^4 + 2*7^6 + 2*7^7 + O(7^8)"));
    assert!(agree(&a[2], "5 + 6*7 + 6*7^2 + 7^3 + 4*7^4 + 6*7^5 + 5*7^6 + 3*7^7 + O(7^8)"));
}

#[test]
fn superelliptic_row_at_a() {
    let ci = superelliptic();
    let base = ci.point(&RationalPoint::from_ints(0, 0)).unwrap();
    let a = ci.point(&RationalPoint::new(rat(1) / rat(18), rat(7) / rat(18))).unwrap();
    let (v, m) = ci.basis_integrals(&base, &a).unwrap();
    assert_eq!(m, Method::Pullback);
    let beta = &iwasawa_log(&PadicNumber::from_int(7, 2, 14)).unwrap()
        + &iwasawa_log(&PadicNumber::from_int(7, 3, 14)).unwrap().div_i64(2);
    assert!(agree(&v[0], "2*7 + 5*7^2 + 4*7^4 + 5*7^5 + O(7^6)"));
    assert!(agree(&(&v[1] + &beta), "6*7 + 7^2 + 3*7^4 + O(7^6)"));
    assert!(agree(&(&v[2] + &beta), "2*7 + 6*7^2 + 2*7^3 + O(7^6)"));
}

#[test]
fn integrals_are_additive_and_antisymmetric() {
    let ci = sextic();
    let pts: Vec<Point> = common::sextic_known_points().iter().map(|&(x, y)| pt(ci, x, y)).collect();
    for w in pts.windows(3) {
        let (ab, _) = ci.basis_integrals(&w[0], &w[1]).unwrap();
        let (bc, _) = ci.basis_integrals(&w[1], &w[2]).unwrap();
        let (ac, _) = ci.basis_integrals(&w[0], &w[2]).unwrap();
        let (ba, _) = ci.basis_integrals(&w[1], &w[0]).unwrap();
        for j in 0..3 {
            let d = &(&ab[j] + &bc[j]) - &ac[j];
            assert!(d.is_zero() && d.precision() >= 10, "additivity {j}: {d:?}");
            let s = &ab[j] + &ba[j];
            assert!(s.is_zero() && s.precision() >= 10, "antisymmetry {j}: {s:?}");
        }
    }
}

#[test]
fn superelliptic_integrals_are_additive() {
    let ci = superelliptic();
    let base = ci.point(&RationalPoint::from_ints(0, 0)).unwrap();
    let a = ci.point(&RationalPoint::new(rat(1) / rat(18), rat(7) / rat(18))).unwrap();
    let c = ci.point(&RationalPoint::new(rat(216) / rat(487), rat(438) / rat(487))).unwrap();
    let (ba, _) = ci.basis_integrals(&base, &a).unwrap();
    let (ac, _) = ci.basis_integrals(&a, &c).unwrap();
    let (bc, _) = ci.basis_integrals(&base, &c).unwrap();
    for j in 0..3 {
        let d = &(&ba[j] + &ac[j]) - &bc[j];
        assert!(d.is_zero() && d.precision() >= 10, "{j}: {d:?}");
    }
}

#[test]
fn global_integral_agrees_with_tiny_integral_inside_a_disc() {
    let ci = sextic();
    let p0 = pt(ci, -1, 1);
    // (−1 + 7t, y(t)) at t = 2 lies in the disc of (−1, 1)
    let (lp, _) = ci.local_expansion(&p0).unwrap();
    let q = ci.curve().point_at(&lp, &PadicNumber::from_int(7, 2, 18)).unwrap();
    let omega = LogDifferential::new((1..4).map(|k| PadicNumber::from_int(7, k, 12)).collect());
    let tiny = ci.tiny_integral(&omega, &p0, &q).unwrap();
    assert_eq!(tiny.method, Method::Tiny);
    // the same integral routed through another disc
    let r = pt(ci, 1, 3);
    let a = ci.coleman_integral(&omega, &p0, &r).unwrap();
    let b = ci.coleman_integral(&omega, &r, &q).unwrap();
    assert_eq!(a.method, Method::Frobenius);
    let d = &(&a.value + &b.value) - &tiny.value;
    assert!(d.is_zero() && d.precision() >= 10, "{d:?}");
}

#[test]
fn tiny_integral_rejects_points_in_different_discs() {
    let ci = sextic();
    let omega = LogDifferential::basis(7, 3, 0, 12);
    let e = ci.tiny_integral(&omega, &pt(ci, -1, 1), &pt(ci, 0, 3)).unwrap_err();
    assert_eq!(e.kind(), "DifferentDiscs");
}

#[test]
fn endpoints_near_the_cusps_are_restricted() {
    let ci = superelliptic();
    let base = ci.point(&RationalPoint::from_ints(0, 0)).unwrap();
    // x ≡ 6 mod 7: u′ = y/x reduces to a cube root of unity
    let c = ci.curve();
    let disc = c.residue_discs().into_iter().find(|d| d.point.is_some_and(|(x, _)| x == 6)).unwrap();
    let q = c.default_center(&disc).unwrap();
    assert_eq!(ci.basis_integrals(&base, &q).unwrap_err().kind(), "EndpointRestriction");
}

#[test]
fn holomorphic_forms_vanish_on_principal_divisors() {
    let ci = sextic();
    let problem = common::sextic_problem(12);
    let base = ci.point(&problem.base_point).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 3 {
        let Some((div, _)) = common::sextic_principal_divisor(&mut rng, 12) else { continue };
        let v = ci.divisor_integrals(&div, &base).unwrap();
        for j in 0..2 {
            assert!(v[j].is_zero() && v[j].precision() >= 8, "{j}: {:?}", v[j]);
        }
        done += 1;
    }
}

#[test]
fn residue_theorem_on_both_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (ci, problem) in [(sextic(), common::sextic_problem(12)), (superelliptic(), common::superelliptic_problem(12))] {
        let mut done = 0;
        while done < 3 {
            let found = match problem.family {
                Family::Hyperelliptic { .. } => common::sextic_principal_divisor(&mut rng, 12),
                Family::Superelliptic { .. } => common::superelliptic_principal_divisor(&mut rng, 12),
            };
            let Some((div, vals)) = found else { continue };
            let omega = LogDifferential::new((0..3).map(|_| PadicNumber::from_int(7, rng.gen_range(-50..50), 12)).collect());
            let (lhs, rhs) = residue_theorem_check(ci, &problem, &div, &vals, &omega).unwrap();
            let d = &lhs - &rhs;
            assert!(d.is_zero() && d.precision() >= 9, "lhs {lhs:?} rhs {rhs:?}");
            // scaling f by p changes no side
            let scaled: Vec<Vec<PadicNumber>> = vals.iter().map(|v| v.iter().map(|x| x.mul_i64(7)).collect()).collect();
            let (_, rhs2) = residue_theorem_check(ci, &problem, &div, &scaled, &omega).unwrap();
            assert!((&rhs2 - &rhs).is_zero());
            done += 1;
        }
    }
}
