use affchab::padic::*;
use affchab::qlinalg::{rat, QPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

mod common;
use common::log_oracle;

fn q7(n: i64, prec: i64) -> PadicNumber {
    PadicNumber::from_int(7, n, prec)
}

#[test]
fn log_of_p_is_zero() {
    let l = iwasawa_log(&q7(7, 20)).unwrap();
    assert!(l.is_zero());
}

#[test]
fn log_of_one_is_zero() {
    assert!(iwasawa_log(&q7(1, 20)).unwrap().is_zero());
}

#[test]
fn log_zero_rejected() {
    let e = iwasawa_log(&PadicNumber::zero(7, 10)).unwrap_err();
    assert_eq!(e.kind(), "ZeroInput");
}

#[test]
fn log_two_plus_log_three_is_log_six() {
    let n = 10;
    let lhs = &iwasawa_log(&q7(2, n)).unwrap() + &iwasawa_log(&q7(3, n)).unwrap();
    let rhs = iwasawa_log(&q7(6, n)).unwrap();
    assert!(lhs.agrees_with(&rhs));
    assert!(rhs.precision() >= n - 1);
}

#[test]
fn log_of_principal_unit_matches_rational_series() {
    // 8 = 1 + 7 is already a principal unit, so no Teichmüller stripping
    let n = 12;
    let ours = iwasawa_log(&q7(8, n)).unwrap();
    let oracle = log_oracle(7, &rat(7), n);
    assert!(ours.agrees_with(&oracle), "{ours} vs {oracle}");
    assert!(ours.precision() >= n - 1);
}

#[test]
fn log_strips_teichmuller_factor() {
    // 2 = ω(2)·⟨2⟩ with ⟨2⟩ = 2/ω(2); log ⟨2⟩ via the rational series of 2^6 − 1
    let n = 10;
    let two = q7(2, n);
    let direct = iwasawa_log(&two).unwrap();
    let via_power = log_oracle(7, &rat(63), n + 2).div_i64(6);
    assert!(direct.agrees_with(&via_power));
}

#[test]
fn teichmuller_of_three() {
    let w = teichmuller_of_residue(7, 3, 12);
    assert!(w.pow(6).agrees_with(&q7(1, 12)));
    assert_eq!(w.residue().unwrap(), 3);
    assert!(iwasawa_log(&w).unwrap().is_zero());
    assert!(teichmuller_of_residue(7, 1, 12).agrees_with(&q7(1, 12)));
}

#[test]
fn teichmuller_requires_unit() {
    assert_eq!(q7(14, 10).teichmuller(10).unwrap_err().kind(), "NotAUnit");
}

#[test]
fn hensel_embed_cyclotomic_at_seven() {
    let m = QPoly::from_ints(&[1, 1, 1]);
    let embs = hensel_embed(&m, 7, 15).unwrap();
    assert_eq!(embs.len(), 2);
    let mut res: Vec<u32> = embs.iter().map(|e| e.root().residue().unwrap()).collect();
    res.sort();
    assert_eq!(res, vec![2, 4]);
    for e in &embs {
        let v = m.eval_padic(e.root(), 15);
        assert!(v.is_zero(), "minpoly(root) = {v}");
        assert!(v.precision() >= 15);
    }
}

#[test]
fn hensel_embed_no_roots_at_five() {
    assert!(hensel_embed(&QPoly::from_ints(&[1, 1, 1]), 5, 10).unwrap().is_empty());
}

#[test]
fn hensel_embed_rational_field() {
    let e = hensel_embed(&QPoly::from_ints(&[-1, 1]), 11, 10).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e[0].root().agrees_with(&PadicNumber::from_int(11, 1, 10)));
}

#[test]
fn hensel_embed_rejects_inseparable_reduction() {
    // x² + x + 1 ≡ (x − 1)² mod 3
    let e = hensel_embed(&QPoly::from_ints(&[1, 1, 1]), 3, 10).unwrap_err();
    assert_eq!(e.kind(), "NonSeparableReduction");
}

#[test]
fn log_rational_power_cases() {
    let n = 10;
    let phi = FieldEmbedding::rational(7, n);
    let half = BigRational::new(1.into(), 2.into());
    let x = RationalPower::new(QPoly::from_ints(&[3]), half.clone());
    let expected = iwasawa_log(&q7(3, n)).unwrap().div_i64(2);
    assert!(log_rational_power(&x, &phi).unwrap().agrees_with(&expected));

    let seven = RationalPower::plain(QPoly::from_ints(&[7]));
    assert!(log_rational_power(&seven, &phi).unwrap().is_zero());

    let four_half = RationalPower::new(QPoly::from_ints(&[4]), half);
    assert!(log_rational_power(&four_half, &phi).unwrap().agrees_with(&iwasawa_log(&q7(2, n)).unwrap()));

    // √−3 = 1 + 2ζ₃ inside Q₇ via either embedding of Q(ζ₃)
    let sqrt_m3 = RationalPower::plain(QPoly::from_ints(&[1, 2]));
    for e in hensel_embed(&QPoly::from_ints(&[1, 1, 1]), 7, n).unwrap() {
        assert!(log_rational_power(&sqrt_m3, &e).unwrap().agrees_with(&expected));
    }
}

#[test]
fn digit_strings_round_trip() {
    let x = parse_padic("2*7 + 5*7^2 + 4*7^4 + 5*7^5 + O(7^6)", None).unwrap();
    assert_eq!(x.prime(), 7);
    assert_eq!(x.precision(), 6);
    assert_eq!(x.valuation(), 1);
    assert_eq!(x.to_string(), "2*7 + 5*7^2 + 4*7^4 + 5*7^5 + O(7^6)");
    let y = parse_padic("7^3 + 6·7^4 + O(7^6)", Some(7)).unwrap();
    assert_eq!(y.to_string(), "7^3 + 6*7^4 + O(7^6)");
    assert_eq!(parse_padic("O(7^4)", None).unwrap().to_string(), "O(7^4)");
    assert_eq!(PadicNumber::exact_zero(7).to_string(), "0");
    assert!(parse_padic("3 + 5^2", None).is_err());
}

#[test]
fn exact_zero_and_comparisons() {
    let z = PadicNumber::exact_zero(7);
    assert_eq!(z.compare(&PadicNumber::exact_zero(7)), Comparison::Equal);
    assert_eq!(PadicNumber::zero(7, 5).compare(&q7(117_649, 10)), Comparison::Indistinguishable);
    assert_eq!(q7(1, 5).compare(&q7(2, 5)), Comparison::Distinct);
    assert!(PadicNumber::from_rational(7, &rat(0), 10).is_exact_zero());
}

fn residue_mod(x: &PadicNumber, n: i64) -> BigInt {
    let m = p_pow(x.prime(), n);
    let r = x.to_rational();
    let num = r.numer() * mod_inv(r.denom(), &m);
    ((num % &m) + &m) % &m
}

fn mod_inv(a: &BigInt, m: &BigInt) -> BigInt {
    use num_integer::Integer;
    let e = a.extended_gcd(m);
    ((e.x % m) + m) % m
}

proptest! {
    #[test]
    fn add_mul_precision_and_digits(a in 1i64..100_000, b in 1i64..100_000, na in 3i64..12, nb in 3i64..12, sa in 0i64..3, sb in 0i64..3) {
        let p = 7u32;
        let x = PadicNumber::from_int(p, a, na).shift(sa);
        let y = PadicNumber::from_int(p, b, nb).shift(sb);
        let s = &x + &y;
        prop_assert_eq!(s.precision(), (na + sa).min(nb + sb));
        let prod = &x * &y;
        let vx = x.valuation_bound();
        let vy = y.valuation_bound();
        prop_assert_eq!(prod.precision(), (vx + nb + sb).min(vy + na + sa));
        // digits agree with a high-precision recomputation of the integers
        let hi = PadicNumber::from_int(p, a * b, 40).shift(sa + sb);
        if !prod.is_zero() {
            prop_assert_eq!(residue_mod(&prod, prod.precision()), residue_mod(&hi, prod.precision()));
        }
        let hs = PadicNumber::from_int(p, a * 7i64.pow(sa as u32) + b * 7i64.pow(sb as u32), 40);
        if !s.is_zero() {
            prop_assert_eq!(residue_mod(&s, s.precision()), residue_mod(&hs, s.precision()));
        }
    }

    #[test]
    fn log_is_a_homomorphism(a in 1i64..10_000, b in 1i64..10_000) {
        prop_assume!(a % 7 != 0 && b % 7 != 0);
        let n = 10;
        let x = q7(a, n);
        let y = q7(b, n);
        let lhs = iwasawa_log(&(&x * &y)).unwrap();
        let rhs = &iwasawa_log(&x).unwrap() + &iwasawa_log(&y).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!((&lhs - &rhs).precision() >= n - 1);
    }

    #[test]
    fn log_kills_torsion_and_p(k in 0i64..4, r in 1u32..7, z in 0i64..1000) {
        let n = 10;
        let w = teichmuller_of_residue(7, r, n);
        let u = q7(1 + 7 * z, n);
        let x = &(&w * &u) * &q7(7i64.pow(k as u32), n + k);
        let lhs = iwasawa_log(&x).unwrap();
        prop_assert!(lhs.agrees_with(&iwasawa_log(&u).unwrap()));
    }

    #[test]
    fn hensel_roots_are_roots(c0 in -50i64..50, c1 in -50i64..50) {
        let m = QPoly::from_ints(&[c0, c1, 0, 1]);
        prop_assume!(m.is_squarefree());
        if let Ok(embs) = hensel_embed(&m, 7, 12) {
            let mut seen = std::collections::HashSet::new();
            for e in &embs {
                prop_assert!(m.eval_padic(e.root(), 12).is_zero());
                prop_assert!(seen.insert(e.root().residue().unwrap()));
            }
        }
    }
}
