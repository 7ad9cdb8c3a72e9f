//! The acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines reach the terminal in
//! order; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use affchab::arithmodel::{correction_divisor, enumerate_reduction_types, reduction_type_of, MarkedPoint, ReductionType};
use affchab::chabauty::{annihilate, correction_term, criterion_row, solve_sigma, CandidateKind, ChabautyOutput, DiscStatus};
use affchab::cli::LoadedProblem;
use affchab::coleman::{residue_theorem_check, CurveIntegrator, FrobeniusData};
use affchab::curvegeom::{Family, LogDifferential, RationalPoint};
use affchab::padic::{parse_padic, PadicNumber, PadicPoly};
use affchab::pseries::strassmann_roots;
use affchab::qlinalg::{parse_rational, rat, PadicMatrix, RationalMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

/// Working precision for the fixture computations.
const N: i64 = 12;
/// Digits for the sextic kernel comparison.
const SEXTIC_DIGITS: i64 = 8;
/// Digits for the superelliptic comparisons.
const SUPER_DIGITS: i64 = 6;
/// Residue theorem: lhs − rhs must vanish to N − 3.
const RESIDUE_LOSS: i64 = 3;
/// Holomorphic integrals over principal divisors vanish to N − 4.
const PRINCIPAL_LOSS: i64 = 4;
/// H under fibre shifts agrees to N − 2.
const H_LOSS: i64 = 2;
/// Determinants of known points vanish to N − 6.
const DET_LOSS: i64 = 6;
/// A perturbed determinant must have valuation below this.
const PERTURBED_MAX: i64 = 3;
/// Strassmann comparison precision.
const STRASSMANN_N: u32 = 6;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// x ≡ expected modulo 7^n, with x known at least that far.
fn agrees_to(x: &PadicNumber, expected: &str, n: i64) -> bool {
    let e = parse_padic(&format!("{expected} + O(7^{n})"), Some(7)).unwrap();
    x.precision() >= n && (x - &e).reduce_precision(n).is_zero()
}

fn vanishes_to(x: &PadicNumber, n: i64) -> bool {
    x.is_zero() && x.precision() >= n || !x.is_zero() && x.valuation() >= n
}

struct Setup {
    l: LoadedProblem,
    ci: CurveIntegrator,
    types: Vec<ReductionType>,
    built: Duration,
}

fn setup(name: &str) -> Setup {
    let t = Instant::now();
    let l = common::loaded(name);
    let ci = CurveIntegrator::new(&l.problem).unwrap();
    let types = enumerate_reduction_types(&l.data.model, &l.data.s).unwrap();
    Setup { l, ci, types, built: t.elapsed() }
}

fn sextic() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| setup("sextic.json"))
}

fn superelliptic() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| setup("superelliptic.json"))
}

fn sextic_output() -> &'static (ChabautyOutput, Duration) {
    static O: OnceLock<(ChabautyOutput, Duration)> = OnceLock::new();
    O.get_or_init(|| {
        let s = sextic();
        let t = Instant::now();
        let known: Vec<_> = s.l.known.iter().map(|k| k.point.clone()).collect();
        let out = solve_sigma(&s.ci, &s.l.problem, &s.l.data, &s.types[0], &known).unwrap();
        (out, t.elapsed())
    })
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let s = sextic();
    ensure(s.ci.precision() >= N, || format!("precision {}", s.ci.precision()))?;
    let (_, _, _, kernel, _, _) = annihilate(&s.ci, &s.l.problem, &s.l.data, &s.types[0]).map_err(|e| e.to_string())?;
    ensure(kernel.len() == 1, || format!("kernel dimension {}", kernel.len()))?;
    let a = &kernel[0];
    let want = [
        "1",
        "5 + 3*7 + 3*7^2 + 5*7^3 + 3*7^4 + 2*7^6 + 2*7^7",
        "5 + 6*7 + 6*7^2 + 7^3 + 4*7^4 + 6*7^5 + 5*7^6 + 3*7^7",
    ];
    for (j, w) in want.iter().enumerate() {
        ensure(agrees_to(&a[j], w, SEXTIC_DIGITS), || format!("a{j} = {}", a[j]))?;
    }
    let took = t.elapsed() + s.built;
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("a1, a2 digit-exact to O(7^{SEXTIC_DIGITS}) in {took:.1?}"))
}

fn criterion_2() -> Outcome {
    let (out, took) = sextic_output();
    let locus = out.loci.iter().find(|l| l.disc.point == Some((6, 1))).ok_or("no disc (6, 1)")?;
    let DiscStatus::Resolved { series, points, .. } = &locus.status else {
        return Err(format!("disc of the base point: {:?}", locus.status));
    };
    let c = series.coeffs();
    ensure(agrees_to(&c[1], "7 + 3*7^2", 3), || format!("c1 = {}", c[1]))?;
    ensure(agrees_to(&c[2], "6*7^2", 3), || format!("c2 = {}", c[2]))?;
    let vals: Vec<Option<i64>> = c[..7].iter().map(|x| (!x.is_zero()).then(|| x.valuation())).collect();
    ensure(vals == [None, Some(1), Some(2), Some(3), Some(4), Some(6), Some(7)], || format!("valuations {vals:?}"))?;
    ensure(points.len() == 1, || format!("{} roots", points.len()))?;
    ensure(out.unresolved() == 0, || format!("{} unresolved discs", out.unresolved()))?;
    let extra = out.candidates.iter().filter(|c| c.kind != CandidateKind::MatchedKnown).count();
    ensure(extra == 0, || format!("{extra} extra candidates"))?;
    let found: BTreeSet<String> = out.candidates.iter().filter_map(|c| c.known.as_ref().map(|k| k.to_string())).collect();
    let want: BTreeSet<String> = common::sextic_known_points().iter().map(|&(x, y)| format!("({x}, {y})")).collect();
    ensure(found == want, || format!("locus {found:?}"))?;
    let took = *took + sextic().built;
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("one root on the base disc, locus = 10 known points, 0 extra, in {took:.1?}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let s = superelliptic();
    let sigma = s.types.iter().find(|t| t.to_string() == "487:cusp Q2@487a").ok_or("no Q2@487a type")?;
    let (_, target, m, kernel, _, _) = annihilate(&s.ci, &s.l.problem, &s.l.data, sigma).map_err(|e| e.to_string())?;
    ensure(target.b_is_zero(), || "b is not zero".into())?;
    let want = [
        ["2*7 + 5*7^2 + 4*7^4 + 5*7^5", "6*7 + 7^2 + 3*7^4", "2*7 + 6*7^2 + 2*7^3"],
        ["0", "6*7^2 + 2*7^3 + 6*7^4", "7 + 4*7^2 + 7^3 + 5*7^4 + 4*7^5"],
    ];
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            ensure(agrees_to(m.entry(i, j), w, SUPER_DIGITS), || format!("M({i}, {j}) = {}", m.entry(i, j)))?;
        }
    }
    // −log 2 − ½ log 3 from 2³ = 1 + 7 and 3⁶ = 1 + 7·104, summed over Q
    let beta = -&(&common::log_oracle(7, &rat(7), N).mul_rational(&(rat(1) / rat(3)))
        + &common::log_oracle(7, &rat(728), N).mul_rational(&(rat(1) / rat(12))));
    for j in 1..3 {
        let b = &m.integrals[0][j] - m.entry(0, j);
        ensure((&b - &beta).reduce_precision(SUPER_DIGITS).is_zero(), || format!("β{} = {b}", j + 1))?;
    }
    ensure(kernel.len() == 1, || format!("kernel dimension {}", kernel.len()))?;
    let want = ["1", "2 + 6*7 + 2*7^2 + 3*7^3 + 4*7^5", "2*7 + 6*7^2 + 2*7^5"];
    for (j, w) in want.iter().enumerate() {
        ensure(agrees_to(&kernel[0][j], w, SUPER_DIGITS), || format!("a{j} = {}", kernel[0][j]))?;
    }
    let r = s.l.known.iter().find(|k| k.id == "R").ok_or("no check point")?;
    let base = s.ci.point(&s.l.data.base.point).map_err(|e| e.to_string())?;
    let (ints, _) = s.ci.basis_integrals(&base, &s.ci.point(&r.point).unwrap()).map_err(|e| e.to_string())?;
    let rho = kernel[0].iter().zip(&ints).fold(PadicNumber::exact_zero(7), |acc, (a, x)| &acc + &(a * x));
    ensure(vanishes_to(&rho, SUPER_DIGITS), || format!("∫ω at the check point = {rho}"))?;
    let took = t.elapsed() + s.built;
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("M, β, b, kernel to O(7^{SUPER_DIGITS}); check point ∫ω = {rho}; in {took:.1?}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut pairs = 0;
    let mut worst = i64::MAX;
    for s in [sextic(), superelliptic()] {
        let problem = &s.l.problem;
        let mut done = 0;
        while done < 26 {
            let found = match problem.family {
                Family::Hyperelliptic { .. } => common::sextic_principal_divisor(&mut rng, N),
                Family::Superelliptic { .. } => common::superelliptic_principal_divisor(&mut rng, N),
            };
            let Some((div, vals)) = found else { continue };
            let size = problem.basis_size();
            let omega = LogDifferential::new((0..size).map(|_| PadicNumber::from_int(7, rng.gen_range(-500..500), N)).collect());
            let (lhs, rhs) = residue_theorem_check(&s.ci, problem, &div, &vals, &omega).map_err(|e| e.to_string())?;
            let d = &lhs - &rhs;
            let v = if d.is_zero() { d.precision() } else { d.valuation() };
            worst = worst.min(v);
            ensure(v >= N - RESIDUE_LOSS, || format!("lhs {lhs} rhs {rhs}"))?;
            done += 1;
        }
        pairs += done;
    }
    Ok(format!("{pairs} pairs, worst difference valuation {worst} ≥ {}", N - RESIDUE_LOSS))
}

/// Exact value of an integer polynomial.
fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k)
}

fn val7(x: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let seven = BigInt::from(7);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &seven).is_zero() {
        x /= &seven;
        v += 1;
    }
    Some(v)
}

/// Every zero x mod 7^n of f is refined by evaluation: it is certified when
/// v(f(x)) > 2·v(f'(x)), so Hensel gives a root of f in Z_7 near x. Returns
/// the zeros, the distinct certified roots (as classes mod 7^(n − v(f'))),
/// and whether every zero was certified.
fn strassmann_oracle(c: &[BigInt], n: u32) -> (BTreeSet<u64>, BTreeSet<(u64, u32)>, bool) {
    let zeros = common::brute_force_zeros(c, 7, n);
    let d: Vec<BigInt> = c.iter().enumerate().skip(1).map(|(k, x)| x * BigInt::from(k)).collect();
    let mut roots = BTreeSet::new();
    let mut all = true;
    for &x in &zeros {
        let xb = BigInt::from(x);
        let fx = val7(&eval_int(c, &xb));
        let dx = val7(&eval_int(&d, &xb));
        match (fx, dx) {
            (None, Some(k)) if k < n => roots.insert((x % 7u64.pow(n - k), n - k)),
            (Some(a), Some(k)) if a > 2 * k && k < n => roots.insert((x % 7u64.pow(n - k), n - k)),
            _ => {
                all = false;
                false
            }
        };
    }
    (zeros, roots, all)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let n = STRASSMANN_N;
    let m = 7i64.pow(n);
    let (mut ok, mut refused, mut with_roots) = (0, 0, 0);
    for trial in 0..120 {
        let c: Vec<BigInt> = if trial % 2 == 0 {
            let deg = rng.gen_range(1..=5);
            (0..=deg).map(|_| BigInt::from(rng.gen_range(0..m))).collect()
        } else {
            // products of linear factors, some roots 7-adically close
            let k = rng.gen_range(1..=4);
            let r0 = rng.gen_range(0..m);
            let roots: Vec<i64> = (0..k)
                .map(|_| if rng.gen_bool(0.3) { (r0 + 7i64.pow(rng.gen_range(1..4)) * rng.gen_range(1..7)) % m } else { rng.gen_range(0..m) })
                .collect();
            let f = common::poly_from_roots(&roots);
            let extra: Vec<i64> = (0..=rng.gen_range(0..=5 - k)).map(|_| rng.gen_range(-50..50)).collect();
            common::mul_int_polys(&f, &extra)
        };
        let c: Vec<BigInt> = c.iter().map(|x| x.mod_floor(&BigInt::from(m))).collect();
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let (zeros, oracle_roots, certified) = strassmann_oracle(&c, n);
        let f = common::series_from(&c, 7, n as i64);
        match strassmann_roots(&f) {
            Ok(iso) => {
                ok += 1;
                ensure(iso.roots.len() <= iso.bound, || format!("{c:?}: {} roots, bound {}", iso.roots.len(), iso.bound))?;
                ensure(oracle_roots.len() <= iso.bound, || format!("{c:?}: oracle has {} roots", oracle_roots.len()))?;
                let got = common::classes_of(&iso.roots, 7, n);
                ensure(got == zeros, || format!("{c:?}: reported classes differ from brute force"))?;
                ensure(iso.roots.len() == oracle_roots.len(), || {
                    format!("{c:?}: {} reported, oracle {:?}", iso.roots.len(), oracle_roots)
                })?;
                for r in &iso.roots {
                    let v = r.value.lift_integer().unwrap().mod_floor(&BigInt::from(m)).to_u64().unwrap();
                    ensure(oracle_roots.iter().any(|&(x, k)| v % 7u64.pow(k) == x), || format!("{c:?}: root {v} not certified"))?;
                }
                if !iso.roots.is_empty() {
                    with_roots += 1;
                }
            }
            Err(e) => {
                refused += 1;
                ensure(e.kind() == "PrecisionLoss", || format!("{c:?}: {e}"))?;
                // refusing is only allowed when evaluation cannot decide
                ensure(!certified, || format!("{c:?}: refused although every zero is certified"))?;
            }
        }
    }
    ensure(ok >= 100, || format!("only {ok} decided"))?;
    Ok(format!("{ok} polynomials agree with brute force ({with_roots} with roots), {refused} refused as undecidable at O(7^{n})"))
}

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

/// gcd over F_p of two polynomials given constant term first.
fn gcd_mod(mut a: Vec<i64>, mut b: Vec<i64>, p: i64) -> Vec<i64> {
    let trim = |v: &mut Vec<i64>| {
        for x in v.iter_mut() {
            *x = x.rem_euclid(p);
        }
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = (1..p).find(|i| i * b[b.len() - 1] % p == 1).unwrap();
        while a.len() >= b.len() {
            let q = a[a.len() - 1] * inv % p;
            let s = a.len() - b.len();
            for (i, x) in b.iter().enumerate() {
                a[s + i] = (a[s + i] - q * x).rem_euclid(p);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn good_reduction(f: &[i64], p: i64) -> bool {
    let d: Vec<i64> = f.iter().enumerate().skip(1).map(|(k, c)| c * k as i64).collect();
    f[f.len() - 1].rem_euclid(p) != 0 && gcd_mod(f.to_vec(), d, p).len() == 1
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let primes = [5u32, 7, 11];
    let mut curves = Vec::new();
    while curves.len() < 10 {
        let p = primes[curves.len() % 3];
        let deg = rng.gen_range(3..=6);
        let f: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-30..30)).collect();
        if good_reduction(&f, p as i64) {
            curves.push((f, p));
        }
    }
    for (f, p) in &curves {
        let n = 8;
        let w = FrobeniusData::working_precision(*p, f.len() - 1, n);
        let fd = FrobeniusData::new(&PadicPoly::from_ints(*p, f, w), n).map_err(|e| format!("{f:?} at {p}: {e}"))?;
        let got = fd.point_count().map_err(|e| format!("{f:?} at {p}: {e}"))?;
        let want = brute_count(f, *p as i64);
        ensure(got == want.into(), || format!("{f:?} at {p}: Frobenius gives {got}, enumeration {want}"))?;
    }
    let s = sextic();
    let base = s.ci.point(&s.l.problem.base_point).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(607);
    let mut divisors = 0;
    while divisors < 5 {
        let Some((div, _)) = common::sextic_principal_divisor(&mut rng, N) else { continue };
        let v = s.ci.divisor_integrals(&div, &base).map_err(|e| e.to_string())?;
        for (j, x) in v.iter().take(2).enumerate() {
            ensure(vanishes_to(x, N - PRINCIPAL_LOSS), || format!("∫ω{j} over a principal divisor = {x}"))?;
        }
        divisors += 1;
    }
    Ok(format!("10 point counts match enumeration; holomorphic integrals vanish to {} on {divisors} principal divisors", N - PRINCIPAL_LOSS))
}

fn symmetric_with_defect<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    // B·Bᵀ with B of rank < n
    let k = rng.gen_range(1..n);
    let b: Vec<Vec<i64>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(-5..6)).collect()).collect();
    let b = RationalMatrix::from_ints(&b).unwrap();
    b.mul(&b.transpose()).unwrap()
}

/// A shifted copy of the correction term of Ψ_q(G), with Φ_q(G) moved by
/// c times the fibre.
fn shifted_h(l: &LoadedProblem, q: u64, g: &[(i64, MarkedPoint)], c: i64, omega: &LogDifferential) -> PadicNumber {
    use affchab::arithmodel::horizontal_intersection;
    let m = &l.data.model;
    let fibre = m.fibre(q);
    let ids: Vec<(i64, &str)> = g.iter().map(|(n, p)| (*n, p.id.as_str())).collect();
    let phi = correction_divisor(m, q, &ids).unwrap().add_fibre_multiple(&fibre, &rat(c));
    let mut x = std::collections::BTreeMap::new();
    for lambda in m.primes.iter().filter(|l| l.over_prime == q) {
        let mut v = phi.cusp_intersection(m, lambda).unwrap();
        for (n, p) in g {
            v += rat(*n) * horizontal_intersection(&l.problem, m, p, lambda).unwrap();
        }
        x.insert(lambda.lambda_id.clone(), v);
    }
    correction_term(&l.problem, m, &x, omega, N).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for _ in 0..50 {
        let n = rng.gen_range(2..6);
        let a = symmetric_with_defect(&mut rng, n);
        ensure(a.rank() < n, || "no rank defect".into())?;
        let g = a.moore_penrose().map_err(|e| e.to_string())?;
        let ag = a.mul(&g).unwrap();
        let ga = g.mul(&a).unwrap();
        ensure(ag.mul(&a).unwrap() == a, || "A A⁺ A ≠ A".into())?;
        ensure(ga.mul(&g).unwrap() == g, || "A⁺ A A⁺ ≠ A⁺".into())?;
        ensure(ag.transpose() == ag && ga.transpose() == ga, || "A A⁺ or A⁺ A not symmetric".into())?;
    }
    let mut fibres = 0;
    for name in ["sextic.json", "superelliptic.json"] {
        let file = common::fixture(name);
        let l = common::loaded(name);
        for spec in &file.model.fibres {
            let fibre = l.data.model.fibre(spec.prime);
            let mut objects: Vec<String> = l.known.iter().map(|k| k.id.clone()).collect();
            objects.extend(fibre.incidences.keys().cloned());
            objects.sort();
            objects.dedup();
            for a in &objects {
                for b in &objects {
                    let phi = correction_divisor(&l.data.model, spec.prime, &[(1, a), (-1, b)]).map_err(|e| e.to_string())?;
                    let inc: Vec<BigRational> = match (fibre.incidence(a), fibre.incidence(b)) {
                        (Ok(x), Ok(y)) => x.iter().zip(y).map(|(x, y)| x - y).collect(),
                        _ => vec![rat(0); fibre.len()],
                    };
                    let mphi = common::mat_vec(&spec.intersection_matrix, &phi.coeffs);
                    ensure(mphi.iter().zip(&inc).all(|(x, y)| (x + y).is_zero()), || format!("{name} over {}: M·Φ for {a} − {b}", spec.prime))?;
                    let psi = phi.psi_intersections(&fibre, &inc).map_err(|e| e.to_string())?;
                    ensure(psi.iter().all(|x| x.is_zero()), || format!("{name} over {}: Ψ·C ≠ 0 for {a} − {b}", spec.prime))?;
                }
            }
            fibres += 1;
        }
    }
    let mut shifts = 0;
    for (name, g) in [
        ("sextic.json", [(1, ("x1+", "1", "3")), (-1, ("x-1+", "-1", "1"))]),
        ("superelliptic.json", [(1, ("A", "1/18", "7/18")), (-1, ("P0", "0", "0"))]),
    ] {
        let l = common::loaded(name);
        let g: Vec<(i64, MarkedPoint)> = g
            .iter()
            .map(|(n, (id, x, y))| {
                (*n, MarkedPoint::new(*id, RationalPoint::new(parse_rational(x).unwrap(), parse_rational(y).unwrap())))
            })
            .collect();
        for _ in 0..6 {
            let omega = LogDifferential::new((0..l.problem.basis_size()).map(|_| PadicNumber::from_int(7, rng.gen_range(-40..40), N)).collect());
            let c = rng.gen_range(-4..5);
            let d = &shifted_h(&l, 3, &g, 0, &omega) - &shifted_h(&l, 3, &g, c, &omega);
            ensure(vanishes_to(&d, N - H_LOSS), || format!("{name}: H moved by {d} under a shift by {c}"))?;
            shifts += 1;
        }
    }
    Ok(format!("50 Penrose checks exact; Ψ contract on {fibres} fixture fibres; H invariant to {} on {shifts} shifts", N - H_LOSS))
}

fn criterion_8() -> Outcome {
    let s = sextic();
    let rows: Vec<Vec<PadicNumber>> = s
        .l
        .known
        .iter()
        .map(|k| {
            let t = reduction_type_of(&s.l.problem, &s.l.data.model, &[], k).unwrap();
            criterion_row(&s.ci, &s.l.problem, &s.l.data, k, &t).unwrap()
        })
        .collect();
    let n = s.ci.precision();
    let mut count = 0;
    let mut worst = i64::MAX;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            for c in b + 1..rows.len() {
                let d = PadicMatrix::from_rows(7, vec![rows[a].clone(), rows[b].clone(), rows[c].clone()]).unwrap().det().unwrap();
                let v = if d.is_zero() { d.precision() } else { d.valuation() };
                worst = worst.min(v);
                ensure(v >= n - DET_LOSS, || format!("points {a}, {b}, {c}: {d}"))?;
                count += 1;
            }
        }
    }
    ensure(count == 120, || format!("{count} subsets"))?;
    let mut bad: Vec<Vec<PadicNumber>> = rows[1..4].to_vec();
    bad[1][0] = &bad[1][0] + &PadicNumber::from_int(7, 1, n);
    let d = PadicMatrix::from_rows(7, bad).unwrap().det().unwrap();
    ensure(!d.is_zero() && d.valuation() < PERTURBED_MAX, || format!("perturbed determinant {d}"))?;
    Ok(format!("120 subsets, worst valuation {worst} ≥ {}; perturbed valuation {}", n - DET_LOSS, d.valuation()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("sextic kernel", criterion_1),
        ("sextic locus", criterion_2),
        ("superelliptic matrix and kernel", criterion_3),
        ("residue theorem", criterion_4),
        ("Strassmann vs brute force", criterion_5),
        ("Frobenius counts and principal divisors", criterion_6),
        ("pseudoinverse, Ψ and H", criterion_7),
        ("determinant criterion", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let tag = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| tag.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(msg) => println!("PASS {tag} ({name}): {msg} [{:.1?}]", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {tag} ({name}): {msg} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
