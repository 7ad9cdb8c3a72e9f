use num_bigint::BigInt;
use num_rational::BigRational;

use crate::curvegeom::Point;
use crate::error::{Error, Result};
use crate::padic::{ilog, int_valuation, PadicNumber, PadicPoly};
use crate::qlinalg::{fp, PadicMatrix, QPoly};

/// The exact part h with φ*ω = Σ M ω + dh, stored as
/// g(x)·y + Σ_m s_m(x) / y^(2m−1).
#[derive(Clone, Debug)]
pub struct ExactPart {
    pub g: PadicPoly,
    pub s: Vec<(usize, PadicPoly)>,
}

impl ExactPart {
    fn zero(p: u32) -> Self {
        ExactPart { g: PadicPoly::zero(p), s: Vec::new() }
    }

    /// h at a point with unit y.
    pub fn eval(&self, pt: &Point) -> Result<PadicNumber> {
        let mut acc = &self.g.eval(&pt.x) * &pt.y;
        if self.s.is_empty() {
            return Ok(acc);
        }
        let inv = pt.y.inverse()?;
        let inv2 = &inv * &inv;
        let mut pw = inv.clone();
        let mut at = 1usize;
        let mut s = self.s.clone();
        s.sort_by_key(|(m, _)| *m);
        for (m, poly) in &s {
            while at < *m {
                pw = &pw * &inv2;
                at += 1;
            }
            acc = &acc + &(&poly.eval(&pt.x) * &pw);
        }
        Ok(acc)
    }
}

/// Action of the lift x ↦ x^p, y ↦ y^σ of Frobenius on the basis
/// x^i dx/y (i = 0..deg f − 2) of the de Rham cohomology of y² = f(x) with
/// the points at infinity removed.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    p: u32,
    prec: i64,
    working: i64,
    terms: usize,
    f: PadicPoly,
    /// Row i holds the coefficients of φ*(x^i dx/y).
    matrix: PadicMatrix,
    exact: Vec<ExactPart>,
}

fn binom_minus_half(k: usize) -> BigRational {
    let mut b = BigRational::from_integer(1.into());
    let half = BigRational::new((-1).into(), 2.into());
    for j in 0..k {
        b = b * (&half - BigRational::from_integer(j.into())) / BigRational::from_integer((j + 1).into());
    }
    b
}

fn vp(p: u32, n: i64) -> i64 {
    int_valuation(&BigInt::from(n), p)
}

/// Precision plan for target N: (series terms K, working precision W, certified N).
fn plan(p: u32, d: usize, n: i64) -> (usize, i64, i64) {
    let level = |k: usize| (p as usize * (2 * k + 1) - 1) / 2;
    let bmax = p as usize * d + d;
    let inf_loss = ilog(p, (2 * bmax + d) as i64);
    let term_bound = |k: usize| k as i64 + 1 - ilog(p, 2 * level(k) as i64 + 1) - inf_loss;
    let mut k = 1;
    while term_bound(k) < n + 1 || term_bound(k + 1) < n + 1 {
        k += 1;
    }
    let chain: i64 = (1..=level(k)).map(|j| vp(p, 2 * j as i64 - 1)).sum();
    let inf_chain: i64 = (0..=bmax).map(|b| vp(p, (2 * b + d) as i64)).sum();
    (k, n + chain + inf_chain + 4, n)
}

impl FrobeniusData {
    /// Precision at which the defining polynomial must be supplied for a
    /// target of N digits.
    pub fn working_precision(p: u32, degree: usize, n: i64) -> i64 {
        plan(p, degree, n).1
    }

    /// Frobenius data to N digits for y² = f(x); f must have unit leading
    /// coefficient, squarefree reduction, and precision at least
    /// `working_precision`.
    pub fn new(f: &PadicPoly, n: i64) -> Result<Self> {
        let p = f.prime();
        if p == 2 {
            return Err(Error::BadReduction("p = 2 is not supported".into()));
        }
        let d = f.degree() as usize;
        let fbar = f.reduce_mod_p().ok_or_else(|| Error::BadReduction("f is not p-integral".into()))?;
        if fbar.len() != d + 1 {
            return Err(Error::BadReduction("leading coefficient is not a unit".into()));
        }
        if fp::gcd(&fbar, &fp::derivative(&fbar, p as u64), p as u64).len() > 1 {
            return Err(Error::BadReduction(format!("f mod {p} is not squarefree")));
        }
        let (k_terms, w, cert) = plan(p, d, n);
        if f.precision() < w {
            return Err(Error::PrecisionExceeded(format!(
                "Frobenius to {n} digits needs f to precision {w}, got {}",
                f.precision()
            )));
        }
        let f = f.reduce_precision(w);
        let df = f.derivative();
        let beta = bezout_cofactor(&f, &df, w)?;
        let lc = f.leading();
        let pu = p as usize;

        // E = f(x^p) − f(x)^p, divisible by p
        let e = f.compose_power(pu).sub(&f.pow(p));
        let mut e_pows = vec![PadicPoly::constant(PadicNumber::one(p, 2 * w))];
        for _ in 1..k_terms {
            let next = e_pows.last().unwrap().mul(&e);
            e_pows.push(next);
        }
        let pnum = PadicNumber::from_int(p, p as i64, 2 * w);

        let mut rows = Vec::with_capacity(d - 1);
        let mut exact = Vec::with_capacity(d - 1);
        for i in 0..d - 1 {
            let max_level = (pu * (2 * k_terms - 1) - 1) / 2;
            let mut levels: Vec<PadicPoly> = vec![PadicPoly::zero(p); max_level + 1];
            let xpow = pu * (i + 1) - 1;
            // f-adic expansion, one sweep from the top level: cur/y^(2m+1)
            // with cur = q f + r becomes r/y^(2m+1) + q/y^(2m−1)
            let mut cur = PadicPoly::zero(p);
            for k in (0..k_terms).rev() {
                let c = PadicNumber::from_rational(p, &binom_minus_half(k), 2 * w);
                cur = cur.add(&e_pows[k].scale(&(&c * &pnum)).shift(xpow));
                let m = (pu * (2 * k + 1) - 1) / 2;
                let stop = if k == 0 { 0 } else { (pu * (2 * k - 1) - 1) / 2 };
                for lvl in (stop + 1..=m).rev() {
                    let (q, r) = cur.div_rem(&f)?;
                    levels[lvl] = levels[lvl].add(&r);
                    cur = q;
                }
            }
            levels[0] = levels[0].add(&cur);
            let mut h = ExactPart::zero(p);
            // pole reduction, top level down
            for m in (1..=max_level).rev() {
                let r = std::mem::replace(&mut levels[m], PadicPoly::zero(p));
                if r.degree() < 0 {
                    continue;
                }
                let s = beta.mul(&r).rem(&f)?;
                let (q, rest) = r.sub(&s.mul(&df)).div_rem(&f)?;
                debug_assert!(rest.coeffs().iter().all(|c| c.is_zero()));
                let k2 = BigInt::from(2 * m as i64 - 1);
                let lower = q.add(&s.derivative().scale_int(2).div_int(&k2));
                levels[m - 1] = levels[m - 1].add(&lower);
                h.s.push((m, s.scale_int(-2).div_int(&k2)));
            }
            // reduction at infinity using d(x^b y) = (b x^(b−1) f + ½ x^b f') dx/y
            let mut top = levels[0].clone();
            while top.degree() >= d as i64 - 1 {
                let deg = top.degree() as usize;
                let b = deg + 1 - d;
                let c = top.coeff(deg);
                let kappa = c.mul_i64(2).div(&lc.mul_i64((2 * b + d) as i64))?;
                let mut corr = df.shift(b).scale(&kappa).div_int(&BigInt::from(2));
                if b > 0 {
                    corr = corr.add(&f.shift(b - 1).scale(&kappa.mul_i64(b as i64)));
                }
                top = top.sub(&corr);
                let mut coeffs = top.coeffs().to_vec();
                coeffs.truncate(deg);
                top = PadicPoly::new(p, coeffs);
                h.g = h.g.add(&PadicPoly::monomial(kappa, b));
            }
            let row: Vec<PadicNumber> = (0..d - 1).map(|j| top.coeff(j).reduce_precision(cert)).collect();
            rows.push(row);
            exact.push(h);
        }
        let matrix = PadicMatrix::from_rows(p, rows)?;
        Ok(FrobeniusData { p, prec: cert, working: w, terms: k_terms, f, matrix, exact })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn working(&self) -> i64 {
        self.working
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn matrix(&self) -> &PadicMatrix {
        &self.matrix
    }

    pub fn exact_parts(&self) -> &[ExactPart] {
        &self.exact
    }

    pub fn poly(&self) -> &PadicPoly {
        &self.f
    }

    fn degree(&self) -> usize {
        self.f.degree() as usize
    }

    /// ε = ±1 with ε·p the eigenvalue on the residue class at infinity (even
    /// degree only): +1 when the two points at infinity are rational over F_p.
    pub fn infinity_sign(&self) -> Option<i64> {
        if self.degree() % 2 == 1 {
            return None;
        }
        let lc = self.f.leading().residue().ok()? as u64;
        Some(if fp::is_square(lc, self.p as u64) { 1 } else { -1 })
    }

    /// Characteristic polynomial of Frobenius on H¹ of the complete curve,
    /// constant term first (the extra factor T − εp removed in even degree).
    pub fn charpoly(&self) -> Result<Vec<PadicNumber>> {
        let c = self.matrix.charpoly()?;
        match self.infinity_sign() {
            None => Ok(c),
            Some(eps) => {
                // synthetic division by T − εp
                let root = PadicNumber::from_int(self.p, eps * self.p as i64, 4 * self.prec);
                let n = c.len() - 1;
                let mut q = vec![PadicNumber::exact_zero(self.p); n];
                let mut carry = PadicNumber::exact_zero(self.p);
                for k in (0..n).rev() {
                    carry = &c[k + 1] + &(&carry * &root);
                    q[k] = carry.clone();
                }
                let rem = &c[0] + &(&carry * &root);
                if !rem.is_zero() {
                    return Err(Error::PrecisionLoss(format!("T − {}·p does not divide the characteristic polynomial", eps)));
                }
                Ok(q)
            }
        }
    }

    /// Integer characteristic polynomial from the p-adic one (centered lifts).
    pub fn integer_charpoly(&self) -> Result<Vec<BigInt>> {
        self.charpoly()?
            .iter()
            .map(|c| {
                c.centered_integer()
                    .or_else(|| if c.is_zero() { Some(BigInt::from(0)) } else { None })
                    .ok_or_else(|| Error::PrecisionLoss(format!("coefficient {c} is not integral")))
            })
            .collect()
    }

    /// a_p = trace of Frobenius on H¹ of the complete curve.
    pub fn trace(&self) -> Result<BigInt> {
        let c = self.integer_charpoly()?;
        let n = c.len() - 1;
        Ok(-c[n - 1].clone())
    }

    /// #X(F_p) = p + 1 − a_p for the smooth complete curve.
    pub fn point_count(&self) -> Result<BigInt> {
        Ok(BigInt::from(self.p) + 1 - self.trace()?)
    }

    /// Checks the functional equation c_k = p^(g−k) c_(2g−k) and that every
    /// eigenvalue has complex absolute value √p.
    pub fn weil_check(&self) -> Result<bool> {
        let c = self.integer_charpoly()?;
        let two_g = c.len() - 1;
        let g = two_g / 2;
        let p = BigInt::from(self.p);
        for k in 0..=g {
            if c[k] != p.pow((g - k) as u32) * &c[two_g - k] {
                return Ok(false);
            }
        }
        Ok(roots_on_weil_circle(&c, self.p))
    }
}

/// β with α·f + β·f' = 1, deg β < deg f, from the Sylvester system.
fn bezout_cofactor(f: &PadicPoly, df: &PadicPoly, w: i64) -> Result<PadicPoly> {
    let p = f.prime();
    let d = f.degree() as usize;
    // unknowns: α_0..α_{d−2}, β_0..β_{d−1}; equations: coefficients 0..2d−2
    let n = 2 * d - 1;
    let mut m = PadicMatrix::zeros(p, n, n);
    for a in 0..d - 1 {
        for (i, c) in f.coeffs().iter().enumerate() {
            m.set(a + i, a, c.clone());
        }
    }
    for b in 0..d {
        for (i, c) in df.coeffs().iter().enumerate() {
            m.set(b + i, d - 1 + b, c.clone());
        }
    }
    let mut rhs = vec![PadicNumber::exact_zero(p); n];
    rhs[0] = PadicNumber::one(p, 2 * w);
    let sol = m.solve(&rhs)?;
    Ok(PadicPoly::new(p, sol[d - 1..].to_vec()))
}

/// All roots of P(T) = T^g Q(T + p/T) have |T| = √p: Q real-rooted with
/// roots in [−2√p, 2√p].
fn roots_on_weil_circle(c: &[BigInt], p: u32) -> bool {
    let two_g = c.len() - 1;
    let g = two_g / 2;
    let pr = BigRational::from_integer(p.into());
    // peel lead·T^g (T + p/T)^j off P from the top
    let mut rem: Vec<BigRational> = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut q = vec![BigRational::from_integer(0.into()); g + 1];
    for j in (0..=g).rev() {
        // leading remaining term at T^(g + j) (index g + j)
        let lead = rem[g + j].clone();
        q[j] = lead.clone();
        // subtract lead·(T + p/T)^j centred at index g
        let mut binom = BigInt::from(1);
        for i in 0..=j {
            // term T^(j−i) (p/T)^i = p^i T^(j−2i)
            let idx = (g + j) as i64 - 2 * i as i64;
            let coef = &lead * BigRational::from_integer(&binom * BigInt::from(p).pow(i as u32));
            rem[idx as usize] = &rem[idx as usize] - coef;
            binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
        }
    }
    if rem.iter().any(|x| x != &BigRational::from_integer(0.into())) {
        return false;
    }
    let qpoly = QPoly::new(q);
    let sf = {
        let gcd = qpoly.gcd(&qpoly.derivative());
        qpoly.div_rem(&gcd).0
    };
    let distinct = sf.degree().max(0) as usize;
    if sf.real_root_count() != distinct {
        return false;
    }
    // no real root z with z² > 4p: R(w) with R(z²) = ±sf(z)·sf(−z) has no root w > 4p
    let prod = &sf * &sf.compose(&QPoly::from_ints(&[0, -1]));
    let r = QPoly::new(prod.coeffs().iter().step_by(2).cloned().collect());
    let moved = r.compose(&QPoly::new(vec![pr * BigRational::from_integer(4.into()), BigRational::from_integer(1.into())]));
    positive_root_count(&moved) == 0
}

/// Number of distinct roots in (0, ∞) by Sturm's theorem.
fn positive_root_count(f: &QPoly) -> usize {
    if f.degree() <= 0 {
        return 0;
    }
    let gcd = f.gcd(&f.derivative());
    let f = f.div_rem(&gcd).0;
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    let sgn = |x: &BigRational| {
        use num_traits::Signed;
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    };
    let changes = |v: Vec<i32>| {
        let v: Vec<i32> = v.into_iter().filter(|&s| s != 0).collect();
        v.windows(2).filter(|w| w[0] != w[1]).count()
    };
    // at 0⁺ use the lowest nonzero coefficient's sign pattern via values at 0,
    // falling back to the derivative sign when a value vanishes
    let at_zero: Vec<i32> = seq
        .iter()
        .map(|q| {
            let c0 = q.coeff(0);
            if sgn(&c0) != 0 {
                sgn(&c0)
            } else {
                q.coeffs().iter().find(|c| sgn(c) != 0).map_or(0, sgn)
            }
        })
        .collect();
    let at_inf: Vec<i32> = seq.iter().map(|q| sgn(&q.leading())).collect();
    changes(at_zero).saturating_sub(changes(at_inf))
}
