use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{ilog, newton_lift, teichmuller_of_residue, PadicNumber, PadicPoly};
use crate::pseries::{Tail, TruncatedSeries};
use crate::qlinalg::fp;

/// A point (x, y) of a model over Q_p.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: PadicNumber,
    pub y: PadicNumber,
}

impl Point {
    pub fn new(x: PadicNumber, y: PadicNumber) -> Self {
        Point { x, y }
    }

    pub fn from_rationals(p: u32, x: &BigRational, y: &BigRational, prec: i64) -> Self {
        Point { x: PadicNumber::from_rational(p, x, prec), y: PadicNumber::from_rational(p, y, prec) }
    }

    pub fn prime(&self) -> u32 {
        self.x.prime()
    }

    /// The image under y ↦ −y.
    pub fn opposite(&self) -> Self {
        Point { x: self.x.clone(), y: -&self.y }
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.x.agrees_with(&o.x) && self.y.agrees_with(&o.y)
    }

    pub fn precision(&self) -> i64 {
        self.x.precision().min(self.y.precision())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscKind {
    /// ȳ ≠ 0; x − x₀ is p times a uniformizer.
    Ordinary,
    /// ȳ = 0; y is p times a uniformizer.
    Weierstrass,
    /// x is not integral.
    Infinite,
}

/// One residue disc: the p-adic points reducing to a given F_p-point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueDisc {
    pub kind: DiscKind,
    /// (x̄, ȳ) for an affine disc.
    pub point: Option<(u64, u64)>,
    /// For infinite discs, the residue of y / x^(deg/e) when that ratio is a
    /// unit; None for a single branch point at infinity.
    pub slope: Option<u64>,
}

impl ResidueDisc {
    pub fn affine(x: u64, y: u64) -> Self {
        let kind = if y == 0 { DiscKind::Weierstrass } else { DiscKind::Ordinary };
        ResidueDisc { kind, point: Some((x, y)), slope: None }
    }

    pub fn label(&self) -> String {
        match (self.point, self.slope) {
            (Some((x, y)), _) => format!("({x}, {y})"),
            (None, Some(s)) => format!("(∞, slope {s})"),
            (None, None) => "∞".into(),
        }
    }
}

/// The affine curve y^e = f(x) over Z_p with good reduction at p.
#[derive(Clone, Debug)]
pub struct CyclicCover {
    e: u32,
    f: PadicPoly,
    df: PadicPoly,
    fbar: Vec<u64>,
    prec: i64,
}

/// The parametrization of one disc around a chosen center, t ∈ Z_p.
#[derive(Clone, Debug)]
pub struct LocalParameter {
    pub center: Point,
    pub disc: ResidueDisc,
    pub x: TruncatedSeries,
    pub y: TruncatedSeries,
    /// y^(−k) for k = 1..e−1 on ordinary discs (index k − 1).
    inv_y: Vec<TruncatedSeries>,
    /// 1 / f'(x(t)) on Weierstrass discs.
    inv_df: Option<TruncatedSeries>,
}

/// Number of series terms needed so that n − ⌊log_p n⌋ ≥ target for n ≥ T.
pub fn series_order(p: u32, target: i64) -> usize {
    let mut t = target.max(1);
    while t - ilog(p, t) < target {
        t += 1;
    }
    // below T the slope bound drops by at most one digit per power of p
    t as usize + 2
}

impl CyclicCover {
    pub fn new(e: u32, f: PadicPoly, prec: i64) -> Result<Self> {
        let p = f.prime();
        if e < 2 || p.is_multiple_of(e) || p == 2 {
            return Err(Error::BadReduction(format!("exponent {e} is not invertible modulo {p}")));
        }
        let fbar = f
            .reduce_mod_p()
            .ok_or_else(|| Error::BadReduction("defining polynomial is not p-integral".into()))?;
        if fbar.len() as i64 - 1 != f.degree() {
            return Err(Error::BadReduction(format!("leading coefficient is divisible by {p}")));
        }
        let pp = p as u64;
        if fp::gcd(&fbar, &fp::derivative(&fbar, pp), pp).len() > 1 {
            return Err(Error::BadReduction(format!("the reduction mod {p} has a repeated root")));
        }
        let df = f.derivative();
        Ok(CyclicCover { e, f, df, fbar, prec })
    }

    pub fn prime(&self) -> u32 {
        self.f.prime()
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn poly(&self) -> &PadicPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree() as usize
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// y^e − f(x) vanishes to the precision available.
    pub fn contains(&self, pt: &Point) -> bool {
        (&pt.y.pow(self.e as u64) - &self.f.eval(&pt.x)).is_zero()
    }

    /// The residue disc of a point.
    pub fn disc_of(&self, pt: &Point) -> Result<ResidueDisc> {
        if pt.x.valuation_bound() < 0 {
            let d = self.degree() as i64;
            let slope = if d % self.e as i64 == 0 {
                let r = pt.y.div(&pt.x.powi(d / self.e as i64)?)?;
                Some(r.residue()? as u64)
            } else {
                None
            };
            return Ok(ResidueDisc { kind: DiscKind::Infinite, point: None, slope });
        }
        if pt.y.valuation_bound() < 0 {
            return Err(Error::Invalid(format!("point {pt} has integral x but non-integral y")));
        }
        let x = pt.x.residue()? as u64;
        let y = if pt.y.valuation_bound() > 0 { 0 } else { pt.y.residue()? as u64 };
        Ok(ResidueDisc::affine(x, y))
    }

    /// The affine F_p-points of the reduction.
    pub fn affine_points_mod_p(&self) -> Vec<(u64, u64)> {
        let pp = self.prime() as u64;
        let mut out = Vec::new();
        for x in 0..pp {
            let v = fp::eval(&self.fbar, x, pp);
            for y in 0..pp {
                if fp::pow(y, self.e as u64, pp) == v {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All residue discs: affine ones, then those at infinity.
    pub fn residue_discs(&self) -> Vec<ResidueDisc> {
        let pp = self.prime() as u64;
        let mut out: Vec<ResidueDisc> =
            self.affine_points_mod_p().into_iter().map(|(x, y)| ResidueDisc::affine(x, y)).collect();
        let d = self.degree();
        if d.is_multiple_of(self.e as usize) {
            let lc = *self.fbar.last().unwrap();
            for s in 1..pp {
                if fp::pow(s, self.e as u64, pp) == lc {
                    out.push(ResidueDisc { kind: DiscKind::Infinite, point: None, slope: Some(s) });
                }
            }
        } else {
            out.push(ResidueDisc { kind: DiscKind::Infinite, point: None, slope: None });
        }
        out
    }

    /// Root of y^e = a with the given nonzero residue.
    pub fn root_with_residue(&self, a: &PadicNumber, residue: u64) -> Result<PadicNumber> {
        let p = self.prime();
        if self.e == 2 {
            return a.sqrt(Some(residue as u32));
        }
        let mut c = vec![PadicNumber::exact_zero(p); self.e as usize + 1];
        c[0] = -a;
        c[self.e as usize] = exact(p, 1, self.prec);
        let g = PadicPoly::new(p, c);
        let prec = a.precision().min(self.prec + 4);
        let y0 = PadicNumber::from_int(p, residue as i64, prec);
        if !g.eval(&y0).reduce_precision(1).is_zero() {
            return Err(Error::Invalid(format!("{residue} is not an e-th root of {a} mod {p}")));
        }
        newton_lift(&g, &g.derivative(), y0, prec)
    }

    /// The Weierstrass point (w, 0) with w ≡ x̄.
    pub fn weierstrass_point(&self, xbar: u64) -> Result<Point> {
        let p = self.prime();
        if fp::eval(&self.fbar, xbar, p as u64) != 0 {
            return Err(Error::Invalid(format!("f({xbar}) is nonzero mod {p}")));
        }
        let w = newton_lift(&self.f, &self.df, PadicNumber::from_int(p, xbar as i64, self.prec), self.prec)?;
        Ok(Point::new(w, PadicNumber::exact_zero(p)))
    }

    /// The point with Teichmüller x-coordinate in an ordinary disc; a lift of
    /// Frobenius x ↦ x^p fixes it.
    pub fn teichmuller_point(&self, disc: &ResidueDisc) -> Result<Point> {
        let (x, y) = disc.point.ok_or_else(|| Error::EndpointRestriction("disc at infinity".into()))?;
        if y == 0 {
            return Err(Error::Invalid("Weierstrass discs have no Teichmüller point".into()));
        }
        let p = self.prime();
        let tx = teichmuller_of_residue(p, x as u32, self.prec);
        let tx = if tx.is_exact_zero() { PadicNumber::zero(p, self.prec) } else { tx };
        let fy = self.f.eval(&tx).reduce_precision(self.prec);
        Ok(Point::new(tx, self.root_with_residue(&fy, y)?))
    }

    /// The default center: centered integer lift of x̄ on ordinary discs, the
    /// Weierstrass point on Weierstrass discs.
    pub fn default_center(&self, disc: &ResidueDisc) -> Result<Point> {
        let p = self.prime();
        match (disc.kind, disc.point) {
            (DiscKind::Ordinary, Some((x, y))) => {
                let xc = if 2 * x > p as u64 { x as i64 - p as i64 } else { x as i64 };
                let xc = PadicNumber::from_int(p, xc, self.prec);
                let fy = self.f.eval(&xc).reduce_precision(self.prec);
                Ok(Point::new(xc, self.root_with_residue(&fy, y)?))
            }
            (DiscKind::Weierstrass, Some((x, _))) => self.weierstrass_point(x),
            _ => Err(Error::PoleOnDisc(format!("no affine parametrization of the disc {}", disc.label()))),
        }
    }

    /// Parametrization of the disc of `center` with `order` terms.
    ///
    /// Ordinary: x = x₀ + p·t and y = y₀·(1 + z)^(1/e) with
    /// z = (f(x₀ + pt) − f(x₀))/f(x₀). Weierstrass (center must be the
    /// Weierstrass point): y = p·t and x = w + h(t) where h solves
    /// f(w + h) = (pt)^e by fixed-point iteration.
    pub fn local_parameter(&self, center: &Point, order: usize) -> Result<LocalParameter> {
        let p = self.prime();
        let disc = self.disc_of(center)?;
        let growth = Tail::Growth { offset: 0, slope: 1, log_loss: 0 };
        match disc.kind {
            DiscKind::Infinite => Err(Error::PoleOnDisc(format!("disc {} is at infinity", disc.label()))),
            DiscKind::Ordinary => {
                let taylor = self.f.taylor_shift(&center.x);
                let f0 = taylor.coeff(0);
                let mut z = vec![PadicNumber::exact_zero(p); order];
                for (j, c) in taylor.coeffs().iter().enumerate().skip(1) {
                    if j < order {
                        z[j] = c.shift(j as i64).div(&f0)?;
                    }
                }
                let z = TruncatedSeries::polynomial(p, z);
                let x = TruncatedSeries::polynomial(p, vec![center.x.clone(), exact(p, p as i64, self.prec)]).resized(order);
                let e = self.e as i64;
                let root = TruncatedSeries::binomial(p, &BigRational::new(1.into(), e.into()), order, self.prec);
                let y = root.compose(&z)?.scale(&center.y).with_tail(growth);
                let mut inv_y = Vec::new();
                for k in 1..e {
                    let b = TruncatedSeries::binomial(p, &BigRational::new((-k).into(), e.into()), order, self.prec);
                    let yk = center.y.pow(k as u64).inverse()?;
                    inv_y.push(b.compose(&z)?.scale(&yk).with_tail(growth));
                }
                Ok(LocalParameter { center: center.clone(), disc, x, y, inv_y, inv_df: None })
            }
            DiscKind::Weierstrass => {
                if !center.y.is_zero() {
                    return Err(Error::Invalid("Weierstrass discs are parametrized from the Weierstrass point".into()));
                }
                let c = self.f.taylor_shift(&center.x);
                let c1 = c.coeff(1);
                let mut pe = vec![PadicNumber::exact_zero(p); order];
                if (self.e as usize) < order {
                    pe[self.e as usize] = exact(p, 1, self.prec).shift(self.e as i64);
                }
                let pe = TruncatedSeries::polynomial(p, pe);
                let mut h = TruncatedSeries::polynomial(p, vec![PadicNumber::exact_zero(p); order]);
                // each pass fixes at least one more coefficient
                for _ in 0..order {
                    let mut hj = h.mul(&h).truncate(order).resized(order);
                    let mut rest = TruncatedSeries::polynomial(p, vec![PadicNumber::exact_zero(p); order]);
                    for j in 2..c.coeffs().len() {
                        rest = rest.add(&hj.scale(&c.coeff(j)));
                        hj = hj.mul(&h).truncate(order).resized(order);
                    }
                    let next = pe.sub(&rest).scale(&c1.inverse()?);
                    h = TruncatedSeries::polynomial(p, next.coeffs().to_vec());
                }
                let x = h.add(&TruncatedSeries::constant(center.x.clone()).resized(order)).with_tail(growth);
                let y = TruncatedSeries::polynomial(p, vec![PadicNumber::exact_zero(p), exact(p, p as i64, self.prec)])
                    .resized(order);
                let dfx = eval_poly_on_series(&self.df, &x, order);
                let inv_df = dfx.truncate(order).with_tail(Tail::Unknown).inverse()?.with_tail(growth);
                Ok(LocalParameter { center: center.clone(), disc, x: x.truncate(order).with_tail(growth), y, inv_y: Vec::new(), inv_df: Some(inv_df) })
            }
        }
    }

    /// The parameter t of a point in the disc of `lp`.
    pub fn parameter_of(&self, lp: &LocalParameter, pt: &Point) -> Result<PadicNumber> {
        let d = self.disc_of(pt)?;
        if d != lp.disc {
            return Err(Error::DifferentDiscs(format!("{} is in {}, not {}", pt, d.label(), lp.disc.label())));
        }
        match lp.disc.kind {
            DiscKind::Ordinary => Ok((&pt.x - &lp.center.x).shift(-1)),
            DiscKind::Weierstrass => Ok(pt.y.shift(-1)),
            DiscKind::Infinite => Err(Error::PoleOnDisc("disc at infinity".into())),
        }
    }

    /// The point at parameter t.
    pub fn point_at(&self, lp: &LocalParameter, t: &PadicNumber) -> Result<Point> {
        Ok(Point::new(lp.x.eval(t)?, lp.y.eval(t)?))
    }

    /// g(t) with x^i dx / y^k = g(t) dt on the disc, for 1 ≤ k < e.
    pub fn integrand(&self, lp: &LocalParameter, i: usize, k: u32) -> Result<TruncatedSeries> {
        let p = self.prime();
        let order = lp.x.order();
        if k == 0 || k >= self.e {
            return Err(Error::Invalid(format!("pole order {k} outside 1..{}", self.e)));
        }
        let xi = power_series(&lp.x, i, order);
        let g = match lp.disc.kind {
            DiscKind::Ordinary => xi.mul(&lp.inv_y[k as usize - 1]).truncate(order).scale(&exact(p, p as i64, self.prec)),
            DiscKind::Weierstrass => {
                // dx = e·y^(e−1) dy / f'(x), dy = p dt
                let m = (self.e - 1 - k) as usize;
                let yk = power_series(&lp.y, m, order);
                let s = xi.mul(&yk).truncate(order).mul(lp.inv_df.as_ref().unwrap()).truncate(order);
                s.scale(&exact(p, p as i64 * self.e as i64, self.prec))
            }
            DiscKind::Infinite => return Err(Error::PoleOnDisc("disc at infinity".into())),
        };
        Ok(g.with_tail(Tail::Growth { offset: 1, slope: 1, log_loss: 0 }))
    }

    /// ∫ from the center to t of x^i dx / y^k, as a series in t.
    pub fn antiderivative(&self, lp: &LocalParameter, i: usize, k: u32) -> Result<TruncatedSeries> {
        Ok(self
            .integrand(lp, i, k)?
            .formal_antiderivative()
            .with_tail(Tail::Growth { offset: 1, slope: 1, log_loss: 1 }))
    }

    /// ∫_P^Q x^i dx / y^k for P, Q in one affine disc.
    pub fn tiny_integral(&self, i: usize, k: u32, from: &Point, to: &Point) -> Result<PadicNumber> {
        let d1 = self.disc_of(from)?;
        let d2 = self.disc_of(to)?;
        if d1 != d2 {
            return Err(Error::DifferentDiscs(format!("{} and {}", d1.label(), d2.label())));
        }
        let center = match d1.kind {
            DiscKind::Ordinary => from.clone(),
            _ => self.default_center(&d1)?,
        };
        let lp = self.local_parameter(&center, series_order(self.prime(), self.prec + 2))?;
        let f = self.antiderivative(&lp, i, k)?;
        let a = f.eval(&self.parameter_of(&lp, from)?)?;
        let b = f.eval(&self.parameter_of(&lp, to)?)?;
        Ok(&b - &a)
    }
}

/// An integer constant carried at far more precision than the data it meets.
pub(crate) fn exact(p: u32, n: i64, prec: i64) -> PadicNumber {
    PadicNumber::from_int(p, n, 4 * prec + 40)
}

/// s^n truncated to `order` terms, tail of s kept.
pub fn power_series(s: &TruncatedSeries, n: usize, order: usize) -> TruncatedSeries {
    let p = s.prime();
    let prec = s.coefficient_precision().min(1 << 20);
    let mut acc = TruncatedSeries::constant(exact(p, 1, prec)).resized(order);
    for _ in 0..n {
        acc = acc.mul(s).truncate(order);
    }
    acc.with_tail(s.tail())
}

/// f(s(t)) by Horner's rule, `order` terms.
pub fn eval_poly_on_series(f: &PadicPoly, s: &TruncatedSeries, order: usize) -> TruncatedSeries {
    let p = f.prime();
    let mut acc = TruncatedSeries::polynomial(p, vec![PadicNumber::exact_zero(p); order]);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(s).truncate(order).add(&TruncatedSeries::constant(c.clone()).resized(order));
    }
    acc
}
