use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, INFINITE};

/// Pivots must have valuation below N − GUARD to count toward the rank.
pub const RANK_GUARD: i64 = 2;

/// Dense matrix over Q_p.
#[derive(Clone)]
pub struct PadicMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<PadicNumber>,
}

/// Kernel basis with the precision certificate.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub vectors: Vec<Vec<PadicNumber>>,
    pub rank: usize,
    /// Digits lost: every entry of M·v has valuation ≥ N − loss, where N is
    /// the smallest entry precision of M.
    pub loss: i64,
}

impl PadicMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        PadicMatrix { p, rows, cols, data: vec![PadicNumber::exact_zero(p); rows * cols] }
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<PadicNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(PadicMatrix { p, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(p: u32, n: usize, prec: i64) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, PadicNumber::one(p, prec));
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<PadicNumber> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// Smallest absolute precision among the entries.
    pub fn precision(&self) -> i64 {
        self.data.iter().map(|x| x.precision()).min().unwrap_or(INFINITE)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut m = Self::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = PadicNumber::exact_zero(self.p);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns, vector of length {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(PadicNumber::exact_zero(self.p), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PadicMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn is_pivot_candidate(x: &PadicNumber) -> bool {
        !x.is_zero() && x.valuation() < x.precision().saturating_sub(RANK_GUARD)
    }

    /// Kernel basis by full elimination, pivoting on the entry of smallest
    /// valuation. Each vector is scaled so that its first entry of minimal
    /// valuation equals 1.
    pub fn kernel(&self) -> Result<Kernel> {
        let mut a = self.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut used_cols = vec![false; self.cols];
        loop {
            let r0 = pivots.len();
            let mut best: Option<(usize, usize)> = None;
            for i in r0..a.rows {
                for j in 0..a.cols {
                    if used_cols[j] || !Self::is_pivot_candidate(a.get(i, j)) {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a.get(i, j).valuation() < a.get(bi, bj).valuation()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Anything left must be zero to precision; a nonzero entry
                // too small to trust makes the rank uncertain.
                for i in r0..a.rows {
                    for j in 0..a.cols {
                        if !used_cols[j] && !a.get(i, j).is_zero() {
                            return Err(Error::PrecisionLoss(format!(
                                "entry ({i},{j}) = {} is too close to zero to decide the rank",
                                a.get(i, j)
                            )));
                        }
                    }
                }
                break;
            };
            a.swap_rows(r0, pi);
            let piv = a.get(r0, pj).clone();
            for i in 0..a.rows {
                if i == r0 || a.get(i, pj).is_exact_zero() {
                    continue;
                }
                let f = a.get(i, pj).div(&piv)?;
                for j in 0..a.cols {
                    let v = a.get(i, j) - &(&f * a.get(r0, j));
                    a.set(i, j, v);
                }
                a.set(i, pj, PadicNumber::exact_zero(self.p));
            }
            used_cols[pj] = true;
            pivots.push((r0, pj));
            if pivots.len() == a.rows {
                break;
            }
        }
        let mut vectors = Vec::new();
        for f in (0..self.cols).filter(|&j| !used_cols[j]) {
            let mut v = vec![PadicNumber::exact_zero(self.p); self.cols];
            v[f] = one_at(self.p, self.precision());
            for &(r, c) in &pivots {
                v[c] = -(a.get(r, f).div(a.get(r, c))?);
            }
            vectors.push(normalize(v)?);
        }
        let n = self.precision();
        let mut worst = n;
        for v in &vectors {
            for e in self.mul_vec(v)? {
                if !e.is_zero() {
                    return Err(Error::PrecisionLoss(format!("kernel residual {e} is not zero")));
                }
                worst = worst.min(e.precision());
            }
        }
        let loss = if n == INFINITE || worst == INFINITE { 0 } else { (n - worst).max(0) };
        Ok(Kernel { vectors, rank: pivots.len(), loss })
    }

    /// Solves a square system by elimination with minimal-valuation pivots.
    pub fn solve(&self, b: &[PadicNumber]) -> Result<Vec<PadicNumber>> {
        let n = self.rows;
        if n != self.cols || b.len() != n {
            return Err(Error::DimensionMismatch("solve needs a square system".into()));
        }
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        for c in 0..n {
            let pr = (c..n)
                .filter(|&i| !a.get(i, c).is_zero())
                .min_by_key(|&i| a.get(i, c).valuation())
                .ok_or_else(|| Error::PrecisionLoss("singular system at working precision".into()))?;
            a.swap_rows(c, pr);
            rhs.swap(c, pr);
            let piv = a.get(c, c).clone();
            for i in c + 1..n {
                if a.get(i, c).is_exact_zero() {
                    continue;
                }
                let f = a.get(i, c).div(&piv)?;
                for j in c..n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, v);
                }
                rhs[i] = &rhs[i] - &(&f * &rhs[c]);
            }
        }
        let mut x = vec![PadicNumber::exact_zero(self.p); n];
        for i in (0..n).rev() {
            let mut s = rhs[i].clone();
            for j in i + 1..n {
                s = &s - &(a.get(i, j) * &x[j]);
            }
            x[i] = s.div(a.get(i, i))?;
        }
        Ok(x)
    }

    pub fn det(&self) -> Result<PadicNumber> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut a = self.clone();
        let mut det: Option<PadicNumber> = None;
        let mut negate = false;
        for c in 0..n {
            let Some(pr) = (c..n).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| a.get(i, c).valuation())
            else {
                // The remaining column vanishes to precision: the determinant
                // is zero up to the precision this column carries.
                let bound = (c..n).map(|i| a.get(i, c).precision()).min().unwrap_or(INFINITE);
                let rest: i64 = (c + 1..n)
                    .map(|j| (c..n).map(|i| a.get(i, j).valuation_bound()).min().unwrap_or(0).min(0))
                    .sum();
                let scale = det.as_ref().map_or(0, |d| d.valuation_bound());
                let prec = bound.saturating_add(rest).saturating_add(scale);
                return Ok(if prec == INFINITE { PadicNumber::exact_zero(self.p) } else { PadicNumber::zero(self.p, prec) });
            };
            if pr != c {
                a.swap_rows(pr, c);
                negate = !negate;
            }
            let piv = a.get(c, c).clone();
            for i in c + 1..n {
                if a.get(i, c).is_exact_zero() {
                    continue;
                }
                let f = a.get(i, c).div(&piv)?;
                for j in c..n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, v);
                }
            }
            det = Some(match det {
                None => piv,
                Some(d) => &d * &piv,
            });
        }
        let d = det.unwrap_or_else(|| one_at(self.p, INFINITE));
        Ok(if negate { -d } else { d })
    }

    /// Characteristic polynomial det(x·I − A), constant term first, by the
    /// division-free Berkowitz recursion.
    pub fn charpoly(&self) -> Result<Vec<PadicNumber>> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
        }
        let p = self.p;
        let one = one_at(p, self.precision());
        // coefficient vector, highest degree first
        let mut c: Vec<PadicNumber> = vec![one.clone()];
        for r in 0..n {
            // A_r is the leading r×r block; split A_{r+1} = [[A_r, S], [R, a]].
            let a = self.get(r, r).clone();
            let s: Vec<PadicNumber> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<PadicNumber> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut t = vec![one.clone(), -a];
            let mut v = s.clone();
            for _ in 0..r {
                let rv = row.iter().zip(&v).fold(PadicNumber::exact_zero(p), |acc, (x, y)| &acc + &(x * y));
                t.push(-rv);
                v = (0..r)
                    .map(|i| (0..r).fold(PadicNumber::exact_zero(p), |acc, j| &acc + &(self.get(i, j) * &v[j])))
                    .collect();
            }
            // Toeplitz product: new[i] = Σ_j t[i−j]·c[j]
            let mut next = vec![PadicNumber::exact_zero(p); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *slot = &*slot + &(&t[i - j] * cj);
                    }
                }
            }
            c = next;
        }
        c.reverse();
        Ok(c)
    }
}

/// 1 to the given precision; exact inputs get a fixed generous precision
/// since exact nonzero values are not representable.
fn one_at(p: u32, prec: i64) -> PadicNumber {
    PadicNumber::one(p, if prec == INFINITE { 64 } else { prec.max(1) })
}

/// Scales v so that its first entry of minimal valuation becomes 1.
pub fn normalize(v: Vec<PadicNumber>) -> Result<Vec<PadicNumber>> {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if best.is_none_or(|b| x.valuation() < v[b].valuation()) {
            best = Some(i);
        }
    }
    let Some(b) = best else {
        return Err(Error::PrecisionLoss("kernel vector vanishes to precision".into()));
    };
    let s = v[b].clone();
    let mut out: Vec<PadicNumber> = v.iter().map(|x| x.div(&s)).collect::<Result<_>>()?;
    out[b] = PadicNumber::one(s.prime(), out[b].precision().max(1));
    Ok(out)
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}
