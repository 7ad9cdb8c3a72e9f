//! Small helpers for polynomials over F_p with word-sized p.

pub fn inv(a: u64, p: u64) -> u64 {
    pow(a % p, p - 2, p)
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u128;
    for &c in f.iter().rev() {
        acc = (acc * x as u128 + c as u128) % p as u128;
    }
    acc as u64
}

pub fn derivative(f: &[u64], p: u64) -> Vec<u64> {
    let mut d: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| (c * (i as u64 % p)) % p).collect();
    trim(&mut d);
    d
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len();
    assert!(db > 0, "division by zero polynomial");
    let li = inv(b[db - 1], p);
    while r.len() >= db {
        let c = r[r.len() - 1] * li % p;
        let off = r.len() - db;
        for j in 0..db {
            r[off + j] = (r[off + j] + p - c * b[j] % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let li = inv(l, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

/// Roots in F_p by exhaustive evaluation.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval(f, x, p) == 0).collect()
}

/// Legendre-style square test in F_p (p odd); 0 counts as a square.
pub fn is_square(a: u64, p: u64) -> bool {
    let a = a % p;
    a == 0 || pow(a, (p - 1) / 2, p) == 1
}

/// A square root in F_p by search (p small).
pub fn sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    (0..p).find(|&r| r * r % p == a)
}
