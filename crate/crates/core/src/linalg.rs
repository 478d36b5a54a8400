//! Exact linear algebra over the rationals.
//!
//! Small systems use fraction-based Gauss–Jordan elimination. Large
//! homogeneous systems go through a multi-modular route: row reduction
//! modulo several 62-bit primes, Chinese remaindering, rational
//! reconstruction, then an exact check `A v = 0` over the integers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Gauss–Jordan elimination in place. Returns the pivot columns.
///
/// Pivoting is deterministic: the first column with a nonzero entry at or
/// below the current row, and within it the smallest such row index.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{v : A v = 0}` in reduced form: one vector per free column,
/// with 1 at that column and 0 at every other free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    basis_from_rref(&m, &pivots, ncols, |x| x.clone())
}

fn basis_from_rref<T>(
    m: &[Vec<T>],
    pivots: &[usize],
    ncols: usize,
    neg: impl Fn(&T) -> Rational,
) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -neg(&m[i][free]);
            }
            v
        })
        .collect()
}

/// Unique solution of the square system `A x = b`, or `None` if `A` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() != n {
        return None;
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Determinant by fraction-based elimination.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if pr != col {
            m.swap(pr, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot = &top[col];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] * &inv;
            for (r, p) in row[col..n].iter_mut().zip(&pivot[col..n]) {
                *r -= &f * p;
            }
        }
    }
    det
}

/// Integer matrix obtained by clearing denominators row by row.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rational_rows(rows: &[Vec<Rational>], ncols: usize) -> Self {
        let rows = rows
            .iter()
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .map(|r| {
                let l = r
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                r.iter()
                    .map(|v| v.numer() * (&l / v.denom()))
                    .collect()
            })
            .collect();
        IntMatrix { ncols, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, p: u64) -> Vec<Vec<u64>> {
        let bp = BigInt::from(p);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        let m = v.mod_floor(&bp);
                        m.to_u64_digits().1.first().copied().unwrap_or(0)
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact check `A v = 0` for a rational vector.
    pub fn annihilates(&self, v: &[Rational]) -> bool {
        let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let iv: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        self.rows.iter().all(|r| {
            let mut s = BigInt::zero();
            for (a, b) in r.iter().zip(&iv) {
                if !a.is_zero() && !b.is_zero() {
                    s += a * b;
                }
            }
            s.is_zero()
        })
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, in decreasing order.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Row reduction modulo `p`; returns the reduced rows and the pivot columns.
fn rref_mod(mut m: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = powmod(m[r][col], p - 2, p);
        for v in m[r].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                if pv != 0 {
                    let sub = mulmod(f, pv, p);
                    *v = if *v >= sub { *v - sub } else { *v + p - sub };
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Smallest `n/d` with `n ≡ a d (mod m)`, `|n|, d ≤ sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

struct ModImage {
    prime: u64,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

/// Which image has the "better" pivot data: higher rank first, then the
/// lexicographically smallest pivot list. Good primes always win.
fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Nullspace over the rationals of an integer matrix by multi-modular
/// elimination.
///
/// The answer is the reduced basis of [`nullspace`]: each vector has 1 at
/// one free column and 0 at the others. Correctness does not rest on the
/// primes being good: a reconstructed basis is returned only after every
/// vector is checked to satisfy `A v = 0` exactly, and since the mod-`p`
/// nullity bounds the rational nullity from above, a full set of verified
/// independent vectors is a basis.
pub fn modular_nullspace(a: &IntMatrix) -> Result<Vec<Vec<Rational>>> {
    const MAX_PRIMES: usize = 4096;
    let ncols = a.ncols;
    let mut primes = PrimeStream::new();
    let mut images: Vec<ModImage> = Vec::new();
    let mut want = 2usize;
    loop {
        while images.len() < want {
            let p = primes.next().ok_or(Error::ReconstructionFailed(images.len()))?;
            let (rows, pivots) = rref_mod(a.reduce(p), ncols, p);
            images.push(ModImage { prime: p, pivots, rows });
        }
        let best = images
            .iter()
            .map(|im| &im.pivots)
            .fold(None::<&Vec<usize>>, |acc, pv| match acc {
                Some(b) if !better(pv, b) => Some(b),
                _ => Some(pv),
            })
            .unwrap()
            .clone();
        let good: Vec<&ModImage> = images.iter().filter(|im| im.pivots == best).collect();
        if let Some(basis) = reconstruct(&good, &best, ncols) {
            if basis.iter().all(|v| a.annihilates(v)) {
                return Ok(basis);
            }
        }
        if want >= MAX_PRIMES {
            return Err(Error::ReconstructionFailed(want));
        }
        want *= 2;
    }
}

fn reconstruct(images: &[&ModImage], pivots: &[usize], ncols: usize) -> Option<Vec<Vec<Rational>>> {
    let mut modulus = BigInt::one();
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; pivots.len()];
    for im in images {
        let p = BigInt::from(im.prime);
        // CRT step: x ≡ acc (mod modulus), x ≡ r (mod p)
        let inv = mod_inverse(&(&modulus % &p), &p)?;
        for (arow, rrow) in acc.iter_mut().zip(&im.rows) {
            for (x, &r) in arow.iter_mut().zip(rrow) {
                let diff = (BigInt::from(r) - &*x).mod_floor(&p);
                let t = (diff * &inv).mod_floor(&p);
                *x += &modulus * t;
            }
        }
        modulus *= &p;
    }
    let mut rrows: Vec<Vec<Rational>> = Vec::with_capacity(acc.len());
    for row in &acc {
        let mut out = Vec::with_capacity(ncols);
        for x in row {
            out.push(rational_reconstruction(x, &modulus)?);
        }
        rrows.push(out);
    }
    Some(basis_from_rref(&rrows, pivots, ncols, |x| x.clone()))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Sign of a big integer as -1, 0 or 1.
pub fn sign_of(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
