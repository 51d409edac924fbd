//! Exact rationals and small dense rational matrices.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Precondition(format!("not an exact rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// `"num/den"`, always with an explicit denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !crate::ff::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn int_valuation(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(r)` and the unit part `r / p^{v}`.
pub fn split_valuation(r: &Rat, p: u64) -> Result<(i64, Rat)> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    let pb = BigInt::from(p);
    let (vn, n) = int_valuation(r.numer(), &pb);
    let (vd, d) = int_valuation(r.denom(), &pb);
    Ok((vn - vd, Rat::new(n, d)))
}

pub fn valuation(r: &Rat, p: u64) -> Result<i64> {
    split_valuation(r, p).map(|(v, _)| v)
}

/// `v_p` with `v_p(0) = +∞` reported as `None`.
pub fn valuation_or_inf(r: &Rat, p: u64) -> Option<i64> {
    valuation(r, p).ok()
}

/// Residue of a `p`-integral rational modulo `p^k`.
pub fn residue(r: &Rat, p: u64, k: u32) -> BigInt {
    let pb = BigInt::from(p);
    let m = pb.pow(k);
    let phi = &m - &m / &pb;
    let d_inv = r.denom().modpow(&(phi - BigInt::one()), &m);
    (r.numer() * d_inv).mod_floor(&m)
}

/// Legendre symbol `(a | p)` of an integer.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    if a.modpow(&BigInt::from((p - 1) / 2), &pb).is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a `p`-adic unit given as a rational.
pub fn unit_legendre(u: &Rat, p: u64) -> i32 {
    legendre(u.numer(), p) * legendre(u.denom(), p)
}

/// Least quadratic nonresidue modulo `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(&BigInt::from(a), p) == -1).expect("odd primes have nonresidues")
}

/// Dense square rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatQ {
    n: usize,
    e: Vec<Rat>,
}

impl MatQ {
    pub fn zero(n: usize) -> MatQ {
        MatQ { n, e: vec![Rat::zero(); n * n] }
    }
    pub fn identity(n: usize) -> MatQ {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.e[i * n + i] = Rat::one();
        }
        m
    }
    /// The antidiagonal matrix of ones.
    pub fn j(n: usize) -> MatQ {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.e[i * n + (n - 1 - i)] = Rat::one();
        }
        m
    }
    pub fn diag(d: &[Rat]) -> MatQ {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.e[i * d.len() + i] = x.clone();
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<MatQ> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Ok(MatQ { n, e: rows.into_iter().flatten().collect() })
    }
    pub fn from_ints(rows: &[Vec<i64>]) -> Result<MatQ> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rat) -> MatQ {
        MatQ { n, e: (0..n * n).map(|k| f(k / n, k % n)).collect() }
    }
    pub fn size(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.e[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.e[i * self.n + j] = v;
    }
    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.e.chunks(self.n).map(|r| r.to_vec()).collect()
    }
    pub fn entries(&self) -> &[Rat] {
        &self.e
    }
    pub fn transpose(&self) -> MatQ {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }
    pub fn mul(&self, o: &MatQ) -> MatQ {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * o.get(k, j)).sum())
    }
    pub fn add(&self, o: &MatQ) -> MatQ {
        MatQ { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect() }
    }
    pub fn sub(&self, o: &MatQ) -> MatQ {
        MatQ { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }
    pub fn scale(&self, c: &Rat) -> MatQ {
        MatQ { n: self.n, e: self.e.iter().map(|a| a * c).collect() }
    }
    /// `ᵗP·self·P`.
    pub fn congruent(&self, p: &MatQ) -> MatQ {
        p.transpose().mul(self).mul(p)
    }
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }
    pub fn det(&self) -> Rat {
        let n = self.n;
        let mut a = self.e.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Rat::zero();
            };
            if piv != c {
                for k in 0..n {
                    a.swap(piv * n + k, c * n + k);
                }
                det = -det;
            }
            let pv = a[c * n + c].clone();
            det *= &pv;
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let factor = &a[r * n + c] / &pv;
                for k in c..n {
                    let t = &factor * &a[c * n + k];
                    a[r * n + k] -= t;
                }
            }
        }
        det
    }
    pub fn inverse(&self) -> Result<MatQ> {
        let n = self.n;
        let mut a = self.e.clone();
        let mut inv = Self::identity(n).e;
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r * n + c].is_zero()).ok_or(Error::Singular)?;
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
                inv.swap(piv * n + k, c * n + k);
            }
            let pv = a[c * n + c].clone();
            for k in 0..n {
                a[c * n + k] /= &pv;
                inv[c * n + k] /= &pv;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let factor = a[r * n + c].clone();
                for k in 0..n {
                    let t = &factor * &a[c * n + k];
                    a[r * n + k] -= t;
                    let t = &factor * &inv[c * n + k];
                    inv[r * n + k] -= t;
                }
            }
        }
        Ok(MatQ { n, e: inv })
    }
    /// Block matrix whose `ij`-th block is `self_ij · b`.
    pub fn kron(&self, b: &MatQ) -> MatQ {
        let (n, m) = (self.n, b.n);
        Self::from_fn(n * m, |i, j| self.get(i / m, j / m) * b.get(i % m, j % m))
    }
    /// Least `v_p` over the nonzero entries, `None` for the zero matrix.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.e.iter().filter_map(|x| valuation_or_inf(x, p)).min()
    }
    /// Entrywise `v_p(self − o) ≥ k`.
    pub fn congruent_mod(&self, o: &MatQ, p: u64, k: i64) -> bool {
        self.sub(o).min_valuation(p).is_none_or(|v| v >= k)
    }
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows().iter().map(|r| r.iter().map(format_rat).collect()).collect()
    }
    pub fn parse(rows: &[Vec<String>]) -> Result<MatQ> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<_>>()).collect::<Result<_>>()?)
    }
}

/// A nondegenerate symmetric rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatQ(MatQ);

impl SymMatQ {
    pub fn new(m: MatQ) -> Result<SymMatQ> {
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(SymMatQ(m))
    }
    pub fn matrix(&self) -> &MatQ {
        &self.0
    }
    pub fn into_matrix(self) -> MatQ {
        self.0
    }
    pub fn size(&self) -> usize {
        self.0.n
    }
    pub fn det(&self) -> Rat {
        self.0.det()
    }
    pub fn identity(n: usize) -> SymMatQ {
        SymMatQ(MatQ::identity(n))
    }
    pub fn j(n: usize) -> SymMatQ {
        SymMatQ(MatQ::j(n))
    }
    pub fn diag(d: &[Rat]) -> Result<SymMatQ> {
        Self::new(MatQ::diag(d))
    }
    pub fn scale(&self, c: &Rat) -> Result<SymMatQ> {
        Self::new(self.0.scale(c))
    }
    pub fn congruent(&self, p: &MatQ) -> Result<SymMatQ> {
        Self::new(self.0.congruent(p))
    }
}

impl core::fmt::Display for SymMatQ {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let rows: Vec<String> = self.0.to_strings().iter().map(|r| r.join(" ")).collect();
        f.write_str(&rows.join("; "))
    }
}
