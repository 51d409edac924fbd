//! Finite fields `F_{p^k}` (p odd), discrete logarithms, and multiplicative
//! characters of `F_{q^n}^×`.
//!
//! Elements are packed as base-`p` integers: the coefficient vector
//! `(c_0, …, c_{k-1})` of `c_0 + c_1 x + … + c_{k-1} x^{k-1}` is stored as
//! `Σ c_i p^i`. The field modulus is the least monic irreducible polynomial of
//! degree `k` under that same packing of its lower coefficients, so every
//! field (and every constant derived from it) is reproducible.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyc::CycInt;
use crate::error::{Error, Result};
use crate::poly;

/// Largest field size accepted by [`FF::discrete_log`].
pub const DLOG_CAP: u64 = 10_000_000;
const SCAN_LIMIT: u64 = 100_000;
const MAX_DEGREE: usize = 32;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of some [`FF`]. The tag records the owning field so that mixing
/// fields is caught by the checked operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FFElem {
    tag: u32,
    code: u32,
}

impl FFElem {
    pub fn code(self) -> u32 {
        self.code
    }
}

/// The finite field `F_p[x]/(modulus)`.
#[derive(Clone, Debug)]
pub struct FF {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    size: u64,
    tag: u32,
    pw: Vec<u32>,
    primitive: u32,
}

impl PartialEq for FF {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for FF {}

/// Field operations selectable through [`FF::field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
    Frobenius(u32),
}

impl FF {
    /// Builds `F_{p^k}` with the lexicographically least monic irreducible modulus.
    pub fn new(p: u64, k: u32) -> Result<FF> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::DegreeTooSmall);
        }
        let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if size > u32::MAX as u128 || k as usize > MAX_DEGREE {
            return Err(Error::FieldTooLarge(size.min(u64::MAX as u128) as u64));
        }
        let size = size as u64;
        let p32 = p as u32;
        let modulus = least_irreducible(p32, k as usize);
        let pw = (0..k).map(|i| p32.pow(i)).collect();
        let tag = ((p32 & 0x00ff_ffff) << 8) | k;
        let mut f = FF { p: p32, k, modulus, size, tag, pw, primitive: 0 };
        f.primitive = f.find_primitive();
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    /// Order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.size - 1
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn from_code(&self, code: u64) -> FFElem {
        FFElem { tag: self.tag, code: (code % self.size) as u32 }
    }
    /// Element from coefficients (low degree first); extra entries must be absent.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FFElem> {
        if coeffs.len() > self.k as usize {
            return Err(Error::Dimension("coefficient vector longer than degree".into()));
        }
        let mut code = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            code += (c % self.p) * self.pw[i];
        }
        Ok(FFElem { tag: self.tag, code })
    }
    pub fn coeffs(&self, a: FFElem) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        let mut c = a.code;
        for o in out.iter_mut() {
            *o = c % self.p;
            c /= self.p;
        }
        out
    }
    pub fn zero(&self) -> FFElem {
        FFElem { tag: self.tag, code: 0 }
    }
    pub fn one(&self) -> FFElem {
        FFElem { tag: self.tag, code: 1 }
    }
    /// Image of the integer `n` under `Z → F_p ⊂ F`.
    pub fn int(&self, n: i64) -> FFElem {
        let p = self.p as i64;
        FFElem { tag: self.tag, code: (((n % p) + p) % p) as u32 }
    }
    /// The class of `x` in the polynomial presentation.
    pub fn gen(&self) -> FFElem {
        if self.k == 1 {
            // x ≡ -m_0 when the modulus is x + m_0
            self.neg(self.from_code(self.modulus[0] as u64))
        } else {
            self.from_code(self.p as u64)
        }
    }
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(move |c| self.from_code(c))
    }
    pub fn units(&self) -> impl Iterator<Item = FFElem> + '_ {
        (1..self.size).map(move |c| self.from_code(c))
    }
    pub fn owns(&self, a: FFElem) -> bool {
        a.tag == self.tag && (a.code as u64) < self.size
    }
    pub fn is_zero(&self, a: FFElem) -> bool {
        a.code == 0
    }

    #[inline]
    fn digits(&self, mut c: u32, out: &mut [u64; MAX_DEGREE]) {
        for o in out.iter_mut().take(self.k as usize) {
            *o = (c % self.p) as u64;
            c /= self.p;
        }
    }
    #[inline]
    fn pack(&self, d: &[u64]) -> FFElem {
        let mut code = 0u32;
        for i in (0..self.k as usize).rev() {
            code = code * self.p + d[i] as u32;
        }
        FFElem { tag: self.tag, code }
    }

    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        if self.k == 1 {
            return FFElem { tag: self.tag, code: (a.code + b.code) % self.p };
        }
        let (mut x, mut y) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.digits(a.code, &mut x);
        self.digits(b.code, &mut y);
        for i in 0..self.k as usize {
            x[i] = (x[i] + y[i]) % self.p as u64;
        }
        self.pack(&x)
    }
    pub fn neg(&self, a: FFElem) -> FFElem {
        if self.k == 1 {
            return FFElem { tag: self.tag, code: (self.p - a.code) % self.p };
        }
        let mut x = [0u64; MAX_DEGREE];
        self.digits(a.code, &mut x);
        for v in x.iter_mut().take(self.k as usize) {
            *v = (self.p as u64 - *v) % self.p as u64;
        }
        self.pack(&x)
    }
    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        let p = self.p as u64;
        if self.k == 1 {
            return FFElem { tag: self.tag, code: (a.code as u64 * b.code as u64 % p) as u32 };
        }
        let k = self.k as usize;
        let (mut x, mut y) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.digits(a.code, &mut x);
        self.digits(b.code, &mut y);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += x[i] * y[j];
            }
        }
        for v in prod.iter_mut().take(2 * k - 1) {
            *v %= p;
        }
        // reduce by the monic modulus from the top
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    prod[deg - k + i] = (prod[deg - k + i] + (p - c) * m) % p;
                }
            }
        }
        self.pack(&prod)
    }
    pub fn pow(&self, a: FFElem, mut e: u64) -> FFElem {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    pub fn inv(&self, a: FFElem) -> Result<FFElem> {
        if a.code == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.size - 2))
    }
    /// `a^{p^j}`.
    pub fn frobenius(&self, a: FFElem, j: u32) -> FFElem {
        let mut r = a;
        for _ in 0..(j % self.k) {
            r = self.pow(r, self.p as u64);
        }
        r
    }
    /// Whether `a` lies in the subfield `F_{p^d}`.
    pub fn in_subfield(&self, a: FFElem, d: u32) -> bool {
        self.pow(a, (self.p as u64).pow(d)) == a
    }
    pub fn is_square(&self, a: FFElem) -> bool {
        a.code == 0 || self.pow(a, (self.size - 1) / 2) == self.one()
    }
    /// Square root by exhaustive search; `None` for nonsquares.
    pub fn sqrt(&self, a: FFElem) -> Option<FFElem> {
        self.elements().find(|&x| self.mul(x, x) == a)
    }

    /// Checked binary/unary arithmetic. `b` is ignored for unary operations.
    pub fn field_arith(&self, a: FFElem, b: FFElem, op: FieldOp) -> Result<FFElem> {
        if !self.owns(a) || !self.owns(b) {
            return Err(Error::ParentMismatch);
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Pow(e) => self.pow(a, e),
            FieldOp::Frobenius(j) => self.frobenius(a, j),
        })
    }

    /// Relative trace and norm down to `F_{p^d}`.
    pub fn trace_norm(&self, x: FFElem, d: u32) -> Result<(FFElem, FFElem)> {
        if d == 0 || self.k % d != 0 {
            return Err(Error::NotDivisor(d, self.k));
        }
        let mut t = self.zero();
        let mut nm = self.one();
        let mut c = x;
        for _ in 0..self.k / d {
            t = self.add(t, c);
            nm = self.mul(nm, c);
            c = self.frobenius(c, d);
        }
        Ok((t, nm))
    }

    fn find_primitive(&self) -> u32 {
        let n = self.order();
        let factors = prime_factors(n);
        for c in 1..self.size {
            let g = self.from_code(c);
            if factors.iter().all(|&r| self.pow(g, n / r) != self.one()) {
                return c as u32;
            }
        }
        unreachable!("finite field without a primitive element")
    }

    /// The least primitive element in code order.
    pub fn primitive_root(&self) -> FFElem {
        FFElem { tag: self.tag, code: self.primitive }
    }

    /// Exponent `e` with `g^e = x` for the primitive root `g`.
    pub fn discrete_log(&self, x: FFElem) -> Result<u64> {
        if x.code == 0 {
            return Err(Error::ZeroInput);
        }
        if self.size > DLOG_CAP {
            return Err(Error::FieldTooLarge(self.size));
        }
        let g = self.primitive_root();
        let n = self.order();
        if self.size <= SCAN_LIMIT {
            let mut acc = self.one();
            for e in 0..n {
                if acc == x {
                    return Ok(e);
                }
                acc = self.mul(acc, g);
            }
            unreachable!("primitive root does not generate");
        }
        // baby-step giant-step
        let m = num_integer::Roots::sqrt(&n) + 1;
        let mut table = BTreeMap::new();
        let mut acc = self.one();
        for j in 0..m {
            table.entry(acc.code).or_insert(j);
            acc = self.mul(acc, g);
        }
        let step = self.inv(self.pow(g, m))?;
        let mut y = x;
        for i in 0..=m {
            if let Some(&j) = table.get(&y.code) {
                return Ok((i * m + j) % n);
            }
            y = self.mul(y, step);
        }
        unreachable!("bsgs failed in a cyclic group")
    }

    /// Table of discrete logs for every unit, indexed by code (entry 0 unused).
    pub fn log_table(&self) -> Result<Vec<u32>> {
        if self.size > DLOG_CAP {
            return Err(Error::FieldTooLarge(self.size));
        }
        let mut t = vec![u32::MAX; self.size as usize];
        let g = self.primitive_root();
        let mut acc = self.one();
        for e in 0..self.order() {
            t[acc.code as usize] = e as u32;
            acc = self.mul(acc, g);
        }
        Ok(t)
    }

    /// Minimal polynomial over `F_{p^d}` of `a`, returned as a monic
    /// polynomial with coefficients in `self` (they lie in the subfield).
    pub fn min_poly_elems(&self, a: FFElem, d: u32) -> Vec<FFElem> {
        let mut conj = vec![a];
        let mut c = self.frobenius(a, d);
        while c != a {
            conj.push(c);
            c = self.frobenius(c, d);
        }
        let mut poly = vec![self.one()];
        for r in conj {
            let mut next = vec![self.zero(); poly.len() + 1];
            for (i, &ci) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], ci);
                next[i] = self.sub(next[i], self.mul(ci, r));
            }
            poly = next;
        }
        poly
    }
}

fn least_irreducible(p: u32, k: usize) -> Vec<u32> {
    let total = (p as u64).pow(k as u32);
    for code in 0..total {
        let mut f: Vec<u32> =
            (0..k).map(|i| ((code / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An embedding of a smaller field `F_{p^d}` into `F_{p^k}` sending the
/// generator `x` of the small field to a fixed root of its modulus.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    forward: Vec<u32>,
    backward: BTreeMap<u32, u32>,
}

impl FieldEmbedding {
    pub fn new(small: &FF, big: &FF) -> Result<FieldEmbedding> {
        if small.p != big.p {
            return Err(Error::ParentMismatch);
        }
        if big.k % small.k != 0 {
            return Err(Error::NotDivisor(small.k, big.k));
        }
        let m: Vec<FFElem> = small.modulus.iter().map(|&c| big.int(c as i64)).collect();
        let root = big
            .elements()
            .find(|&r| {
                let mut acc = big.zero();
                for &c in m.iter().rev() {
                    acc = big.add(big.mul(acc, r), c);
                }
                acc == big.zero()
            })
            .ok_or_else(|| Error::Integrality("modulus has no root in extension".into()))?;
        let mut forward = Vec::with_capacity(small.size as usize);
        let mut backward = BTreeMap::new();
        for a in small.elements() {
            let mut acc = big.zero();
            for &c in small.coeffs(a).iter().rev() {
                acc = big.add(big.mul(acc, root), big.int(c as i64));
            }
            forward.push(acc.code);
            backward.insert(acc.code, a.code);
        }
        Ok(FieldEmbedding { forward, backward })
    }
    pub fn apply(&self, small: &FF, big: &FF, a: FFElem) -> FFElem {
        debug_assert!(small.owns(a));
        big.from_code(self.forward[a.code as usize] as u64)
    }
    pub fn restrict(&self, small: &FF, a: FFElem) -> Option<FFElem> {
        self.backward.get(&a.code).map(|&c| small.from_code(c as u64))
    }
}

/// A multiplicative character of `F_{q^n}^×`: the primitive root maps to
/// `ζ_N^m` with `N = q^n − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusChar {
    /// `N = q^n − 1`.
    pub modulus: u64,
    pub index: u64,
    /// Base field size `q`.
    pub q: u64,
    /// Degree `n` of `F_{q^n}` over `F_q`.
    pub n: u32,
}

impl TorusChar {
    pub fn new(q: u64, n: u32, index: u64) -> TorusChar {
        let modulus = q.pow(n) - 1;
        TorusChar { modulus, index: index % modulus, q, n }
    }

    /// Character value at a unit of the field, as an exact cyclotomic integer.
    pub fn value(&self, field: &FF, x: FFElem) -> Result<CycInt> {
        let e = field.discrete_log(x)?;
        Ok(CycInt::root_of_unity(self.modulus, self.exponent_at(e)))
    }

    /// Exponent of `ζ_N` at the element with discrete log `e`.
    pub fn exponent_at(&self, e: u64) -> u64 {
        ((self.index as u128 * e as u128) % self.modulus as u128) as u64
    }

    /// `λ(−1) = (−1)^m`.
    pub fn at_minus_one(&self) -> i32 {
        if self.index % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Frobenius orbit `{m, qm, q²m, …}` of the index.
    pub fn frobenius_orbit(&self) -> Vec<u64> {
        let mut orbit = vec![self.index];
        let mut c = (self.index as u128 * self.q as u128 % self.modulus as u128) as u64;
        while c != self.index {
            orbit.push(c);
            c = (c as u128 * self.q as u128 % self.modulus as u128) as u64;
        }
        orbit
    }

    pub fn is_regular(&self) -> bool {
        self.frobenius_orbit().len() == self.n as usize
    }

    /// `λ ∘ Frob_q`.
    pub fn frobenius_twist(&self) -> TorusChar {
        TorusChar::new(self.q, self.n, (self.index as u128 * self.q as u128 % self.modulus as u128) as u64)
    }
}

/// Least representative of each Frobenius orbit of regular characters.
pub fn regular_orbit_reps(q: u64, n: u32) -> Vec<TorusChar> {
    let modulus = q.pow(n) - 1;
    (0..modulus)
        .map(|m| TorusChar::new(q, n, m))
        .filter(|c| c.is_regular() && c.frobenius_orbit().iter().all(|&o| o >= c.index))
        .collect()
}
