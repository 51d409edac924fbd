//! Exact elements of `Z[ζ_N]` in the group-ring representation
//! `Σ_j c_j ζ_N^j`, `j ∈ Z/N`.
//!
//! The representation is not unique; [`CycInt::reduce`] maps to the canonical
//! representative of degree `< φ(N)` by division by the cyclotomic polynomial
//! `Φ_N`, which decides equality and rational-integrality.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt {
    order: u64,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(order: u64) -> CycInt {
        CycInt { order, coeffs: vec![0; order as usize] }
    }
    pub fn from_int(order: u64, n: i64) -> CycInt {
        let mut z = CycInt::zero(order);
        z.coeffs[0] = n;
        z
    }
    /// `ζ_N^j`.
    pub fn root_of_unity(order: u64, j: u64) -> CycInt {
        let mut z = CycInt::zero(order);
        z.coeffs[(j % order) as usize] = 1;
        z
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn check(&self, other: &CycInt) -> Result<()> {
        if self.order != other.order {
            return Err(Error::Dimension("cyclotomic orders differ".into()));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &CycInt) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    /// `self += c · ζ^j`, the workhorse of character sums.
    pub fn add_term(&mut self, j: u64, c: i64) {
        self.coeffs[(j % self.order) as usize] += c;
    }

    pub fn scale(&self, c: i64) -> CycInt {
        CycInt { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check(other)?;
        let n = self.order as usize;
        let mut out = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[(i + j) % n] += a * b;
                }
            }
        }
        Ok(CycInt { order: self.order, coeffs: out })
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{−j}`.
    pub fn conj(&self) -> CycInt {
        let n = self.order as usize;
        let mut out = vec![0i64; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(n - j) % n] += c;
        }
        CycInt { order: self.order, coeffs: out }
    }

    /// Canonical representative modulo `Φ_N`.
    pub fn reduce(&self) -> CycInt {
        let phi = cyclotomic_poly(self.order);
        let d = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for top in (d..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            // Φ_N is monic
            for (i, &pc) in phi.iter().enumerate() {
                r[top - d + i] -= c * pc;
            }
        }
        CycInt { order: self.order, coeffs: r }
    }

    /// `Some(n)` when the element equals the rational integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduce();
        if r.coeffs[1..].iter().all(|&c| c == 0) {
            Some(r.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.reduce().coeffs.iter().all(|&c| c == 0)
    }

    pub fn equals(&self, other: &CycInt) -> bool {
        self.order == other.order && {
            let mut d = self.clone();
            for (a, b) in d.coeffs.iter_mut().zip(&other.coeffs) {
                *a -= b;
            }
            d.is_zero()
        }
    }

    /// Exact division by `d` of the canonical representative. Fails unless
    /// every coefficient is divisible.
    pub fn div_exact(&self, d: i64) -> Result<CycInt> {
        let r = self.reduce();
        if r.coeffs.iter().any(|c| c % d != 0) {
            return Err(Error::Integrality("cyclotomic sum not divisible".into()));
        }
        Ok(CycInt { order: self.order, coeffs: r.coeffs.iter().map(|c| c / d).collect() })
    }

    /// Evaluates with caller-supplied `cos`/`sin`; used only for cross-checks
    /// in environments with floating-point math.
    pub fn eval_with(&self, cos_sin: impl Fn(f64) -> (f64, f64)) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let tau = core::f64::consts::TAU;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let (co, si) = cos_sin(tau * j as f64 / self.order as f64);
                re += c as f64 * co;
                im += c as f64 * si;
            }
        }
        (re, im)
    }
}

/// Coefficients of `Φ_N` (low degree first).
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // Φ_N = Π_{d | N} (x^d − 1)^{μ(N/d)}, computed by exact division of x^N − 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db]; // b monic
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(26).len() - 1, 12);
    }

    #[test]
    fn full_sum_of_roots_is_zero() {
        for n in [2u64, 8, 26, 124] {
            let mut s = CycInt::zero(n);
            for j in 0..n {
                s.add_term(j, 1);
            }
            assert_eq!(s.as_integer(), Some(0));
        }
    }

    #[test]
    fn minus_one_is_half_turn() {
        let z = CycInt::root_of_unity(26, 13);
        assert_eq!(z.as_integer(), Some(-1));
        assert!(CycInt::root_of_unity(26, 1).as_integer().is_none());
    }

    #[test]
    fn norm_of_root_is_one() {
        let z = CycInt::root_of_unity(124, 37);
        assert_eq!(z.mul(&z.conj()).unwrap().as_integer(), Some(1));
    }
}
