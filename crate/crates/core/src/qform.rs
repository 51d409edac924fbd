//! Quadratic forms over `Q_p`, `p` odd: square classes, Hilbert symbols,
//! discriminant and Hasse invariants, orbit labels, and congruence
//! transforms between forms with equal invariants.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hensel::{is_padic_square, padic_sqrt};
use crate::rat::{check_odd_prime, int, least_nonresidue, residue, split_valuation, unit_legendre, MatQ, Rat, SymMatQ};

/// A class in `Q_p^× / (Q_p^×)²`: one of `1, u, p, up`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    pub p: u64,
    pub val_parity: u8,
    pub unit_is_square: bool,
}

impl SquareClass {
    pub fn one(p: u64) -> SquareClass {
        SquareClass { p, val_parity: 0, unit_is_square: true }
    }
    /// The four classes in the order `1, u, p, up`.
    pub fn all(p: u64) -> [SquareClass; 4] {
        let c = |v, s| SquareClass { p, val_parity: v, unit_is_square: s };
        [c(0, true), c(0, false), c(1, true), c(1, false)]
    }
    pub fn label(&self) -> &'static str {
        match (self.val_parity, self.unit_is_square) {
            (0, true) => "1",
            (0, false) => "u",
            (1, true) => "p",
            _ => "up",
        }
    }
    pub fn parse(p: u64, s: &str) -> Option<SquareClass> {
        Self::all(p).into_iter().find(|c| c.label() == s)
    }
    /// `1`, the least nonresidue `u`, `p` or `u·p`.
    pub fn representative(&self) -> Rat {
        let u = if self.unit_is_square { 1 } else { least_nonresidue(self.p) as i64 };
        let pp = if self.val_parity == 1 { self.p as i64 } else { 1 };
        int(u * pp)
    }
    pub fn mul(&self, o: &SquareClass) -> SquareClass {
        SquareClass {
            p: self.p,
            val_parity: (self.val_parity + o.val_parity) % 2,
            unit_is_square: self.unit_is_square == o.unit_is_square,
        }
    }
}

impl core::fmt::Display for SquareClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn square_class(r: &Rat, p: u64) -> Result<SquareClass> {
    check_odd_prime(p)?;
    let (v, u) = split_valuation(r, p)?;
    Ok(SquareClass { p, val_parity: v.rem_euclid(2) as u8, unit_is_square: unit_legendre(&u, p) == 1 })
}

/// `(a, b)_p` by the closed form: with `a = p^α u`, `b = p^β v`, the
/// Legendre symbol of `(−1)^{αβ} u^β v^α`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, p: u64) -> Result<i32> {
    check_odd_prime(p)?;
    let (alpha, u) = split_valuation(a, p)?;
    let (beta, v) = split_valuation(b, p)?;
    let mut s = 1;
    if alpha * beta % 2 != 0 {
        s *= unit_legendre(&int(-1), p);
    }
    if beta % 2 != 0 {
        s *= unit_legendre(&u, p);
    }
    if alpha % 2 != 0 {
        s *= unit_legendre(&v, p);
    }
    Ok(s)
}

/// `(a, b)_p` from its definition: whether `z² = ax² + by²` has a primitive
/// solution modulo `p⁴`, after removing square factors from `a` and `b`.
pub fn hilbert_symbol_brute(a: &Rat, b: &Rat, p: u64) -> Result<i32> {
    check_odd_prime(p)?;
    let norm = |r: &Rat| -> Result<BigInt> {
        let (v, u) = split_valuation(r, p)?;
        Ok(residue(&u, p, 4) * BigInt::from(p).pow(v.rem_euclid(2) as u32))
    };
    let m = p.pow(4);
    let (a, b) = (norm(a)?, norm(b)?);
    let red = |x: &BigInt| -> u64 { (x % BigInt::from(m)).try_into().unwrap() };
    let (a, b) = (red(&a), red(&b));
    let mut is_sq = vec![false; m as usize];
    let mut is_unit_sq = vec![false; m as usize];
    for z in 0..m {
        let s = (z * z % m) as usize;
        is_sq[s] = true;
        if z % p != 0 {
            is_unit_sq[s] = true;
        }
    }
    let form = |x: u64, y: u64| ((a as u128 * (x * x % m) as u128 + b as u128 * (y * y % m) as u128) % m as u128) as u64;
    // a primitive vector can be scaled so one unit coordinate equals 1
    let found = (0..m).any(|y| is_sq[form(1, y) as usize])
        || (0..m).step_by(p as usize).any(|x| is_sq[form(x, 1) as usize])
        || (0..m)
            .step_by(p as usize)
            .any(|x| (0..m).step_by(p as usize).any(|y| is_unit_sq[form(x, y) as usize]));
    Ok(if found { 1 } else { -1 })
}

/// Symmetric elimination: `ᵗP·A·P = D` diagonal. A vanishing pivot is
/// replaced by a later nonzero diagonal entry, or, when none is left, by the
/// pair `e_k + e_j, e_k − e_j` of a hyperbolic block.
pub fn diagonalize_congruence(a: &SymMatQ) -> Result<(SymMatQ, MatQ)> {
    let (d, p) = diagonalize(a.matrix())?;
    Ok((SymMatQ::diag(&d)?, p))
}

fn diagonalize(a: &MatQ) -> Result<(Vec<Rat>, MatQ)> {
    let n = a.size();
    let mut p = MatQ::identity(n);
    let col = |p: &MatQ, j: usize| -> Vec<Rat> { (0..n).map(|i| p.get(i, j).clone()).collect() };
    let set_col = |p: &mut MatQ, j: usize, v: &[Rat]| {
        for (i, x) in v.iter().enumerate() {
            p.set(i, j, x.clone());
        }
    };
    for k in 0..n {
        let m = a.congruent(&p);
        if m.get(k, k).is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m.get(i, i).is_zero()) {
                let (ck, ci) = (col(&p, k), col(&p, i));
                set_col(&mut p, k, &ci);
                set_col(&mut p, i, &ck);
            } else {
                let j = (k + 1..n).find(|&j| !m.get(k, j).is_zero()).ok_or(Error::Singular)?;
                let (ck, cj) = (col(&p, k), col(&p, j));
                let plus: Vec<Rat> = ck.iter().zip(&cj).map(|(x, y)| x + y).collect();
                let minus: Vec<Rat> = ck.iter().zip(&cj).map(|(x, y)| x - y).collect();
                set_col(&mut p, k, &plus);
                set_col(&mut p, j, &minus);
            }
        }
        let m = a.congruent(&p);
        let pivot = m.get(k, k).clone();
        let ck = col(&p, k);
        for j in k + 1..n {
            let c = m.get(k, j) / &pivot;
            if c.is_zero() {
                continue;
            }
            let cj: Vec<Rat> = col(&p, j).iter().zip(&ck).map(|(x, y)| x - &c * y).collect();
            set_col(&mut p, j, &cj);
        }
    }
    let m = a.congruent(&p);
    let d: Vec<Rat> = (0..n).map(|i| m.get(i, i).clone()).collect();
    if d.iter().any(|x| x.is_zero()) {
        return Err(Error::Singular);
    }
    if m != MatQ::diag(&d) {
        return Err(Error::Integrality("elimination left off-diagonal entries".into()));
    }
    Ok((d, p))
}

/// `Π_{i ≤ j} (a_i, a_j)` if `diagonal_too`, else `Π_{i < j}`.
fn hasse_of(d: &[Rat], p: u64, diagonal_too: bool) -> Result<i32> {
    let mut h = 1;
    for i in 0..d.len() {
        let start = if diagonal_too { i } else { i + 1 };
        for j in start..d.len() {
            h *= hilbert_symbol(&d[i], &d[j], p)?;
        }
    }
    Ok(h)
}

/// The `(dim, disc, Hasse)` fingerprint of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QFInvariants {
    pub dim: usize,
    pub disc: SquareClass,
    /// Class of `(−1)^{n(n−1)/2} det`.
    pub signed_disc: SquareClass,
    /// `Π_{i≤j}(a_i, a_j)`.
    pub hasse: i32,
    /// `Π_{i<j}(a_i, a_j)`.
    pub hasse0: i32,
}

fn sign_power(n: usize) -> i64 {
    if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn invariants(a: &SymMatQ, p: u64) -> Result<QFInvariants> {
    check_odd_prime(p)?;
    let (d, _) = diagonalize(a.matrix())?;
    let det = a.det();
    let n = a.size();
    let inv = QFInvariants {
        dim: n,
        disc: square_class(&det, p)?,
        signed_disc: square_class(&(&det * int(sign_power(n))), p)?,
        hasse: hasse_of(&d, p, true)?,
        hasse0: hasse_of(&d, p, false)?,
    };
    // Π_i (a_i, a_i) = Π_i (a_i, −1) = (det, −1)
    if inv.hasse * inv.hasse0 != hilbert_symbol(&det, &int(-1), p)? {
        return Err(Error::Integrality("Hasse invariants violate the discrepancy identity".into()));
    }
    Ok(inv)
}

/// Orbit label: discriminant class and Hasse invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitLabel {
    pub disc: SquareClass,
    pub hasse: i32,
}

pub fn classify_orbit(a: &SymMatQ, p: u64) -> Result<OrbitLabel> {
    let inv = invariants(a, p)?;
    let label = OrbitLabel { disc: inv.disc, hasse: inv.hasse };
    // a binary form of discriminant −1 is hyperbolic, hence has Hasse 1
    if a.size() == 2 && label.disc == square_class(&int(-1), p)? && label.hasse == -1 {
        return Err(Error::Integrality("excluded binary label realized".into()));
    }
    Ok(label)
}

pub fn similar_to_j(a: &SymMatQ, p: u64) -> Result<bool> {
    Ok(classify_orbit(a, p)? == classify_orbit(&SymMatQ::j(a.size()), p)?)
}

/// Labels of `λA` for `λ` in `1, u, p, up`.
pub fn scalar_orbit(a: &SymMatQ, p: u64) -> Result<Vec<(SquareClass, OrbitLabel)>> {
    check_odd_prime(p)?;
    SquareClass::all(p).iter().map(|c| Ok((*c, classify_orbit(&a.scale(&c.representative())?, p)?))).collect()
}

/// Whether `θ_A` lies in the orbit of `θ_J`, i.e. some scalar multiple of
/// `A` is congruent to `J`.
pub fn in_theta_j(a: &SymMatQ, p: u64) -> Result<bool> {
    let j = classify_orbit(&SymMatQ::j(a.size()), p)?;
    Ok(scalar_orbit(a, p)?.iter().any(|(_, l)| *l == j))
}

/// Default `p`-adic precision of congruence transforms.
pub const DEFAULT_PRECISION: u32 = 8;

/// `P` with `ᵗP·A·P ≡ B` entrywise modulo `p^N`.
pub fn congruence_transform(a: &SymMatQ, b: &SymMatQ, p: u64, n_prec: u32) -> Result<MatQ> {
    check_odd_prime(p)?;
    if n_prec < 1 {
        return Err(Error::Precision);
    }
    if a.size() != b.size() {
        return Err(Error::InvariantMismatch);
    }
    if a == b {
        return Ok(MatQ::identity(a.size()));
    }
    let (ia, ib) = (invariants(a, p)?, invariants(b, p)?);
    if ia.disc != ib.disc || ia.hasse != ib.hasse {
        return Err(Error::InvariantMismatch);
    }
    let (da, pa) = diagonalize(a.matrix())?;
    let (db, pb) = diagonalize(b.matrix())?;
    let pb_inv = pb.inverse()?;
    let loss = pb_inv.min_valuation(p).unwrap_or(0).min(0).unsigned_abs() as u32;
    let mut work = n_prec + 2 * loss + 4;
    for _ in 0..8 {
        let q = transform_diagonal(&da, &db, p, work)?;
        let t = pa.mul(&q).mul(&pb_inv);
        if a.matrix().congruent(&t).congruent_mod(b.matrix(), p, n_prec as i64) {
            return Ok(t);
        }
        work += 8;
    }
    Err(Error::Integrality("congruence transform did not converge".into()))
}

/// `Q` with `ᵗQ·diag(a)·Q ≈ diag(b)` (off-diagonal entries exactly zero,
/// diagonal entries to relative precision `prec`).
fn transform_diagonal(a: &[Rat], b: &[Rat], p: u64, prec: u32) -> Result<MatQ> {
    let m = a.len();
    if m == 1 {
        let q = padic_sqrt(&(&b[0] / &a[0]), p, prec)
            .ok_or_else(|| Error::Integrality("unary forms with different classes".into()))?;
        return Ok(MatQ::diag(&[q]));
    }
    let x = represent(&b[0], a, p, prec)?;
    let fx: Rat = a.iter().zip(&x).map(|(ai, xi)| ai * xi * xi).sum();
    let r = (0..m).find(|&i| !x[i].is_zero()).expect("representing vector is nonzero");
    let mut q1 = MatQ::zero(m);
    for i in 0..m {
        q1.set(i, 0, x[i].clone());
    }
    let mut c = 1;
    for j in (0..m).filter(|&j| j != r) {
        // e_j − (B(x, e_j)/Q(x)) x
        let coef = &a[j] * &x[j] / &fx;
        for i in 0..m {
            let e = if i == j { Rat::one() } else { Rat::zero() };
            q1.set(i, c, e - &coef * &x[i]);
        }
        c += 1;
    }
    let full = MatQ::diag(a).congruent(&q1);
    let rest = MatQ::from_fn(m - 1, |i, j| full.get(i + 1, j + 1).clone());
    let (d_rest, p_rest) = diagonalize(&rest)?;
    let q_rest = transform_diagonal(&d_rest, &b[1..], p, prec)?;
    let inner = p_rest.mul(&q_rest);
    let lifted = MatQ::from_fn(m, |i, j| match (i, j) {
        (0, 0) => Rat::one(),
        (0, _) | (_, 0) => Rat::zero(),
        _ => inner.get(i - 1, j - 1).clone(),
    });
    Ok(q1.mul(&lifted))
}

/// `x` with `Σ a_i x_i² ≈ b`: all but one coordinate from a small search
/// set, the last one a `p`-adic square root.
fn represent(b: &Rat, a: &[Rat], p: u64, prec: u32) -> Result<Vec<Rat>> {
    let m = a.len();
    // strip even powers of p: a_i = p^{2s_i} a'_i, b = p^{2t} b'
    let strip = |r: &Rat| -> Result<(Rat, i64)> {
        let (v, _) = split_valuation(r, p)?;
        let s = v.div_euclid(2);
        Ok((r * pow_p(p, -2 * s), s))
    };
    let (b1, t) = strip(b)?;
    let stripped: Vec<(Rat, i64)> = a.iter().map(strip).collect::<Result<_>>()?;
    let a1: Vec<Rat> = stripped.iter().map(|(x, _)| x.clone()).collect();
    let mut cands = vec![Rat::zero()];
    for k in [0i64, -1, 1] {
        for c in 1..p as i64 {
            cands.push(int(c) * pow_p(p, k));
        }
    }
    for nonzero in 0..m.min(4) {
        for i in 0..m {
            let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
            for support in subsets(&others, nonzero) {
                let mut idx = vec![1usize; nonzero];
                loop {
                    let mut y = vec![Rat::zero(); m];
                    for (s, &j) in support.iter().enumerate() {
                        y[j] = cands[idx[s]].clone();
                    }
                    let rest: Rat = (0..m).map(|j| &a1[j] * &y[j] * &y[j]).sum();
                    let target = (&b1 - rest) / &a1[i];
                    if !target.is_zero() && is_padic_square(&target, p) {
                        y[i] = padic_sqrt(&target, p, prec).expect("square has a root");
                        return Ok((0..m).map(|j| &y[j] * pow_p(p, t - stripped[j].1)).collect());
                    }
                    let Some(s) = (0..nonzero).rev().find(|&s| idx[s] + 1 < cands.len()) else {
                        break;
                    };
                    idx[s] += 1;
                    idx[s + 1..].iter_mut().for_each(|v| *v = 1);
                }
            }
        }
    }
    Err(Error::Integrality(format!("no representation of {b} found")))
}

fn pow_p(p: u64, k: i64) -> Rat {
    let x = Rat::from_integer(BigInt::from(p).pow(k.unsigned_abs() as u32));
    if k >= 0 {
        x
    } else {
        x.recip()
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn sym(rows: &[Vec<i64>]) -> SymMatQ {
        SymMatQ::new(MatQ::from_ints(rows).unwrap()).unwrap()
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_class(&int(1), 7).unwrap().label(), "1");
        assert_eq!(square_class(&int(5), 5).unwrap().label(), "p");
        assert_eq!(square_class(&int(50), 5).unwrap().label(), "u");
        assert_eq!(square_class(&int(3), 2), Err(Error::EvenPrime));
        assert_eq!(square_class(&int(0), 5), Err(Error::ZeroInput));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&int(2), &int(3), 5).unwrap(), 1);
        assert_eq!(hilbert_symbol(&int(5), &int(2), 5).unwrap(), -1);
        assert_eq!(hilbert_symbol(&int(1), &rat(7, 5), 5).unwrap(), 1);
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), 3).unwrap(), 1);
        assert_eq!(hilbert_symbol_brute(&int(5), &int(2), 5).unwrap(), -1);
        assert_eq!(hilbert_symbol_brute(&int(-1), &int(-1), 3).unwrap(), 1);
        assert_eq!(hilbert_symbol_brute(&int(3), &int(3), 3).unwrap(), hilbert_symbol(&int(3), &int(3), 3).unwrap());
    }

    #[test]
    fn diagonalization_examples() {
        let (d, p) = diagonalize_congruence(&sym(&[vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!(d, SymMatQ::diag(&[int(2), int(-2)]).unwrap());
        assert_eq!(p, MatQ::from_ints(&[vec![1, 1], vec![1, -1]]).unwrap());
        let (d, p) = diagonalize_congruence(&SymMatQ::j(3)).unwrap();
        assert_eq!(d, SymMatQ::diag(&[int(1), int(2), int(-2)]).unwrap());
        assert_eq!(MatQ::j(3).congruent(&p), d.into_matrix());
        let (d, p) = diagonalize_congruence(&SymMatQ::identity(3)).unwrap();
        assert_eq!((d, p), (SymMatQ::identity(3), MatQ::identity(3)));
    }

    #[test]
    fn invariants_of_j() {
        let inv = invariants(&SymMatQ::j(3), 5).unwrap();
        assert_eq!(inv.disc, square_class(&int(-1), 5).unwrap());
        assert_eq!(inv.signed_disc.label(), "1");
        assert_eq!(inv.hasse, 1);
        for n in 1..=9 {
            for p in [3, 5, 7] {
                assert_eq!(invariants(&SymMatQ::j(n), p).unwrap().hasse, 1);
                assert!(similar_to_j(&SymMatQ::j(n), p).unwrap());
            }
        }
    }

    #[test]
    fn theta_j_examples() {
        assert!(in_theta_j(&SymMatQ::identity(3), 3).unwrap());
        assert!(!similar_to_j(&SymMatQ::diag(&[int(1), int(1), int(7)]).unwrap(), 7).unwrap());
        let a = sym(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 5]]);
        let discs: Vec<SquareClass> = scalar_orbit(&a, 5).unwrap().iter().map(|(_, l)| l.disc).collect();
        let mut sorted = discs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn transforms() {
        let a = SymMatQ::diag(&[int(2), int(-2)]).unwrap();
        let b = sym(&[vec![0, 1], vec![1, 0]]);
        let t = congruence_transform(&a, &b, 5, 6).unwrap();
        assert!(a.matrix().congruent(&t).congruent_mod(b.matrix(), 5, 6));
        let a = SymMatQ::identity(3);
        let b = SymMatQ::diag(&[int(4), int(9), int(1)]).unwrap();
        let t = congruence_transform(&a, &b, 7, 8).unwrap();
        assert!(a.matrix().congruent(&t).congruent_mod(b.matrix(), 7, 8));
        assert_eq!(congruence_transform(&a, &a, 7, 8).unwrap(), MatQ::identity(3));
        let c = SymMatQ::diag(&[int(1), int(1), int(7)]).unwrap();
        assert_eq!(congruence_transform(&a, &c, 7, 8), Err(Error::InvariantMismatch));
        assert_eq!(congruence_transform(&a, &b, 7, 0), Err(Error::Precision));
    }

    #[test]
    fn transform_to_j_with_p_parts() {
        for p in [3u64, 5, 7] {
            let pi = p as i64;
            let a = SymMatQ::diag(&[int(pi), int(-pi), int(1)]).unwrap();
            let j = SymMatQ::j(3);
            if invariants(&a, p).unwrap().hasse == invariants(&j, p).unwrap().hasse {
                let t = congruence_transform(&a, &j, p, 8).unwrap();
                assert!(a.matrix().congruent(&t).congruent_mod(j.matrix(), p, 8));
            }
        }
    }
}
