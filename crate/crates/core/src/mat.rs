//! Small square matrices over a finite field (size at most 4), dense linear
//! algebra over [`FF`], polynomials with field coefficients, and the
//! structural operations used by the character computations: regular
//! representations, Jordan decomposition, centralizer types, orthogonal
//! involutions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ff::{FFElem, FieldEmbedding, FF};

pub const MAX_N: usize = 4;

/// An `n × n` matrix over a finite field, stored as packed element codes.
/// The owning field is passed to every operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatFF {
    n: u8,
    e: [u32; MAX_N * MAX_N],
}

impl MatFF {
    pub fn zero(n: usize) -> MatFF {
        assert!(n >= 1 && n <= MAX_N, "matrix size out of range");
        MatFF { n: n as u8, e: [0; MAX_N * MAX_N] }
    }
    pub fn identity(f: &FF, n: usize) -> MatFF {
        Self::scalar(f, n, f.one())
    }
    pub fn scalar(_f: &FF, n: usize, c: FFElem) -> MatFF {
        let mut m = MatFF::zero(n);
        for i in 0..n {
            m.e[i * n + i] = c.code();
        }
        m
    }
    pub fn from_fn(n: usize, mut g: impl FnMut(usize, usize) -> FFElem) -> MatFF {
        let mut m = MatFF::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.e[i * n + j] = g(i, j).code();
            }
        }
        m
    }
    pub fn from_rows(f: &FF, rows: &[Vec<i64>]) -> Result<MatFF> {
        let n = rows.len();
        if n == 0 || n > MAX_N || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("expected a square matrix of size 1..=4".into()));
        }
        Ok(MatFF::from_fn(n, |i, j| f.int(rows[i][j])))
    }
    /// Builds from packed codes, row-major.
    pub fn from_codes(n: usize, codes: &[u32]) -> MatFF {
        let mut m = MatFF::zero(n);
        m.e[..n * n].copy_from_slice(&codes[..n * n]);
        m
    }
    pub fn codes(&self) -> &[u32] {
        &self.e[..self.size() * self.size()]
    }
    pub fn size(&self) -> usize {
        self.n as usize
    }
    pub fn get(&self, f: &FF, i: usize, j: usize) -> FFElem {
        f.from_code(self.e[i * self.size() + j] as u64)
    }
    pub fn set(&mut self, i: usize, j: usize, v: FFElem) {
        let n = self.size();
        self.e[i * n + j] = v.code();
    }
    pub fn rows(&self, f: &FF) -> Vec<Vec<FFElem>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.get(f, i, j)).collect()).collect()
    }

    pub fn mul(&self, f: &FF, o: &MatFF) -> MatFF {
        let n = self.size();
        MatFF::from_fn(n, |i, j| {
            let mut acc = f.zero();
            for k in 0..n {
                acc = f.add(acc, f.mul(self.get(f, i, k), o.get(f, k, j)));
            }
            acc
        })
    }
    pub fn add(&self, f: &FF, o: &MatFF) -> MatFF {
        MatFF::from_fn(self.size(), |i, j| f.add(self.get(f, i, j), o.get(f, i, j)))
    }
    pub fn sub(&self, f: &FF, o: &MatFF) -> MatFF {
        MatFF::from_fn(self.size(), |i, j| f.sub(self.get(f, i, j), o.get(f, i, j)))
    }
    pub fn scale(&self, f: &FF, c: FFElem) -> MatFF {
        MatFF::from_fn(self.size(), |i, j| f.mul(c, self.get(f, i, j)))
    }
    pub fn transpose(&self) -> MatFF {
        let n = self.size();
        let mut m = MatFF::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.e[j * n + i] = self.e[i * n + j];
            }
        }
        m
    }
    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }
    pub fn is_identity(&self, f: &FF) -> bool {
        *self == MatFF::identity(f, self.size())
    }
    pub fn apply(&self, f: &FF, v: &[FFElem]) -> Vec<FFElem> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).fold(f.zero(), |acc, k| f.add(acc, f.mul(self.get(f, i, k), v[k]))))
            .collect()
    }
    pub fn column(&self, f: &FF, j: usize) -> Vec<FFElem> {
        (0..self.size()).map(|i| self.get(f, i, j)).collect()
    }

    pub fn det(&self, f: &FF) -> FFElem {
        let n = self.size();
        let mut a = self.rows(f);
        let mut det = f.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !f.is_zero(a[r][c])) else {
                return f.zero();
            };
            if piv != c {
                a.swap(piv, c);
                det = f.neg(det);
            }
            det = f.mul(det, a[c][c]);
            let inv = f.inv(a[c][c]).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(a[r][c], inv);
                if f.is_zero(factor) {
                    continue;
                }
                for k in c..n {
                    a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FF) -> Result<MatFF> {
        let n = self.size();
        let mut a = self.rows(f);
        let mut b = MatFF::identity(f, n).rows(f);
        for c in 0..n {
            let piv = (c..n).find(|&r| !f.is_zero(a[r][c])).ok_or(Error::Singular)?;
            a.swap(piv, c);
            b.swap(piv, c);
            let inv = f.inv(a[c][c])?;
            for k in 0..n {
                a[c][k] = f.mul(a[c][k], inv);
                b[c][k] = f.mul(b[c][k], inv);
            }
            for r in 0..n {
                if r == c || f.is_zero(a[r][c]) {
                    continue;
                }
                let factor = a[r][c];
                for k in 0..n {
                    a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                    b[r][k] = f.sub(b[r][k], f.mul(factor, b[c][k]));
                }
            }
        }
        Ok(MatFF::from_fn(n, |i, j| b[i][j]))
    }

    pub fn pow(&self, f: &FF, mut e: u64) -> MatFF {
        let mut r = MatFF::identity(f, self.size());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative order; `None` if singular or beyond `cap`.
    pub fn order(&self, f: &FF, cap: u64) -> Option<u64> {
        let id = MatFF::identity(f, self.size());
        let mut acc = *self;
        for k in 1..=cap {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(f, self);
        }
        None
    }

    /// `h g h^{-1}`.
    pub fn conj_by(&self, f: &FF, h: &MatFF, h_inv: &MatFF) -> MatFF {
        h.mul(f, self).mul(f, h_inv)
    }

    /// Characteristic polynomial `det(xI − A)`, monic, low degree first.
    pub fn char_poly(&self, f: &FF) -> FPoly {
        let n = self.size();
        // entries of xI − A as linear polynomials
        let entry = |i: usize, j: usize| -> FPoly {
            let c = f.neg(self.get(f, i, j));
            if i == j {
                vec![c, f.one()]
            } else {
                vec![c]
            }
        };
        let mut total: FPoly = vec![f.zero()];
        let mut perm: Vec<usize> = (0..n).collect();
        for_each_permutation(&mut perm, 0, &mut |perm: &[usize], sign: bool| {
            let mut term: FPoly = vec![f.one()];
            for (i, &j) in perm.iter().enumerate() {
                term = fpoly_mul(f, &term, &entry(i, j));
            }
            if sign {
                term = term.into_iter().map(|c| f.neg(c)).collect();
            }
            total = fpoly_add(f, &total, &term);
        });
        fpoly_trim(f, total)
    }

    /// `P(A)` by Horner's rule.
    pub fn eval_poly(&self, f: &FF, poly: &[FFElem]) -> MatFF {
        let n = self.size();
        let mut acc = MatFF::zero(n);
        for &c in poly.iter().rev() {
            acc = acc.mul(f, self).add(f, &MatFF::scalar(f, n, c));
        }
        acc
    }

    /// Dimension of the kernel.
    pub fn nullity(&self, f: &FF) -> usize {
        self.size() - rank(f, &self.rows(f))
    }
}

fn for_each_permutation(
    perm: &mut Vec<usize>,
    k: usize,
    visit: &mut impl FnMut(&[usize], bool),
) {
    // Heap-style recursion tracking parity via swaps.
    fn rec(perm: &mut Vec<usize>, k: usize, odd: bool, visit: &mut impl FnMut(&[usize], bool)) {
        if k == perm.len() {
            visit(perm, odd);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(perm, k + 1, if i != k { !odd } else { odd }, visit);
            perm.swap(k, i);
        }
    }
    rec(perm, k, false, visit);
}

/// Polynomial with coefficients in a finite field, low degree first.
pub type FPoly = Vec<FFElem>;

pub fn fpoly_trim(f: &FF, mut a: FPoly) -> FPoly {
    while a.len() > 1 && f.is_zero(*a.last().unwrap()) {
        a.pop();
    }
    a
}
pub fn fpoly_add(f: &FF, a: &[FFElem], b: &[FFElem]) -> FPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(f.zero()), b.get(i).copied().unwrap_or(f.zero())))
        .collect()
}
pub fn fpoly_mul(f: &FF, a: &[FFElem], b: &[FFElem]) -> FPoly {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}
pub fn fpoly_pow(f: &FF, a: &[FFElem], e: usize) -> FPoly {
    let mut r = vec![f.one()];
    for _ in 0..e {
        r = fpoly_mul(f, &r, a);
    }
    r
}
/// Quotient and remainder by a monic divisor.
pub fn fpoly_divrem(f: &FF, a: &[FFElem], b: &[FFElem]) -> (FPoly, FPoly) {
    let a = fpoly_trim(f, a.to_vec());
    let b = fpoly_trim(f, b.to_vec());
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (vec![f.zero()], a);
    }
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = a.clone();
    let mut q = vec![f.zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = f.mul(r[i + db], lead_inv);
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = f.sub(r[i + j], f.mul(c, bj));
        }
    }
    r.truncate(db.max(1));
    (fpoly_trim(f, q), fpoly_trim(f, r))
}
fn fpoly_is_zero(f: &FF, a: &[FFElem]) -> bool {
    a.iter().all(|&c| f.is_zero(c))
}

/// Monic irreducible polynomials over `F_q ⊂ f` of the given degree, where the
/// subfield `F_q` is described by the list of its elements inside `f`.
fn monic_polys(f: &FF, sub: &[FFElem], d: usize) -> Vec<FPoly> {
    let q = sub.len();
    let total = q.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let mut p: FPoly = (0..d)
                .map(|_| {
                    let c = sub[code % q];
                    code /= q;
                    c
                })
                .collect();
            p.push(f.one());
            p
        })
        .collect()
}

/// Factorization of a monic polynomial over the prime subfield... or over the
/// field of `sub` elements, by trial division with monic irreducibles.
/// Degrees are at most [`MAX_N`], so exhaustive search is cheap.
pub fn factor_over(f: &FF, sub: &[FFElem], poly: &[FFElem]) -> Vec<(FPoly, usize)> {
    let mut rest = fpoly_trim(f, poly.to_vec());
    let mut out: Vec<(FPoly, usize)> = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        let dr = rest.len() - 1;
        if 2 * d > dr {
            out.push((rest.clone(), 1));
            break;
        }
        for cand in monic_polys(f, sub, d) {
            // irreducible iff no factor found among lower degrees already removed
            if !is_irreducible_over(f, sub, &cand) {
                continue;
            }
            let mut mult = 0;
            loop {
                let (q, r) = fpoly_divrem(f, &rest, &cand);
                if !fpoly_is_zero(f, &r) {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
        d += 1;
    }
    // merge the trailing irreducible with an equal earlier factor if any
    let mut merged: Vec<(FPoly, usize)> = Vec::new();
    for (p, m) in out {
        if let Some(e) = merged.iter_mut().find(|(q, _)| *q == p) {
            e.1 += m;
        } else {
            merged.push((p, m));
        }
    }
    merged
}

fn is_irreducible_over(f: &FF, sub: &[FFElem], poly: &[FFElem]) -> bool {
    let d = poly.len() - 1;
    if d <= 1 {
        return true;
    }
    for e in 1..=d / 2 {
        for cand in monic_polys(f, sub, e) {
            let (_, r) = fpoly_divrem(f, poly, &cand);
            if fpoly_is_zero(f, &r) {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible polynomials of degree `d` over `f`, in code order.
pub fn monic_irreducibles(f: &FF, d: usize) -> Vec<FPoly> {
    let sub = field_elements(f);
    monic_polys(f, &sub, d).into_iter().filter(|p| is_irreducible_over(f, &sub, p)).collect()
}

/// Companion matrix of a monic polynomial.
pub fn companion(f: &FF, poly: &[FFElem]) -> MatFF {
    let d = poly.len() - 1;
    MatFF::from_fn(d, |i, j| {
        if j == d - 1 {
            f.neg(poly[i])
        } else if i == j + 1 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Block-diagonal sum.
pub fn block_diag(f: &FF, blocks: &[MatFF]) -> MatFF {
    let n: usize = blocks.iter().map(|b| b.size()).sum();
    let mut m = MatFF::zero(n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.size() {
            for j in 0..b.size() {
                m.set(off + i, off + j, b.get(f, i, j));
            }
        }
        off += b.size();
    }
    m
}

/// Elements of `f` lying in the prime field: the coefficients of matrices
/// over `f` considered as `F_q`-matrices with `q = |f|`.
pub fn field_elements(f: &FF) -> Vec<FFElem> {
    f.elements().collect()
}

/// Rank of a dense matrix (rows of equal length).
pub fn rank(f: &FF, rows: &[Vec<FFElem>]) -> usize {
    let mut a: Vec<Vec<FFElem>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..a.len()).find(|&i| !f.is_zero(a[i][c])) else {
            continue;
        };
        a.swap(piv, r);
        let inv = f.inv(a[r][c]).unwrap();
        for i in 0..a.len() {
            if i != r && !f.is_zero(a[i][c]) {
                let factor = f.mul(a[i][c], inv);
                for k in c..ncols {
                    let t = f.mul(factor, a[r][k]);
                    a[i][k] = f.sub(a[i][k], t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : A x = 0}` for a dense `rows × ncols` system.
pub fn nullspace(f: &FF, rows: &[Vec<FFElem>], ncols: usize) -> Vec<Vec<FFElem>> {
    let mut a: Vec<Vec<FFElem>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..a.len()).find(|&i| !f.is_zero(a[i][c])) else {
            continue;
        };
        a.swap(piv, r);
        let inv = f.inv(a[r][c]).unwrap();
        for k in 0..ncols {
            a[r][k] = f.mul(a[r][k], inv);
        }
        for i in 0..a.len() {
            if i != r && !f.is_zero(a[i][c]) {
                let factor = a[i][c];
                for k in 0..ncols {
                    let t = f.mul(factor, a[r][k]);
                    a[i][k] = f.sub(a[i][k], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[ri][fc]);
            }
            v
        })
        .collect()
}

/// Symmetric invertible matrix defining `θ_ν(g) = ν^{-1}·ᵗg^{-1}·ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymFormFF {
    nu: MatFF,
    nu_inv: MatFF,
}

impl SymFormFF {
    pub fn new(f: &FF, nu: MatFF) -> Result<SymFormFF> {
        if !nu.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let nu_inv = nu.inverse(f)?;
        Ok(SymFormFF { nu, nu_inv })
    }
    pub fn identity(f: &FF, n: usize) -> SymFormFF {
        let id = MatFF::identity(f, n);
        SymFormFF { nu: id, nu_inv: id }
    }
    pub fn matrix(&self) -> &MatFF {
        &self.nu
    }
    pub fn size(&self) -> usize {
        self.nu.size()
    }
    /// `θ_ν(g)` given `g^{-1}`.
    pub fn theta_with_inverse(&self, f: &FF, g_inv: &MatFF) -> MatFF {
        self.nu_inv.mul(f, &g_inv.transpose()).mul(f, &self.nu)
    }
    pub fn theta(&self, f: &FF, g: &MatFF) -> Result<MatFF> {
        Ok(self.theta_with_inverse(f, &g.inverse(f)?))
    }
    /// `B(v, w) = ᵗv ν w`.
    pub fn bilinear(&self, f: &FF, v: &[FFElem], w: &[FFElem]) -> FFElem {
        let nw = self.nu.apply(f, w);
        v.iter().zip(&nw).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }
    /// `ᵗg ν g`.
    pub fn pullback(&self, f: &FF, g: &MatFF) -> MatFF {
        g.transpose().mul(f, &self.nu).mul(f, g)
    }
    pub fn is_orthogonal(&self, f: &FF, g: &MatFF) -> bool {
        self.pullback(f, g) == self.nu
    }
}

/// The regular representation of `E = F_{q^n}` over `F_q` with respect to a
/// chosen `F_q`-basis of `E`.
#[derive(Clone, Debug)]
pub struct RegularEmbedding {
    pub ext: FF,
    pub base: FF,
    emb: FieldEmbedding,
    basis: Vec<FFElem>,
    dual: Vec<FFElem>,
    one_coords: Vec<FFElem>,
    base_degree: u32,
}

impl RegularEmbedding {
    /// `ext` must be `F_{q^n}` and `base` must be `F_q` with the same characteristic.
    pub fn new(ext: &FF, base: &FF, basis: Vec<FFElem>) -> Result<RegularEmbedding> {
        let d = base.degree();
        if ext.degree() % d != 0 {
            return Err(Error::NotDivisor(d, ext.degree()));
        }
        let n = (ext.degree() / d) as usize;
        if basis.len() != n || n > MAX_N {
            return Err(Error::Dimension("basis length must equal [E:F_q] ≤ 4".into()));
        }
        let emb = FieldEmbedding::new(base, ext)?;
        let tr = |x: FFElem| ext.trace_norm(x, d).map(|t| t.0);
        // Gram matrix of the trace form, computed in `base`
        let gram = MatFF::from_fn(n, |i, j| {
            let t = tr(ext.mul(basis[i], basis[j])).unwrap();
            emb.restrict(base, t).unwrap()
        });
        let gram_inv = gram.inverse(base).map_err(|_| Error::DependentBasis)?;
        let dual: Vec<FFElem> = (0..n)
            .map(|i| {
                (0..n).fold(ext.zero(), |acc, k| {
                    let c = emb.apply(base, ext, gram_inv.get(base, i, k));
                    ext.add(acc, ext.mul(c, basis[k]))
                })
            })
            .collect();
        let mut r = RegularEmbedding {
            ext: ext.clone(),
            base: base.clone(),
            emb,
            basis,
            dual,
            one_coords: Vec::new(),
            base_degree: d,
        };
        r.one_coords = r.coords(ext.one());
        Ok(r)
    }

    /// Power basis `1, γ, …, γ^{n−1}` of the primitive root `γ`.
    pub fn power_basis(ext: &FF, base: &FF) -> Result<RegularEmbedding> {
        let n = ext.degree() / base.degree();
        let g = ext.primitive_root();
        let basis = (0..n).map(|i| ext.pow(g, i as u64)).collect();
        RegularEmbedding::new(ext, base, basis)
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[FFElem] {
        &self.basis
    }
    pub fn embedding(&self) -> &FieldEmbedding {
        &self.emb
    }

    /// Coordinates of `y` in the basis, as elements of the base field.
    pub fn coords(&self, y: FFElem) -> Vec<FFElem> {
        self.dual
            .iter()
            .map(|&d| {
                let t = self.ext.trace_norm(self.ext.mul(y, d), self.base_degree).unwrap().0;
                self.emb.restrict(&self.base, t).expect("trace lies in base field")
            })
            .collect()
    }

    /// Element of `E` with the given base-field coordinates.
    pub fn element(&self, coords: &[FFElem]) -> FFElem {
        coords.iter().zip(&self.basis).fold(self.ext.zero(), |acc, (&c, &b)| {
            self.ext.add(acc, self.ext.mul(self.emb.apply(&self.base, &self.ext, c), b))
        })
    }

    /// Multiplication-by-`x` matrix.
    pub fn matrix(&self, x: FFElem) -> MatFF {
        let n = self.degree();
        let cols: Vec<Vec<FFElem>> =
            self.basis.iter().map(|&b| self.coords(self.ext.mul(x, b))).collect();
        MatFF::from_fn(n, |i, j| cols[j][i])
    }

    /// Inverse of [`RegularEmbedding::matrix`] on its image; `None` if `m`
    /// is not a multiplication matrix.
    pub fn element_of(&self, m: &MatFF) -> Option<FFElem> {
        let x = self.element(&m.apply(&self.base, &self.one_coords));
        (self.matrix(x) == *m).then_some(x)
    }

    /// Embedding of the base field into `E`.
    pub fn lift_scalar(&self, c: FFElem) -> FFElem {
        self.emb.apply(&self.base, &self.ext, c)
    }
}

/// Semisimple and unipotent parts of an invertible matrix via its order.
pub fn jordan_decomposition(f: &FF, g: &MatFF) -> Result<(MatFF, MatFF)> {
    if f.is_zero(g.det(f)) {
        return Err(Error::Singular);
    }
    let ord = g.order(f, 10_000_000).ok_or_else(|| Error::CapExceeded("element order".into()))?;
    let p = f.p();
    let mut pa = 1u64;
    let mut m = ord;
    while m % p == 0 {
        m /= p;
        pa *= p;
    }
    // α ≡ 1 (mod m), α ≡ 0 (mod p^a); β = 1 − α mod ord
    let alpha = (0..ord).find(|&a| a % m == 1 % m && a % pa == 0).unwrap_or(0);
    let beta = (ord + 1 - alpha) % ord;
    Ok((g.pow(f, alpha), g.pow(f, beta)))
}

/// Centralizer type of a semisimple element: `Z(s) ≅ Π GL_{k_i}(F_{q^{m_i}})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerType {
    /// `(m_i, k_i)` pairs: field degree and multiplicity of each irreducible
    /// factor of the characteristic polynomial.
    pub factors: Vec<(u32, u32)>,
}

impl CentralizerType {
    pub fn rank(&self) -> u32 {
        self.factors.iter().map(|&(_, k)| k).sum()
    }
    /// `σ(Z_s) = (−1)^{F_q-rank}`.
    pub fn sigma(&self) -> i32 {
        if self.rank() % 2 == 0 {
            1
        } else {
            -1
        }
    }
    /// `|Π GL_{k_i}(F_{q^{m_i}})|`.
    pub fn order(&self, q: u64) -> u64 {
        self.factors.iter().map(|&(m, k)| gl_order(q.pow(m), k)).product()
    }
}

pub fn gl_order(q: u64, k: u32) -> u64 {
    let qk = q.pow(k);
    (0..k).map(|i| qk - q.pow(i)).product()
}

pub fn centralizer_structure(f: &FF, s: &MatFF) -> Result<CentralizerType> {
    let sub = field_elements(f);
    let cp = s.char_poly(f);
    let facs = factor_over(f, &sub, &cp);
    let radical = facs.iter().fold(vec![f.one()], |acc, (p, _)| fpoly_mul(f, &acc, p));
    if s.eval_poly(f, &radical) != MatFF::zero(s.size()) {
        return Err(Error::NotSemisimple);
    }
    let mut factors: Vec<(u32, u32)> =
        facs.iter().map(|(p, k)| ((p.len() - 1) as u32, *k as u32)).collect();
    factors.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CentralizerType { factors })
}

/// Jordan type of the unipotent part on the `f`-primary component of `g`:
/// a partition of `mult` read off from kernel dimensions of `f(g)^j`.
pub fn primary_jordan_type(f: &FF, g: &MatFF, factor: &[FFElem], mult: usize) -> Vec<u32> {
    let d = factor.len() - 1;
    let fg = g.eval_poly(f, factor);
    // number of parts ≥ j is (dim ker f(g)^j − dim ker f(g)^{j−1}) / d
    let mut acc = MatFF::identity(f, g.size());
    let mut prev = 0usize;
    let mut at_least = Vec::new();
    for _ in 0..mult {
        acc = acc.mul(f, &fg);
        let k = acc.nullity(f);
        at_least.push(((k - prev) / d) as u32);
        prev = k;
    }
    // conjugate partition
    let parts = at_least.first().copied().unwrap_or(0);
    let mut lam: Vec<u32> =
        (0..parts).map(|i| at_least.iter().filter(|&&c| c > i).count() as u32).collect();
    lam.sort_unstable_by(|a, b| b.cmp(a));
    lam
}

/// Enumerates `GL_n(F)` in lexicographic code order, up to `cap` elements.
pub fn enumerate_gl(f: &FF, n: usize, cap: u64) -> Result<Vec<MatFF>> {
    let order = gl_order(f.size(), n as u32);
    if order > cap {
        return Err(Error::CapExceeded(alloc::format!("|GL_{n}| = {order} > {cap}")));
    }
    let size = f.size();
    let total = size.pow((n * n) as u32);
    let mut out = Vec::with_capacity(order as usize);
    let mut codes = vec![0u32; n * n];
    // build column by column keeping only independent prefixes
    fn rec(
        f: &FF,
        n: usize,
        col: usize,
        codes: &mut Vec<u32>,
        out: &mut Vec<MatFF>,
        size: u64,
    ) {
        if col == n {
            out.push(MatFF::from_codes(n, codes));
            return;
        }
        for v in 0..size.pow(n as u32) {
            let mut c = v;
            for i in 0..n {
                codes[i * n + col] = (c % size) as u32;
                c /= size;
            }
            let rows: Vec<Vec<FFElem>> = (0..=col)
                .map(|j| (0..n).map(|i| f.from_code(codes[i * n + j] as u64)).collect())
                .collect();
            if rank(f, &rows) == col + 1 {
                rec(f, n, col + 1, codes, out, size);
            }
        }
    }
    let _ = total;
    rec(f, n, 0, &mut codes, &mut out, size);
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FF {
        FF::new(3, 1).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let f = f3();
        let a = MatFF::from_rows(&f, &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]).unwrap();
        let ai = a.inverse(&f).unwrap();
        assert!(a.mul(&f, &ai).is_identity(&f));
        assert_eq!(a.det(&f), f.int(5)); // 1·1 − 2·(0 − 2)
        let s = MatFF::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(s.inverse(&f).unwrap_err(), Error::Singular);
    }

    #[test]
    fn char_poly_of_companion() {
        let f = f3();
        // companion of x^2 + 1
        let c = MatFF::from_rows(&f, &[vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(c.char_poly(&f), vec![f.one(), f.zero(), f.one()]);
    }

    #[test]
    fn regular_embedding_f9() {
        let e = FF::new(3, 2).unwrap();
        let b = f3();
        let zeta = e.gen(); // ζ² = −1
        let r = RegularEmbedding::new(&e, &b, vec![e.one(), zeta]).unwrap();
        let m = r.matrix(zeta);
        assert_eq!(m, MatFF::from_rows(&b, &[vec![0, -1], vec![1, 0]]).unwrap());
        assert_eq!(r.matrix(e.int(2)), MatFF::scalar(&b, 2, b.int(2)));
        assert_eq!(r.element_of(&m), Some(zeta));
        let dep = RegularEmbedding::new(&e, &b, vec![e.one(), e.int(2)]);
        assert_eq!(dep.unwrap_err(), Error::DependentBasis);
    }

    #[test]
    fn jordan_order_six() {
        let f = f3();
        // g = -[[1,1],[0,1]] has order 6
        let g = MatFF::from_rows(&f, &[vec![2, 2], vec![0, 2]]).unwrap();
        assert_eq!(g.order(&f, 100), Some(6));
        let (s, u) = jordan_decomposition(&f, &g).unwrap();
        assert_eq!(s, g.pow(&f, 3));
        assert_eq!(u, g.pow(&f, 4));
        assert_eq!(s.mul(&f, &u), g);
        assert_eq!(s.mul(&f, &u), u.mul(&f, &s));
    }

    #[test]
    fn jordan_trivial_cases() {
        let f = f3();
        let u = MatFF::from_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap();
        let (s, uu) = jordan_decomposition(&f, &u).unwrap();
        assert!(s.is_identity(&f));
        assert_eq!(uu, u);
        let d = MatFF::from_rows(&f, &[vec![2, 0], vec![0, 1]]).unwrap();
        let (s, uu) = jordan_decomposition(&f, &d).unwrap();
        assert_eq!(s, d);
        assert!(uu.is_identity(&f));
    }

    #[test]
    fn centralizer_examples() {
        let f = f3();
        let s = MatFF::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        let c = centralizer_structure(&f, &s).unwrap();
        assert_eq!(c.factors, vec![(1, 2), (1, 1)]);
        assert_eq!((c.rank(), c.sigma()), (3, -1));
        let z = MatFF::scalar(&f, 3, f.int(2));
        assert_eq!(centralizer_structure(&f, &z).unwrap().factors, vec![(1, 3)]);
        let q = MatFF::from_rows(&f, &[vec![0, 2, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let c = centralizer_structure(&f, &q).unwrap();
        assert_eq!(c.factors, vec![(2, 1), (1, 1)]);
        assert_eq!((c.rank(), c.sigma()), (2, 1));
        let u = MatFF::from_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(centralizer_structure(&f, &u).unwrap_err(), Error::NotSemisimple);
    }

    #[test]
    fn gl_enumeration_counts() {
        let f = f3();
        assert_eq!(enumerate_gl(&f, 2, 1000).unwrap().len(), 48);
        assert_eq!(enumerate_gl(&f, 3, 20_000).unwrap().len(), 11232);
        assert!(enumerate_gl(&f, 3, 100).is_err());
    }

    #[test]
    fn jordan_type_readout() {
        let f = f3();
        let g = MatFF::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let lin = vec![f.int(-1), f.one()];
        assert_eq!(primary_jordan_type(&f, &g, &lin, 3), vec![2, 1]);
        let id = MatFF::identity(&f, 3);
        assert_eq!(primary_jordan_type(&f, &id, &lin, 3), vec![1, 1, 1]);
    }
}
