//! Tame extensions `E/Q_p` as exact commutative `Q`-algebras.
//!
//! `E = K(y)` with `K = Q_p[x]/(h)` unramified of degree `f` (`h` the least
//! monic irreducible polynomial mod `p`, lifted to integer coefficients) and
//! `y^e = u·p`. Coordinates refer to the basis `y^i x^k`, `k` fastest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ff::FF;
use crate::qform::{congruence_transform, in_theta_j};
use crate::rat::{check_odd_prime, int, residue, valuation, MatQ, Rat, SymMatQ};

/// An element of a [`TameExt`] by its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem {
    pub coords: Vec<Rat>,
}

impl AlgElem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameExt {
    p: u64,
    e: u32,
    f: u32,
    unit: Rat,
    /// `h` low degree first, monic.
    h: Vec<Rat>,
    /// `table[i][j]` = coordinates of `b_i b_j`.
    table: Vec<Vec<Vec<Rat>>>,
}

impl TameExt {
    /// `E = Q_p(x, y)` with `x` a root of the unramified `h` and `y^e = u·p`.
    pub fn new(p: u64, e: u32, f: u32, unit: Option<Rat>) -> Result<TameExt> {
        check_odd_prime(p)?;
        if e == 0 || f == 0 {
            return Err(Error::DegreeTooSmall);
        }
        if e as u64 % p == 0 {
            return Err(Error::Precondition(format!("p = {p} divides e = {e}: extension is wild")));
        }
        let unit = unit.unwrap_or_else(Rat::one);
        if unit.is_zero() || valuation(&unit, p)? != 0 {
            return Err(Error::Precondition("the ramification unit must be a p-adic unit".into()));
        }
        let h: Vec<Rat> = FF::new(p, f)?.modulus().iter().map(|&c| int(c as i64)).collect();
        let (ne, nf) = (e as usize, f as usize);
        let n = ne * nf;
        // x^m reduced mod h for m < 2f − 1
        let mut xpow: Vec<Vec<Rat>> = Vec::new();
        let mut cur = vec![Rat::zero(); nf];
        cur[0] = Rat::one();
        for _ in 0..2 * nf - 1 {
            xpow.push(cur.clone());
            // multiply by x
            let top = cur[nf - 1].clone();
            let mut next = vec![Rat::zero(); nf];
            for k in (1..nf).rev() {
                next[k] = cur[k - 1].clone();
            }
            for (k, nk) in next.iter_mut().enumerate() {
                *nk -= &top * &h[k];
            }
            cur = next;
        }
        let up = &unit * int(p as i64);
        let mut table = vec![vec![vec![Rat::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let (i, k) = (a / nf, a % nf);
                let (j, l) = (b / nf, b % nf);
                let (ye, scale) = if i + j >= ne { (i + j - ne, up.clone()) } else { (i + j, Rat::one()) };
                for (m, c) in xpow[k + l].iter().enumerate() {
                    if !c.is_zero() {
                        table[a][b][ye * nf + m] += c * &scale;
                    }
                }
            }
        }
        let ext = TameExt { p, e, f, unit, h, table };
        ext.check_associative()?;
        Ok(ext)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.degree();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let (x, y, z) = (self.basis_elem(a), self.basis_elem(b), self.basis_elem(c));
                    if self.mul(&self.mul(&x, &y)?, &z)? != self.mul(&x, &self.mul(&y, &z)?)? {
                        return Err(Error::Integrality("multiplication table is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn degree(&self) -> usize {
        (self.e * self.f) as usize
    }
    pub fn unit(&self) -> &Rat {
        &self.unit
    }
    /// The unramified defining polynomial, low degree first.
    pub fn unramified_poly(&self) -> &[Rat] {
        &self.h
    }
    pub fn table(&self) -> &[Vec<Vec<Rat>>] {
        &self.table
    }

    fn check(&self, x: &AlgElem) -> Result<()> {
        if x.coords.len() != self.degree() {
            return Err(Error::Dimension(format!("element needs {} coordinates", self.degree())));
        }
        Ok(())
    }

    pub fn element(&self, coords: Vec<Rat>) -> Result<AlgElem> {
        let x = AlgElem { coords };
        self.check(&x)?;
        Ok(x)
    }
    pub fn basis_elem(&self, i: usize) -> AlgElem {
        let mut c = vec![Rat::zero(); self.degree()];
        c[i] = Rat::one();
        AlgElem { coords: c }
    }
    pub fn scalar(&self, r: Rat) -> AlgElem {
        let mut c = vec![Rat::zero(); self.degree()];
        c[0] = r;
        AlgElem { coords: c }
    }
    pub fn one(&self) -> AlgElem {
        self.scalar(Rat::one())
    }
    /// `y`, a uniformizer when `e > 1`.
    pub fn y(&self) -> AlgElem {
        if self.e > 1 {
            self.basis_elem(self.f as usize)
        } else {
            self.scalar(self.unit.clone() * int(self.p as i64))
        }
    }
    /// `x`, generating the maximal unramified subfield.
    pub fn x(&self) -> AlgElem {
        if self.f > 1 {
            self.basis_elem(1)
        } else {
            // the root of h = x − 0
            self.scalar(-self.h[0].clone())
        }
    }
    /// A prime element of `E`.
    pub fn uniformizer(&self) -> AlgElem {
        if self.e > 1 {
            self.y()
        } else {
            self.scalar(int(self.p as i64))
        }
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }
    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }
    pub fn scale(&self, a: &AlgElem, c: &Rat) -> AlgElem {
        AlgElem { coords: a.coords.iter().map(|x| x * c).collect() }
    }
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        self.check(a)?;
        self.check(b)?;
        let n = self.degree();
        let mut out = vec![Rat::zero(); n];
        for (i, ai) in a.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let s = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &s * t;
                    }
                }
            }
        }
        Ok(AlgElem { coords: out })
    }
    /// Matrix of `z ↦ xz` on coordinates.
    pub fn mult_matrix(&self, x: &AlgElem) -> Result<MatQ> {
        let n = self.degree();
        let cols: Vec<AlgElem> = (0..n).map(|j| self.mul(x, &self.basis_elem(j))).collect::<Result<_>>()?;
        Ok(MatQ::from_fn(n, |i, j| cols[j].coords[i].clone()))
    }
    pub fn trace(&self, x: &AlgElem) -> Result<Rat> {
        Ok(self.mult_matrix(x)?.trace())
    }
    pub fn norm(&self, x: &AlgElem) -> Result<Rat> {
        Ok(self.mult_matrix(x)?.det())
    }
    pub fn inverse(&self, x: &AlgElem) -> Result<AlgElem> {
        let m = self.mult_matrix(x)?;
        if m.det().is_zero() {
            return Err(Error::ZeroInverse);
        }
        let inv = m.inverse()?;
        Ok(AlgElem { coords: (0..self.degree()).map(|i| inv.get(i, 0).clone()).collect() })
    }
    pub fn pow(&self, x: &AlgElem, k: i64) -> Result<AlgElem> {
        let base = if k < 0 { self.inverse(x)? } else { x.clone() };
        let mut out = self.one();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }
    /// `v_E(x) = v_p(N(x)) / f`.
    pub fn valuation(&self, x: &AlgElem) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let v = valuation(&self.norm(x)?, self.p)?;
        if v % self.f as i64 != 0 {
            return Err(Error::Integrality("norm valuation not divisible by f".into()));
        }
        Ok(v / self.f as i64)
    }

    pub fn elem_invariants(&self, x: &AlgElem) -> Result<ElemInvariants> {
        let m = self.mult_matrix(x)?;
        Ok(ElemInvariants {
            trace: m.trace(),
            norm: m.det(),
            v_e: if x.is_zero() { None } else { Some(self.valuation(x)?) },
            mult_matrix: m,
        })
    }

    pub fn power_basis(&self, beta: &AlgElem) -> Result<Vec<AlgElem>> {
        let mut out = vec![self.one()];
        for _ in 1..self.degree() {
            out.push(self.mul(out.last().unwrap(), beta)?);
        }
        Ok(out)
    }

    /// Columns are the coordinates of the basis vectors.
    fn basis_matrix(&self, basis: &[AlgElem]) -> Result<MatQ> {
        if basis.len() != self.degree() {
            return Err(Error::Dimension(format!("basis needs {} elements", self.degree())));
        }
        for b in basis {
            self.check(b)?;
        }
        Ok(MatQ::from_fn(self.degree(), |i, j| basis[j].coords[i].clone()))
    }

    /// `ν^a_{ij} = tr_{E/Q_p}(a e_i e_j)`.
    pub fn trace_form(&self, a: &AlgElem, basis: &[AlgElem]) -> Result<SymMatQ> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.basis_matrix(basis)?.det().is_zero() {
            return Err(Error::DependentBasis);
        }
        let n = self.degree();
        let ab: Vec<AlgElem> = basis.iter().map(|b| self.mul(a, b)).collect::<Result<_>>()?;
        let mut m = MatQ::zero(n);
        for i in 0..n {
            for j in i..n {
                let t = self.trace(&self.mul(&ab[i], &basis[j])?)?;
                m.set(i, j, t.clone());
                m.set(j, i, t);
            }
        }
        SymMatQ::new(m).map_err(|_| Error::Integrality("trace form is degenerate".into()))
    }

    /// `ν·x̲ = ᵗx̲·ν` for every basis element `x`, with `x̲` the regular
    /// representation in `basis`.
    pub fn theta_split_check(&self, nu: &SymMatQ, basis: &[AlgElem]) -> Result<bool> {
        let c = self.basis_matrix(basis)?;
        let c_inv = c.inverse().map_err(|_| Error::DependentBasis)?;
        for b in basis {
            let xm = c_inv.mul(&self.mult_matrix(b)?).mul(&c);
            if nu.matrix().mul(&xm) != xm.transpose().mul(nu.matrix()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Characteristic polynomial of `x̲`, low degree first.
    pub fn char_poly(&self, x: &AlgElem) -> Result<Vec<Rat>> {
        let a = self.mult_matrix(x)?;
        let n = self.degree();
        // Faddeev–LeVerrier
        let mut c = vec![Rat::zero(); n + 1];
        c[n] = Rat::one();
        let mut m = MatQ::zero(n);
        for k in 1..=n {
            m = a.mul(&m).add(&MatQ::identity(n).scale(&c[n - k + 1]));
            c[n - k] = -a.mul(&m).trace() / int(k as i64);
        }
        Ok(c)
    }

    /// `g(x)` for a polynomial `g` over `Q`, low degree first.
    pub fn eval_poly(&self, g: &[Rat], x: &AlgElem) -> Result<AlgElem> {
        let mut acc = self.scalar(Rat::zero());
        for c in g.iter().rev() {
            acc = self.add(&self.mul(&acc, x)?, &self.scalar(c.clone()));
        }
        Ok(acc)
    }

    /// Whether the nonzero `c` is a square in `E`: `v_E(c)` even and the
    /// residue of `c/ϖ^{v_E(c)}` a square in the residue field.
    pub fn is_square(&self, c: &AlgElem) -> Result<bool> {
        let v = self.valuation(c)?;
        if v % 2 != 0 {
            return Ok(false);
        }
        let w = self.mul(c, &self.pow(&self.uniformizer(), -v)?)?;
        let nf = self.f as usize;
        let head = &w.coords[..nf];
        if head.iter().any(|x| !x.is_zero() && valuation(x, self.p).unwrap() < 0) {
            return Err(Error::Integrality("unit has a non-integral leading block".into()));
        }
        let k = FF::new(self.p, self.f)?;
        let coeffs: Vec<u32> = head
            .iter()
            .map(|x| if x.is_zero() { 0 } else { residue(x, self.p, 1).try_into().unwrap() })
            .collect();
        let r = k.from_coeffs(&coeffs)?;
        if k.is_zero(r) {
            return Err(Error::Integrality("unit has zero residue".into()));
        }
        Ok(k.is_square(r))
    }

    /// `y_{E/F} = 1 + #{c ∈ {u, p, up} : c is a square in E}`.
    pub fn y_ef(&self) -> Result<u32> {
        let u = crate::rat::least_nonresidue(self.p) as i64;
        let pi = self.p as i64;
        let mut y = 1;
        for c in [u, pi, u * pi] {
            if self.is_square(&self.scalar(int(c)))? {
                y += 1;
            }
        }
        Ok(y)
    }

    /// Trace to `K` of an element: `e` times its `y^0` block.
    fn trace_to_k(&self, z: &AlgElem) -> AlgElem {
        let nf = self.f as usize;
        let mut c = vec![Rat::zero(); self.degree()];
        for k in 0..nf {
            c[k] = &z.coords[k] * int(self.e as i64);
        }
        AlgElem { coords: c }
    }

    /// Basis of the subfield `Q_p(y^{e/e'}, K')` with `K' = Q_p` if `f' = 1`
    /// and `K' = K` if `f' = f`.
    pub fn subfield_basis(&self, e_sub: u32, f_sub: u32) -> Result<Vec<AlgElem>> {
        if e_sub == 0 || self.e % e_sub != 0 || !(f_sub == 1 || f_sub == self.f) {
            return Err(Error::Precondition(format!("no constructible subfield with e = {e_sub}, f = {f_sub}")));
        }
        let step = (self.e / e_sub) as usize;
        let nf = self.f as usize;
        Ok((0..e_sub as usize)
            .flat_map(|i| (0..f_sub as usize).map(move |k| (i * step) * nf + k))
            .map(|idx| self.basis_elem(idx))
            .collect())
    }

    /// Dimension over `Q_p` of the span of the given elements.
    pub fn span_dimension(&self, elems: &[AlgElem]) -> usize {
        rank(elems.iter().map(|e| e.coords.clone()).collect())
    }

    fn in_span(&self, x: &AlgElem, basis: &[AlgElem]) -> bool {
        let mut with = basis.to_vec();
        with.push(x.clone());
        self.span_dimension(&with) == self.span_dimension(basis)
    }
}

fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[r][c];
                for k in c..ncols {
                    let t = &factor * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Multiplication matrix, trace, norm and valuation of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemInvariants {
    pub mult_matrix: MatQ,
    pub trace: Rat,
    pub norm: Rat,
    pub v_e: Option<i64>,
}

/// Which equalities of a J-construction are exact and which hold modulo a
/// power of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JCertificate {
    /// `ν_α^a = J_e` exactly (relative trace to the unramified part).
    pub ramified_exact: bool,
    /// `ν^{ab}_{α⊗β} = ν_α^a ⊗ ν_β^b` exactly.
    pub tensor_exact: bool,
    /// `ν_β^b = J_f` exactly.
    pub unramified_exact: bool,
    /// `N` if `ν_β^b ≡ J_f` was verified modulo `p^N`.
    pub unramified_precision: Option<u32>,
    /// `min v_p(ν − J_n)`, `None` when `ν = J_n` exactly.
    pub achieved_valuation: Option<i64>,
    /// `ν = J_n` exactly.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPair {
    pub a: AlgElem,
    pub basis: Vec<AlgElem>,
    pub nu: SymMatQ,
    pub certificate: JCertificate,
}

/// An element `a` and a basis with `ν^a = J`: `a = y^{1−e}/e` on the
/// ramified part with basis `y^i`, `b = h'(x)^{-1}` on the unramified part
/// with the power basis of `x` moved onto `J_f` by a congruence transform,
/// and the tensor basis `y^i β'_k`.
pub fn construct_j_pair(ext: &TameExt, precision: u32) -> Result<JPair> {
    if precision < 1 {
        return Err(Error::Precision);
    }
    let (e, f) = (ext.e as usize, ext.f as usize);
    let p = ext.p;
    // ramified factor over K
    let a = ext.scale(&ext.pow(&ext.y(), 1 - e as i64)?, &Rat::new(BigInt::one(), BigInt::from(e)));
    let ys: Vec<AlgElem> = (0..e).map(|i| ext.basis_elem(i * f)).collect();
    let mut nu_alpha = MatQ::zero(e);
    let mut ram_in_q = true;
    for i in 0..e {
        for j in 0..e {
            let t = ext.trace_to_k(&ext.mul(&ext.mul(&a, &ys[i])?, &ys[j])?);
            ram_in_q &= t.coords[1..].iter().all(|c| c.is_zero());
            nu_alpha.set(i, j, t.coords[0].clone());
        }
    }
    let ramified_exact = ram_in_q && nu_alpha == MatQ::j(e);
    // unramified factor
    let hx = ext.unramified_poly();
    let dh: Vec<Rat> = (1..hx.len()).map(|k| &hx[k] * int(k as i64)).collect();
    let b = ext.inverse(&ext.eval_poly(&dh, &ext.x())?)?;
    let xs: Vec<AlgElem> = (0..f).map(|k| ext.basis_elem(k)).collect();
    let nu_beta = k_trace_form(ext, &b, &xs)?;
    let jf = SymMatQ::j(f);
    let t = congruence_transform(&nu_beta, &jf, p, precision)?;
    let betas: Vec<AlgElem> = (0..f)
        .map(|l| (0..f).fold(ext.scalar(Rat::zero()), |acc, k| ext.add(&acc, &ext.scale(&xs[k], t.get(k, l)))))
        .collect();
    let nu_beta2 = nu_beta.matrix().congruent(&t);
    let unramified_exact = nu_beta2 == *jf.matrix();
    let unramified_precision = nu_beta2.congruent_mod(jf.matrix(), p, precision as i64).then_some(precision);
    // tensor
    let basis: Vec<AlgElem> =
        ys.iter().flat_map(|yi| betas.iter().map(move |bk| (yi, bk))).map(|(yi, bk)| ext.mul(yi, bk)).collect::<Result<_>>()?;
    let ab = ext.mul(&a, &b)?;
    let nu = ext.trace_form(&ab, &basis)?;
    let tensor_exact = *nu.matrix() == nu_alpha.kron(&nu_beta2);
    let jn = MatQ::j(e * f);
    let diff = nu.matrix().sub(&jn).min_valuation(p);
    Ok(JPair {
        a: ab,
        basis,
        nu,
        certificate: JCertificate {
            ramified_exact,
            tensor_exact,
            unramified_exact,
            unramified_precision,
            achieved_valuation: diff,
            exact: diff.is_none(),
        },
    })
}

/// `tr_{K/Q_p}(b x_k x_l)` for elements of the unramified part.
fn k_trace_form(ext: &TameExt, b: &AlgElem, basis: &[AlgElem]) -> Result<SymMatQ> {
    let m = basis.len();
    let mut out = MatQ::zero(m);
    let e = int(ext.e as i64);
    for i in 0..m {
        for j in 0..m {
            let z = ext.mul(&ext.mul(b, &basis[i])?, &basis[j])?;
            out.set(i, j, ext.trace(&z)? / &e);
        }
    }
    SymMatQ::new(out)
}

/// Result of a genericity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    /// `v_{E'}(γ) = 1 − f_γ`.
    pub valuation_ok: bool,
    pub v_level: Option<i64>,
    /// Dimension over `Q_p` of `base[γ]` and of the level `E'`.
    pub dimension: usize,
    pub level_dimension: usize,
    pub generic: bool,
}

/// Whether `γ ∈ E'` is generic over `base ⊂ E'` with conductor `f_γ` on
/// `E'`: `v_{E'}(γ) = 1 − f_γ` and `base[γ] = E'`. Levels are
/// `(e', f')` pairs as in [`TameExt::subfield_basis`].
pub fn genericity_test(
    ext: &TameExt,
    gamma: &AlgElem,
    level: (u32, u32),
    base: (u32, u32),
    conductor: u32,
) -> Result<Genericity> {
    if gamma.is_zero() {
        return Err(Error::ZeroInput);
    }
    let level_basis = ext.subfield_basis(level.0, level.1)?;
    let base_basis = ext.subfield_basis(base.0, base.1)?;
    if !ext.in_span(gamma, &level_basis) {
        return Err(Error::Precondition("γ does not lie in the given level".into()));
    }
    let v = ext.valuation(gamma)?;
    let e_rel = (ext.e / level.0) as i64;
    let v_level = (v % e_rel == 0).then_some(v / e_rel);
    let valuation_ok = v_level == Some(1 - conductor as i64);
    let mut span = Vec::new();
    let mut g = ext.one();
    for _ in 0..ext.degree() {
        for b in &base_basis {
            span.push(ext.mul(b, &g)?);
        }
        g = ext.mul(&g, gamma)?;
    }
    let dimension = ext.span_dimension(&span);
    let level_dimension = level_basis.len();
    Ok(Genericity { valuation_ok, v_level, dimension, level_dimension, generic: valuation_ok && dimension == level_dimension })
}

/// One level `E_i` of a Howe tower with the numeric data of `φ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub e: u32,
    pub f: u32,
    /// `f_i = f(φ_i ∘ N_{E/E_i})`, measured on `E`; `None` for a trivial
    /// `φ_d`.
    pub conductor: Option<u32>,
    /// `γ_{φ_i}`, required for `i < d`.
    pub gamma: Option<AlgElem>,
}

/// `F = E_d ⊊ … ⊊ E_0 ⊂ E`, listed from `E_0` down to `E_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSkeleton {
    pub levels: Vec<TowerLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonReport {
    pub strict_inclusions: bool,
    pub conductors_increasing: bool,
    /// Per level `i < d`: `φ_i` generic over `E_{i+1}`.
    pub generic: Vec<bool>,
    pub top_unramified: bool,
    /// `r_i = (f_i − 1)/e` per level with a conductor.
    pub depths: Vec<Option<Rat>>,
    pub valid: bool,
}

pub fn depth(f_i: u32, e: u32) -> Result<Rat> {
    if e == 0 || f_i == 0 {
        return Err(Error::Precondition("conductor and ramification must be positive".into()));
    }
    Ok(Rat::new(BigInt::from(f_i - 1), BigInt::from(e)))
}

pub fn howe_skeleton_validate(ext: &TameExt, tower: &TowerSkeleton) -> Result<SkeletonReport> {
    let lv = &tower.levels;
    if lv.is_empty() {
        return Err(Error::Precondition("tower needs at least the base level".into()));
    }
    let d = lv.len() - 1;
    for l in lv {
        ext.subfield_basis(l.e, l.f)?;
    }
    let contains = |big: &TowerLevel, small: &TowerLevel| big.e % small.e == 0 && big.f % small.f == 0;
    let deg = |l: &TowerLevel| l.e * l.f;
    let strict_inclusions = (lv[d].e, lv[d].f) == (1, 1)
        && lv.windows(2).all(|w| contains(&w[0], &w[1]) && deg(&w[0]) > deg(&w[1]));
    let top_unramified = lv[0].e == ext.e;
    let conds: Vec<Option<u32>> = lv.iter().map(|l| l.conductor).collect();
    let mut conductors_increasing = conds[..d].iter().all(|c| c.is_some_and(|c| c > 1))
        && conds[..d].windows(2).all(|w| w[0] < w[1]);
    if let (Some(fd), true) = (conds[d], d > 0) {
        conductors_increasing &= conds[d - 1].is_some_and(|prev| fd > prev);
    }
    let mut generic = Vec::new();
    for i in 0..d {
        let l = &lv[i];
        let ok = match (&l.gamma, l.conductor) {
            (Some(g), Some(fi)) => {
                let e_rel = ext.e / l.e;
                if (fi - 1) % e_rel != 0 {
                    false
                } else {
                    let own = (fi - 1) / e_rel + 1;
                    genericity_test(ext, g, (l.e, l.f), (lv[i + 1].e, lv[i + 1].f), own)?.generic
                }
            }
            _ => false,
        };
        generic.push(ok);
    }
    let depths = conds.iter().map(|c| c.map(|c| depth(c, ext.e)).transpose()).collect::<Result<_>>()?;
    let valid = strict_inclusions && conductors_increasing && top_unramified && generic.iter().all(|&g| g);
    Ok(SkeletonReport { strict_inclusions, conductors_increasing, generic, top_unramified, depths, valid })
}

/// Whether `ν^a` in the given basis lies in the orbit of `J`.
pub fn trace_form_in_theta_j(ext: &TameExt, a: &AlgElem, basis: &[AlgElem]) -> Result<bool> {
    in_theta_j(&ext.trace_form(a, basis)?, ext.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn cube_root_of_five() {
        let e = TameExt::new(5, 3, 1, None).unwrap();
        let beta = e.y();
        let inv = e.elem_invariants(&beta).unwrap();
        assert_eq!((inv.trace, inv.norm, inv.v_e), (int(0), int(5), Some(1)));
        let one = e.elem_invariants(&e.one()).unwrap();
        assert_eq!((one.trace, one.norm, one.v_e), (int(3), int(1), Some(0)));
        for k in -6i64..=6 {
            let t = e.trace(&e.pow(&beta, k).unwrap()).unwrap();
            assert_eq!(t.is_zero(), k % 3 != 0, "k = {k}");
        }
    }

    #[test]
    fn trace_form_example() {
        let e = TameExt::new(5, 3, 1, None).unwrap();
        let basis = e.power_basis(&e.y()).unwrap();
        let nu = e.trace_form(&e.one(), &basis).unwrap();
        assert_eq!(nu.matrix(), &MatQ::from_ints(&[vec![3, 0, 0], vec![0, 0, 15], vec![0, 15, 0]]).unwrap());
        assert_eq!(nu.det(), int(-675));
        assert!(e.theta_split_check(&nu, &basis).unwrap());
        let bad = SymMatQ::identity(3);
        assert!(!e.theta_split_check(&bad, &basis).unwrap());
        assert_eq!(e.trace_form(&e.scalar(int(0)), &basis), Err(Error::ZeroInput));
    }

    #[test]
    fn construction_shapes() {
        assert_eq!(TameExt::new(5, 5, 1, None), Err(Error::Precondition("p = 5 divides e = 5: extension is wild".into())));
        assert_eq!(TameExt::new(2, 1, 1, None), Err(Error::EvenPrime));
        assert_eq!(TameExt::new(5, 3, 2, None).unwrap().degree(), 6);
        assert_eq!(TameExt::new(5, 1, 3, None).unwrap().unramified_poly().len(), 4);
    }

    #[test]
    fn ramified_j_is_exact() {
        let e = TameExt::new(5, 3, 1, None).unwrap();
        let pair = construct_j_pair(&e, 8).unwrap();
        let expect_a = e.scale(&e.pow(&e.y(), -2).unwrap(), &rat(1, 3));
        assert_eq!(pair.a, expect_a);
        assert_eq!(pair.nu, SymMatQ::j(3));
        assert!(pair.certificate.exact && pair.certificate.ramified_exact);
    }

    #[test]
    fn y_values() {
        assert_eq!(TameExt::new(5, 1, 3, None).unwrap().y_ef().unwrap(), 1);
        assert_eq!(TameExt::new(5, 2, 1, None).unwrap().y_ef().unwrap(), 2);
        assert_eq!(TameExt::new(3, 1, 2, None).unwrap().y_ef().unwrap(), 2);
    }

    #[test]
    fn genericity_examples() {
        let e = TameExt::new(5, 3, 1, None).unwrap();
        let g = e.pow(&e.y(), -2).unwrap();
        assert!(genericity_test(&e, &g, (3, 1), (1, 1), 3).unwrap().generic);
        let fifth = e.scalar(rat(1, 5));
        let r = genericity_test(&e, &fifth, (3, 1), (1, 1), 4).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(!r.generic);
        assert_eq!(e.pow(&e.y(), -3).unwrap(), fifth);
        assert_eq!(depth(4, 3).unwrap(), int(1));
    }

    #[test]
    fn toy_towers() {
        let e = TameExt::new(5, 3, 1, None).unwrap();
        let g = e.pow(&e.y(), -2).unwrap();
        let ok = TowerSkeleton {
            levels: vec![
                TowerLevel { e: 3, f: 1, conductor: Some(3), gamma: Some(g) },
                TowerLevel { e: 1, f: 1, conductor: None, gamma: None },
            ],
        };
        assert!(howe_skeleton_validate(&e, &ok).unwrap().valid);
        let e4 = TameExt::new(5, 4, 1, None).unwrap();
        let bad = TowerSkeleton {
            levels: vec![
                TowerLevel { e: 4, f: 1, conductor: Some(3), gamma: Some(e4.pow(&e4.y(), -2).unwrap()) },
                TowerLevel { e: 2, f: 1, conductor: Some(3), gamma: Some(e4.pow(&e4.y(), -2).unwrap()) },
                TowerLevel { e: 1, f: 1, conductor: None, gamma: None },
            ],
        };
        let r = howe_skeleton_validate(&e4, &bad).unwrap();
        assert!(!r.conductors_increasing);
        assert!(r.strict_inclusions);
        assert!(!r.valid);
    }
}
