//! Deligne–Lusztig characters `R_{T,λ}` of `GL_n(F_q)` and their averages
//! over orthogonal subgroups.
//!
//! Characters are evaluated by the character formula
//! `R_{T,λ}(su) = |Z_s|^{-1} Σ_{x ∈ G, x^{-1}sx ∈ T} λ(x^{-1}sx) Q^{Z_s}_{xTx^{-1}}(u)`,
//! either literally over `G` or grouped by the element `x^{-1}sx ∈ T`, which
//! only needs the conjugacy class of `su`. The orthogonal average is compared
//! with the double-coset sum over `Ξ_{T,λ,χ}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cyc::CycInt;
use crate::error::{Error, Result};
use crate::ff::{FFElem, TorusChar, FF};
use crate::green::{green_function, unipotent_centralizer_order};
use crate::mat::{
    block_diag, companion, factor_over, field_elements, gl_order, jordan_decomposition,
    monic_irreducibles, primary_jordan_type, MatFF, RegularEmbedding, SymFormFF, MAX_N,
};
use crate::orth::{orth_group, spinor_sign, GroupCatalog, GroupKind, OrthChar};
use crate::partition::{is_partition_of, partitions};

/// A torus element with its coordinates in `Π F_{q^{μ_i}}^×`.
#[derive(Clone, Debug)]
pub struct TorusElem {
    pub mat: MatFF,
    pub parts: Vec<FFElem>,
    /// Discrete log of each part.
    pub logs: Vec<u64>,
    /// Per block: minimal polynomial over `F_q` (element codes) and
    /// `μ_i / deg`.
    pub signature: Vec<(Vec<u32>, u32)>,
}

/// A maximal torus `T_μ ≅ Π F_{q^{μ_i}}^×` of `GL_n(F_q)`, embedded
/// block-diagonally through regular representations.
#[derive(Clone, Debug)]
pub struct TorusSpec {
    base: FF,
    mu: Vec<u32>,
    blocks: Vec<RegularEmbedding>,
    elements: Vec<TorusElem>,
    index: BTreeMap<MatFF, usize>,
    idempotents: Vec<MatFF>,
    block_gens: Vec<MatFF>,
}

impl TorusSpec {
    /// Torus of type `μ` with power bases of primitive roots.
    pub fn new(base: &FF, mu: &[u32]) -> Result<TorusSpec> {
        let n: u32 = mu.iter().sum();
        if !is_partition_of(mu, n) || n as usize > MAX_N {
            return Err(Error::Dimension(format!("torus type must be a partition of n ≤ {MAX_N}")));
        }
        let blocks = mu
            .iter()
            .map(|&m| {
                let ext = FF::new(base.p(), base.degree() * m)?;
                RegularEmbedding::power_basis(&ext, base)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_blocks(base, blocks)
    }

    pub fn elliptic(base: &FF, n: u32) -> Result<TorusSpec> {
        Self::new(base, &[n])
    }

    /// Torus from explicit regular embeddings, largest block first.
    pub fn from_blocks(base: &FF, blocks: Vec<RegularEmbedding>) -> Result<TorusSpec> {
        let mu: Vec<u32> = blocks.iter().map(|b| b.degree() as u32).collect();
        let n: u32 = mu.iter().sum();
        if !is_partition_of(&mu, n) || n as usize > MAX_N {
            return Err(Error::Dimension("blocks must have non-increasing degrees, total ≤ 4".into()));
        }
        if blocks.iter().any(|b| b.base != *base) {
            return Err(Error::ParentMismatch);
        }
        let logs: Vec<Vec<u32>> = blocks.iter().map(|b| b.ext.log_table()).collect::<Result<_>>()?;
        let unit_lists: Vec<Vec<FFElem>> = blocks.iter().map(|b| b.ext.units().collect()).collect();
        let mut elements = Vec::new();
        let mut idx = vec![0usize; blocks.len()];
        let mut sig_cache: Vec<BTreeMap<u32, (Vec<u32>, u32)>> = vec![BTreeMap::new(); blocks.len()];
        loop {
            let parts: Vec<FFElem> = idx.iter().zip(&unit_lists).map(|(&i, u)| u[i]).collect();
            let mats: Vec<MatFF> = parts.iter().zip(&blocks).map(|(&x, b)| b.matrix(x)).collect();
            let signature = parts
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    sig_cache[i]
                        .entry(x.code())
                        .or_insert_with(|| block_signature(base, &blocks[i], x))
                        .clone()
                })
                .collect();
            elements.push(TorusElem {
                mat: block_diag(base, &mats),
                logs: parts.iter().zip(&logs).map(|(&x, t)| t[x.code() as usize] as u64).collect(),
                parts,
                signature,
            });
            // odometer over the unit groups, last block fastest
            let Some(k) = (0..blocks.len()).rev().find(|&k| idx[k] + 1 < unit_lists[k].len()) else {
                break;
            };
            idx[k] += 1;
            idx[k + 1..].iter_mut().for_each(|i| *i = 0);
        }
        let index = elements.iter().enumerate().map(|(i, e)| (e.mat, i)).collect();
        let zero_or = |i: usize, x: Option<FFElem>| -> MatFF {
            let mats: Vec<MatFF> = blocks
                .iter()
                .enumerate()
                .map(|(j, b)| match x {
                    Some(v) if j == i => b.matrix(v),
                    None if j == i => MatFF::identity(base, b.degree()),
                    _ => MatFF::zero(b.degree()),
                })
                .collect();
            block_diag(base, &mats)
        };
        let idempotents = (0..blocks.len()).map(|i| zero_or(i, None)).collect();
        let block_gens =
            (0..blocks.len()).map(|i| zero_or(i, Some(blocks[i].ext.primitive_root()))).collect();
        Ok(TorusSpec { base: base.clone(), mu, blocks, elements, index, idempotents, block_gens })
    }

    pub fn base(&self) -> &FF {
        &self.base
    }
    pub fn mu(&self) -> &[u32] {
        &self.mu
    }
    pub fn n(&self) -> usize {
        self.mu.iter().sum::<u32>() as usize
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn is_elliptic(&self) -> bool {
        self.mu.len() == 1
    }
    pub fn blocks(&self) -> &[RegularEmbedding] {
        &self.blocks
    }
    pub fn elements(&self) -> &[TorusElem] {
        &self.elements
    }
    pub fn find(&self, m: &MatFF) -> Option<usize> {
        self.index.get(m).copied()
    }
    /// Coordinates in `Π F_{q^{μ_i}}^×` of a torus matrix.
    pub fn identify(&self, m: &MatFF) -> Option<&[FFElem]> {
        self.find(m).map(|i| self.elements[i].parts.as_slice())
    }
    /// `σ(T) = (−1)^{F_q-rank}`, the rank being the number of blocks.
    pub fn sigma(&self) -> i32 {
        if self.mu.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
    /// Group generators: a primitive root in one block, identity elsewhere.
    pub fn generators(&self) -> Vec<MatFF> {
        let f = &self.base;
        (0..self.blocks.len())
            .map(|i| {
                let others = self.idempotents.iter().enumerate().filter(|&(j, _)| j != i);
                others.fold(self.block_gens[i], |acc, (_, e)| acc.add(f, e))
            })
            .collect()
    }
    /// `−1 ∈ T`.
    pub fn minus_one(&self) -> usize {
        self.find(&MatFF::scalar(&self.base, self.n(), self.base.int(-1))).expect("−1 lies in every maximal torus")
    }

    /// Membership in the algebra `F_q[T] = Π F_{q^{μ_i}}`, which is its own
    /// commutant.
    fn in_algebra(&self, m: &MatFF) -> bool {
        let f = &self.base;
        self.idempotents.iter().chain(&self.block_gens).all(|g| g.mul(f, m) == m.mul(f, g))
    }

    /// How `X ↦ ν^{-1}·ᵗX·ν` acts on `F_q[T]`, or `None` if `θ_ν` does not
    /// stabilize `T`.
    pub fn split_structure(&self, nu: &MatFF, nu_inv: &MatFF) -> Option<SplitStructure> {
        let f = &self.base;
        let tau = |x: &MatFF| nu_inv.mul(f, &x.transpose()).mul(f, nu);
        let mut dim_fixed = 0u32;
        let mut fixed_blocks = Vec::new();
        let mut moved_blocks = 0u32;
        for i in 0..self.blocks.len() {
            let te = tau(&self.idempotents[i]);
            let ty = tau(&self.block_gens[i]);
            if !self.in_algebra(&te) || !self.in_algebra(&ty) {
                return None;
            }
            let j = self.idempotents.iter().position(|e| *e == te)?;
            if j == i && ty == self.block_gens[i] {
                dim_fixed += self.mu[i];
                fixed_blocks.push(i);
            } else {
                moved_blocks += 1;
            }
        }
        Some(SplitStructure { dim_fixed, fixed_blocks, moved_blocks })
    }
}

fn block_signature(base: &FF, reg: &RegularEmbedding, x: FFElem) -> (Vec<u32>, u32) {
    let poly = reg.ext.min_poly_elems(x, base.degree());
    let codes: Vec<u32> = poly
        .iter()
        .map(|&c| reg.embedding().restrict(base, c).expect("minimal polynomial over base").code())
        .collect();
    let deg = (codes.len() - 1) as u32;
    (codes, reg.degree() as u32 / deg)
}

/// Decomposition of `F_q[T] ⊗ F̄` under an involution `τ` stabilizing it:
/// the blocks on which `τ` is the identity span `eV`; every other block is a
/// single factor of `((1−e)F_q[T])^×`. The identity component of the
/// `θ`-fixed subtorus has centralizer `GL(eV) × ((1−e)F_q[T])^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitStructure {
    pub dim_fixed: u32,
    pub fixed_blocks: Vec<usize>,
    pub moved_blocks: u32,
}

impl SplitStructure {
    /// `σ(Z_G((T ∩ G_*^θ)°))`.
    pub fn sigma_centralizer(&self) -> i32 {
        sign(self.dim_fixed + self.moved_blocks)
    }
    /// `ε_T(t)` for `t ∈ T ∩ G_*^θ`: `σ(Z_G(A))·σ(Z_{Z_t}(A))` with `A` the
    /// fixed subtorus. Only the centralizer of `t` on `eV` differs between the
    /// two factors.
    pub fn epsilon(&self, t: &TorusElem) -> i32 {
        let rank_on_fixed: u32 = self.fixed_blocks.iter().map(|&i| t.signature[i].1).sum();
        sign(self.dim_fixed + rank_on_fixed)
    }
}

fn sign(e: u32) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A character of `T = Π F_{q^{μ_i}}^×`, one [`TorusChar`] per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCharacter {
    factors: Vec<TorusChar>,
    order: u64,
}

impl TorusCharacter {
    pub fn new(factors: Vec<TorusChar>) -> Result<TorusCharacter> {
        if factors.is_empty() {
            return Err(Error::Precondition("character needs at least one factor".into()));
        }
        let order = factors.iter().fold(1u64, |acc, c| acc.lcm(&c.modulus));
        Ok(TorusCharacter { factors, order })
    }
    pub fn elliptic(c: TorusChar) -> TorusCharacter {
        TorusCharacter { order: c.modulus, factors: vec![c] }
    }
    pub fn factors(&self) -> &[TorusChar] {
        &self.factors
    }
    /// Order `N` of the cyclotomic ring the values live in.
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn check(&self, t: &TorusSpec) -> Result<()> {
        let ok = self.factors.len() == t.mu.len()
            && self.factors.iter().zip(&t.mu).all(|(c, &m)| c.q == t.base.size() && c.n == m);
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition("character does not match the torus type".into()))
        }
    }
    /// `j` with `λ(t) = ζ_N^j`.
    pub fn exponent(&self, t: &TorusElem) -> u64 {
        self.factors.iter().zip(&t.logs).fold(0u64, |acc, (c, &e)| {
            let scale = self.order / c.modulus;
            ((acc as u128 + c.exponent_at(e) as u128 * scale as u128) % self.order as u128) as u64
        })
    }
    pub fn value(&self, t: &TorusElem) -> CycInt {
        CycInt::root_of_unity(self.order, self.exponent(t))
    }
    pub fn at_minus_one(&self) -> i32 {
        self.factors.iter().map(|c| c.at_minus_one()).product()
    }
    /// Regular: each factor has a Frobenius orbit of full size and no two
    /// blocks of equal degree carry Frobenius-conjugate factors.
    pub fn is_regular(&self) -> bool {
        if !self.factors.iter().all(|c| c.is_regular()) {
            return false;
        }
        for (i, a) in self.factors.iter().enumerate() {
            for b in &self.factors[i + 1..] {
                if a.n == b.n && a.frobenius_orbit().contains(&b.index) {
                    return false;
                }
            }
        }
        true
    }
    /// `λ ∘ Frob`.
    pub fn frobenius_twist(&self) -> TorusCharacter {
        TorusCharacter { factors: self.factors.iter().map(|c| c.frobenius_twist()).collect(), order: self.order }
    }
}

/// Conjugacy class data of `g ∈ GL_n(F_q)`: each irreducible factor of the
/// characteristic polynomial (element codes) with the Jordan type of the
/// unipotent part on its primary component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub factors: Vec<(Vec<u32>, Vec<u32>)>,
}

impl ClassKey {
    /// `|Z_G(g)| = Π a_{ρ_j}(q^{d_j})`.
    pub fn centralizer_order(&self, q: u64) -> u64 {
        self.factors
            .iter()
            .map(|(poly, rho)| {
                let qd = BigInt::from(q).pow((poly.len() - 1) as u32);
                unipotent_centralizer_order(rho, &qd).to_u64().expect("centralizer order fits u64")
            })
            .product()
    }
    /// `|Z_s|` for the semisimple part.
    pub fn semisimple_centralizer_order(&self, q: u64) -> u64 {
        self.factors
            .iter()
            .map(|(poly, rho)| gl_order(q.pow((poly.len() - 1) as u32), rho.iter().sum()))
            .product()
    }
}

pub fn class_key(f: &FF, g: &MatFF) -> Result<ClassKey> {
    if f.is_zero(g.det(f)) {
        return Err(Error::Singular);
    }
    let sub = field_elements(f);
    let mut factors: Vec<(Vec<u32>, Vec<u32>)> = factor_over(f, &sub, &g.char_poly(f))
        .into_iter()
        .map(|(p, k)| {
            let rho = primary_jordan_type(f, g, &p, k);
            (p.iter().map(|c| c.code()).collect(), rho)
        })
        .collect();
    factors.sort();
    Ok(ClassKey { factors })
}

/// `Π_j Q^{GL_{k_j}(q^{d_j})}_{torus_j}(ρ_j)` when `t` has the semisimple
/// type of `key`, where `torus_j` collects the blocks of `t` whose minimal
/// polynomial is the `j`-th factor.
fn green_product(t: &TorusElem, key: &ClassKey, q: u64) -> Result<Option<i64>> {
    let mut value = 1i64;
    for (poly, rho) in &key.factors {
        let mut torus: Vec<u32> =
            t.signature.iter().filter(|(p, _)| p == poly).map(|&(_, c)| c).collect();
        let k: u32 = rho.iter().sum();
        if torus.iter().sum::<u32>() != k {
            return Ok(None);
        }
        torus.sort_unstable_by(|a, b| b.cmp(a));
        let big_q = q.pow((poly.len() - 1) as u32);
        value *= green_function(k, big_q, &torus, rho)?;
    }
    Ok(Some(value))
}

/// `R_{T,λ}` on the class `key`, summing over `t ∈ T` conjugate to the
/// semisimple part.
pub fn dl_value_on_class(t: &TorusSpec, lambda: &TorusCharacter, key: &ClassKey) -> Result<CycInt> {
    lambda.check(t)?;
    let q = t.base.size();
    let mut acc = CycInt::zero(lambda.order());
    for e in &t.elements {
        if let Some(g) = green_product(e, key, q)? {
            acc.add_term(lambda.exponent(e), g);
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlMode {
    /// Literal sum over `x ∈ G`.
    Brute,
    /// Grouped by `x^{-1}sx ∈ T`.
    ClassForm,
}

/// Largest `|GL_n(F_q)|` enumerated by the brute mode.
pub const GL_CAP: u64 = 20_000_000;

pub fn dl_char_value(f: &FF, t: &TorusSpec, lambda: &TorusCharacter, g: &MatFF, mode: DlMode) -> Result<CycInt> {
    match mode {
        DlMode::ClassForm => dl_value_on_class(t, lambda, &class_key(f, g)?),
        DlMode::Brute => {
            let group = crate::mat::enumerate_gl(f, g.size(), GL_CAP)?;
            dl_char_value_brute(f, t, lambda, g, &group)
        }
    }
}

/// The character formula summed literally over the supplied listing of `G`.
pub fn dl_char_value_brute(
    f: &FF,
    t: &TorusSpec,
    lambda: &TorusCharacter,
    g: &MatFF,
    group: &[MatFF],
) -> Result<CycInt> {
    lambda.check(t)?;
    let key = class_key(f, g)?;
    let (s, _) = jordan_decomposition(f, g)?;
    let q = f.size();
    let mut acc = CycInt::zero(lambda.order());
    for x in group {
        let xi = x.inverse(f)?;
        let y = xi.mul(f, &s).mul(f, x);
        if let Some(idx) = t.find(&y) {
            let e = &t.elements[idx];
            let green = green_product(e, &key, q)?
                .ok_or_else(|| Error::Integrality("conjugate of s in T has another type".into()))?;
            acc.add_term(lambda.exponent(e), green);
        }
    }
    acc.div_exact(key.semisimple_centralizer_order(q) as i64)
}

/// A conjugacy class of `GL_n(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlClass {
    pub key: ClassKey,
    pub rep: MatFF,
    pub size: u64,
}

/// All conjugacy classes of `GL_n(F_q)`, built from rational canonical data
/// (no enumeration of the group).
pub fn gl_classes(f: &FF, n: usize) -> Result<Vec<GlClass>> {
    if n == 0 || n > MAX_N {
        return Err(Error::Dimension(format!("n must lie in 1..={MAX_N}")));
    }
    let mut polys: Vec<Vec<FFElem>> = Vec::new();
    for d in 1..=n {
        polys.extend(monic_irreducibles(f, d).into_iter().filter(|p| !f.is_zero(p[0])));
    }
    let q = f.size();
    let g_order = gl_order(q, n as u32);
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, Vec<u32>)> = Vec::new();
    fn rec(
        f: &FF,
        polys: &[Vec<FFElem>],
        i: usize,
        remaining: usize,
        chosen: &mut Vec<(usize, Vec<u32>)>,
        out: &mut Vec<(Vec<(usize, Vec<u32>)>,)>,
    ) {
        if remaining == 0 {
            out.push((chosen.clone(),));
            return;
        }
        if i == polys.len() {
            return;
        }
        let d = polys[i].len() - 1;
        rec(f, polys, i + 1, remaining, chosen, out);
        for k in 1..=remaining / d {
            for rho in partitions(k as u32) {
                chosen.push((i, rho));
                rec(f, polys, i + 1, remaining - k * d, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(f, &polys, 0, n, &mut chosen, &mut raw);
    for (data,) in raw {
        let mut blocks = Vec::new();
        for (i, rho) in &data {
            let c = companion(f, &polys[*i]);
            let d = c.size();
            for &r in rho {
                let size = d * r as usize;
                let mut b = MatFF::zero(size);
                for blk in 0..r as usize {
                    for a in 0..d {
                        for bb in 0..d {
                            b.set(blk * d + a, blk * d + bb, c.get(f, a, bb));
                        }
                        if blk + 1 < r as usize {
                            b.set(blk * d + a, (blk + 1) * d + a, f.one());
                        }
                    }
                }
                blocks.push(b);
            }
        }
        let rep = block_diag(f, &blocks);
        let mut factors: Vec<(Vec<u32>, Vec<u32>)> =
            data.iter().map(|(i, rho)| (polys[*i].iter().map(|c| c.code()).collect(), rho.clone())).collect();
        factors.sort();
        let key = ClassKey { factors };
        if class_key(f, &rep)? != key {
            return Err(Error::Integrality("class representative has the wrong invariants".into()));
        }
        let size = g_order / key.centralizer_order(q);
        out.push(GlClass { key, rep, size });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    if out.iter().map(|c| c.size).sum::<u64>() != g_order {
        return Err(Error::Integrality("class sizes do not sum to |G|".into()));
    }
    Ok(out)
}

/// `⟨R_{T,λ}, R_{T,λ}⟩` and `⟨R_{T,λ}, 1⟩` over `GL_n(F_q)`.
pub fn inner_products(f: &FF, t: &TorusSpec, lambda: &TorusCharacter) -> Result<(i64, i64)> {
    let classes = gl_classes(f, t.n())?;
    let order = gl_order(f.size(), t.n() as u32) as i64;
    let mut norm = CycInt::zero(lambda.order());
    let mut triv = CycInt::zero(lambda.order());
    for c in &classes {
        let r = dl_value_on_class(t, lambda, &c.key)?;
        norm.add_assign(&r.mul(&r.conj())?.scale(c.size as i64))?;
        triv.add_assign(&r.scale(c.size as i64))?;
    }
    let as_int = |x: CycInt| -> Result<i64> {
        x.div_exact(order)?.as_integer().ok_or_else(|| Error::Integrality("inner product is not rational".into()))
    };
    Ok((as_int(norm)?, as_int(triv)?))
}

/// Involution `θ_ν`, the fixed subgroup variant `G_*^θ` and an order-≤2
/// character `χ` of it.
#[derive(Clone, Debug)]
pub struct InvolutionData {
    pub nu: SymFormFF,
    pub fixed: GroupKind,
    pub chi: OrthChar,
}

impl InvolutionData {
    pub fn new(nu: SymFormFF, fixed: GroupKind, chi: OrthChar) -> Result<InvolutionData> {
        if !matches!(fixed, GroupKind::O | GroupKind::SO) {
            return Err(Error::Precondition("fixed subgroup must be O or SO".into()));
        }
        Ok(InvolutionData { nu, fixed, chi })
    }
    pub fn chi_at_minus_one(&self, f: &FF) -> Result<i32> {
        let m1 = MatFF::scalar(f, self.nu.size(), f.int(-1));
        if self.fixed == GroupKind::SO && m1.det(f) != f.one() {
            return Err(Error::Precondition("−1 is not in SO for odd n".into()));
        }
        self.chi.value(f, &self.nu, &m1)
    }
    /// Whether `G_θ = Z·G_*^θ`, so that `χ` extends to the similitude group
    /// (any extension to `Z` matching `χ` on `Z ∩ G_*^θ ⊂ {±1}` works).
    pub fn extends_to_similitudes(&self, f: &FF) -> Result<bool> {
        let sim = orth_group(f, &self.nu, GroupKind::GTheta)?;
        let fixed = orth_group(f, &self.nu, self.fixed)?;
        Ok(sim.elements.iter().all(|g| f.units().any(|z| fixed.contains(&g.scale(f, z)))))
    }
}

/// `G_*^θ` grouped by `GL`-class, determinant and spinor sign: all the
/// data the average `|G_*^θ|^{-1} Σ R_{T,λ}(h)χ(h)` needs.
#[derive(Clone, Debug)]
pub struct FixedGroupData {
    pub kind: GroupKind,
    pub order: u64,
    pub classes: Vec<(ClassKey, BTreeMap<(i32, i32), u64>)>,
}

impl FixedGroupData {
    pub fn new(f: &FF, nu: &SymFormFF, kind: GroupKind) -> Result<FixedGroupData> {
        let cat = orth_group(f, nu, kind)?;
        Self::from_elements(f, nu, kind, &cat.elements)
    }

    pub fn from_elements(f: &FF, nu: &SymFormFF, kind: GroupKind, elements: &[MatFF]) -> Result<FixedGroupData> {
        let mut map: BTreeMap<ClassKey, BTreeMap<(i32, i32), u64>> = BTreeMap::new();
        for h in elements {
            let key = class_key(f, h)?;
            let d = if h.det(f) == f.one() { 1 } else { -1 };
            let s = spinor_sign(f, nu, h)?;
            *map.entry(key).or_default().entry((d, s)).or_insert(0) += 1;
        }
        Ok(FixedGroupData { kind, order: elements.len() as u64, classes: map.into_iter().collect() })
    }

    /// Merges data computed on disjoint pieces of the group.
    pub fn merge(mut self, other: FixedGroupData) -> FixedGroupData {
        let mut map: BTreeMap<ClassKey, BTreeMap<(i32, i32), u64>> = self.classes.into_iter().collect();
        for (k, v) in other.classes {
            let e = map.entry(k).or_default();
            for (s, c) in v {
                *e.entry(s).or_insert(0) += c;
            }
        }
        self.classes = map.into_iter().collect();
        self.order += other.order;
        self
    }

    /// `Σ_h R_{T,λ}(h) χ(h)` before division.
    pub fn raw_sum(&self, t: &TorusSpec, lambda: &TorusCharacter, chi: OrthChar) -> Result<CycInt> {
        let mut acc = CycInt::zero(lambda.order());
        for (key, counts) in &self.classes {
            let weight: i64 = counts
                .iter()
                .map(|(&(d, s), &c)| {
                    let v = if chi.det_exp == 1 { d } else { 1 } * if chi.spin_exp == 1 { s } else { 1 };
                    v as i64 * c as i64
                })
                .sum();
            if weight != 0 {
                acc.add_assign(&dl_value_on_class(t, lambda, key)?.scale(weight))?;
            }
        }
        Ok(acc)
    }

    /// `|G_*^θ|^{-1} Σ R_{T,λ}(h) χ(h)`, which must be a rational integer.
    pub fn average(&self, t: &TorusSpec, lambda: &TorusCharacter, chi: OrthChar) -> Result<i64> {
        self.raw_sum(t, lambda, chi)?
            .div_exact(self.order as i64)?
            .as_integer()
            .ok_or_else(|| Error::Integrality("orthogonal average is not rational".into()))
    }
}

/// A point `t ∈ T ∩ G_*^{g·θ}` with the data of `g^{-1}tg ∈ G_*^θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub t: usize,
    pub det: i32,
    pub spin: i32,
    pub eps: i32,
}

/// `g ∈ G` with `(g·θ)(T) = T`.
#[derive(Clone, Debug)]
pub struct XiMember {
    pub g: MatFF,
    /// `σ(Z_G((g^{-1}Tg ∩ G_*^θ)°))`.
    pub sigma: i32,
    pub fixed: Vec<FixedPoint>,
}

impl XiMember {
    fn satisfies(&self, lambda: &TorusCharacter, chi: OrthChar, t: &TorusSpec) -> bool {
        let half = lambda.order() / 2;
        self.fixed.iter().all(|p| {
            let chi_v = if chi.det_exp == 1 { p.det } else { 1 } * if chi.spin_exp == 1 { p.spin } else { 1 };
            // λ(t) = χ(g^{-1}tg)^{-1} ε(g^{-1}tg)
            let want = chi_v * p.eps;
            let e = lambda.exponent(&t.elements[p.t]);
            (want == 1 && e == 0) || (want == -1 && lambda.order() % 2 == 0 && e == half)
        })
    }
}

/// The set `Ξ_T = {g : (g·θ)(T) = T}` split into `T \ · / G_*^θ` double
/// cosets, with everything the double-coset sum needs except `λ` and `χ`.
#[derive(Clone, Debug)]
pub struct XiStructure {
    pub members: Vec<XiMember>,
    /// Index into `members` of each double coset's least element, and the
    /// coset size.
    pub cosets: Vec<(usize, usize)>,
    pub torus_order: usize,
    pub fixed_order: usize,
}

impl XiStructure {
    /// Scans `group` (a listing of `GL_n(F_q)`).
    pub fn new(f: &FF, t: &TorusSpec, nu: &SymFormFF, kind: GroupKind, group: &[MatFF]) -> Result<XiStructure> {
        let fixed = orth_group(f, nu, kind)?;
        let mut members = Vec::new();
        for g in group {
            if let Some(m) = xi_member(f, t, nu, kind, g)? {
                members.push(m);
            }
        }
        let cosets = double_cosets(f, t, &fixed, &members)?;
        Ok(XiStructure { members, cosets, torus_order: t.order(), fixed_order: fixed.len() })
    }

    /// `σ(T) Σ_{g ∈ T\Ξ_{T,λ,χ}/G_*^θ} σ(Z_G((g^{-1}Tg ∩ G_*^θ)°))`, cross-checked
    /// against the ungrouped sum `σ(T)/(|T||G_*^θ|) Σ_{g∈Ξ} σ(…)·|T ∩ G_*^{g·θ}|`.
    pub fn rhs(&self, t: &TorusSpec, lambda: &TorusCharacter, chi: OrthChar) -> Result<(i64, usize)> {
        lambda.check(t)?;
        let mut grouped = 0i64;
        let mut count = 0usize;
        for &(rep, _) in &self.cosets {
            let m = &self.members[rep];
            if m.satisfies(lambda, chi, t) {
                grouped += m.sigma as i64;
                count += 1;
            }
        }
        let weighted: i64 = self
            .members
            .iter()
            .filter(|m| m.satisfies(lambda, chi, t))
            .map(|m| m.sigma as i64 * m.fixed.len() as i64)
            .sum();
        let denom = (self.torus_order * self.fixed_order) as i64;
        if weighted != grouped * denom {
            return Err(Error::Integrality("double-coset sum disagrees with the ungrouped sum".into()));
        }
        Ok((t.sigma() as i64 * grouped, count))
    }
}

fn xi_member(f: &FF, t: &TorusSpec, nu: &SymFormFF, kind: GroupKind, g: &MatFF) -> Result<Option<XiMember>> {
    let gi = g.inverse(f)?;
    // g·θ = θ_{ν_g} with ν_g = ᵗg^{-1} ν g^{-1}
    let nu_g = gi.transpose().mul(f, nu.matrix()).mul(f, &gi);
    let nu_g_inv = g.mul(f, &nu.matrix().inverse(f)?).mul(f, &g.transpose());
    let Some(split) = t.split_structure(&nu_g, &nu_g_inv) else {
        return Ok(None);
    };
    let mut fixed = Vec::new();
    for (i, e) in t.elements.iter().enumerate() {
        if e.mat.transpose().mul(f, &nu_g).mul(f, &e.mat) != nu_g {
            continue;
        }
        let d = if e.mat.det(f) == f.one() { 1 } else { -1 };
        if kind == GroupKind::SO && d != 1 {
            continue;
        }
        let h = gi.mul(f, &e.mat).mul(f, g);
        fixed.push(FixedPoint { t: i, det: d, spin: spinor_sign(f, nu, &h)?, eps: split.epsilon(e) });
    }
    Ok(Some(XiMember { g: *g, sigma: split.sigma_centralizer(), fixed }))
}

fn double_cosets(f: &FF, t: &TorusSpec, fixed: &GroupCatalog, members: &[XiMember]) -> Result<Vec<(usize, usize)>> {
    let index: BTreeMap<MatFF, usize> = members.iter().enumerate().map(|(i, m)| (m.g, i)).collect();
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let tgens = t.generators();
    for (i, m) in members.iter().enumerate() {
        let neighbours = tgens
            .iter()
            .map(|s| s.mul(f, &m.g))
            .chain(fixed.elements.iter().map(|h| m.g.mul(f, h)));
        for y in neighbours {
            let j = *index
                .get(&y)
                .ok_or_else(|| Error::Integrality("Ξ_T is not a union of double cosets".into()))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..members.len() {
        let r = find(&mut parent, i);
        *sizes.entry(r).or_insert(0) += 1;
    }
    Ok(sizes.into_iter().collect())
}

/// Both sides of the generalized Lusztig formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSides {
    pub lhs: i64,
    pub rhs: i64,
    /// Double cosets in `T\Ξ_{T,λ,χ}/G_*^θ`.
    pub contributing_cosets: usize,
}

pub fn pairing_sides(
    t: &TorusSpec,
    lambda: &TorusCharacter,
    inv: &InvolutionData,
    fixed: &FixedGroupData,
    xi: &XiStructure,
) -> Result<PairingSides> {
    let lhs = fixed.average(t, lambda, inv.chi)?;
    let (rhs, contributing_cosets) = xi.rhs(t, lambda, inv.chi)?;
    Ok(PairingSides { lhs, rhs, contributing_cosets })
}

/// One `T`-orbit `[θ']` in `Θ_{T,λ,χ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTerm {
    /// Normalized form `ν'` with `θ' = θ_{ν'}` (first nonzero entry 1).
    pub nu: MatFF,
    pub orbit_size: usize,
    /// `m_T([θ']) = [G_{θ'} : G_*^{θ'}(G_{θ'} ∩ T)]`.
    pub m_t: u64,
    /// `⟨[θ'], λ⟩_T^χ = σ(T)·σ(Z_G((T ∩ G_*^{θ'})°))`.
    pub pairing: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub terms: Vec<OrbitTerm>,
    pub total: i64,
}

fn normalize_form(f: &FF, m: &MatFF) -> MatFF {
    let c = m.codes().iter().find(|&&c| c != 0).copied().unwrap_or(1);
    m.scale(f, f.inv(f.from_code(c as u64)).unwrap())
}

/// `Σ_{[θ'] ∼ λ} m_T([θ']) ⟨[θ'], λ⟩_T^χ` with each index computed from
/// enumerated similitude and orthogonal groups.
pub fn orbit_reformulation(
    f: &FF,
    t: &TorusSpec,
    lambda: &TorusCharacter,
    inv: &InvolutionData,
    xi: &XiStructure,
) -> Result<OrbitReport> {
    let mut orbit_of: BTreeMap<MatFF, MatFF> = BTreeMap::new();
    let mut orbits: BTreeMap<MatFF, usize> = BTreeMap::new();
    let t_inv: Vec<MatFF> = t.elements.iter().map(|e| e.mat.inverse(f)).collect::<Result<_>>()?;
    for m in xi.members.iter().filter(|m| m.satisfies(lambda, inv.chi, t)) {
        let gi = m.g.inverse(f)?;
        let nu_g = normalize_form(f, &gi.transpose().mul(f, inv.nu.matrix()).mul(f, &gi));
        if orbit_of.contains_key(&nu_g) {
            continue;
        }
        let members: Vec<MatFF> = {
            let mut v: Vec<MatFF> = t_inv
                .iter()
                .map(|ti| normalize_form(f, &ti.transpose().mul(f, &nu_g).mul(f, ti)))
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let rep = members[0];
        for x in &members {
            orbit_of.insert(*x, rep);
        }
        orbits.insert(rep, members.len());
    }
    let mut terms = Vec::new();
    let mut total = 0i64;
    for (rep, size) in orbits {
        let nu_p = SymFormFF::new(f, rep)?;
        let sim = orth_group(f, &nu_p, GroupKind::GTheta)?;
        let fixed = orth_group(f, &nu_p, inv.fixed)?;
        let sim_t = t.elements.iter().filter(|e| sim.contains(&e.mat)).count() as u64;
        let fixed_t = t.elements.iter().filter(|e| fixed.contains(&e.mat)).count() as u64;
        // |G_*·(G_θ ∩ T)| = |G_*||G_θ ∩ T| / |G_* ∩ T|
        let prod = fixed.len() as u64 * sim_t / fixed_t;
        if sim.len() as u64 % prod != 0 {
            return Err(Error::Integrality("subgroup product does not divide the similitude group".into()));
        }
        let m_t = sim.len() as u64 / prod;
        let split = t
            .split_structure(&rep, &rep.inverse(f)?)
            .ok_or_else(|| Error::Integrality("orbit involution does not stabilize T".into()))?;
        let pairing = t.sigma() * split.sigma_centralizer();
        total += m_t as i64 * pairing as i64;
        terms.push(OrbitTerm { nu: rep, orbit_size: size, m_t, pairing });
    }
    Ok(OrbitReport { terms, total })
}

/// Double-coset count of `T\Ξ_T/G^θ` and the fixed points `T ∩ G^{g·θ}`
/// for each coset representative (`{±1}` expected).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetReport {
    pub double_cosets: usize,
    pub fixed_points: Vec<Vec<MatFF>>,
    pub method: &'static str,
}

impl DoubleCosetReport {
    pub fn fixed_points_are_pm_one(&self, f: &FF, n: usize) -> bool {
        let pm: Vec<MatFF> = {
            let mut v = vec![MatFF::identity(f, n), MatFF::scalar(f, n, f.int(-1))];
            v.sort();
            v
        };
        self.fixed_points.iter().all(|s| {
            let mut s = s.clone();
            s.sort();
            s == pm
        })
    }
}

/// By enumerating `GL_n(F_q)`.
pub fn double_cosets_brute(f: &FF, t: &TorusSpec, nu: &SymFormFF, group: &[MatFF]) -> Result<DoubleCosetReport> {
    let xi = XiStructure::new(f, t, nu, GroupKind::O, group)?;
    Ok(DoubleCosetReport {
        double_cosets: xi.cosets.len(),
        fixed_points: xi
            .cosets
            .iter()
            .map(|&(r, _)| xi.members[r].fixed.iter().map(|p| t.elements[p.t].mat).collect())
            .collect(),
        method: "brute",
    })
}

/// Without enumerating `G`: for elliptic `T` and odd `n`, `g ∈ Ξ_T` iff
/// `N_g = ᵗg^{-1}νg^{-1}` lies in `L = {N symmetric : N t_0 = ᵗt_0 N}`,
/// `g ↦ N_g` identifies `Ξ_T/G^θ` with the invertible `N ∈ L` congruent to
/// `ν`, and left multiplication by `T` becomes `N ↦ ᵗt N t`.
pub fn double_cosets_solver(f: &FF, t: &TorusSpec, nu: &SymFormFF) -> Result<DoubleCosetReport> {
    let n = t.n();
    if !t.is_elliptic() || n % 2 == 0 {
        return Err(Error::Precondition("solver needs an elliptic torus in odd dimension".into()));
    }
    let t0 = t.generators()[0];
    let basis = crate::orth::split_forms(f, &t0);
    if basis.len() != n {
        return Err(Error::Integrality("space of T-split forms has the wrong dimension".into()));
    }
    let det_nu = nu.matrix().det(f);
    let q = f.size();
    let mut forms: Vec<MatFF> = Vec::new();
    for mut code in 0..q.pow(n as u32) {
        let mut m = MatFF::zero(n);
        for b in &basis {
            let c = f.from_code(code % q);
            code /= q;
            m = m.add(f, &b.scale(f, c));
        }
        let d = m.det(f);
        if !f.is_zero(d) && f.is_square(f.mul(d, f.inv(det_nu)?)) {
            forms.push(m);
        }
    }
    let mut seen: BTreeMap<MatFF, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    for m in &forms {
        if seen.contains_key(m) {
            continue;
        }
        let id = reps.len();
        for e in &t.elements {
            seen.insert(e.mat.transpose().mul(f, m).mul(f, &e.mat), id);
        }
        reps.push(*m);
    }
    let fixed_points = reps
        .iter()
        .map(|m| {
            t.elements
                .iter()
                .filter(|e| e.mat.transpose().mul(f, m).mul(f, &e.mat) == *m)
                .map(|e| e.mat)
                .collect()
        })
        .collect();
    Ok(DoubleCosetReport { double_cosets: reps.len(), fixed_points, method: "solver" })
}

/// Closed form for a regular character of an elliptic torus in odd
/// dimension: `1` if `λ(−1) = χ(−1)`, else `0`.
pub fn closed_form_average(lambda: &TorusCharacter, chi_minus_one: i32) -> Result<i64> {
    if !lambda.is_regular() {
        return Err(Error::NotRegular);
    }
    Ok(if lambda.at_minus_one() == chi_minus_one { 1 } else { 0 })
}
