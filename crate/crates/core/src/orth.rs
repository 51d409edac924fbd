//! Orthogonal groups, similitudes, reflections and spinor norms over finite
//! fields, and restriction of an orthogonal involution to the centralizer of
//! an embedded subfield.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ff::{FFElem, FieldEmbedding, FF};
use crate::mat::{nullspace, rank, MatFF, SymFormFF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    GL,
    /// `{g : ᵗgνg = ν}`.
    O,
    /// `O` intersected with `det = 1`.
    SO,
    /// Similitudes `{g : ᵗgνg ∈ F^×·ν}`.
    GTheta,
}

/// A finite matrix group listed in ascending element order.
#[derive(Clone, Debug)]
pub struct GroupCatalog {
    pub kind: GroupKind,
    pub elements: Vec<MatFF>,
    /// Similitude ratio `μ(g)` per element (`GTheta` only).
    pub ratios: Vec<FFElem>,
}

impl GroupCatalog {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn contains(&self, g: &MatFF) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// Largest catalog [`orth_group`] will build.
pub const ORTH_CAP: usize = 200_000;

/// Similitude ratio `c` with `ᵗgνg = cν`, if any.
pub fn similitude_ratio(f: &FF, nu: &SymFormFF, g: &MatFF) -> Option<FFElem> {
    let pb = nu.pullback(f, g);
    let m = nu.matrix();
    let n = m.size();
    let (i0, j0) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !f.is_zero(m.get(f, i, j)))?;
    let c = f.mul(pb.get(f, i0, j0), f.inv(m.get(f, i0, j0)).ok()?);
    (!f.is_zero(c) && pb == m.scale(f, c)).then_some(c)
}

pub fn is_member(f: &FF, nu: &SymFormFF, kind: GroupKind, g: &MatFF) -> bool {
    if g.size() != nu.size() {
        return false;
    }
    match kind {
        GroupKind::GL => !f.is_zero(g.det(f)),
        GroupKind::O => nu.is_orthogonal(f, g),
        GroupKind::SO => nu.is_orthogonal(f, g) && g.det(f) == f.one(),
        GroupKind::GTheta => similitude_ratio(f, nu, g).is_some(),
    }
}

fn all_vectors(f: &FF, n: usize) -> Vec<Vec<FFElem>> {
    let q = f.size();
    (0..q.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let e = f.from_code(c % q);
                    c /= q;
                    e
                })
                .collect()
        })
        .collect()
}

/// Solutions of `A v = b` as an affine family: a particular solution plus a
/// basis of the homogeneous solutions, or `None` if inconsistent.
fn affine_solutions(
    f: &FF,
    rows: &[Vec<FFElem>],
    rhs: &[FFElem],
    n: usize,
) -> Option<(Vec<FFElem>, Vec<Vec<FFElem>>)> {
    if rows.is_empty() {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        return Some((vec![f.zero(); n], basis));
    }
    let aug: Vec<Vec<FFElem>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut r = r.clone();
            r.push(f.neg(b));
            r
        })
        .collect();
    let ns = nullspace(f, &aug, n + 1);
    let part = ns.iter().find(|v| !f.is_zero(v[n]))?;
    let inv = f.inv(part[n]).ok()?;
    let particular: Vec<FFElem> = part[..n].iter().map(|&x| f.mul(x, inv)).collect();
    let hom: Vec<Vec<FFElem>> = nullspace(f, rows, n);
    Some((particular, hom))
}

fn span_elements(f: &FF, base: &[FFElem], dirs: &[Vec<FFElem>]) -> Vec<Vec<FFElem>> {
    let q = f.size();
    let k = dirs.len();
    (0..q.pow(k as u32))
        .map(|mut c| {
            let mut v = base.to_vec();
            for d in dirs {
                let t = f.from_code(c % q);
                c /= q;
                for (x, &y) in v.iter_mut().zip(d) {
                    *x = f.add(*x, f.mul(t, y));
                }
            }
            v
        })
        .collect()
}

/// Enumerates `O(ν)`, `SO(ν)` or the similitude group by building `g`
/// column by column: column `j` is constrained linearly by its pairings with
/// earlier columns, and quadratically by its own length.
pub fn orth_group(f: &FF, nu: &SymFormFF, kind: GroupKind) -> Result<GroupCatalog> {
    let n = nu.size();
    if kind == GroupKind::GL {
        let elements = crate::mat::enumerate_gl(f, n, ORTH_CAP as u64)?;
        return Ok(GroupCatalog { kind, elements, ratios: Vec::new() });
    }
    let ratios_to_try: Vec<FFElem> = match kind {
        GroupKind::GTheta => f.units().collect(),
        _ => vec![f.one()],
    };
    let m = *nu.matrix();
    let mut out: Vec<(MatFF, FFElem)> = Vec::new();
    for &c in &ratios_to_try {
        let target = m.scale(f, c);
        let mut cols: Vec<Vec<FFElem>> = Vec::new();
        extend_columns(f, nu, &target, n, &mut cols, &mut |cols| {
            let g = MatFF::from_fn(n, |i, j| cols[j][i]);
            if kind == GroupKind::SO && g.det(f) != f.one() {
                return Ok(());
            }
            out.push((g, c));
            if out.len() > ORTH_CAP {
                return Err(Error::CapExceeded(format!("orthogonal catalog above {ORTH_CAP}")));
            }
            Ok(())
        })?;
    }
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let (elements, ratios): (Vec<MatFF>, Vec<FFElem>) = out.into_iter().unzip();
    let cat = GroupCatalog {
        kind,
        ratios: if kind == GroupKind::GTheta { ratios } else { Vec::new() },
        elements,
    };
    check_closure(f, &cat)?;
    Ok(cat)
}

fn extend_columns(
    f: &FF,
    nu: &SymFormFF,
    target: &MatFF,
    n: usize,
    cols: &mut Vec<Vec<FFElem>>,
    emit: &mut impl FnMut(&[Vec<FFElem>]) -> Result<()>,
) -> Result<()> {
    let j = cols.len();
    if j == n {
        return emit(cols);
    }
    let rows: Vec<Vec<FFElem>> =
        cols.iter().map(|c| nu.matrix().transpose().apply(f, c)).collect();
    let rhs: Vec<FFElem> = (0..j).map(|i| target.get(f, i, j)).collect();
    let Some((part, hom)) = affine_solutions(f, &rows, &rhs, n) else {
        return Ok(());
    };
    let want = target.get(f, j, j);
    let candidates = if j == 0 { all_vectors(f, n) } else { span_elements(f, &part, &hom) };
    for v in candidates {
        if nu.bilinear(f, &v, &v) != want {
            continue;
        }
        cols.push(v);
        extend_columns(f, nu, target, n, cols, emit)?;
        cols.pop();
    }
    Ok(())
}

/// Closure under products and inverses. Complete check for small catalogs;
/// for large ones products against a fixed spread of elements.
fn check_closure(f: &FF, cat: &GroupCatalog) -> Result<()> {
    let len = cat.elements.len();
    let probes: Vec<usize> = if len <= 800 {
        (0..len).collect()
    } else {
        (0..16).map(|k| k * len / 16).collect()
    };
    for a in &cat.elements {
        let ai = a.inverse(f)?;
        if !cat.contains(&ai) {
            return Err(Error::Integrality("catalog not closed under inverse".into()));
        }
        for &k in &probes {
            if !cat.contains(&a.mul(f, &cat.elements[k])) {
                return Err(Error::Integrality("catalog not closed under product".into()));
            }
        }
    }
    Ok(())
}

/// The reflection `r_v = I − 2 v ᵗv ν / Q(v)` with `Q(v) = ᵗv ν v`.
pub fn reflection(f: &FF, nu: &SymFormFF, v: &[FFElem]) -> Result<MatFF> {
    let qv = nu.bilinear(f, v, v);
    if f.is_zero(qv) {
        return Err(Error::Precondition("reflection vector is isotropic".into()));
    }
    let n = v.len();
    let nv = nu.matrix().apply(f, v); // ν v, so ᵗv ν = ᵗ(ν v)
    let c = f.mul(f.int(2), f.inv(qv)?);
    Ok(MatFF::from_fn(n, |i, j| {
        let d = if i == j { f.one() } else { f.zero() };
        f.sub(d, f.mul(c, f.mul(v[i], nv[j])))
    }))
}

/// Writes `g ∈ O(ν)` as `r_{v_1}···r_{v_m}`.
///
/// At each step the current element `h` fixes the span of earlier pivot
/// vectors and acts on its orthogonal complement `W`. The first anisotropic
/// `x ∈ W` (in coordinate order) moved by `h` is chosen, preferring one with
/// `hx − x` anisotropic; then `r_{hx−x}` or `r_x r_{hx+x}` sends `hx` back to
/// `x`.
pub fn cartan_dieudonne(f: &FF, nu: &SymFormFF, g: &MatFF) -> Result<Vec<Vec<FFElem>>> {
    if !nu.is_orthogonal(f, g) {
        return Err(Error::NotOrthogonal);
    }
    let n = g.size();
    let mut h = *g;
    let mut pivots: Vec<Vec<FFElem>> = Vec::new();
    // reflections applied on the left, in application order
    let mut applied: Vec<Vec<FFElem>> = Vec::new();
    while !h.is_identity(f) {
        let rows: Vec<Vec<FFElem>> = pivots.iter().map(|x| nu.matrix().apply(f, x)).collect();
        let w_basis = if rows.is_empty() {
            nullspace(f, &[vec![f.zero(); n]], n)
        } else {
            nullspace(f, &rows, n)
        };
        let candidates: Vec<Vec<FFElem>> = span_elements(f, &vec![f.zero(); n], &w_basis)
            .into_iter()
            .filter(|x| !f.is_zero(nu.bilinear(f, x, x)) && h.apply(f, x) != *x)
            .collect();
        let diff = |x: &Vec<FFElem>| -> Vec<FFElem> {
            h.apply(f, x).iter().zip(x).map(|(&a, &b)| f.sub(a, b)).collect()
        };
        let good = candidates.iter().find(|x| {
            let d = diff(x);
            !f.is_zero(nu.bilinear(f, &d, &d))
        });
        let x = match good {
            Some(x) => {
                let d = diff(x);
                h = reflection(f, nu, &d)?.mul(f, &h);
                applied.push(d);
                x.clone()
            }
            None => {
                let x = candidates
                    .first()
                    .ok_or_else(|| Error::Integrality("no moved anisotropic vector".into()))?
                    .clone();
                let s: Vec<FFElem> = h.apply(f, &x).iter().zip(&x).map(|(&a, &b)| f.add(a, b)).collect();
                h = reflection(f, nu, &x)?.mul(f, &reflection(f, nu, &s)?.mul(f, &h));
                applied.push(s);
                applied.push(x.clone());
                x
            }
        };
        pivots.push(x);
        if pivots.len() > n {
            return Err(Error::Integrality("reflection decomposition did not terminate".into()));
        }
    }
    // r_{a_k}···r_{a_1} g = I, so g = r_{a_1}···r_{a_k}
    Ok(applied)
}

/// `Π Q(v_i)` of a reflection decomposition.
pub fn spinor_norm(f: &FF, nu: &SymFormFF, g: &MatFF) -> Result<FFElem> {
    let vs = cartan_dieudonne(f, nu, g)?;
    Ok(vs.iter().fold(f.one(), |acc, v| f.mul(acc, nu.bilinear(f, v, v))))
}

/// Spinor norm as a sign: `+1` on squares, `−1` otherwise.
pub fn spinor_sign(f: &FF, nu: &SymFormFF, g: &MatFF) -> Result<i32> {
    Ok(if f.is_square(spinor_norm(f, nu, g)?) { 1 } else { -1 })
}

/// An order-≤2 character `det^a · sp^b` of an orthogonal group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthChar {
    pub det_exp: u8,
    pub spin_exp: u8,
}

impl OrthChar {
    pub const TRIVIAL: OrthChar = OrthChar { det_exp: 0, spin_exp: 0 };
    pub const DET: OrthChar = OrthChar { det_exp: 1, spin_exp: 0 };
    pub const SPIN: OrthChar = OrthChar { det_exp: 0, spin_exp: 1 };
    pub const DET_SPIN: OrthChar = OrthChar { det_exp: 1, spin_exp: 1 };
    pub const ALL: [OrthChar; 4] = [Self::TRIVIAL, Self::DET, Self::SPIN, Self::DET_SPIN];

    pub fn name(&self) -> &'static str {
        match (self.det_exp, self.spin_exp) {
            (0, 0) => "trivial",
            (1, 0) => "det",
            (0, 1) => "spinor",
            _ => "det-spinor",
        }
    }
    pub fn parse(s: &str) -> Option<OrthChar> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn value(&self, f: &FF, nu: &SymFormFF, h: &MatFF) -> Result<i32> {
        let mut v = 1;
        if self.det_exp == 1 && h.det(f) != f.one() {
            v = -v;
        }
        if self.spin_exp == 1 {
            v *= spinor_sign(f, nu, h)?;
        }
        Ok(v)
    }

    /// `χ(−1)` on `O_n(ν)`: `det(−1) = (−1)^n`, spinor norm of `−1` is `disc ν`
    /// up to the square `(−1)^n·…`; computed directly.
    pub fn at_minus_one(&self, f: &FF, nu: &SymFormFF) -> Result<i32> {
        let m1 = MatFF::scalar(f, nu.size(), f.int(-1));
        self.value(f, nu, &m1)
    }
}

/// Subgroup generated by `gens`, by breadth-first closure.
pub fn generated_subgroup(f: &FF, gens: &[MatFF], cap: usize) -> Result<BTreeSet<MatFF>> {
    let Some(first) = gens.first() else {
        return Err(Error::Precondition("no generators".into()));
    };
    let id = MatFF::identity(f, first.size());
    let mut seen = BTreeSet::new();
    seen.insert(id);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(f, g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(format!("subgroup closure above {cap}")));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Outcome of a commutator-closure containment check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorReport {
    pub ambient_order: usize,
    pub closure_order: usize,
    pub generators_used: usize,
    pub contains_subgroup: bool,
}

/// Checks that `sub` (given over the small field) lies in the subgroup of
/// `big_group` generated by commutators. Commutators are added one at a time
/// in a fixed order until the closure contains every embedded element of
/// `sub` or all pairs are exhausted; any closure so built is contained in the
/// derived subgroup, so a positive answer is sound.
pub fn commutator_containment(
    small: &FF,
    big: &FF,
    sub: &[MatFF],
    big_group: &GroupCatalog,
) -> Result<CommutatorReport> {
    let emb = FieldEmbedding::new(small, big)?;
    let lift = |m: &MatFF| -> MatFF {
        MatFF::from_fn(m.size(), |i, j| emb.apply(small, big, m.get(small, i, j)))
    };
    let targets: Vec<MatFF> = sub.iter().map(lift).collect();
    let els = &big_group.elements;
    let inv: Vec<MatFF> = els.iter().map(|g| g.inverse(big)).collect::<Result<_>>()?;
    let mut gens: Vec<MatFF> = Vec::new();
    let mut closure: BTreeSet<MatFF> = BTreeSet::new();
    let len = els.len();
    let done = |c: &BTreeSet<MatFF>| targets.iter().all(|t| c.contains(t));
    'outer: for i in 0..len {
        for j in i + 1..len {
            let c = els[i].mul(big, &els[j]).mul(big, &inv[i]).mul(big, &inv[j]);
            if closure.contains(&c) {
                continue;
            }
            gens.push(c);
            closure = generated_subgroup(big, &gens, len)?;
            if done(&closure) {
                break 'outer;
            }
        }
    }
    Ok(CommutatorReport {
        ambient_order: len,
        closure_order: closure.len(),
        generators_used: gens.len(),
        contains_subgroup: done(&closure),
    })
}

/// Basis of `{ν symmetric : ν y = ᵗy ν}` for a matrix `y`.
pub fn split_forms(f: &FF, y: &MatFF) -> Vec<MatFF> {
    let n = y.size();
    // unknowns: upper-triangular entries of ν
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let var = |i: usize, j: usize| -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        idx.iter().position(|&t| t == (a, b)).unwrap()
    };
    let mut rows = Vec::new();
    for r in 0..n {
        for c in 0..n {
            // (νy)_{rc} − (ᵗyν)_{rc} = Σ_k ν_{rk} y_{kc} − y_{kr} ν_{kc}
            let mut row = vec![f.zero(); idx.len()];
            for k in 0..n {
                let a = var(r, k);
                row[a] = f.add(row[a], y.get(f, k, c));
                let b = var(k, c);
                row[b] = f.sub(row[b], y.get(f, k, r));
            }
            rows.push(row);
        }
    }
    nullspace(f, &rows, idx.len())
        .into_iter()
        .map(|v| MatFF::from_fn(n, |i, j| v[var(i, j)]))
        .collect()
}

/// Result of restricting `θ_ν` to `G′ = Z_G(F_q[y]^×)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    /// Degree `m` of the embedded subfield `F_q[y]`.
    pub m: usize,
    /// `n / m`.
    pub n_prime: usize,
    /// Intertwiner: `θ_ν(g) = ξ^{-1}·(g^⊤′)^{-1}·ξ` on `G′`.
    pub xi: MatFF,
    /// `ξ^{-1}·ξ^⊤′`, shown to be the identity.
    pub z: MatFF,
}

/// Solves `X^⊤′·ξ = ξ·β(X)` with `β(X) = ν^{-1}·ᵗX·ν` over a basis of the
/// centralizer algebra `C` of `y`, where `⊤′` is the transpose of `C` viewed
/// as `M_{n/m}(F_{q^m})`. For `n ≤ 4` and `n/m` odd only `m = 1`
/// (`C = M_n(F_q)`, usual transpose) and `m = n` (`C = F_q[y]`, trivial
/// transpose) arise.
pub fn restrict_involution(f: &FF, nu: &SymFormFF, y: &MatFF) -> Result<Restriction> {
    let n = y.size();
    let powers: Vec<Vec<FFElem>> = {
        let mut acc = MatFF::identity(f, n);
        (0..n)
            .map(|_| {
                let row = acc.rows(f).concat();
                acc = acc.mul(f, y);
                row
            })
            .collect()
    };
    let m = rank(f, &powers);
    if (n / m) % 2 == 0 || n % m != 0 {
        return Err(Error::Precondition("n/m must be odd".into()));
    }
    if m != 1 && m != n {
        return Err(Error::Precondition(format!("subfield degree {m} unsupported for n = {n}")));
    }
    let nu_inv = nu.matrix().inverse(f)?;
    let beta = |x: &MatFF| nu_inv.mul(f, &x.transpose()).mul(f, nu.matrix());
    let commutes = |a: &MatFF, b: &MatFF| a.mul(f, b) == b.mul(f, a);
    if !commutes(&beta(y), y) {
        return Err(Error::Precondition("θ_ν does not stabilize the centralizer".into()));
    }
    let transpose_c = |x: &MatFF| if m == 1 { x.transpose() } else { *x };
    // spanning set of C
    let span: Vec<MatFF> = if m == 1 {
        (0..n * n)
            .map(|k| MatFF::from_fn(n, |i, j| if i * n + j == k { f.one() } else { f.zero() }))
            .collect()
    } else {
        let mut acc = MatFF::identity(f, n);
        (0..n)
            .map(|_| {
                let r = acc;
                acc = acc.mul(f, y);
                r
            })
            .collect()
    };
    // unknown ξ ∈ C as n² coordinates; rows: X^⊤′ξ − ξβ(X) = 0 and ξ ∈ C
    let nn = n * n;
    let unit = |k: usize| MatFF::from_fn(n, |i, j| if i * n + j == k { f.one() } else { f.zero() });
    let mut rows: Vec<Vec<FFElem>> = Vec::new();
    let mut push_linear = |map: &dyn Fn(&MatFF) -> MatFF| {
        let images: Vec<MatFF> = (0..nn).map(|k| map(&unit(k))).collect();
        for e in 0..nn {
            rows.push(images.iter().map(|im| im.codes()[e]).map(|c| f.from_code(c as u64)).collect());
        }
    };
    for x in &span {
        let xt = transpose_c(x);
        let bx = beta(x);
        push_linear(&|xi: &MatFF| xt.mul(f, xi).sub(f, &xi.mul(f, &bx)));
    }
    if m != 1 {
        push_linear(&|xi: &MatFF| xi.mul(f, y).sub(f, &y.mul(f, xi)));
    }
    let sols = nullspace(f, &rows, nn);
    let xi = span_elements(f, &vec![f.zero(); nn], &sols)
        .into_iter()
        .map(|v| MatFF::from_fn(n, |i, j| v[i * n + j]))
        .find(|x| !f.is_zero(x.det(f)))
        .ok_or_else(|| Error::Precondition("no invertible intertwiner".into()))?;
    let xi_inv = xi.inverse(f)?;
    let z = xi_inv.mul(f, &transpose_c(&xi));
    if z != MatFF::identity(f, n) {
        let minus = MatFF::scalar(f, n, f.int(-1));
        return Err(if z == minus {
            Error::Integrality("intertwiner is antisymmetric".into())
        } else {
            Error::Precondition("no symmetric intertwiner".into())
        });
    }
    // θ_ν(g) = ξ^{-1} (g^⊤′)^{-1} ξ on generators of G′
    let gens: Vec<MatFF> = if m == 1 {
        let g0 = f.primitive_root();
        let mut v: Vec<MatFF> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut t = MatFF::identity(f, n);
                t.set(i, j, f.one());
                t
            })
            .collect();
        let mut d = MatFF::identity(f, n);
        d.set(0, 0, g0);
        v.push(d);
        v
    } else {
        vec![*y]
    };
    for g in &gens {
        let theta = nu.theta(f, g)?;
        let other = xi_inv.mul(f, &transpose_c(g).inverse(f)?).mul(f, &xi);
        if theta != other {
            return Err(Error::Integrality("intertwiner fails on a generator".into()));
        }
    }
    Ok(Restriction { m, n_prime: n / m, xi, z })
}
