//! Distinction of depth-zero and tame supercuspidals by orthogonal groups:
//! the closed-form decision and its finite-field checks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dl::{closed_form_average, FixedGroupData, TorusCharacter, TorusSpec};
use crate::error::{Error, Result};
use crate::ff::{regular_orbit_reps, FieldEmbedding, TorusChar, FF};
use crate::mat::{MatFF, SymFormFF};
use crate::orth::{commutator_containment, orth_group, spinor_norm, GroupKind, OrthChar};
use crate::qform::{classify_orbit, invariants, congruence_transform, scalar_orbit, OrbitLabel, SquareClass, DEFAULT_PRECISION};
use crate::rat::{int, least_nonresidue, residue, valuation, Rat, SymMatQ};
use crate::tame::TameExt;

/// The scalar orbit of an orthogonal involution `θ_ν` over `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionOrbitLabel {
    pub p: u64,
    pub n: usize,
    pub labels: Vec<(SquareClass, OrbitLabel)>,
    pub in_theta_j: bool,
}

impl InvolutionOrbitLabel {
    pub fn of(nu: &SymMatQ, p: u64) -> Result<InvolutionOrbitLabel> {
        let labels = scalar_orbit(nu, p)?;
        let j = classify_orbit(&SymMatQ::j(nu.size()), p)?;
        let in_theta_j = labels.iter().any(|(_, l)| *l == j);
        Ok(InvolutionOrbitLabel { p, n: nu.size(), labels, in_theta_j })
    }

    /// `J`, or a form outside its orbit: `diag(1, …, 1, u, p, c)` with `c`
    /// making the determinant equal to `det J`.
    pub fn representative(p: u64, n: usize, split: bool) -> Result<SymMatQ> {
        if split {
            return Ok(SymMatQ::j(n));
        }
        if n < 3 {
            return Err(Error::Dimension("a second orbit needs n ≥ 3".into()));
        }
        let u = int(least_nonresidue(p) as i64);
        let pp = int(p as i64);
        let dj = SymMatQ::j(n).det();
        let mut d: Vec<_> = (0..n - 3).map(|_| int(1)).collect();
        d.push(u.clone());
        d.push(pp.clone());
        d.push(dj / (u * pp));
        let nu = SymMatQ::diag(&d)?;
        if InvolutionOrbitLabel::of(&nu, p)?.in_theta_j {
            return Err(Error::Integrality("representative landed in the split orbit".into()));
        }
        Ok(nu)
    }
}

/// Inputs to [`distinguished_dimension`]; the sign is any of `ω(−1)`,
/// `φ(−1)`, `ω′(−1)`, which agree.
#[derive(Clone, Debug)]
pub enum DistinctionInput {
    Orbit { label: InvolutionOrbitLabel, sign: i32 },
    Howe { ext: TameExt, nu: SymMatQ, sign: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub dimension: u32,
    pub reason: String,
    pub method: &'static str,
}

fn check_sign(s: i32) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("sign must be ±1, got {s}")))
    }
}

/// `dim Hom_{G^θ}(π, 1)`: one exactly when `θ ∈ Θ_J` and the sign is `+1`.
pub fn distinguished_dimension(input: &DistinctionInput) -> Result<Decision> {
    let (label, sign) = match input {
        DistinctionInput::Orbit { label, sign } => (label.clone(), *sign),
        DistinctionInput::Howe { ext, nu, sign } => {
            if nu.size() != ext.degree() {
                return Err(Error::Dimension(format!("ν has size {} but [E:F] = {}", nu.size(), ext.degree())));
            }
            (InvolutionOrbitLabel::of(nu, ext.p())?, *sign)
        }
    };
    check_sign(sign)?;
    if label.n % 2 == 0 {
        return Err(Error::Precondition("n must be odd".into()));
    }
    let (dimension, reason) = match (label.in_theta_j, sign) {
        (true, 1) => (1, String::from("θ ∈ Θ_J and the sign is +1")),
        (true, _) => (0, String::from("the sign is −1")),
        (false, _) => (0, String::from("θ ∉ Θ_J")),
    };
    Ok(Decision { dimension, reason, method: "closed-form" })
}

fn field_of_size(q: u64) -> Result<FF> {
    let p = (2..=q).find(|d| q % d == 0).ok_or(Error::NotPrime(q))?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 {
        return Err(Error::NotPrime(q));
    }
    FF::new(p, k)
}

/// Finite-field average `|O(ν)|^{-1} Σ_h R_{T,λ}(h)χ(h)` with `χ` trivial
/// for `chi_sign = 1` and `det` otherwise, checked against `[λ(−1) = χ(−1)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub average: i64,
    pub closed_form: i64,
    pub chi: &'static str,
}

pub fn depth_zero_crosscheck(n0: usize, q0: u64, lambda: &TorusChar, nu: &SymFormFF, chi_sign: i32) -> Result<CrossCheck> {
    check_sign(chi_sign)?;
    if lambda.q != q0 || lambda.n as usize != n0 || nu.size() != n0 {
        return Err(Error::Dimension("λ, ν and (n0, q0) disagree".into()));
    }
    let f = field_of_size(q0)?;
    let lam = TorusCharacter::elliptic(*lambda);
    if !lam.is_regular() {
        return Err(Error::NotRegular);
    }
    let t = TorusSpec::elliptic(&f, n0 as u32)?;
    let chi = if chi_sign == 1 { OrthChar::TRIVIAL } else { OrthChar::DET };
    let chi_m1 = chi.at_minus_one(&f, nu)?;
    let average = FixedGroupData::new(&f, nu, GroupKind::O)?.average(&t, &lam, chi)?;
    let closed_form = closed_form_average(&lam, chi_m1)?;
    if average != closed_form {
        return Err(Error::Integrality(format!("average {average} differs from closed form {closed_form}")));
    }
    Ok(CrossCheck { average, closed_form, chi: chi.name() })
}

/// Reduction of a `p`-adic involution to depth zero: when some `cν` is
/// congruent to `J`, the finite-field average on `O_n(F_p, J)` with a regular
/// `λ` of sign `sign` and trivial `χ`; otherwise no scalar multiple of `ν` is
/// unimodular and the multiplicity is `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCrossCheck {
    pub dimension: u32,
    pub reduction: Option<(Rat, u32)>,
    pub lambda_index: Option<u64>,
    pub method: &'static str,
}

pub fn padic_depth_zero_crosscheck(nu: &SymMatQ, p: u64, sign: i32) -> Result<PadicCrossCheck> {
    check_sign(sign)?;
    let n = nu.size();
    if n % 2 == 0 {
        return Err(Error::Precondition("n must be odd".into()));
    }
    let j = SymMatQ::j(n);
    let target = classify_orbit(&j, p)?;
    for (c, l) in scalar_orbit(nu, p)? {
        if l != target {
            continue;
        }
        let scaled = nu.scale(&c.representative())?;
        let tr = congruence_transform(&scaled, &j, p, DEFAULT_PRECISION)?;
        if !scaled.matrix().congruent(&tr).congruent_mod(j.matrix(), p, DEFAULT_PRECISION as i64) {
            return Err(Error::Integrality("reduction to J failed".into()));
        }
        let f = FF::new(p, 1)?;
        let jf = SymFormFF::new(
            &f,
            MatFF::from_fn(n, |a, b| {
                let v = j.matrix().get(a, b);
                f.int(if v == &int(0) { 0 } else { residue(v, p, 1).try_into().unwrap() })
            }),
        )?;
        let lambda = regular_orbit_reps(p, n as u32)
            .into_iter()
            .find(|l| l.at_minus_one() == sign)
            .ok_or(Error::NotRegular)?;
        let cc = depth_zero_crosscheck(n, p, &lambda, &jf, 1)?;
        return Ok(PadicCrossCheck {
            dimension: cc.average as u32,
            reduction: Some((c.representative(), DEFAULT_PRECISION)),
            lambda_index: Some(lambda.index),
            method: "depth-zero-crosscheck",
        });
    }
    // unimodular forms of odd rank have unit discriminant and Hasse 1
    for (c, _) in scalar_orbit(nu, p)? {
        let s = nu.scale(&c.representative())?;
        let inv = invariants(&s, p)?;
        if valuation(&s.det(), p)? % 2 == 0 && inv.hasse == 1 {
            return Err(Error::Integrality("a unimodular scalar multiple outside the J orbit".into()));
        }
    }
    Ok(PadicCrossCheck { dimension: 0, reduction: None, lambda_index: None, method: "depth-zero-crosscheck" })
}

/// Finite-field evidence that the character `η′_θ` is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaEvidence {
    pub so_order: usize,
    pub big_so_order: usize,
    pub commutator_closure_order: usize,
    /// `SO_n(F_q)` lies in the commutator closure of `SO_n(F_{q²})`.
    pub commutator_ok: bool,
    /// Spinor norms of `SO_n(F_q)` are squares in `F_{q²}` and agree with the
    /// spinor norms recomputed there.
    pub spinor_ok: bool,
    /// `O_n = SO_n × {±1}` and conjugation by `−1` is trivial.
    pub minus_one_ok: bool,
    pub trivial: bool,
}

pub fn eta_trivial_evidence(n0: usize, q: u64) -> Result<EtaEvidence> {
    if n0 != 3 || q > 5 {
        return Err(Error::CapExceeded(format!("η evidence is enumerated only for n = 3, q ≤ 5 (got n = {n0}, q = {q})")));
    }
    let small = field_of_size(q)?;
    let big = FF::new(small.p(), 2 * small.degree())?;
    let emb = FieldEmbedding::new(&small, &big)?;
    let nu = SymFormFF::identity(&small, n0);
    let nu_big = SymFormFF::identity(&big, n0);
    let so = orth_group(&small, &nu, GroupKind::SO)?;
    let big_so = orth_group(&big, &nu_big, GroupKind::SO)?;
    let rep = commutator_containment(&small, &big, &so.elements, &big_so)?;
    let lift = |m: &MatFF| MatFF::from_fn(n0, |i, j| emb.apply(&small, &big, m.get(&small, i, j)));
    let mut spinor_ok = true;
    for h in &so.elements {
        let s = emb.apply(&small, &big, spinor_norm(&small, &nu, h)?);
        let s_big = spinor_norm(&big, &nu_big, &lift(h))?;
        spinor_ok &= big.is_square(s) && big.is_square(big.mul(s, big.inv(s_big)?));
    }
    let o = orth_group(&small, &nu, GroupKind::O)?;
    let m1 = MatFF::scalar(&small, n0, small.int(-1));
    let so_set: BTreeSet<&MatFF> = so.elements.iter().collect();
    let minus_one_ok = o.len() == 2 * so.len()
        && o.contains(&m1)
        && !so.contains(&m1)
        && o.elements.iter().all(|g| so_set.contains(g) || so_set.contains(&g.mul(&small, &m1)))
        && o.elements.iter().all(|g| m1.mul(&small, g) == g.mul(&small, &m1));
    let commutator_ok = rep.contains_subgroup;
    Ok(EtaEvidence {
        so_order: so.len(),
        big_so_order: big_so.len(),
        commutator_closure_order: rep.closure_order,
        commutator_ok,
        spinor_ok,
        minus_one_ok,
        trivial: commutator_ok && spinor_ok && minus_one_ok,
    })
}

/// `G_θ = Z·G^θ` and `μ(G_θ) = Z²` for `θ = θ_ν` on `GL_n(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilitudeReport {
    pub similitude_order: usize,
    pub fixed_order: usize,
    pub center_times_fixed: usize,
    pub product_ok: bool,
    pub ratios: Vec<u32>,
    pub squares: Vec<u32>,
    pub ratio_ok: bool,
}

pub fn similitude_structure(f: &FF, nu: &SymFormFF) -> Result<SimilitudeReport> {
    let sim = orth_group(f, nu, GroupKind::GTheta)?;
    let fixed = orth_group(f, nu, GroupKind::O)?;
    let mut zg: BTreeSet<MatFF> = BTreeSet::new();
    for z in f.units() {
        for h in &fixed.elements {
            zg.insert(h.scale(f, z));
        }
    }
    let sim_set: BTreeSet<MatFF> = sim.elements.iter().copied().collect();
    let ratios: BTreeSet<u32> = sim.ratios.iter().map(|r| r.code()).collect();
    let squares: BTreeSet<u32> = f.units().map(|z| f.mul(z, z).code()).collect();
    Ok(SimilitudeReport {
        similitude_order: sim.len(),
        fixed_order: fixed.len(),
        center_times_fixed: zg.len(),
        product_ok: zg == sim_set,
        ratio_ok: ratios == squares,
        ratios: ratios.into_iter().collect(),
        squares: squares.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(p: u64, split: bool, sign: i32) -> DistinctionInput {
        let nu = InvolutionOrbitLabel::representative(p, 3, split).unwrap();
        DistinctionInput::Orbit { label: InvolutionOrbitLabel::of(&nu, p).unwrap(), sign }
    }

    #[test]
    fn decision_table() {
        assert_eq!(distinguished_dimension(&orbit(5, true, 1)).unwrap().dimension, 1);
        assert_eq!(distinguished_dimension(&orbit(5, true, -1)).unwrap().dimension, 0);
        let d = distinguished_dimension(&orbit(5, false, 1)).unwrap();
        assert_eq!(d.dimension, 0);
        assert_eq!(d.reason, "θ ∉ Θ_J");
        let even = DistinctionInput::Orbit { label: InvolutionOrbitLabel::of(&SymMatQ::j(2), 5).unwrap(), sign: 1 };
        assert!(distinguished_dimension(&even).is_err());
    }

    #[test]
    fn labels_have_four_members() {
        for p in [3u64, 5, 7] {
            for split in [true, false] {
                let nu = InvolutionOrbitLabel::representative(p, 3, split).unwrap();
                let l = InvolutionOrbitLabel::of(&nu, p).unwrap();
                assert_eq!(l.labels.len(), 4);
                let discs: BTreeSet<_> = l.labels.iter().map(|(_, o)| o.disc).collect();
                assert_eq!(discs.len(), 4);
                assert_eq!(l.in_theta_j, split);
            }
        }
    }

    #[test]
    fn finite_crosscheck_examples() {
        let f = FF::new(3, 1).unwrap();
        let id = SymFormFF::identity(&f, 3);
        let even = regular_orbit_reps(3, 3).into_iter().find(|l| l.at_minus_one() == 1).unwrap();
        let odd = regular_orbit_reps(3, 3).into_iter().find(|l| l.at_minus_one() == -1).unwrap();
        assert_eq!(depth_zero_crosscheck(3, 3, &even, &id, 1).unwrap().average, 1);
        assert_eq!(depth_zero_crosscheck(3, 3, &odd, &id, 1).unwrap().average, 0);
        assert_eq!(depth_zero_crosscheck(3, 3, &odd, &id, -1).unwrap().average, 1);
        assert_eq!(depth_zero_crosscheck(3, 3, &TorusChar::new(3, 3, 0), &id, 1), Err(Error::NotRegular));
    }

    #[test]
    fn eta_evidence_at_three() {
        let ev = eta_trivial_evidence(3, 3).unwrap();
        assert_eq!((ev.so_order, ev.big_so_order), (24, 720));
        assert!(ev.trivial);
    }

    #[test]
    fn similitudes_of_the_identity() {
        let f = FF::new(3, 1).unwrap();
        let r = similitude_structure(&f, &SymFormFF::identity(&f, 3)).unwrap();
        assert_eq!((r.fixed_order, r.similitude_order), (48, 48));
        assert!(r.product_ok && r.ratio_ok);
        assert_eq!(r.ratios, [1]);
    }

    #[test]
    fn padic_reduction() {
        let c = padic_depth_zero_crosscheck(&SymMatQ::identity(3), 5, 1).unwrap();
        assert_eq!(c.dimension, 1);
        assert!(c.reduction.is_some());
        let other = InvolutionOrbitLabel::representative(5, 3, false).unwrap();
        assert_eq!(padic_depth_zero_crosscheck(&other, 5, 1).unwrap().dimension, 0);
        assert_eq!(padic_depth_zero_crosscheck(&SymMatQ::j(3).scale(&int(5)).unwrap(), 5, -1).unwrap().dimension, 0);
    }
}
