//! The fourteen acceptance criteria, one pass/fail line each.
//!
//! Run with `cargo test -p ortho --test acceptance` (add `--release` for the
//! q = 5 sums).

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ortho_core::dl::{
    dl_char_value_brute, dl_value_on_class, double_cosets_brute, double_cosets_solver, gl_classes,
    inner_products, FixedGroupData, InvolutionData, TorusCharacter, TorusSpec, XiStructure,
};
use ortho_core::distinction::{
    distinguished_dimension, eta_trivial_evidence, padic_depth_zero_crosscheck, similitude_structure,
    DistinctionInput, InvolutionOrbitLabel,
};
use ortho_core::ff::{regular_orbit_reps, TorusChar, FF};
use ortho_core::mat::{enumerate_gl, gl_order, MatFF, SymFormFF};
use ortho_core::orth::{orth_group, spinor_sign, GroupKind, OrthChar};
use ortho_core::qform::{classify_orbit, hilbert_symbol, hilbert_symbol_brute, in_theta_j, invariants, square_class};
use ortho_core::rat::{int, rat, valuation, MatQ, Rat, SymMatQ};
use ortho_core::tame::{construct_j_pair, AlgElem, TameExt};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_sym(rng: &mut ChaCha8Rng, p: u64, n: usize) -> SymMatQ {
    loop {
        let mut m = MatQ::zero(n);
        for i in 0..n {
            for j in i..n {
                let c = rng.gen_range(-9i64..=9);
                let k = rng.gen_range(0u32..=2);
                let v = int(c * (p as i64).pow(k));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        if let Ok(s) = SymMatQ::new(m) {
            return s;
        }
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> MatQ {
    loop {
        let m = MatQ::from_fn(n, |_, _| Rat::zero());
        let mut m = m;
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, int(rng.gen_range(-3i64..=3)));
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng, p: u64) -> Rat {
    let c = loop {
        let c = rng.gen_range(-40i64..=40);
        if c != 0 {
            break c;
        }
    };
    let v = rng.gen_range(-2i32..=3);
    let pv = int((p as i64).pow(v.unsigned_abs()));
    if v >= 0 {
        int(c) * pv
    } else {
        int(c) / pv
    }
}

fn random_elem(rng: &mut ChaCha8Rng, ext: &TameExt) -> AlgElem {
    loop {
        let coords = (0..ext.degree()).map(|_| rat(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4))).collect();
        let x = ext.element(coords).unwrap();
        if !x.is_zero() {
            return x;
        }
    }
}

/// Orthogonal averages against `[λ(−1) = χ(−1)]`.
fn c1_orthogonal_average() -> Outcome {
    let mut checked = 0;
    for q in [3u64, 5] {
        let f = ok(FF::new(q, 1))?;
        let t = ok(TorusSpec::elliptic(&f, 3))?;
        let nu = SymFormFF::identity(&f, 3);
        let data = ok(FixedGroupData::new(&f, &nu, GroupKind::O))?;
        for c in regular_orbit_reps(q, 3) {
            let lam = TorusCharacter::elliptic(c);
            for chi in OrthChar::ALL {
                let avg = ok(data.average(&t, &lam, chi))?;
                let chi_m1 = ok(InvolutionData::new(nu, GroupKind::O, chi).and_then(|d| d.chi_at_minus_one(&f)))?;
                let want = i64::from(lam.at_minus_one() == chi_m1);
                ensure!(avg == want, "q={q} λ={} χ={}: average {avg}, expected {want}", c.index, chi.name());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (q, λ, χ) triples"))
}

/// Both sides of the double-coset formula at q = 3.
fn c2_pairing_sides() -> Outcome {
    let f = ok(FF::new(3, 1))?;
    let t = ok(TorusSpec::elliptic(&f, 3))?;
    let group = ok(enumerate_gl(&f, 3, 20_000))?;
    let nu = SymFormFF::identity(&f, 3);
    let lams: Vec<TorusChar> = (0..26).map(|m| TorusChar::new(3, 3, m)).filter(|c| c.is_regular()).collect();
    ensure!(lams.len() >= 10, "only {} regular λ", lams.len());
    let mut checked = 0;
    for kind in [GroupKind::O, GroupKind::SO] {
        let data = ok(FixedGroupData::new(&f, &nu, kind))?;
        let xi = ok(XiStructure::new(&f, &t, &nu, kind, &group))?;
        for c in &lams {
            let lam = TorusCharacter::elliptic(*c);
            for chi in OrthChar::ALL {
                let lhs = ok(data.average(&t, &lam, chi))?;
                let (rhs, _) = ok(xi.rhs(&t, &lam, chi))?;
                ensure!(lhs == rhs, "{kind:?} λ={} χ={}: lhs {lhs} ≠ rhs {rhs}", c.index, chi.name());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cases, {} λ × 4 χ × {{O, SO}}", lams.len()))
}

/// One double coset and fixed points {±1}.
fn c3_double_cosets() -> Outcome {
    let f3 = ok(FF::new(3, 1))?;
    let t3 = ok(TorusSpec::elliptic(&f3, 3))?;
    let id3 = SymFormFF::identity(&f3, 3);
    let group = ok(enumerate_gl(&f3, 3, 20_000))?;
    let brute = ok(double_cosets_brute(&f3, &t3, &id3, &group))?;
    ensure!(brute.double_cosets == 1, "q=3 brute: {} double cosets", brute.double_cosets);
    ensure!(brute.fixed_points_are_pm_one(&f3, 3), "q=3 brute: fixed points are not ±1");
    for q in [3u64, 5] {
        let f = ok(FF::new(q, 1))?;
        let t = ok(TorusSpec::elliptic(&f, 3))?;
        let r = ok(double_cosets_solver(&f, &t, &SymFormFF::identity(&f, 3)))?;
        ensure!(r.double_cosets == 1, "q={q} solver: {} double cosets", r.double_cosets);
        ensure!(r.fixed_points_are_pm_one(&f, 3), "q={q} solver: fixed points are not ±1");
    }
    Ok("brute at q=3, solver at q=3 and q=5".into())
}

/// Exact ramified J and the tensor construction.
fn c4_construct_j() -> Outcome {
    for (p, e) in [(5u64, 3u32), (7, 3), (3, 5)] {
        let pair = ok(construct_j_pair(&ok(TameExt::new(p, e, 1, None))?, 8))?;
        ensure!(pair.nu == SymMatQ::j(e as usize) && pair.certificate.ramified_exact, "(p={p}, e={e}) not exactly J");
    }
    for p in [5u64, 7] {
        for (e, f) in [(3u32, 1u32), (1, 3), (3, 3)] {
            let ext = ok(TameExt::new(p, e, f, None))?;
            let n = (e * f) as usize;
            for prec in [8u32, 12] {
                let pair = ok(construct_j_pair(&ext, prec))?;
                let c = &pair.certificate;
                ensure!(c.ramified_exact && c.tensor_exact, "p={p} (e,f)=({e},{f}): ramified/tensor not exact");
                ensure!(c.unramified_precision == Some(prec), "p={p} (e,f)=({e},{f}): not verified mod p^{prec}");
                ensure!(
                    pair.nu.matrix().congruent_mod(&MatQ::j(n), p, prec as i64),
                    "p={p} (e,f)=({e},{f}): ν ≢ J mod p^{prec}"
                );
                ensure!(ok(ext.trace_form(&pair.a, &pair.basis))? == pair.nu, "certificate ν is not the trace form");
            }
        }
    }
    Ok("exact J_e for 3 (p,e); mod p^8 and p^12 for 6 (p,e,f)".into())
}

/// `det ν¹ = (−1)^{n(n−1)/2} N(f′(β))` and `det ν^a = N(a) det ν¹`.
fn c5_determinants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let exts = [(5u64, 3u32, 1u32), (7, 3, 1), (3, 5, 1), (5, 1, 3), (3, 2, 2), (5, 3, 3)];
    for (p, e, f) in exts {
        let ext = ok(TameExt::new(p, e, f, None))?;
        let n = ext.degree();
        let beta = ext.add(&ext.x(), &ext.y());
        let pb = ok(ext.power_basis(&beta))?;
        let nu1 = ok(ext.trace_form(&ext.one(), &pb))?;
        let g = ok(ext.char_poly(&beta))?;
        ensure!(ok(ext.eval_poly(&g, &beta))?.is_zero(), "char poly does not annihilate β");
        let dg: Vec<Rat> = (1..g.len()).map(|k| &g[k] * int(k as i64)).collect();
        let sign = if (n * (n - 1) / 2) % 2 == 0 { int(1) } else { int(-1) };
        let want = sign * ok(ext.norm(&ok(ext.eval_poly(&dg, &beta))?))?;
        ensure!(nu1.det() == want, "({p},{e},{f}): det ν¹ = {} but formula gives {want}", nu1.det());
        for _ in 0..20 {
            let a = random_elem(&mut rng, &ext);
            let d = ok(ext.trace_form(&a, &pb))?.det();
            ensure!(d == ok(ext.norm(&a))? * nu1.det(), "({p},{e},{f}): det ν^a ≠ N(a) det ν¹");
        }
    }
    Ok("6 extensions × 20 random a".into())
}

/// Orbit classification: congruence stability, eight labels, the excluded
/// binary label.
fn c6_classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [3u64, 5, 7] {
        let mut labels = BTreeSet::new();
        let excluded_disc = ok(square_class(&int(-1), p))?;
        for i in 0..500 {
            let n = [2usize, 3, 3, 4][i % 4];
            let a = random_sym(&mut rng, p, n);
            let inv = ok(invariants(&a, p))?;
            for _ in 0..5 {
                let b = ok(a.congruent(&random_invertible(&mut rng, n)))?;
                ensure!(ok(invariants(&b, p))? == inv, "p={p}: invariants changed under congruence");
            }
            if n == 2 {
                ensure!(!(inv.disc == excluded_disc && inv.hasse == -1), "p={p}: excluded binary label realized");
            }
            if n == 3 {
                labels.insert(ok(classify_orbit(&a, p))?);
            }
        }
        ensure!(labels.len() == 8, "p={p}: {} labels at n=3", labels.len());
    }
    Ok("500 forms × 5 transforms per p; 8 ternary labels".into())
}

/// Integral forms with unit determinant have trivial Hasse invariants.
fn c7_unimodular() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3u64, 5, 7] {
        let mut found = 0;
        while found < 100 {
            let n = rng.gen_range(2usize..=4);
            let mut m = MatQ::zero(n);
            for i in 0..n {
                for j in i..n {
                    let v = int(rng.gen_range(-20i64..=20));
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            let d = m.det();
            if d.is_zero() || ok(valuation(&d, p))? != 0 {
                continue;
            }
            let inv = ok(invariants(&ok(SymMatQ::new(m))?, p))?;
            ensure!(inv.hasse == 1 && inv.hasse0 == 1, "p={p}: Hasse ({}, {})", inv.hasse, inv.hasse0);
            found += 1;
        }
    }
    Ok("100 matrices per p".into())
}

fn c8_quadratic_subfields() -> Outcome {
    let mut count = 0;
    for p in [3u64, 5, 7] {
        for e in 1u32..=9 {
            for f in 1u32..=9 {
                if e * f > 9 || (e * f) % 2 == 0 || e as u64 % p == 0 {
                    continue;
                }
                let y = ok(ok(TameExt::new(p, e, f, None))?.y_ef())?;
                ensure!(y == 1, "p={p} (e,f)=({e},{f}): y = {y}");
                count += 1;
            }
        }
        for (e, f) in [(2u32, 1u32), (1, 2)] {
            let y = ok(ok(TameExt::new(p, e, f, None))?.y_ef())?;
            ensure!(y == 2, "p={p} (e,f)=({e},{f}): y = {y}");
        }
    }
    Ok(format!("{count} odd-degree extensions plus (2,1), (1,2)"))
}

fn c9_split_trace_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut count = 0;
    for p in [3u64, 5, 7] {
        for (e, f) in [(1u32, 1u32), (3, 1), (1, 3), (5, 1), (1, 5), (3, 3), (7, 1), (1, 7)] {
            if e as u64 % p == 0 {
                continue;
            }
            let ext = ok(TameExt::new(p, e, f, None))?;
            let basis: Vec<AlgElem> = (0..ext.degree()).map(|i| ext.basis_elem(i)).collect();
            for _ in 0..6 {
                let a = random_elem(&mut rng, &ext);
                let nu = ok(ext.trace_form(&a, &basis))?;
                ensure!(ok(in_theta_j(&nu, p))?, "p={p} (e,f)=({e},{f}): ν^a outside Θ_J");
                count += 1;
            }
        }
    }
    Ok(format!("{count} trace forms"))
}

fn c10_similitudes() -> Outcome {
    let f = ok(FF::new(3, 1))?;
    let forms = [
        SymFormFF::identity(&f, 3),
        ok(SymFormFF::new(&f, ok(MatFF::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]))?))?,
    ];
    // determinants 1 and 2 lie in different square classes of F_3
    ensure!(f.is_square(forms[0].matrix().det(&f)) != f.is_square(forms[1].matrix().det(&f)), "forms are equivalent");
    for nu in &forms {
        let r = ok(similitude_structure(&f, nu))?;
        ensure!(r.product_ok, "G_θ ≠ Z·G^θ ({} vs {})", r.similitude_order, r.center_times_fixed);
        ensure!(r.ratio_ok, "μ(G_θ) = {:?} but Z² = {:?}", r.ratios, r.squares);
    }
    Ok("two inequivalent ν on GL_3(F_3)".into())
}

fn c11_commutators_and_spinor() -> Outcome {
    let ev = ok(eta_trivial_evidence(3, 3))?;
    ensure!(ev.commutator_ok, "SO_3(F_3) not in the commutator closure of SO_3(F_9)");
    ensure!(ev.spinor_ok && ev.minus_one_ok, "spinor or −1 check failed");
    let f = ok(FF::new(3, 1))?;
    let id = SymFormFF::identity(&f, 3);
    let o = ok(orth_group(&f, &id, GroupKind::O))?.elements;
    let signs: Vec<i32> = o.iter().map(|g| spinor_sign(&f, &id, g)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for (i, g) in o.iter().enumerate() {
        for (j, h) in o.iter().enumerate() {
            let k = o.iter().position(|x| *x == g.mul(&f, h)).ok_or("O_3(F_3) not closed")?;
            ensure!(signs[k] == signs[i] * signs[j], "spinor sign not multiplicative");
        }
    }
    Ok(format!("closure order {} in |SO_3(F_9)| = {}; {} pairs", ev.commutator_closure_order, ev.big_so_order, o.len() * o.len()))
}

fn c12_dl_consistency() -> Outcome {
    let f = ok(FF::new(3, 1))?;
    let t = ok(TorusSpec::elliptic(&f, 3))?;
    for c in regular_orbit_reps(3, 3) {
        let ip = ok(inner_products(&f, &t, &TorusCharacter::elliptic(c)))?;
        ensure!(ip == (1, 0), "λ={}: inner products {ip:?}", c.index);
    }
    // R(1) = ε_G ε_T |G|_{p'}/|T| with ε_G ε_T = (−1)^{3−1}
    let q = 3u64;
    let p_part = q.pow(3);
    let degree = (gl_order(q, 3) / p_part) / (q.pow(3) - 1);
    let group = ok(enumerate_gl(&f, 3, 20_000))?;
    let lam = TorusCharacter::elliptic(regular_orbit_reps(3, 3)[0]);
    let one = MatFF::identity(&f, 3);
    let r1 = ok(dl_char_value_brute(&f, &t, &lam, &one, &group))?;
    ensure!(r1.as_integer() == Some(degree as i64) && degree == 16, "R(1) = {:?}, oracle {degree}", r1.as_integer());
    let classes = ok(gl_classes(&f, 3))?;
    for c in &classes {
        let b = ok(dl_char_value_brute(&f, &t, &lam, &c.rep, &group))?;
        ensure!(b.equals(&ok(dl_value_on_class(&t, &lam, &c.key))?), "class {:?}: modes differ", c.key);
    }
    Ok(format!("R(1) = {degree}; {} classes", classes.len()))
}

fn c13_hilbert() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in [3u64, 5, 7] {
        for _ in 0..50 {
            let (a, b) = (random_rat(&mut rng, p), random_rat(&mut rng, p));
            let h = ok(hilbert_symbol(&a, &b, p))?;
            ensure!(h == ok(hilbert_symbol_brute(&a, &b, p))?, "p={p}: ({a}, {b}) closed form ≠ brute");
            let c = random_rat(&mut rng, p);
            ensure!(
                ok(hilbert_symbol(&(&a * &c), &b, p))? == h * ok(hilbert_symbol(&c, &b, p))?,
                "p={p}: not multiplicative"
            );
            ensure!(ok(hilbert_symbol(&a, &-a.clone(), p))? == 1, "p={p}: (a, −a) ≠ 1");
        }
    }
    Ok("50 pairs per p".into())
}

fn c14_decision_vs_crosscheck() -> Outcome {
    let mut cells = 0;
    for p in [3u64, 5] {
        for split in [true, false] {
            let nu = ok(InvolutionOrbitLabel::representative(p, 3, split))?;
            for sign in [1, -1] {
                let label = ok(InvolutionOrbitLabel::of(&nu, p))?;
                let d = ok(distinguished_dimension(&DistinctionInput::Orbit { label, sign }))?;
                let c = ok(padic_depth_zero_crosscheck(&nu, p, sign))?;
                ensure!(
                    c.dimension == d.dimension,
                    "p={p} split={split} sign={sign}: closed form {} vs depth zero {}",
                    d.dimension,
                    c.dimension
                );
                ensure!(d.dimension == u32::from(split && sign == 1), "unexpected decision {}", d.dimension);
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} grid cells"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("orthogonal average equals [λ(−1) = χ(−1)] at q = 3, 5", c1_orthogonal_average),
        ("average equals double-coset sum, O and SO, q = 3", c2_pairing_sides),
        ("one double coset, T ∩ G^θ = {±1}, q = 3, 5", c3_double_cosets),
        ("ν^a = J exactly (ramified), mod p^8 and p^12 (unramified)", c4_construct_j),
        ("trace form determinants", c5_determinants),
        ("orbit classification", c6_classification),
        ("unimodular forms have Hasse 1", c7_unimodular),
        ("y_E/F values", c8_quadratic_subfields),
        ("odd-degree trace forms lie in Θ_J", c9_split_trace_forms),
        ("similitudes in GL_3(F_3)", c10_similitudes),
        ("commutator closure and spinor homomorphism", c11_commutators_and_spinor),
        ("Deligne–Lusztig self-consistency", c12_dl_consistency),
        ("Hilbert symbol", c13_hilbert),
        ("closed-form decision vs depth-zero reduction", c14_decision_vs_crosscheck),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
