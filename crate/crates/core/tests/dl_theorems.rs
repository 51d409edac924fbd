//! Orthogonal averages of Deligne–Lusztig characters of `GL_3(F_3)` against
//! the double-coset sum, the orbit sum with brute indices, and the closed form.

use ortho_core::dl::{
    class_key, dl_char_value_brute, dl_value_on_class, gl_classes, double_cosets_brute, double_cosets_solver, orbit_reformulation,
    closed_form_average, FixedGroupData, InvolutionData, TorusCharacter, TorusSpec, XiStructure,
};
use ortho_core::ff::{regular_orbit_reps, FF};
use ortho_core::mat::{enumerate_gl, MatFF, SymFormFF};
use ortho_core::orth::{GroupKind, OrthChar};

struct Setup {
    f: FF,
    t: TorusSpec,
    group: Vec<MatFF>,
}

fn setup() -> Setup {
    let f = FF::new(3, 1).unwrap();
    let t = TorusSpec::elliptic(&f, 3).unwrap();
    let group = enumerate_gl(&f, 3, 20_000).unwrap();
    Setup { f, t, group }
}

#[test]
fn brute_matches_class_form_on_every_class() {
    let s = setup();
    let lams: Vec<TorusCharacter> = [1u64, 2, 13].iter().map(|&m| TorusCharacter::elliptic(ortho_core::ff::TorusChar::new(3, 3, m))).collect();
    for c in gl_classes(&s.f, 3).unwrap() {
        for lam in &lams {
            let brute = dl_char_value_brute(&s.f, &s.t, lam, &c.rep, &s.group).unwrap();
            let fast = dl_value_on_class(&s.t, lam, &c.key).unwrap();
            assert!(brute.equals(&fast), "class {:?}", c.key);
        }
    }
}

#[test]
fn split_torus_brute_matches_class_form() {
    let s = setup();
    let t = TorusSpec::new(&s.f, &[2, 1]).unwrap();
    let lam = TorusCharacter::new(vec![
        ortho_core::ff::TorusChar::new(3, 2, 1),
        ortho_core::ff::TorusChar::new(3, 1, 1),
    ])
    .unwrap();
    for c in gl_classes(&s.f, 3).unwrap() {
        let brute = dl_char_value_brute(&s.f, &t, &lam, &c.rep, &s.group).unwrap();
        assert!(brute.equals(&dl_value_on_class(&t, &lam, &c.key).unwrap()));
    }
}

#[test]
fn galois_invariance_and_central_twist() {
    let s = setup();
    let lam = TorusCharacter::elliptic(ortho_core::ff::TorusChar::new(3, 3, 5));
    let twisted = lam.frobenius_twist();
    let z = MatFF::scalar(&s.f, 3, s.f.int(-1));
    let zi = s.t.minus_one();
    let lz = lam.value(&s.t.elements()[zi]);
    for c in gl_classes(&s.f, 3).unwrap() {
        let a = dl_value_on_class(&s.t, &lam, &c.key).unwrap();
        assert!(a.equals(&dl_value_on_class(&s.t, &twisted, &c.key).unwrap()));
        let zg = class_key(&s.f, &z.mul(&s.f, &c.rep)).unwrap();
        let b = dl_value_on_class(&s.t, &lam, &zg).unwrap();
        assert!(b.equals(&lz.mul(&a).unwrap()));
    }
}

#[test]
fn both_sides_agree_and_match_closed_form() {
    let s = setup();
    let nu = SymFormFF::identity(&s.f, 3);
    let regular = regular_orbit_reps(3, 3);
    assert!(regular.len() >= 8);
    let mut checked = 0;
    for kind in [GroupKind::O, GroupKind::SO] {
        let fixed = FixedGroupData::new(&s.f, &nu, kind).unwrap();
        let xi = XiStructure::new(&s.f, &s.t, &nu, kind, &s.group).unwrap();
        for c in &regular {
            let lam = TorusCharacter::elliptic(*c);
            for chi in OrthChar::ALL {
                let lhs = fixed.average(&s.t, &lam, chi).unwrap();
                let (rhs, cosets) = xi.rhs(&s.t, &lam, chi).unwrap();
                assert_eq!(lhs, rhs, "λ={} χ={} {:?}", c.index, chi.name(), kind);
                if kind == GroupKind::O {
                    let inv = InvolutionData::new(nu.clone(), kind, chi).unwrap();
                    let chi_m1 = inv.chi_at_minus_one(&s.f).unwrap();
                    assert_eq!(lhs, closed_form_average(&lam, chi_m1).unwrap());
                    assert_eq!(cosets as i64, lhs);
                    let orbits = orbit_reformulation(&s.f, &s.t, &lam, &inv, &xi).unwrap();
                    assert_eq!(orbits.total, lhs);
                    assert!(orbits.terms.iter().all(|term| term.m_t == 1));
                    assert_eq!(orbits.terms.len() as i64, lhs);
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 2 * 4 * 8);
}

#[test]
fn double_cosets_brute_and_solver_at_q3() {
    let s = setup();
    let nu = SymFormFF::identity(&s.f, 3);
    let brute = double_cosets_brute(&s.f, &s.t, &nu, &s.group).unwrap();
    let solver = double_cosets_solver(&s.f, &s.t, &nu).unwrap();
    assert_eq!(brute.double_cosets, 1);
    assert_eq!(solver.double_cosets, 1);
    assert!(brute.fixed_points_are_pm_one(&s.f, 3));
    assert!(solver.fixed_points_are_pm_one(&s.f, 3));
}

#[test]
fn double_cosets_solver_at_q5() {
    let f = FF::new(5, 1).unwrap();
    let t = TorusSpec::elliptic(&f, 3).unwrap();
    let rep = double_cosets_solver(&f, &t, &SymFormFF::identity(&f, 3)).unwrap();
    assert_eq!(rep.double_cosets, 1);
    assert!(rep.fixed_points_are_pm_one(&f, 3));
}
