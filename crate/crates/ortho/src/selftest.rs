//! Quick invariant suites behind `ortho selftest`.

use serde_json::{json, Map, Value};

use ortho_core::dl::{
    closed_form_average, double_cosets_solver, dl_char_value_brute, dl_value_on_class, gl_classes, inner_products,
    FixedGroupData, InvolutionData, TorusCharacter, TorusSpec,
};
use ortho_core::distinction::{
    depth_zero_crosscheck, distinguished_dimension, eta_trivial_evidence, padic_depth_zero_crosscheck,
    similitude_structure, DistinctionInput, InvolutionOrbitLabel,
};
use ortho_core::ff::{regular_orbit_reps, FF};
use ortho_core::green::green_function;
use ortho_core::mat::{enumerate_gl, gl_order, jordan_decomposition, SymFormFF};
use ortho_core::orth::{orth_group, spinor_sign, GroupKind, OrthChar};
use ortho_core::qform::{
    classify_orbit, congruence_transform, hilbert_symbol, hilbert_symbol_brute, in_theta_j, invariants,
};
use ortho_core::rat::{int, MatQ, SymMatQ};
use ortho_core::tame::{construct_j_pair, depth, TameExt};
use ortho_core::Result;

type Check = (&'static str, fn() -> Result<bool>);

fn ff_checks() -> Vec<Check> {
    vec![
        ("dlog_round_trip_f27", || {
            let k = FF::new(3, 3)?;
            let g = k.primitive_root();
            let ok = k.units().all(|x| k.discrete_log(x).map(|e| k.pow(g, e) == x).unwrap_or(false));
            Ok(ok)
        }),
        ("norm_is_multiplicative_f25", || {
            let k = FF::new(5, 2)?;
            let us: Vec<_> = k.units().collect();
            for &a in &us {
                for &b in us.iter().step_by(5) {
                    if k.trace_norm(k.mul(a, b), 1)?.1 != k.mul(k.trace_norm(a, 1)?.1, k.trace_norm(b, 1)?.1) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }),
        ("regular_orbits_q3_n3", || Ok(regular_orbit_reps(3, 3).len() == 8)),
    ]
}

fn mat_checks() -> Vec<Check> {
    vec![
        ("gl2_f3_order", || Ok(enumerate_gl(&FF::new(3, 1)?, 2, 1000)?.len() as u64 == gl_order(3, 2))),
        ("jordan_parts_commute_gl2_f5", || {
            let f = FF::new(5, 1)?;
            for g in enumerate_gl(&f, 2, 1000)? {
                let (s, u) = jordan_decomposition(&f, &g)?;
                if s.mul(&f, &u) != g || s.mul(&f, &u) != u.mul(&f, &s) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ]
}

fn orth_checks() -> Vec<Check> {
    vec![
        ("o3_f3_order", || {
            let f = FF::new(3, 1)?;
            Ok(orth_group(&f, &SymFormFF::identity(&f, 3), GroupKind::O)?.len() == 48)
        }),
        ("spinor_sign_homomorphism_o3_f3", || {
            let f = FF::new(3, 1)?;
            let id = SymFormFF::identity(&f, 3);
            let o = orth_group(&f, &id, GroupKind::O)?.elements;
            for g in &o {
                for h in &o {
                    if spinor_sign(&f, &id, &g.mul(&f, h))? != spinor_sign(&f, &id, g)? * spinor_sign(&f, &id, h)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }),
    ]
}

fn green_checks() -> Vec<Check> {
    vec![
        ("elliptic_degree_gl3_f3", || Ok(green_function(3, 3, &[3], &[1, 1, 1])? == 16)),
        ("regular_unipotent_is_one", || {
            Ok([[3u32].as_slice(), &[2, 1], &[1, 1, 1]].iter().all(|t| green_function(3, 5, t, &[3]) == Ok(1)))
        }),
    ]
}

fn dl_checks() -> Vec<Check> {
    vec![
        ("norm_one_and_orthogonal_to_trivial", || {
            let f = FF::new(3, 1)?;
            let t = TorusSpec::elliptic(&f, 3)?;
            for c in regular_orbit_reps(3, 3) {
                if inner_products(&f, &t, &TorusCharacter::elliptic(c))? != (1, 0) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        ("brute_equals_class_form_gl3_f3", || {
            let f = FF::new(3, 1)?;
            let t = TorusSpec::elliptic(&f, 3)?;
            let group = enumerate_gl(&f, 3, 20_000)?;
            let lam = TorusCharacter::elliptic(regular_orbit_reps(3, 3)[0]);
            for c in gl_classes(&f, 3)?.iter().step_by(4) {
                if !dl_char_value_brute(&f, &t, &lam, &c.rep, &group)?.equals(&dl_value_on_class(&t, &lam, &c.key)?) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        ("orthogonal_average_closed_form_q3", || {
            let f = FF::new(3, 1)?;
            let t = TorusSpec::elliptic(&f, 3)?;
            let nu = SymFormFF::identity(&f, 3);
            let data = FixedGroupData::new(&f, &nu, GroupKind::O)?;
            for c in regular_orbit_reps(3, 3) {
                let lam = TorusCharacter::elliptic(c);
                for chi in OrthChar::ALL {
                    let m1 = InvolutionData::new(nu, GroupKind::O, chi)?.chi_at_minus_one(&f)?;
                    if data.average(&t, &lam, chi)? != closed_form_average(&lam, m1)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }),
        ("one_double_coset_q5", || {
            let f = FF::new(5, 1)?;
            let t = TorusSpec::elliptic(&f, 3)?;
            let r = double_cosets_solver(&f, &t, &SymFormFF::identity(&f, 3))?;
            Ok(r.double_cosets == 1 && r.fixed_points_are_pm_one(&f, 3))
        }),
    ]
}

fn qform_checks() -> Vec<Check> {
    vec![
        ("hilbert_closed_form_equals_brute", || {
            for p in [3u64, 5, 7] {
                for a in [-7i64, -3, -1, 1, 2, 3, 5, 6, 10, 14] {
                    for b in [-5i64, -1, 2, 3, 7, 15] {
                        if hilbert_symbol(&int(a), &int(b), p)? != hilbert_symbol_brute(&int(a), &int(b), p)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }),
        ("congruence_invariance", || {
            let a = SymMatQ::new(MatQ::from_ints(&[vec![2, 1, 0], vec![1, 5, 3], vec![0, 3, 15]])?)?;
            let t = MatQ::from_ints(&[vec![1, 2, 0], vec![0, 1, 3], vec![1, 0, 1]])?;
            let b = a.congruent(&t)?;
            let mut ok = true;
            for p in [3u64, 5, 7] {
                ok &= invariants(&a, p)? == invariants(&b, p)?;
                let tr = congruence_transform(&a, &b, p, 8)?;
                ok &= a.matrix().congruent(&tr).congruent_mod(b.matrix(), p, 8);
            }
            Ok(ok)
        }),
        ("j_is_split", || Ok(in_theta_j(&SymMatQ::j(3), 5)? && classify_orbit(&SymMatQ::identity(3), 5)?.hasse == 1)),
    ]
}

fn tame_checks() -> Vec<Check> {
    vec![
        ("cube_root_of_five_trace_form", || {
            let e = TameExt::new(5, 3, 1, None)?;
            let nu = e.trace_form(&e.one(), &e.power_basis(&e.y())?)?;
            Ok(nu.det() == int(-675))
        }),
        ("construct_j_exact_and_stable", || {
            let ok1 = construct_j_pair(&TameExt::new(5, 3, 1, None)?, 8)?.certificate.exact;
            let c = construct_j_pair(&TameExt::new(5, 3, 3, None)?, 12)?.certificate;
            Ok(ok1 && c.ramified_exact && c.tensor_exact && c.unramified_precision == Some(12))
        }),
        ("quadratic_subfield_counts", || {
            Ok(TameExt::new(5, 1, 3, None)?.y_ef()? == 1
                && TameExt::new(5, 2, 1, None)?.y_ef()? == 2
                && TameExt::new(3, 1, 2, None)?.y_ef()? == 2)
        }),
        ("depth", || Ok(depth(4, 3)? == int(1))),
    ]
}

fn distinction_checks() -> Vec<Check> {
    vec![
        ("decision_matches_crosscheck", || {
            for p in [3u64, 5] {
                for split in [true, false] {
                    let nu = InvolutionOrbitLabel::representative(p, 3, split)?;
                    for sign in [1, -1] {
                        let label = InvolutionOrbitLabel::of(&nu, p)?;
                        let d = distinguished_dimension(&DistinctionInput::Orbit { label, sign })?;
                        if padic_depth_zero_crosscheck(&nu, p, sign)?.dimension != d.dimension {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }),
        ("finite_crosscheck_q3", || {
            let f = FF::new(3, 1)?;
            let id = SymFormFF::identity(&f, 3);
            let lam = regular_orbit_reps(3, 3).into_iter().find(|l| l.at_minus_one() == 1).unwrap();
            Ok(depth_zero_crosscheck(3, 3, &lam, &id, 1)?.average == 1)
        }),
        ("eta_trivial_q3", || Ok(eta_trivial_evidence(3, 3)?.trivial)),
        ("similitudes_gl3_f3", || {
            let f = FF::new(3, 1)?;
            let r = similitude_structure(&f, &SymFormFF::identity(&f, 3))?;
            Ok(r.product_ok && r.ratio_ok)
        }),
    ]
}

pub const SUITES: [&str; 8] = ["ff", "mat", "orth", "green", "dl", "qform", "tame", "distinction"];

fn suite(name: &str) -> Option<Vec<Check>> {
    Some(match name {
        "ff" => ff_checks(),
        "mat" => mat_checks(),
        "orth" => orth_checks(),
        "green" => green_checks(),
        "dl" => dl_checks(),
        "qform" => qform_checks(),
        "tame" => tame_checks(),
        "distinction" => distinction_checks(),
        _ => return None,
    })
}

/// Runs one suite or all of them; `passed` is false if any check failed or
/// returned an error.
pub fn run(only: Option<&str>) -> core::result::Result<Value, String> {
    let names: Vec<&str> = match only {
        Some(n) if suite(n).is_some() => vec![n],
        Some(n) => return Err(format!("unknown suite {n:?}; known: {}", SUITES.join(", "))),
        None => SUITES.to_vec(),
    };
    let mut all_ok = true;
    let mut suites = Map::new();
    for name in names {
        let mut checks = Map::new();
        let mut ok = true;
        for (check, f) in suite(name).unwrap() {
            let v = match f() {
                Ok(b) => json!(b),
                Err(e) => json!(format!("error: {e}")),
            };
            ok &= v == json!(true);
            checks.insert(check.into(), v);
        }
        all_ok &= ok;
        suites.insert(name.into(), json!({"passed": ok, "checks": checks}));
    }
    Ok(json!({"passed": all_ok, "suites": suites}))
}
