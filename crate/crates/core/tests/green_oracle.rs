//! Green functions against a brute-force oracle: the permutation character
//! of `GL_k(F_q)` on partial flags of type `μ`, evaluated at a unipotent `u`,
//! counts `u`-stable flags; it equals `(1/k!) Σ_{w ∈ S_k} φ_μ(w) Q_{type(w)}(u)`
//! where `φ_μ(w)` counts cosets of the Young subgroup fixed by `w`.

use std::collections::BTreeSet;

use ortho_core::ff::{FFElem, FF};
use ortho_core::green::green_function;
use ortho_core::mat::MatFF;

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn cycle_type(w: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; w.len()];
    let mut t = Vec::new();
    for s in 0..w.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = w[x];
            len += 1;
        }
        t.push(len);
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Assignments of points to blocks of sizes `mu`, constant along `w`.
fn fixed_cosets(mu: &[u32], w: &[usize]) -> i64 {
    let n = w.len();
    let mut count = 0;
    let blocks = mu.len();
    let total = blocks.pow(n as u32);
    for mut code in 0..total {
        let assign: Vec<usize> = (0..n)
            .map(|_| {
                let b = code % blocks;
                code /= blocks;
                b
            })
            .collect();
        let sizes_ok = (0..blocks).all(|b| assign.iter().filter(|&&a| a == b).count() as u32 == mu[b]);
        if sizes_ok && (0..n).all(|i| assign[w[i]] == assign[i]) {
            count += 1;
        }
    }
    count
}

fn vec_code(f: &FF, v: &[FFElem]) -> u64 {
    v.iter().rev().fold(0, |acc, &x| acc * f.size() + x.code() as u64)
}

fn all_subspaces(f: &FF, k: usize) -> Vec<(usize, BTreeSet<u64>)> {
    // every subspace as the span of some vectors; dedupe by the full point set
    let q = f.size();
    let vectors: Vec<Vec<FFElem>> = (0..q.pow(k as u32))
        .map(|mut c| {
            (0..k)
                .map(|_| {
                    let e = f.from_code(c % q);
                    c /= q;
                    e
                })
                .collect()
        })
        .collect();
    let mut found: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    let mut layer: Vec<Vec<Vec<FFElem>>> = vec![vec![]];
    found.insert([0].into_iter().collect());
    let mut out = vec![(0usize, [0u64].into_iter().collect::<BTreeSet<u64>>())];
    for d in 1..=k {
        let mut next = Vec::new();
        for basis in &layer {
            let span = span_set(f, basis);
            for v in &vectors {
                if span.contains(&vec_code(f, v)) {
                    continue;
                }
                let mut b = basis.clone();
                b.push(v.clone());
                let s = span_set(f, &b);
                if found.insert(s.clone()) {
                    out.push((d, s));
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    out
}

fn span_set(f: &FF, basis: &[Vec<FFElem>]) -> BTreeSet<u64> {
    let q = f.size();
    let k = basis.first().map_or(0, |b| b.len());
    let mut out = BTreeSet::new();
    for mut c in 0..q.pow(basis.len() as u32) {
        let mut v = vec![f.zero(); k];
        for b in basis {
            let t = f.from_code(c % q);
            c /= q;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(t, y));
            }
        }
        out.insert(vec_code(f, &v));
    }
    out
}

fn decode(f: &FF, k: usize, mut c: u64) -> Vec<FFElem> {
    (0..k)
        .map(|_| {
            let e = f.from_code(c % f.size());
            c /= f.size();
            e
        })
        .collect()
}

fn jordan_unipotent(f: &FF, lam: &[u32]) -> MatFF {
    let k: u32 = lam.iter().sum();
    let mut m = MatFF::identity(f, k as usize);
    let mut start = 0usize;
    for &part in lam {
        for i in 0..part as usize - 1 {
            m.set(start + i, start + i + 1, f.one());
        }
        start += part as usize;
    }
    m
}

fn stable_flag_count(f: &FF, k: usize, u: &MatFF, subspaces: &[(usize, BTreeSet<u64>)], mu: &[u32]) -> i64 {
    let stable: Vec<&(usize, BTreeSet<u64>)> = subspaces
        .iter()
        .filter(|(_, s)| s.iter().all(|&c| s.contains(&vec_code(f, &u.apply(f, &decode(f, k, c))))))
        .collect();
    let dims: Vec<usize> = mu.iter().scan(0usize, |acc, &m| {
        *acc += m as usize;
        Some(*acc)
    }).collect();
    fn rec(stable: &[&(usize, BTreeSet<u64>)], dims: &[usize], prev: &BTreeSet<u64>) -> i64 {
        let Some((&d, rest)) = dims.split_first() else { return 1 };
        stable
            .iter()
            .filter(|(dd, s)| *dd == d && prev.is_subset(s))
            .map(|(_, s)| rec(stable, rest, s))
            .sum()
    }
    rec(&stable, &dims, &[0u64].into_iter().collect())
}

fn check(p: u64, deg: u32, k: u32) {
    let f = FF::new(p, deg).unwrap();
    let big_q = f.size();
    let subs = all_subspaces(&f, k as usize);
    let perms = permutations(k as usize);
    let fact: i64 = (1..=k as i64).product();
    for lam in partitions(k) {
        let u = jordan_unipotent(&f, &lam);
        for mu in partitions(k) {
            let brute = stable_flag_count(&f, k as usize, &u, &subs, &mu);
            let via_green: i64 = perms
                .iter()
                .map(|w| fixed_cosets(&mu, w) * green_function(k, big_q, &cycle_type(w), &lam).unwrap())
                .sum();
            assert_eq!(fact * brute, via_green, "q={big_q} k={k} u={lam:?} flags={mu:?}");
        }
    }
}

#[test]
fn green_matches_flag_counts_gl2() {
    check(3, 1, 2);
    check(5, 1, 2);
    check(3, 2, 2);
}

#[test]
fn green_matches_flag_counts_gl3() {
    check(3, 1, 3);
    check(5, 1, 3);
}

#[test]
fn green_matches_flag_counts_gl4() {
    check(3, 1, 4);
}
