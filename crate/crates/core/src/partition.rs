//! Integer partitions, symmetric-group characters (Murnaghan–Nakayama) and
//! Kostka–Foulkes polynomials via the charge statistic.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Partition = Vec<u32>;

/// All partitions of `n`, parts descending, in reverse lexicographic order
/// (`(n)` first).
pub(crate) fn partitions(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Partition, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn is_partition_of(lam: &[u32], n: u32) -> bool {
    lam.iter().all(|&x| x > 0) && lam.windows(2).all(|w| w[0] >= w[1]) && lam.iter().sum::<u32>() == n
}

pub(crate) fn conjugate(lam: &[u32]) -> Partition {
    let top = lam.first().copied().unwrap_or(0);
    (1..=top).map(|i| lam.iter().filter(|&&x| x >= i).count() as u32).collect()
}

/// `n(λ) = Σ (i − 1) λ_i`.
pub(crate) fn n_stat(lam: &[u32]) -> u32 {
    lam.iter().enumerate().map(|(i, &x)| i as u32 * x).sum()
}

/// Irreducible character `χ^λ` of `S_n` at cycle type `ρ`.
pub(crate) fn sn_character(lam: &[u32], rho: &[u32]) -> i64 {
    let l = lam.len();
    let beta: Vec<i64> = lam.iter().enumerate().map(|(i, &x)| x as i64 + (l - 1 - i) as i64).collect();
    mn_rec(&beta, rho)
}

fn mn_rec(beta: &[i64], rho: &[u32]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > nb && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut next = beta.to_vec();
        next[i] = nb;
        total += sign * mn_rec(&next, rest);
    }
    total
}

/// Semistandard tableaux of the given shape and content, as rows.
pub(crate) fn ssyt(shape: &[u32], content: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut rows: Vec<Vec<u32>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut remaining = content.to_vec();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<u32>>,
        remaining: &mut Vec<u32>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if k == cells.len() {
            out.push(rows.clone());
            return;
        }
        let (r, c) = cells[k];
        for letter in 1..=remaining.len() as u32 {
            if remaining[letter as usize - 1] == 0 {
                continue;
            }
            if c > 0 && rows[r][c - 1] > letter {
                continue;
            }
            if r > 0 && rows[r - 1][c] >= letter {
                continue;
            }
            rows[r][c] = letter;
            remaining[letter as usize - 1] -= 1;
            rec(k + 1, cells, rows, remaining, out);
            remaining[letter as usize - 1] += 1;
            rows[r][c] = 0;
        }
    }
    rec(0, &cells, &mut rows, &mut remaining, &mut out);
    out
}

/// Charge of a word whose content is a partition.
pub(crate) fn charge(word: &[u32]) -> u32 {
    let mut used = vec![false; word.len()];
    let mut total = 0;
    loop {
        // a standard subword: first 1 from the right, then 2 leftwards
        // cyclically, and so on
        let Some(mut pos) = (0..word.len()).rev().find(|&i| !used[i] && word[i] == 1) else {
            break;
        };
        used[pos] = true;
        let mut index = 0;
        let mut letter = 2;
        loop {
            let left = (0..pos).rev().find(|&i| !used[i] && word[i] == letter);
            let next = match left {
                Some(i) => Some(i),
                None => {
                    let wrapped = (pos + 1..word.len()).rev().find(|&i| !used[i] && word[i] == letter);
                    if wrapped.is_some() {
                        index += 1;
                    }
                    wrapped
                }
            };
            let Some(i) = next else { break };
            used[i] = true;
            total += index;
            pos = i;
            letter += 1;
        }
    }
    total
}

/// Reading word of a tableau: rows from bottom to top, each left to right.
pub(crate) fn reading_word(rows: &[Vec<u32>]) -> Vec<u32> {
    rows.iter().rev().flat_map(|r| r.iter().copied()).collect()
}

/// Coefficients of the Kostka–Foulkes polynomial `K_{λμ}(t)`, low degree first.
pub(crate) fn kostka_foulkes(lam: &[u32], mu: &[u32]) -> Vec<i64> {
    let mut coeffs: Vec<i64> = Vec::new();
    for t in ssyt(lam, mu) {
        let c = charge(&reading_word(&t)) as usize;
        if coeffs.len() <= c {
            coeffs.resize(c + 1, 0);
        }
        coeffs[c] += 1;
    }
    coeffs
}

/// `z_ρ = Π i^{m_i} m_i!`.
pub(crate) fn z_rho(rho: &[u32]) -> u64 {
    let mut z = 1u64;
    let mut i = 0;
    while i < rho.len() {
        let part = rho[i];
        let m = rho[i..].iter().take_while(|&&x| x == part).count() as u64;
        z *= (part as u64).pow(m as u32) * (1..=m).product::<u64>();
        i += m as usize;
    }
    z
}
