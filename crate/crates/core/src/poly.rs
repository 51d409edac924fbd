//! Dense polynomials over a prime field `F_p`, coefficients low degree first.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[u32], b: &[u32], p: u32) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let da = match degree(a) {
        Some(d) if d >= db => d,
        _ => return (Vec::new(), trim(a.to_vec())),
    };
    let mut q = vec![0u32; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db] % p as u64 * lead_inv % p as u64;
        q[i] = c as u32;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let t = c * bj as u64 % p as u64;
            r[i + j] = (r[i + j] + p as u64 - t) % p as u64;
        }
    }
    r.truncate(db);
    (trim(q), trim(r.into_iter().map(|c| c as u32).collect()))
}

pub(crate) fn rem(a: &[u32], b: &[u32], p: u32) -> Poly {
    divrem(a, b, p).1
}

pub(crate) fn monic(a: Poly, p: u32) -> Poly {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = inv_mod(a[d], p) as u64;
            a.into_iter().map(|c| (c as u64 * inv % p as u64) as u32).collect()
        }
    }
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(x, p)
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

/// `base^e mod m`, exponent as u128 to accommodate `p^k` for large k.
pub(crate) fn powmod(base: &[u32], mut e: u128, m: &[u32], p: u32) -> Poly {
    let mut r: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    trim(r)
}

/// Ben-Or irreducibility test for a monic polynomial over `F_p`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = powmod(&xp, p as u128, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_mod_3() {
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3)); // x^2 - 1
        assert!(is_irreducible(&[1, 2, 0, 1], 3)); // x^3 + 2x + 1
    }
}
