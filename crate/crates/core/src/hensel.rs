//! Square roots in `Z_p` by Hensel lifting, truncated to rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::{residue, split_valuation, unit_legendre, Rat};

/// A square root of `a` modulo the odd prime `p`, if one exists.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let pb = BigInt::from(p);
    let pow = |b: u64, e: u64| -> u64 {
        BigInt::from(b).modpow(&BigInt::from(e), &pb).try_into().expect("residue fits u64")
    };
    if pow(a, (p - 1) / 2) != 1 {
        return None;
    }
    // Tonelli–Shanks
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow(z, (p - 1) / 2) == p - 1).expect("nonresidue exists");
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut m, mut c, mut t, mut r) = (s, pow(z, q), pow(a, q), pow(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow(c, 1 << (m - i - 1));
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// `x` with `x² ≡ u (mod p^k)` for a `p`-adic unit `u` that is a square.
pub(crate) fn sqrt_unit_mod(u: &Rat, p: u64, k: u32) -> Option<BigInt> {
    let u0: u64 = residue(u, p, 1).try_into().ok()?;
    let mut x = BigInt::from(sqrt_mod_prime(u0, p)?);
    let pb = BigInt::from(p);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        let target = residue(u, p, prec);
        // Newton step x ← x − (x² − u)/(2x)
        let inv2x = (BigInt::from(2) * &x).modpow(&(&m - &m / &pb - BigInt::one()), &m);
        x = (&x - (&x * &x - target) * inv2x).mod_floor(&m);
    }
    Some(x)
}

/// Whether the nonzero rational `c` is a square in `Q_p`.
pub(crate) fn is_padic_square(c: &Rat, p: u64) -> bool {
    match split_valuation(c, p) {
        Ok((v, u)) => v % 2 == 0 && unit_legendre(&u, p) == 1,
        Err(_) => false,
    }
}

/// A rational `x` with `v_p(x² − c) ≥ v_p(c) + k`, if `c` is a nonzero
/// square in `Q_p`.
pub(crate) fn padic_sqrt(c: &Rat, p: u64, k: u32) -> Option<Rat> {
    if c.is_zero() || !is_padic_square(c, p) {
        return None;
    }
    let (v, u) = split_valuation(c, p).ok()?;
    let r = sqrt_unit_mod(&u, p, k)?;
    let half = v / 2;
    let scale = Rat::from_integer(BigInt::from(p).pow(half.unsigned_abs() as u32));
    let r = Rat::from_integer(r);
    Some(if half >= 0 { r * scale } else { r / scale })
}
