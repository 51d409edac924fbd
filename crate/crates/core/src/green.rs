//! Green functions of `GL_k(F_Q)`, `k ≤ 4`.
//!
//! For a maximal torus of type `ρ` (cycle type of the Frobenius twist) and a
//! unipotent element of Jordan type `λ`,
//!
//! `Q_ρ(λ) = Σ_μ χ^μ(ρ) · Q^{n(λ)} K_{μλ}(1/Q)`,
//!
//! with `χ^μ` the irreducible characters of `S_k` and `K_{μλ}` the
//! Kostka–Foulkes polynomials.

use alloc::collections::BTreeMap;
use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{is_partition_of, kostka_foulkes, n_stat, partitions, sn_character, z_rho, Partition};

pub const MAX_K: u32 = 4;

fn check_args(k: u32, big_q: u64) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::Dimension(format!("Green functions need 1 ≤ k ≤ {MAX_K}, got {k}")));
    }
    if big_q < 3 {
        return Err(Error::Precondition(format!("field size {big_q} must be an odd prime power")));
    }
    Ok(())
}

/// `Q^{n(λ)} K_{μλ}(1/Q)`.
fn modified_kostka(mu: &[u32], lam: &[u32], big_q: i128) -> i128 {
    let top = n_stat(lam) as usize;
    kostka_foulkes(mu, lam)
        .iter()
        .enumerate()
        .map(|(c, &k)| k as i128 * big_q.pow((top - c) as u32))
        .sum()
}

/// `Q^{GL_k(F_Q)}_{T_ρ}(u_λ)`.
pub fn green_function(k: u32, big_q: u64, torus: &[u32], unip: &[u32]) -> Result<i64> {
    check_args(k, big_q)?;
    if !is_partition_of(torus, k) || !is_partition_of(unip, k) {
        return Err(Error::Dimension(format!("torus and unipotent types must be partitions of {k}")));
    }
    let v: i128 = partitions(k)
        .iter()
        .map(|mu| sn_character(mu, torus) as i128 * modified_kostka(mu, unip, big_q as i128))
        .sum();
    i64::try_from(v).map_err(|_| Error::Integrality("Green value overflow".into()))
}

/// All Green values of `GL_k(F_Q)`, keyed by (torus type, unipotent type).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenTable {
    pub k: u32,
    pub big_q: u64,
    pub values: BTreeMap<(Partition, Partition), i64>,
}

impl GreenTable {
    pub fn build(k: u32, big_q: u64) -> Result<GreenTable> {
        check_args(k, big_q)?;
        let mut values = BTreeMap::new();
        for rho in partitions(k) {
            for lam in partitions(k) {
                let v = green_function(k, big_q, &rho, &lam)?;
                values.insert((rho.clone(), lam), v);
            }
        }
        let t = GreenTable { k, big_q, values };
        if !t.orthogonality_holds() {
            return Err(Error::Integrality("Green orthogonality fails".into()));
        }
        Ok(t)
    }

    pub fn get(&self, torus: &[u32], unip: &[u32]) -> Option<i64> {
        self.values.get(&(torus.to_vec(), unip.to_vec())).copied()
    }

    /// `Σ_λ Q_ρ(λ) Q_σ(λ) / |Z(u_λ)| = δ_{ρσ} z_ρ / |T_ρ|`, the
    /// orthogonality relation of Green functions.
    pub fn orthogonality_holds(&self) -> bool {
        let q = BigInt::from(self.big_q);
        let parts = partitions(self.k);
        for rho in &parts {
            for sigma in &parts {
                let mut s = BigRational::zero();
                for lam in &parts {
                    let a = BigInt::from(self.get(rho, lam).unwrap()) * BigInt::from(self.get(sigma, lam).unwrap());
                    s += BigRational::new(a, unipotent_centralizer_order(lam, &q));
                }
                let expect = if rho == sigma {
                    BigRational::new(BigInt::from(z_rho(rho)), torus_order(rho, &q))
                } else {
                    BigRational::zero()
                };
                if s != expect {
                    return false;
                }
            }
        }
        true
    }
}

/// `|T_ρ(F_Q)| = Π (Q^{ρ_i} − 1)`.
pub fn torus_order(rho: &[u32], q: &BigInt) -> BigInt {
    rho.iter().map(|&r| q.pow(r) - BigInt::one()).product()
}

/// `|Z_{GL}(u_λ)| = Q^{Σ λ'_i²} Π_i Π_{j ≤ m_i} (1 − Q^{−j})`.
pub fn unipotent_centralizer_order(lam: &[u32], q: &BigInt) -> BigInt {
    let conj = crate::partition::conjugate(lam);
    let mut exp: u32 = conj.iter().map(|&c| c * c).sum();
    let mut out = BigInt::one();
    let mut i = 0;
    while i < lam.len() {
        let m = lam[i..].iter().take_while(|&&x| x == lam[i]).count() as u32;
        for j in 1..=m {
            // Q^j (1 − Q^{−j}) = Q^j − 1
            out *= q.pow(j) - BigInt::one();
            exp -= j;
        }
        i += m as usize;
    }
    out * q.pow(exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn trivial_rank() {
        assert_eq!(green_function(1, 7, &[1], &[1]).unwrap(), 1);
    }

    #[test]
    fn gl2_values() {
        assert_eq!(green_function(2, 3, &[2], &[1, 1]).unwrap(), -2);
        assert_eq!(green_function(2, 3, &[2], &[2]).unwrap(), 1);
        assert_eq!(green_function(2, 3, &[1, 1], &[1, 1]).unwrap(), 4);
        assert_eq!(green_function(2, 3, &[1, 1], &[2]).unwrap(), 1);
    }

    #[test]
    fn gl3_elliptic_at_q3() {
        let vals: Vec<i64> = [vec![1, 1, 1], vec![2, 1], vec![3]]
            .iter()
            .map(|l| green_function(3, 3, &[3], l).unwrap())
            .collect();
        assert_eq!(vals, vec![16, -2, 1]);
    }

    #[test]
    fn regular_unipotent_gives_one() {
        for k in 1..=4 {
            for rho in partitions(k) {
                assert_eq!(green_function(k, 5, &rho, &[k]).unwrap(), 1);
            }
        }
    }

    #[test]
    fn tables_pass_orthogonality() {
        for k in 1..=4 {
            for q in [3u64, 5, 9] {
                GreenTable::build(k, q).unwrap();
            }
        }
    }

    #[test]
    fn rejects_large_rank() {
        assert!(matches!(green_function(5, 3, &[5], &[5]), Err(Error::Dimension(_))));
        assert!(matches!(green_function(3, 3, &[2], &[3]), Err(Error::Dimension(_))));
    }

    #[test]
    fn degree_formula() {
        // Q_ρ(1) = ε_G ε_T |G|_{p'} / |T|
        for k in 1..=4u32 {
            let q = BigInt::from(3);
            let gpp: BigInt = (1..=k).map(|i| q.pow(i) - BigInt::one()).product();
            for rho in partitions(k) {
                let sign = if (k as usize - rho.len()) % 2 == 0 { 1 } else { -1 };
                let expect = BigInt::from(sign) * &gpp / torus_order(&rho, &q);
                let ones = vec![1u32; k as usize];
                assert_eq!(BigInt::from(green_function(k, 3, &rho, &ones).unwrap()), expect);
            }
        }
    }
}
