//! Least modulus `N` for which a prime `p` is not an `l`-th power residue.

use serde::Serialize;

use crate::arith::modular::gcd;
use crate::arith::primes::is_prime_u64;
use crate::arith::units::unit_group;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// Why `p` is not an `l`-th power modulo `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerResidueCertificate {
    pub phi: u64,
    /// `|((Z/N)^×)^l|`.
    pub lth_power_subgroup_size: u64,
    /// `[(Z/N)^× : ((Z/N)^×)^l]`.
    pub subgroup_index: u64,
    /// Discrete logarithm of `p` on the canonical generators.
    pub p_exponents: Vec<u64>,
    /// A generator index `i` with `l | o_i` and `l ∤ e_i`.
    pub witness_generator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerResidueAnswer {
    pub modulus: u64,
    pub certificate: PowerResidueCertificate,
}

const SEARCH_LIMIT: u64 = 100_000_000;

fn certificate(n: u64, p: u64, l: u64) -> Option<PowerResidueCertificate> {
    if gcd(p, n) != 1 {
        return None;
    }
    let group = unit_group(n).expect("n >= 1");
    let exps = group.dlog(p as i128).expect("p is a unit");
    let i = exps
        .iter()
        .zip(&group.orders)
        .position(|(&e, &o)| o % l == 0 && e % l != 0)?;
    let phi = group.order();
    let index = group.power_index(l);
    Some(PowerResidueCertificate {
        phi,
        lth_power_subgroup_size: phi / index,
        subgroup_index: index,
        p_exponents: exps,
        witness_generator: i,
    })
}

fn check_primes(p: u64, l: u64) -> Result<()> {
    for (name, v) in [("p", p), ("l", l)] {
        if !is_prime_u64(v) {
            return Err(Error::Domain(format!("{name} = {v} is not prime")));
        }
    }
    Ok(())
}

fn search(p: u64, l: u64, order: Option<u64>) -> Result<PowerResidueAnswer> {
    check_primes(p, l)?;
    for n in 2..=SEARCH_LIMIT {
        if let Some(lr) = order {
            if crate::arith::factor::euler_phi(n) % lr != 0 {
                continue;
            }
        }
        if let Some(certificate) = certificate(n, p, l) {
            return Ok(PowerResidueAnswer { modulus: n, certificate });
        }
    }
    Err(Error::SearchCap { cap: SEARCH_LIMIT, what: format!("modulus where {p} is not an {l}-th power") })
}

/// Least `N >= 2` with `gcd(p, N) = 1` and `p` not an `l`-th power mod `N`.
pub fn least_non_lth_power_modulus(p: u64, l: u64) -> Result<PowerResidueAnswer> {
    search(p, l, None)
}

/// As [`least_non_lth_power_modulus`] with the extra condition `l^r | φ(N)`.
pub fn least_non_lth_power_modulus_with_order(p: u64, l: u64, r: u32) -> Result<PowerResidueAnswer> {
    let lr = l
        .checked_pow(r)
        .ok_or_else(|| Error::Range(format!("{l}^{r} exceeds 64 bits")))?;
    search(p, l, Some(lr))
}

/// A character mod `n` of order `l` with `χ(p) ≠ 1`, if one exists.
pub fn order_l_character_nontrivial_at(n: u64, p: u64, l: u64) -> Option<DirichletCharacter> {
    let cert = certificate(n, p, l)?;
    let group = unit_group(n).ok()?;
    let mut exps = vec![0u64; group.rank()];
    exps[cert.witness_generator] = 1;
    DirichletCharacter::with_group(group, &exps, l).ok()
}
