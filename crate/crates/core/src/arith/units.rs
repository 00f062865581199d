//! Structure of `(Z/NZ)^×`: canonical generators and discrete logarithms.
//!
//! The decomposition is split by prime power. An odd `p^k` contributes its
//! least primitive root, `2^k` contributes `(-1, 5)` for `k >= 3` and `-1`
//! for `k = 2`. Global generators are the CRT lifts that are `1` modulo the
//! other prime-power parts.

use std::collections::HashMap;

use serde::Serialize;

use super::factor::factor_u64;
use super::modular::{crt_pair, gcd, inv_mod, lcm, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// The cyclic pieces of `(Z/p^k)^×` for one prime power dividing the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitComponent {
    pub prime: u64,
    pub exponent: u32,
    pub prime_power: u64,
    /// Generators as residues modulo `prime_power`.
    pub local_generators: Vec<u64>,
    pub orders: Vec<u64>,
    /// Index of this component's first generator in the global list.
    pub offset: usize,
}

impl UnitComponent {
    fn new(prime: u64, exponent: u32, offset: usize) -> Self {
        let prime_power = prime.pow(exponent);
        let (local_generators, orders) = if exponent == 0 {
            (vec![], vec![])
        } else if prime == 2 {
            match exponent {
                0 | 1 => (vec![], vec![]),
                2 => (vec![3], vec![2]),
                k => (vec![prime_power - 1, 5], vec![2, 1u64 << (k - 2)]),
            }
        } else {
            let g = least_primitive_root(prime, exponent);
            (vec![g], vec![(prime - 1) * prime.pow(exponent - 1)])
        };
        UnitComponent { prime, exponent, prime_power, local_generators, orders, offset }
    }

    /// Builds the component of `(Z/p^k)^×` on its own.
    pub fn standalone(prime: u64, exponent: u32) -> Self {
        UnitComponent::new(prime, exponent, 0)
    }

    pub fn rank(&self) -> usize {
        self.local_generators.len()
    }

    /// Exponent vector of a unit modulo `prime_power`.
    pub fn dlog(&self, x: u64) -> Option<Vec<u64>> {
        let q = self.prime_power;
        let x = x % q;
        if gcd(x, q) != 1 {
            return None;
        }
        if self.exponent == 0 {
            return Some(vec![]);
        }
        if self.prime == 2 {
            return match self.exponent {
                0 | 1 => Some(vec![]),
                2 => Some(vec![u64::from(x == 3)]),
                _ => {
                    let neg = x % 4 == 3;
                    let y = if neg { q - x } else { x };
                    let e = discrete_log(5, y, self.orders[1], q)?;
                    Some(vec![u64::from(neg), e])
                }
            };
        }
        discrete_log(self.local_generators[0], x, self.orders[0], q).map(|e| vec![e])
    }

    /// Conductor exponent of the character of `(Z/p^k)^×` that sends generator
    /// `i` to `ζ_m^{exps[i]}`.
    ///
    /// The subgroup `1 + p^j` is generated by `g^{(p-1)p^{j-1}}` for odd `p`
    /// and by `5^{2^{j-2}}` for `p = 2`, `j >= 2`.
    pub fn conductor_exponent(&self, exps: &[u64], m: u64) -> u32 {
        debug_assert_eq!(exps.len(), self.rank());
        if exps.iter().all(|&e| e % m == 0) {
            return 0;
        }
        let p = self.prime;
        if p == 2 {
            let e5 = if self.exponent >= 3 { exps[1] } else { 0 };
            // j = 2: trivial on 1 + 4Z iff e5 == 0.
            let mut j = 2u32;
            let mut scale = 1u64;
            while j < self.exponent {
                if mul_mod(e5, scale, m) == 0 {
                    return j;
                }
                j += 1;
                scale = scale.saturating_mul(2);
            }
            return self.exponent;
        }
        let e = exps[0];
        let mut j = 1u32;
        let mut scale = (p - 1) % m;
        while j < self.exponent {
            if mul_mod(e, scale, m) == 0 {
                return j;
            }
            j += 1;
            scale = mul_mod(scale, p % m, m);
        }
        self.exponent
    }
}

/// The unit group `(Z/NZ)^×` with its canonical cyclic decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    /// Generators as residues modulo `modulus`.
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    pub components: Vec<UnitComponent>,
}

impl UnitGroupStructure {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let mut components = Vec::new();
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for (p, e) in factor_u64(modulus) {
            let comp = UnitComponent::new(p, e, generators.len());
            let rest = modulus / comp.prime_power;
            for (&g, &o) in comp.local_generators.iter().zip(&comp.orders) {
                generators.push(crt_pair(g, comp.prime_power, 1, rest));
                orders.push(o);
            }
            components.push(comp);
        }
        Ok(UnitGroupStructure { modulus, generators, orders, components })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `φ(N)`.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group (Carmichael's `λ(N)`).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn component(&self, p: u64) -> Option<&UnitComponent> {
        self.components.iter().find(|c| c.prime == p)
    }

    /// Exponent vector `e` with `∏ g_i^{e_i} ≡ x (mod N)`, `0 <= e_i < order_i`.
    pub fn dlog(&self, x: i128) -> Result<Vec<u64>> {
        let n = self.modulus;
        let r = x.rem_euclid(n as i128) as u64;
        if gcd(r, n) != 1 {
            return Err(Error::NonUnit { value: x.to_string(), modulus: n });
        }
        let mut out = Vec::with_capacity(self.rank());
        for comp in &self.components {
            let local = comp.dlog(r % comp.prime_power).ok_or_else(|| {
                Error::InternalContradiction(format!("no discrete log of {r} mod {}", comp.prime_power))
            })?;
            out.extend(local);
        }
        Ok(out)
    }

    /// `∏ g_i^{e_i} mod N`.
    pub fn element(&self, exps: &[u64]) -> u64 {
        let n = self.modulus;
        self.generators
            .iter()
            .zip(exps)
            .fold(1 % n, |acc, (&g, &e)| mul_mod(acc, pow_mod(g, e, n), n))
    }

    /// Whether the unit `x` lies in the subgroup of `m`-th powers.
    pub fn is_power(&self, x: i128, m: u64) -> Result<bool> {
        let e = self.dlog(x)?;
        Ok(e.iter().zip(&self.orders).all(|(&ei, &o)| ei % gcd(m, o) == 0))
    }

    /// Index of the `m`-th power subgroup, `∏ gcd(m, o_i)`.
    pub fn power_index(&self, m: u64) -> u64 {
        self.orders.iter().map(|&o| gcd(m, o)).product()
    }
}

/// Canonical structure of `(Z/NZ)^×`.
pub fn unit_group(n: u64) -> Result<UnitGroupStructure> {
    UnitGroupStructure::new(n)
}

/// Discrete logarithm of `x` with respect to the canonical generators mod `n`.
pub fn dlog_units(n: u64, x: i128) -> Result<Vec<u64>> {
    unit_group(n)?.dlog(x)
}

fn multiplicative_order_is(g: u64, order: u64, order_primes: &[u64], modulus: u64) -> bool {
    pow_mod(g, order, modulus) == 1
        && order_primes.iter().all(|&q| pow_mod(g, order / q, modulus) != 1)
}

/// Least positive integer generating `(Z/p^k)^×` for odd prime `p`.
pub fn least_primitive_root(p: u64, k: u32) -> u64 {
    assert!(p > 2 && k >= 1);
    let qs: Vec<u64> = factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
    let p2 = p * p;
    let mut g = 2u64;
    loop {
        if g % p != 0
            && multiplicative_order_is(g % p, p - 1, &qs, p)
            && (k == 1 || pow_mod(g, p - 1, p2) != 1)
        {
            return g;
        }
        g += 1;
    }
}

/// Solves `g^x ≡ h (mod modulus)` where `g` has multiplicative order `order`.
/// Pohlig–Hellman reduction to prime order, baby-step giant-step on each.
pub fn discrete_log(g: u64, h: u64, order: u64, modulus: u64) -> Option<u64> {
    let h = h % modulus;
    if order == 1 {
        return (h == 1 % modulus).then_some(0);
    }
    let mut x_total = 0u64;
    let mut m_total = 1u64;
    for (q, e) in factor_u64(order) {
        let qe = q.pow(e);
        let cof = order / qe;
        let gq = pow_mod(g, cof, modulus);
        let hq = pow_mod(h, cof, modulus);
        let gamma = pow_mod(gq, qe / q, modulus);
        let gq_inv = inv_mod(gq, modulus)?;
        let mut x = 0u64;
        let mut qi = 1u64;
        for i in 0..e {
            let shifted = mul_mod(pow_mod(gq_inv, x, modulus), hq, modulus);
            let hi = pow_mod(shifted, q.pow(e - 1 - i), modulus);
            let d = bsgs_prime_order(gamma, hi, q, modulus)?;
            x += d * qi;
            qi *= q;
        }
        x_total = crt_pair(x_total, m_total, x, qe);
        m_total *= qe;
    }
    Some(x_total)
}

fn bsgs_prime_order(g: u64, h: u64, q: u64, modulus: u64) -> Option<u64> {
    if q <= 64 {
        let mut acc = 1 % modulus;
        for d in 0..q {
            if acc == h {
                return Some(d);
            }
            acc = mul_mod(acc, g, modulus);
        }
        return None;
    }
    let step = (q as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut acc = 1 % modulus;
    for j in 0..step {
        baby.entry(acc).or_insert(j);
        acc = mul_mod(acc, g, modulus);
    }
    let giant = inv_mod(pow_mod(g, step, modulus), modulus)?;
    let mut gamma = h;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            let x = i * step + j;
            if x < q {
                return Some(x);
            }
        }
        gamma = mul_mod(gamma, giant, modulus);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let g8 = unit_group(8).unwrap();
        assert_eq!(g8.generators, vec![7, 5]);
        assert_eq!(g8.orders, vec![2, 2]);
        assert!(unit_group(1).unwrap().generators.is_empty());
        assert!(unit_group(2).unwrap().generators.is_empty());
        let g7 = unit_group(7).unwrap();
        assert_eq!((g7.generators.clone(), g7.orders.clone()), (vec![3], vec![6]));
        assert_eq!(dlog_units(7, 2).unwrap(), vec![2]);
        assert_eq!(dlog_units(8, 1).unwrap(), vec![0, 0]);
        assert_eq!(dlog_units(8, 3).unwrap(), vec![1, 1]);
        assert!(matches!(dlog_units(8, 6), Err(Error::NonUnit { .. })));
    }

    #[test]
    fn primitive_roots_lift() {
        assert_eq!(least_primitive_root(7, 1), 3);
        assert_eq!(least_primitive_root(7, 3), 3);
        // 14 is a primitive root mod 29 but 14^28 = 1 mod 29^2.
        assert_eq!(least_primitive_root(29, 1), 2);
        // 5 is the least primitive root mod 40487 but is not one mod 40487^2.
        assert_eq!(least_primitive_root(40487, 1), 5);
        assert_eq!(least_primitive_root(40487, 2), 10);
    }

    #[test]
    fn generators_generate_by_enumeration() {
        for n in 1..=600u64 {
            let g = unit_group(n).unwrap();
            let phi = (1..=n).filter(|&x| gcd(x, n) == 1).count() as u64;
            assert_eq!(g.order(), phi.max(1), "n = {n}");
            let mut seen = std::collections::HashSet::new();
            let mut idx = vec![0u64; g.rank()];
            loop {
                seen.insert(g.element(&idx));
                let mut i = 0;
                while i < idx.len() {
                    idx[i] += 1;
                    if idx[i] < g.orders[i] {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == idx.len() {
                    break;
                }
            }
            assert_eq!(seen.len() as u64, phi.max(1), "n = {n}");
        }
    }

    #[test]
    fn big_prime_dlog() {
        let p = 1_000_000_007u64;
        let g = unit_group(p).unwrap();
        let e = g.dlog(123_456_789).unwrap();
        assert_eq!(g.element(&e), 123_456_789);
    }
}
