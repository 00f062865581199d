#![allow(dead_code)]

use grunwald::arith::modular::{gcd, pow_mod};
use grunwald::arith::rational::{ratio, Rational};
use grunwald::arith::units::UnitComponent;
use grunwald::arith::{euler_phi, unit_group, Place};
use grunwald::characters::{DirichletCharacter, LocalCharacter};
use grunwald::solver::GrunwaldInstance;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A random character mod `n` with values in `μ_λ(n)`.
pub fn random_character(rng: &mut StdRng, n: u64) -> DirichletCharacter {
    let g = unit_group(n).unwrap();
    let lambda = g.exponent();
    let exps: Vec<u64> = g
        .orders
        .iter()
        .map(|&o| {
            let step = lambda / gcd(lambda, o);
            step * rng.gen_range(0..lambda / step)
        })
        .collect();
    DirichletCharacter::with_group(g, &exps, lambda).unwrap()
}

/// `count` characters with moduli in `[1, max_modulus]`, seeded.
pub fn character_corpus(seed: u64, count: usize, max_modulus: u64) -> Vec<DirichletCharacter> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_modulus);
            random_character(&mut rng, n)
        })
        .collect()
}

/// Nonzero rationals with small numerators and denominators, both signs.
pub fn rational_corpus(seed: u64, count: usize) -> Vec<Rational> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut a: i64 = rng.gen_range(1..=10_000);
            if rng.gen_bool(0.5) {
                a = -a;
            }
            ratio(a, rng.gen_range(1..=500))
        })
        .collect()
}

/// Lexicographically first ramified character of exponent `m` at `p` with the
/// least conductor exponent `k <= 4`, sending `p` to `ζ_m^{unif}`.
pub fn small_ramified(p: u64, m: u64, unif: u64) -> Option<LocalCharacter> {
    for k in 1..=4u32 {
        let comp = UnitComponent::standalone(p, k);
        let steps: Vec<u64> = comp.orders.iter().map(|&o| m / gcd(m, o)).collect();
        let mut cur = vec![0u64; comp.rank()];
        loop {
            if let Ok(c) = LocalCharacter::new(Place::Finite(p), m, k, cur.clone(), unif, 0) {
                return Some(c);
            }
            let mut i = cur.len();
            let mut done = true;
            while i > 0 {
                i -= 1;
                cur[i] += steps[i];
                if cur[i] < m {
                    done = false;
                    break;
                }
                cur[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Unramified,
    SmallRamified,
}

/// The instance matrix: `S ⊆ {2, 3, 5, 7, ∞}`, `m ∈ {2, 3, 4, 8, 9}`, two data kinds.
pub fn instance_matrix() -> Vec<(DataKind, GrunwaldInstance)> {
    let base = [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7), Place::Real];
    let mut out = Vec::new();
    for m in [2u64, 3, 4, 8, 9] {
        for kind in [DataKind::Unramified, DataKind::SmallRamified] {
            for mask in 0..1u32 << base.len() {
                let mut places = Vec::new();
                for (i, &v) in base.iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        continue;
                    }
                    let chi = match v {
                        Place::Real if m % 2 == 0 => LocalCharacter::sign(m).unwrap(),
                        Place::Real => LocalCharacter::trivial(Place::Real, m),
                        Place::Finite(p) => {
                            let unif = 1 + i as u64 % (m - 1).max(1);
                            match kind {
                                DataKind::Unramified => LocalCharacter::unramified(p, m, unif).unwrap(),
                                DataKind::SmallRamified => small_ramified(p, m, unif)
                                    .unwrap_or_else(|| LocalCharacter::unramified(p, m, unif).unwrap()),
                            }
                        }
                    };
                    places.push(chi);
                }
                out.push((kind, GrunwaldInstance::over_q(m, places).unwrap()));
            }
        }
    }
    out
}

/// Whether `p` is an `l`-th power of a unit mod `n`, by listing all `l`-th powers.
pub fn is_lth_power_brute(p: u64, l: u64, n: u64) -> bool {
    (1..=n).filter(|&y| gcd(y, n) == 1).any(|y| pow_mod(y, l, n) == p % n)
}

pub fn brute_least(p: u64, l: u64, order: Option<u64>) -> u64 {
    (2..)
        .find(|&n| {
            gcd(p, n) == 1 && order.is_none_or(|lr| euler_phi(n) % lr == 0) && !is_lth_power_brute(p, l, n)
        })
        .unwrap()
}

/// Whether some character mod `n` of order dividing `l` is nontrivial at `p`,
/// by enumerating all of them.
pub fn character_exists(n: u64, p: u64, l: u64) -> bool {
    if gcd(p, n) != 1 {
        return false;
    }
    let g = unit_group(n).unwrap();
    let steps: Vec<u64> = g.orders.iter().map(|&o| l / gcd(l, o)).collect();
    let mut cur = vec![0u64; g.rank()];
    loop {
        let chi = DirichletCharacter::with_group(g.clone(), &cur, l).unwrap();
        if chi.evaluate(p as i128) != Some(0) {
            return true;
        }
        let mut i = cur.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            cur[i] += steps[i];
            if cur[i] < l {
                break;
            }
            cur[i] = 0;
        }
    }
}

