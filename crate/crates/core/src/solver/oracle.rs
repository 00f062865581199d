//! Exhaustive search for the least conductor of a character with prescribed
//! local components, independent of the linear-algebra construction.

use std::collections::HashMap;

use super::construct::{special_obstruction, GrunwaldSolution};
use super::instance::GrunwaldInstance;
use crate::arith::modular::sub_mod;
use crate::arith::units::{unit_group, UnitComponent};
use crate::characters::{make_dirichlet, DirichletCharacter};
use crate::error::{Error, Result};
use crate::mult_one::primitive_component_characters;

/// Largest cap accepted by the oracle.
pub const ORACLE_CAP_LIMIT: u64 = 50_000_000;

/// Primitive characters of exponent `m` on `(Z/q^a)^×` and their values at the
/// constraint points.
struct PrimaryChoices {
    exps: Vec<Vec<u64>>,
    contributions: Vec<Vec<u64>>,
}

struct Search<'a> {
    m: u64,
    /// Points where the character is constrained: primes of `S`, then `-1` if `∞ ∈ S`.
    points: &'a [i128],
    cache: HashMap<(u64, u32), Option<PrimaryChoices>>,
}

impl Search<'_> {
    fn choices(&mut self, q: u64, a: u32) -> Option<&PrimaryChoices> {
        let m = self.m;
        let points = self.points;
        self.cache
            .entry((q, a))
            .or_insert_with(|| {
                let comp = UnitComponent::standalone(q, a);
                let exps = primitive_component_characters(&comp, m);
                if exps.is_empty() {
                    return None;
                }
                let qa = comp.prime_power as i128;
                let contributions = exps
                    .iter()
                    .map(|e| {
                        points
                            .iter()
                            .map(|&x| {
                                let u = x.rem_euclid(qa) as u64;
                                let logs = comp.dlog(u).expect("constraint points are units");
                                logs.iter().zip(e).fold(0, |acc, (&l, &ei)| (acc + (l % m) * ei) % m)
                            })
                            .collect()
                    })
                    .collect();
                Some(PrimaryChoices { exps, contributions })
            })
            .as_ref()
    }
}

/// Depth-first search in lexicographic order; returns the choice index per level.
fn dfs(levels: &[&PrimaryChoices], target: &[u64], m: u64) -> Option<Vec<usize>> {
    let last = levels.len().checked_sub(1)?;
    let mut lookup: HashMap<&[u64], usize> = HashMap::new();
    for (i, c) in levels[last].contributions.iter().enumerate() {
        lookup.entry(c.as_slice()).or_insert(i);
    }
    fn go(
        levels: &[&PrimaryChoices],
        lookup: &HashMap<&[u64], usize>,
        depth: usize,
        remaining: Vec<u64>,
        m: u64,
        path: &mut Vec<usize>,
    ) -> bool {
        if depth + 1 == levels.len() {
            if let Some(&i) = lookup.get(remaining.as_slice()) {
                path.push(i);
                return true;
            }
            return false;
        }
        for (i, c) in levels[depth].contributions.iter().enumerate() {
            let next: Vec<u64> = remaining.iter().zip(c).map(|(&r, &x)| sub_mod(r, x, m)).collect();
            path.push(i);
            if go(levels, lookup, depth + 1, next, m, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::new();
    go(levels, &lookup, 0, target.to_vec(), m, &mut path).then_some(path)
}

fn smallest_prime_factors(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Least-conductor character of exponent exactly dividing `exponent` with the
/// prescribed components, searching conductors `<= cap`.
pub fn oracle_minimal_with_exponent(
    instance: &GrunwaldInstance,
    exponent: u64,
    cap: u64,
) -> Result<GrunwaldSolution> {
    instance.require_rationals()?;
    if cap > ORACLE_CAP_LIMIT {
        return Err(Error::Range(format!("oracle cap {cap} exceeds {ORACLE_CAP_LIMIT}")));
    }
    let inst = instance.rescale(exponent)?;
    let m = inst.m;
    let not_found = || Error::NotFoundBelowCap {
        cap,
        what: format!("character of exponent {m} with the prescribed local components"),
    };
    let s_primes = inst.finite_primes();
    let mut points: Vec<i128> = s_primes.iter().map(|&p| p as i128).collect();
    if inst.has_real() {
        points.push(-1);
    }
    // Forced primary components on S: the inverse of the prescribed units part.
    let mut forced: Vec<(u64, u32, Vec<u64>)> = Vec::new();
    let mut target: Vec<u64> = Vec::with_capacity(points.len());
    for chi in &inst.places {
        match chi.place.prime() {
            Some(_) => target.push(chi.uniformizer_exponent),
            None => target.push(if chi.sign_exponent == 1 { m / 2 } else { 0 }),
        }
    }
    let mut base: u64 = 1;
    for chi in &inst.places {
        let Some(p) = chi.place.prime() else { continue };
        if chi.conductor_exponent == 0 {
            continue;
        }
        let comp = UnitComponent::standalone(p, chi.conductor_exponent);
        let inv: Vec<u64> = chi.unit_exponents.iter().map(|&e| (m - e) % m).collect();
        let qa = comp.prime_power as i128;
        for (idx, &x) in points.iter().enumerate() {
            if x == p as i128 {
                continue;
            }
            let logs = comp.dlog(x.rem_euclid(qa) as u64).expect("distinct primes");
            let v = logs.iter().zip(&inv).fold(0, |acc, (&l, &e)| (acc + (l % m) * e) % m);
            target[idx] = sub_mod(target[idx], v, m);
        }
        base = match base.checked_mul(comp.prime_power) {
            Some(b) => b,
            None => return Err(not_found()),
        };
        forced.push((p, chi.conductor_exponent, inv));
    }
    if base > cap {
        return Err(not_found());
    }
    let limit = cap / base;
    let spf = smallest_prime_factors(limit.max(1));
    let mut search = Search { m, points: &points, cache: HashMap::new() };
    for g in 1..=limit {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = g;
        let mut coprime = true;
        while rest > 1 {
            let q = spf[rest as usize] as u64;
            let mut a = 0;
            while rest % q == 0 {
                rest /= q;
                a += 1;
            }
            if s_primes.contains(&q) {
                coprime = false;
                break;
            }
            factors.push((q, a));
        }
        if !coprime {
            continue;
        }
        if factors.is_empty() {
            if target.iter().all(|&t| t == 0) {
                return finish(&inst, &forced, &[], &[], base);
            }
            continue;
        }
        let mut ok = true;
        for &(q, a) in &factors {
            if search.choices(q, a).is_none() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let levels: Vec<&PrimaryChoices> =
            factors.iter().map(|&(q, a)| search.cache[&(q, a)].as_ref().unwrap()).collect();
        if let Some(path) = dfs(&levels, &target, m) {
            let chosen: Vec<Vec<u64>> =
                levels.iter().zip(&path).map(|(lv, &i)| lv.exps[i].clone()).collect();
            return finish(&inst, &forced, &factors, &chosen, base * g);
        }
    }
    Err(not_found())
}

fn finish(
    inst: &GrunwaldInstance,
    forced: &[(u64, u32, Vec<u64>)],
    free: &[(u64, u32)],
    chosen: &[Vec<u64>],
    modulus: u64,
) -> Result<GrunwaldSolution> {
    let group = unit_group(modulus)?;
    let mut exps = vec![0u64; group.rank()];
    for comp in &group.components {
        let local = forced
            .iter()
            .find(|(p, _, _)| *p == comp.prime)
            .map(|(_, _, e)| e)
            .or_else(|| free.iter().position(|&(q, _)| q == comp.prime).map(|i| &chosen[i]))
            .expect("every prime of the modulus is forced or chosen");
        exps[comp.offset..comp.offset + comp.rank()].copy_from_slice(local);
    }
    let chi: DirichletCharacter = make_dirichlet(modulus, &exps, inst.m)?;
    for want in &inst.places {
        if !chi.local_component(want.place).equivalent(want) {
            return Err(Error::InternalContradiction(format!(
                "oracle candidate mod {modulus} fails at {}",
                want.place
            )));
        }
    }
    let cycle = chi.conductor();
    Ok(GrunwaldSolution {
        character: chi,
        exponent_achieved: inst.m,
        special_case_flag: special_obstruction(inst)?.is_some(),
        aux_primes: vec![],
        cycle,
        solutions_mod_cycle: 1,
    })
}

/// Least-conductor character of exponent `m` with the prescribed components.
pub fn oracle_minimal(instance: &GrunwaldInstance, cap: u64) -> Result<GrunwaldSolution> {
    oracle_minimal_with_exponent(instance, instance.m, cap)
}

/// As [`oracle_minimal`], but searches exponent `2m` directly when the
/// special-case obstruction rules out exponent `m`.
pub fn oracle_minimal_widening(instance: &GrunwaldInstance, cap: u64) -> Result<GrunwaldSolution> {
    if special_obstruction(instance)?.is_some_and(|v| v != 0) {
        let mut sol = oracle_minimal_with_exponent(instance, 2 * instance.m, cap)?;
        sol.special_case_flag = true;
        return Ok(sol);
    }
    oracle_minimal(instance, cap)
}
