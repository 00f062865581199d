use serde::Serialize;

use super::instance::GrunwaldInstance;
use super::linalg::solve_mod_prime_power;
use super::pstar::auxiliary_selection;
use crate::arith::factor::FactoredInteger;
use crate::arith::modular::mul_mod;
use crate::arith::place::Place;
use crate::arith::rational::Rational;
use crate::arith::units::{unit_group, UnitComponent};
use crate::characters::{evaluate_local, CycleValue, DirichletCharacter};
use crate::error::{Error, Result};
use crate::wang::{special_case, FieldDescriptor};

/// Solution cosets up to this size are searched exhaustively for the least conductor.
pub const KERNEL_ENUMERATION_LIMIT: u64 = 1 << 20;

/// A global character realizing the prescribed local data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrunwaldSolution {
    /// Primitive character.
    pub character: DirichletCharacter,
    /// `m`, or `2m` in the obstructed special case.
    pub exponent_achieved: u64,
    pub special_case_flag: bool,
    pub aux_primes: Vec<u64>,
    /// The cycle the character was solved modulo (its own conductor for oracle results).
    pub cycle: CycleValue,
    /// Size of the solution coset modulo the cycle (1 for oracle results).
    pub solutions_mod_cycle: u64,
}

impl GrunwaldSolution {
    pub fn conductor_norm(&self) -> u64 {
        self.character.conductor_norm()
    }
}

/// `Σ_{v ∈ S} χ^v(a₀)` in `Z/m`, or `None` outside the special case.
pub fn special_obstruction(instance: &GrunwaldInstance) -> Result<Option<u64>> {
    let report = special_case(FieldDescriptor::Rationals, instance.m, &instance.place_set())?;
    let Some(a0) = report.a0 else { return Ok(None) };
    let a0: Rational = a0.a;
    let mut total = 0;
    for chi in &instance.places {
        total = (total + evaluate_local(chi, &a0)?) % instance.m;
    }
    Ok(Some(total))
}

/// `𝔠 = 𝔠₀ 𝔠₁ 𝔠₂`: local conductors on `S`, `l^{r+2}`, and the auxiliary primes.
pub fn build_cycle(instance: &GrunwaldInstance, aux: &[u64]) -> Result<CycleValue> {
    let places = instance.place_set();
    if let Some(q) = aux.iter().find(|&&q| places.contains(&Place::Finite(q))) {
        return Err(Error::Domain(format!("auxiliary prime {q} lies in S")));
    }
    let (l, r) = instance.prime_power();
    let mut parts: Vec<(u128, u32)> = instance
        .places
        .iter()
        .filter_map(|c| c.place.prime().map(|p| (p as u128, c.conductor_exponent)))
        .collect();
    parts.push((l as u128, r + 2));
    parts.extend(aux.iter().map(|&q| (q as u128, 1)));
    let finite = FactoredInteger::from_prime_powers(parts)?;
    Ok(CycleValue::new(finite, instance.has_real() || instance.m % 2 == 0))
}

/// The unit group modulo the cycle, one component per prime power. The cycle
/// itself may exceed 64 bits; each prime power may not.
fn cycle_components(cycle: &CycleValue) -> Result<Vec<UnitComponent>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for &(p, a) in cycle.finite_part.factors() {
        let p = u64::try_from(p).map_err(|_| Error::Range(format!("prime {p} exceeds 64 bits")))?;
        if p.checked_pow(a).is_none() {
            return Err(Error::Range(format!("{p}^{a} exceeds 64 bits")));
        }
        let mut comp = UnitComponent::standalone(p, a);
        comp.offset = offset;
        offset += comp.rank();
        out.push(comp);
    }
    Ok(out)
}

/// Discrete logs of the integer `x` (coprime to the cycle) on every component,
/// replacing the component at `skip` by the logs of 1.
fn dlog_row(comps: &[UnitComponent], x: i128, skip: Option<u64>, m: u64) -> Result<Vec<u64>> {
    let mut row = Vec::new();
    for c in comps {
        if Some(c.prime) == skip {
            row.extend(std::iter::repeat_n(0, c.rank()));
            continue;
        }
        let r = x.rem_euclid(c.prime_power as i128) as u64;
        let logs = c.dlog(r).ok_or_else(|| Error::NonUnit { value: x.to_string(), modulus: c.prime_power })?;
        row.extend(logs.into_iter().map(|l| l % m));
    }
    Ok(row)
}

/// Linear system for characters mod the cycle with the prescribed local components.
///
/// The unknowns are the exponents on the generators of every component. At a
/// prime `p` of `S` dividing the cycle the units part is fixed to the inverse of
/// the prescribed one and `χ(p̃)` is prescribed, where `p̃ ≡ 1` at `p` and `≡ p`
/// elsewhere; at other primes of `S` the value `χ(p)` is prescribed.
fn linear_system(instance: &GrunwaldInstance, comps: &[UnitComponent]) -> Result<(Vec<Vec<u64>>, Vec<u64>, usize)> {
    let m = instance.m;
    let cols: usize = comps.iter().map(UnitComponent::rank).sum();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for c in comps {
        for (j, &o) in c.orders.iter().enumerate() {
            let mut row = vec![0u64; cols];
            row[c.offset + j] = o % m;
            a.push(row);
            b.push(0);
        }
    }
    for chi in &instance.places {
        match chi.place {
            Place::Real => {
                a.push(dlog_row(comps, -1, None, m)?);
                b.push(if chi.sign_exponent == 1 { m / 2 } else { 0 });
            }
            Place::Finite(p) => match comps.iter().find(|c| c.prime == p) {
                Some(comp) => {
                    for (j, &h) in comp.local_generators.iter().enumerate() {
                        let mut row = vec![0u64; cols];
                        row[comp.offset + j] = 1;
                        a.push(row);
                        let value = if chi.conductor_exponent == 0 { 0 } else { chi.evaluate_unit(h)? };
                        b.push((m - value) % m);
                    }
                    a.push(dlog_row(comps, p as i128, Some(p), m)?);
                    b.push(chi.uniformizer_exponent);
                }
                None => {
                    if chi.conductor_exponent > 0 {
                        return Err(Error::InternalContradiction(format!(
                            "ramified prime {p} does not divide the cycle"
                        )));
                    }
                    a.push(dlog_row(comps, p as i128, None, m)?);
                    b.push(chi.uniformizer_exponent);
                }
            },
        }
    }
    Ok((a, b, cols))
}

fn conductor_exponents(comps: &[UnitComponent], x: &[u64], m: u64) -> Vec<u32> {
    comps.iter().map(|c| c.conductor_exponent(&x[c.offset..c.offset + c.rank()], m)).collect()
}

fn conductor_of(comps: &[UnitComponent], x: &[u64], m: u64) -> u128 {
    comps
        .iter()
        .zip(conductor_exponents(comps, x, m))
        .fold(1u128, |acc, (c, k)| acc.saturating_mul((c.prime as u128).saturating_pow(k)))
}

/// The primitive character determined by exponents `x` on the cycle components.
fn primitive_from_components(comps: &[UnitComponent], x: &[u64], m: u64) -> Result<DirichletCharacter> {
    let ks = conductor_exponents(comps, x, m);
    let mut modulus: u64 = 1;
    let mut exps = Vec::new();
    for (c, &k) in comps.iter().zip(&ks) {
        if k == 0 {
            continue;
        }
        modulus = modulus
            .checked_mul(c.prime.pow(k))
            .ok_or_else(|| Error::Range("conductor exceeds 64 bits".into()))?;
        let small = UnitComponent::standalone(c.prime, k);
        let local = &x[c.offset..c.offset + c.rank()];
        for &h in &small.local_generators {
            let logs = c.dlog(h).expect("generator is a unit");
            exps.push(logs.iter().zip(local).fold(0, |acc, (&l, &e)| (acc + mul_mod(l % m, e, m)) % m));
        }
    }
    DirichletCharacter::with_group(unit_group(modulus)?, &exps, m)
}

/// Characters mod the cycle with the prescribed components: the least-conductor
/// one (lexicographically least exponent vector on ties), made primitive, and
/// the size of the solution coset.
pub(crate) fn solve_mod_cycle(
    instance: &GrunwaldInstance,
    cycle: &CycleValue,
) -> Result<Option<(DirichletCharacter, u64)>> {
    let (l, r) = instance.prime_power();
    let m = instance.m;
    let comps = cycle_components(cycle)?;
    let (a, b, cols) = linear_system(instance, &comps)?;
    let Some(set) = solve_mod_prime_power(&a, &b, l, r, cols) else {
        return Ok(None);
    };
    let size = set.size();
    let best = if size <= KERNEL_ENUMERATION_LIMIT {
        let mut best: Option<(u128, Vec<u64>)> = None;
        set.for_each(|x| {
            let n = conductor_of(&comps, x, m);
            let better = match &best {
                None => true,
                Some((bn, bx)) => n < *bn || (n == *bn && x < bx.as_slice()),
            };
            if better {
                best = Some((n, x.to_vec()));
            }
        });
        best.expect("solution set is nonempty").1
    } else {
        set.particular.clone()
    };
    Ok(Some((primitive_from_components(&comps, &best, m)?, size)))
}

fn check_components(instance: &GrunwaldInstance, chi: &DirichletCharacter) -> Result<()> {
    for want in &instance.places {
        let got = chi.local_component(want.place);
        if !got.equivalent(want) {
            return Err(Error::InternalContradiction(format!(
                "local component at {} does not match the prescribed character",
                want.place
            )));
        }
    }
    Ok(())
}

/// Solves modulo `cycle`; in the obstructed special case widens to exponent `2m`.
pub fn solve_character(instance: &GrunwaldInstance, cycle: &CycleValue) -> Result<GrunwaldSolution> {
    instance.require_rationals()?;
    let obstruction = special_obstruction(instance)?;
    let obstructed = obstruction.is_some_and(|v| v != 0);
    let aux: Vec<u64> = {
        let fixed: Vec<u64> = instance.places.iter().filter_map(|c| c.place.prime()).collect();
        let (l, _) = instance.prime_power();
        cycle
            .finite_part
            .primes()
            .map(|p| p as u64)
            .filter(|p| !fixed.contains(p) && *p != l)
            .collect()
    };
    match solve_mod_cycle(instance, cycle)? {
        Some((chi, size)) => {
            if obstructed {
                return Err(Error::InternalContradiction(
                    "found an exponent-m character despite the special-case obstruction".into(),
                ));
            }
            check_components(instance, &chi)?;
            Ok(GrunwaldSolution {
                character: chi,
                exponent_achieved: instance.m,
                special_case_flag: obstruction.is_some(),
                aux_primes: aux,
                cycle: cycle.clone(),
                solutions_mod_cycle: size,
            })
        }
        None if obstructed => {
            let wide = instance.rescale(2 * instance.m)?;
            let mut sol = construct_unchecked(&wide)?;
            sol.special_case_flag = true;
            Ok(sol)
        }
        None => Err(Error::InternalContradiction(format!(
            "no character modulo the cycle {cycle} realizes the local data"
        ))),
    }
}

fn construct_unchecked(instance: &GrunwaldInstance) -> Result<GrunwaldSolution> {
    let aux = auxiliary_selection(instance.m, &instance.place_set())?.primes;
    let cycle = build_cycle(instance, &aux)?;
    let mut sol = solve_character(instance, &cycle)?;
    sol.aux_primes = aux;
    Ok(sol)
}

/// Auxiliary primes, cycle, and linear solve.
pub fn construct(instance: &GrunwaldInstance) -> Result<GrunwaldSolution> {
    instance.require_rationals()?;
    construct_unchecked(instance)
}
