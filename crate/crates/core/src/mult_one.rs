//! Least unramified prime outside `S` where a character is nontrivial, and a
//! scan over all primitive characters of bounded conductor.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::gcd;
use crate::arith::place::{format_place_list, places_norm, Place};
use crate::arith::primes::{primes_up_to, PrimeIter};
use crate::arith::units::{unit_group, UnitComponent, UnitGroupStructure};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

pub const DEFAULT_PRIME_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub prime: u64,
    pub norm: u64,
    /// `ζ_m`-exponent of `χ(p)`, nonzero.
    pub value_exponent: u64,
}

/// Least prime `p ∉ S`, `p ∤ N(χ)`, with `χ(p) ≠ 1`, searching `p <= cap`.
pub fn least_nonsplit_prime_with_cap(chi: &DirichletCharacter, places: &[Place], cap: u64) -> Result<PrimeWitness> {
    let prim = chi.primitive();
    if prim.is_trivial() {
        return Err(Error::NoWitness("the character is trivial".into()));
    }
    let n = prim.modulus();
    for p in PrimeIter::new() {
        if p > cap {
            break;
        }
        if n % p == 0 || places.contains(&Place::Finite(p)) {
            continue;
        }
        let v = prim.evaluate(p as i128).expect("p is coprime to the conductor");
        if v != 0 {
            return Ok(PrimeWitness { prime: p, norm: p, value_exponent: v });
        }
    }
    Err(Error::SearchCap { cap, what: "least nonsplit prime".into() })
}

pub fn least_nonsplit_prime(chi: &DirichletCharacter, places: &[Place]) -> Result<PrimeWitness> {
    least_nonsplit_prime_with_cap(chi, places, DEFAULT_PRIME_CAP)
}

/// `A(χ, S) = N(χ) N_S`.
pub fn analytic_conductor_s(chi: &DirichletCharacter, places: &[Place]) -> u128 {
    chi.conductor_norm() as u128 * places_norm(places)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub conductor: u64,
    /// Modulus of the (primitive) character; exponents are `ζ_λ`-exponents with
    /// `λ` the exponent of `(Z/modulus)^×`.
    pub modulus: u64,
    pub char_exponents: Vec<u64>,
    pub s_norm: u128,
    /// `None` when no witness was found below the cap.
    pub least_prime: Option<u64>,
    pub log_a: f64,
    pub ratio_a: Option<f64>,
    pub ratio_b: Option<f64>,
    pub ratio_c: Option<f64>,
}

/// Primitive characters of `(Z/p^k)^×` of exponent `m`, lexicographically.
pub(crate) fn primitive_component_characters(comp: &UnitComponent, m: u64) -> Vec<Vec<u64>> {
    let steps: Vec<u64> = comp.orders.iter().map(|&o| m / gcd(m, o)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; comp.rank()];
    loop {
        if comp.conductor_exponent(&cur, m) == comp.exponent {
            out.push(cur.clone());
        }
        let mut i = cur.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += steps[i];
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// All primitive characters mod `q` as exponent vectors over `unit_group(q)` with
/// exponent modulus `λ(q)`, in lexicographic order.
pub fn primitive_characters_mod(group: &UnitGroupStructure) -> Vec<Vec<u64>> {
    let m = group.exponent();
    let mut acc: Vec<Vec<u64>> = vec![vec![]];
    for comp in &group.components {
        let local = primitive_component_characters(comp, m);
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for a in &acc {
            for c in &local {
                let mut v = a.clone();
                v.extend_from_slice(c);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

struct PrimeLogs {
    primes: Vec<u64>,
    logs: Vec<Option<Vec<u64>>>,
}

fn scan_conductor(q: u64, places: &[Place], s_norm: u128, epsilon: f64, cap: u64, small_primes: &[u64]) -> Vec<ScanRecord> {
    let group = unit_group(q).expect("q >= 1");
    let m = group.exponent();
    let chars = primitive_characters_mod(&group);
    if chars.is_empty() || q == 1 {
        return vec![];
    }
    let excluded = |p: u64| q % p == 0 || places.contains(&Place::Finite(p));
    let mut table = PrimeLogs { primes: vec![], logs: vec![] };
    let extend = |table: &mut PrimeLogs, upto: usize| {
        while table.primes.len() < upto && table.primes.len() < small_primes.len() {
            let p = small_primes[table.primes.len()];
            table.primes.push(p);
            table.logs.push(if excluded(p) { None } else { group.dlog(p as i128).ok() });
        }
    };
    let log_a = ((q as u128 * s_norm) as f64).ln();
    let mut out = Vec::with_capacity(chars.len());
    for exps in chars {
        let mut found = None;
        let mut i = 0;
        loop {
            if i >= table.primes.len() {
                let want = (i + 1).max(2 * table.primes.len());
                extend(&mut table, want);
                if i >= table.primes.len() {
                    break;
                }
            }
            let p = table.primes[i];
            if p > cap {
                break;
            }
            if let Some(logs) = &table.logs[i] {
                let v = logs.iter().zip(&exps).fold(0, |acc, (&l, &e)| (acc + l * e) % m);
                if v != 0 {
                    found = Some(p);
                    break;
                }
            }
            i += 1;
        }
        let ratios = found.map(|p| {
            let pf = p as f64;
            (
                pf.ln() / log_a,
                pf / ((q as f64).powf(0.5 + epsilon) * (s_norm as f64).powf(epsilon)),
                pf / (log_a * log_a),
            )
        });
        out.push(ScanRecord {
            conductor: q,
            modulus: q,
            char_exponents: exps,
            s_norm,
            least_prime: found,
            log_a,
            ratio_a: ratios.map(|r| r.0),
            ratio_b: ratios.map(|r| r.1),
            ratio_c: ratios.map(|r| r.2),
        });
    }
    out
}

/// One record per nontrivial primitive character of conductor `<= max_conductor`,
/// ordered by conductor then exponent vector.
pub fn scan_family(max_conductor: u64, places: &[Place], epsilon: f64, cap: u64) -> Result<Vec<ScanRecord>> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let s_norm = places_norm(places);
    // Enough primes for desk-scale scans; a character with no witness among
    // them is reported as capped.
    let small_primes = primes_up_to(cap.min(1 << 20));
    let per_q: Vec<Vec<ScanRecord>> = (2..=max_conductor)
        .into_par_iter()
        .map(|q| scan_conductor(q, places, s_norm, epsilon, cap, &small_primes))
        .collect();
    Ok(per_q.into_iter().flatten().collect())
}

pub const CSV_HEADER: [&str; 9] = [
    "conductor", "modulus", "char_exponents", "S", "least_prime", "log_A", "ratio_A", "ratio_B", "ratio_C",
];

/// Writes records as CSV with a header row.
pub fn write_scan_csv<W: Write>(out: W, records: &[ScanRecord], places: &[Place]) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("CSV output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    let s = format_place_list(places);
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
    for r in records {
        let exps = r.char_exponents.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
        w.write_record([
            r.conductor.to_string(),
            r.modulus.to_string(),
            exps,
            s.clone(),
            r.least_prime.map(|p| p.to_string()).unwrap_or_default(),
            format!("{:.6}", r.log_a),
            opt(r.ratio_a),
            opt(r.ratio_b),
            opt(r.ratio_c),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Domain(format!("CSV output failed: {e}")))?;
    Ok(())
}
