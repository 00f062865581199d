use serde::Serialize;

use super::construct::GrunwaldSolution;
use super::instance::GrunwaldInstance;
use super::pstar::expected_aux_count;
use crate::arith::factor::euler_phi;
use crate::arith::place::Place;

/// Options for [`bound_report_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReportOptions {
    /// Replace `δ = 1` by `0` when `Q(ζ_{l^r})/Q` is cyclic and `l ∉ S`, or when
    /// `l = 2`, `r >= 3` and `2 ∉ S`.
    pub refine_delta: bool,
}

/// The bound quantities over `Q` (`D = 0`) next to the achieved conductor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub l: u64,
    pub r: u32,
    pub e: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub delta: u64,
    pub delta_prime: u64,
    #[serde(rename = "E1")]
    pub e1: u64,
    pub selmer_rank: u64,
    pub epsilon: f64,
    /// `l^r (|S_fin| + 1) log(N_S l^r)`.
    pub bound_tm1_shape: f64,
    /// `E₁ (1/2 + ε)`, the exponent of `N_S`.
    pub bound_tm2_exponent: f64,
    /// `(log(N_S l))^{2(e + δ)}`.
    pub bound_tm3_shape: f64,
    /// `log N(χ)`.
    pub achieved_log_conductor: f64,
    pub tm1_ratio: f64,
    /// `log N(χ) / (E₁ (1/2 + ε) log N_S)`; absent when `N_S = 1`.
    pub tm2_ratio: Option<f64>,
    pub tm3_ratio: f64,
    /// `N(χ)`, the achieved conductor (an upper bound for BPI).
    pub bpi: u64,
    /// Norm of the cycle the solution was found modulo (an upper bound for BPV).
    pub bpv: u128,
    /// `A(χ, S) = N(χ) N_S`.
    pub analytic_conductor_s: u128,
    pub n_s: u128,
    pub aux_count: usize,
    pub expected_aux_count: u64,
    pub exponent_achieved: u64,
    pub special_case_flag: bool,
    /// `N(χ) <= l^{r'+1} rad(N(χ))` for the achieved exponent `l^{r'}`.
    pub conductor_bound_holds: bool,
}

/// `E₁ = φ(l^r) e + δ`, with `e`, `δ`, `δ′` as over `Q`.
pub fn e1_quantities(l: u64, r: u32, places: &[Place], refine_delta: bool) -> (u64, u64, u64, u64) {
    let m = l.pow(r);
    let s_fin = places.iter().filter(|v| !v.is_real()).count() as u64;
    let delta_prime = u64::from(l % 2 == 1);
    let mut delta = u64::from(m != 2);
    if refine_delta && delta == 1 {
        let l_in_s = places.contains(&Place::Finite(l));
        let cyclic = l % 2 == 1 || r <= 2;
        if (cyclic && !l_in_s) || (l == 2 && r >= 3 && !l_in_s) {
            delta = 0;
        }
    }
    let e = s_fin + 1 - delta_prime;
    let e1 = euler_phi(m) * e + delta;
    (e, delta, delta_prime, e1)
}

fn radical(n: u64) -> u64 {
    crate::arith::factor::factor_u64(n).iter().map(|&(p, _)| p).product()
}

/// Checks `N(χ) <= l^{r+1} rad(N(χ))` for a character of exponent `l^r`.
pub fn conductor_bound_holds(conductor: u64, l: u64, r: u32) -> bool {
    (conductor as u128) <= (l as u128).pow(r + 1) * radical(conductor) as u128
}

pub fn bound_report(instance: &GrunwaldInstance, solution: &GrunwaldSolution, epsilon: f64) -> BoundReport {
    bound_report_with(instance, solution, epsilon, ReportOptions::default())
}

pub fn bound_report_with(
    instance: &GrunwaldInstance,
    solution: &GrunwaldSolution,
    epsilon: f64,
    options: ReportOptions,
) -> BoundReport {
    let (l, r) = instance.prime_power();
    let places = instance.place_set();
    let (e, delta, delta_prime, e1) = e1_quantities(l, r, &places, options.refine_delta);
    let m = instance.m as f64;
    let n_s = instance.n_s();
    let s_fin = instance.finite_primes().len() as f64;
    let ln_ns = (n_s as f64).ln();
    let bound_tm1_shape = m * (s_fin + 1.0) * (ln_ns + m.ln());
    let bound_tm2_exponent = e1 as f64 * (0.5 + epsilon);
    let bound_tm3_shape = (ln_ns + (l as f64).ln()).powi(2 * (e + delta) as i32);
    let bpi = solution.conductor_norm();
    let achieved = (bpi as f64).ln();
    let achieved_l = solution.exponent_achieved.trailing_zeros();
    let r_achieved = if l == 2 { achieved_l } else { r };
    BoundReport {
        l,
        r,
        e,
        d: 0,
        delta,
        delta_prime,
        e1,
        selmer_rank: e,
        epsilon,
        bound_tm1_shape,
        bound_tm2_exponent,
        bound_tm3_shape,
        achieved_log_conductor: achieved,
        tm1_ratio: achieved / bound_tm1_shape,
        tm2_ratio: (n_s > 1).then(|| achieved / (bound_tm2_exponent * ln_ns)),
        tm3_ratio: bpi as f64 / bound_tm3_shape,
        bpi,
        bpv: solution.cycle.norm(),
        analytic_conductor_s: bpi as u128 * n_s,
        n_s,
        aux_count: solution.aux_primes.len(),
        expected_aux_count: expected_aux_count(instance.m, &places),
        exponent_achieved: solution.exponent_achieved,
        special_case_flag: solution.special_case_flag,
        conductor_bound_holds: conductor_bound_holds(bpi, l, r_achieved),
    }
}
