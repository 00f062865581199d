//! Linear systems over `Z/l^r` by Smith-normal-form style elimination.

use crate::arith::modular::{inv_mod, mul_mod, sub_mod};

/// Affine solution set `x0 + span(kernel)` of `A x ≡ b (mod l^r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub modulus: u64,
    pub particular: Vec<u64>,
    /// `(generator, order)` pairs; every solution is `x0 + Σ s_i k_i`, `0 <= s_i < order_i`,
    /// uniquely.
    pub kernel: Vec<(Vec<u64>, u64)>,
}

impl SolutionSet {
    /// Number of solutions, saturating.
    pub fn size(&self) -> u64 {
        self.kernel.iter().fold(1u64, |acc, (_, o)| acc.saturating_mul(*o))
    }

    /// Visits every solution in mixed-radix order.
    pub fn for_each(&self, mut f: impl FnMut(&[u64])) {
        let m = self.modulus;
        let mut x = self.particular.clone();
        let mut counters = vec![0u64; self.kernel.len()];
        loop {
            f(&x);
            let mut i = 0;
            loop {
                if i == counters.len() {
                    return;
                }
                let (gen, order) = &self.kernel[i];
                counters[i] += 1;
                let wrapped = counters[i] == *order;
                for (xj, &gj) in x.iter_mut().zip(gen) {
                    *xj = (*xj + gj) % m;
                }
                if !wrapped {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }
}

fn valuation(x: u64, l: u64, r: u32) -> u32 {
    if x == 0 {
        return r;
    }
    let mut v = 0;
    let mut x = x;
    while x % l == 0 {
        x /= l;
        v += 1;
    }
    v
}

/// Solves `A x ≡ b (mod l^r)`. Returns `None` if there is no solution.
pub fn solve_mod_prime_power(a: &[Vec<u64>], b: &[u64], l: u64, r: u32, cols: usize) -> Option<SolutionSet> {
    let m = l.pow(r);
    let rows = a.len();
    let mut a: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|x| x % m).collect()).collect();
    let mut b: Vec<u64> = b.iter().map(|x| x % m).collect();
    let mut v: Vec<Vec<u64>> = (0..cols).map(|i| (0..cols).map(|j| u64::from(i == j)).collect()).collect();
    let mut pivots: Vec<u32> = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                let val = valuation(x, l, r);
                if val < r && best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, i, j)) = best else { break };
        a.swap(t, i);
        b.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        let lv = l.pow(val);
        let unit = a[t][t] / lv;
        let w = inv_mod(unit % m, m).expect("pivot unit part is coprime to l");
        for row in a.iter_mut() {
            row[t] = mul_mod(row[t], w, m);
        }
        for row in v.iter_mut() {
            row[t] = mul_mod(row[t], w, m);
        }
        for i in t + 1..rows {
            let c = a[i][t] / lv;
            if c == 0 {
                continue;
            }
            for j in t..cols {
                let s = mul_mod(c, a[t][j], m);
                a[i][j] = sub_mod(a[i][j], s, m);
            }
            b[i] = sub_mod(b[i], mul_mod(c, b[t], m), m);
        }
        for j in t + 1..cols {
            let c = a[t][j] / lv;
            if c == 0 {
                continue;
            }
            for row in a.iter_mut() {
                let s = mul_mod(c, row[t], m);
                row[j] = sub_mod(row[j], s, m);
            }
            for row in v.iter_mut() {
                let s = mul_mod(c, row[t], m);
                row[j] = sub_mod(row[j], s, m);
            }
        }
        pivots.push(val);
    }
    let rank = pivots.len();
    if b.iter().skip(rank).any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0u64; cols];
    let mut kernel_y: Vec<(usize, u64, u64)> = Vec::new();
    for (t, &val) in pivots.iter().enumerate() {
        let lv = l.pow(val);
        if b[t] % lv != 0 {
            return None;
        }
        y[t] = b[t] / lv;
        if val > 0 {
            kernel_y.push((t, l.pow(r - val), lv));
        }
    }
    for t in rank..cols {
        kernel_y.push((t, 1, m));
    }
    let apply = |y: &[u64]| -> Vec<u64> {
        (0..cols)
            .map(|i| (0..cols).fold(0u64, |acc, j| (acc + mul_mod(v[i][j], y[j], m)) % m))
            .collect()
    };
    let particular = apply(&y);
    let kernel = kernel_y
        .into_iter()
        .map(|(t, scale, order)| {
            let mut e = vec![0u64; cols];
            e[t] = scale;
            (apply(&e), order)
        })
        .collect();
    Some(SolutionSet { modulus: m, particular, kernel })
}
