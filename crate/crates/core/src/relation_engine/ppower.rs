use serde::Serialize;

use crate::error::{Error, Result};

fn power(p: u32, e: u32) -> Result<u128> {
    (p as u128)
        .checked_pow(e)
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{e} overflows")))
}

/// Whether `p^r = p^{l_1} + ... + p^{l_k}` for pairwise distinct `l_j >= 1`.
pub fn ppower_is_sum(p: u32, r: u32, exponents: &[u32]) -> Result<bool> {
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::OutOfRange(format!(
            "exponents {exponents:?} are not distinct"
        )));
    }
    if sorted.first() == Some(&0) {
        return Err(Error::OutOfRange("exponents must be at least 1".into()));
    }
    let mut total: u128 = 0;
    for &l in &sorted {
        total = total
            .checked_add(power(p, l)?)
            .ok_or_else(|| Error::OutOfRange("sum overflows".into()))?;
    }
    Ok(total == power(p, r)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSweep {
    pub p: u32,
    pub max_r: u32,
    pub max_exponent: u32,
    pub sizes: (usize, usize),
    pub checked: usize,
    pub counterexamples: Vec<(u32, Vec<u32>)>,
}

/// Every `r <= max_r` against every subset of `{1, ..., max_exponent}` with
/// size in `sizes`.
pub fn ppower_sweep(
    p: u32,
    max_r: u32,
    max_exponent: u32,
    sizes: (usize, usize),
) -> Result<PowerSweep> {
    let mut sweep = PowerSweep {
        p,
        max_r,
        max_exponent,
        sizes,
        checked: 0,
        counterexamples: Vec::new(),
    };
    let pool: Vec<u32> = (1..=max_exponent).collect();
    let mut subsets = Vec::new();
    for k in sizes.0..=sizes.1 {
        combinations(&pool, k, 0, &mut Vec::new(), &mut subsets);
    }
    for r in 1..=max_r {
        for s in &subsets {
            sweep.checked += 1;
            if ppower_is_sum(p, r, s)? {
                sweep.counterexamples.push((r, s.clone()));
            }
        }
    }
    Ok(sweep)
}

fn combinations(pool: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for idx in start..pool.len() {
        cur.push(pool[idx]);
        combinations(pool, k, idx + 1, cur, out);
        cur.pop();
    }
}
