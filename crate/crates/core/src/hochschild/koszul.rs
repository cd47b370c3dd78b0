use std::collections::BTreeMap;

use super::table::{BigradedTable, Method};
use crate::algebra::Generator;
use crate::error::{Error, Result};

/// Ranks of `P ⊗ Λ(dg)` for the free graded-commutative algebra `P` on
/// `gens`, read off the generating function
/// `prod_{g polynomial} 1/(1 - q^|g|) * prod_g (1 + s q^|g|)`.
///
/// Invertible generators are counted over the graded field they generate:
/// they contribute their differential but no monomials.
pub fn hh_koszul(gens: &[Generator], s_max: u32, window: (i32, i32)) -> Result<BigradedTable> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty window [{lo}, {hi}]")));
    }
    for g in gens {
        if g.is_odd() {
            return Err(Error::Unsupported(format!(
                "odd generator `{}`; the Koszul route covers even polynomial algebras",
                g.name
            )));
        }
        if !g.invertible && g.degree <= 0 {
            return Err(Error::InfinitePerDegree(format!(
                "polynomial generator `{}` has degree {}",
                g.name, g.degree
            )));
        }
    }
    // exterior[s][e]: subsets of size s with total internal degree e
    let mut exterior: Vec<BTreeMap<i32, u64>> = vec![BTreeMap::new(); s_max as usize + 1];
    exterior[0].insert(0, 1);
    for g in gens {
        for s in (1..=s_max as usize).rev() {
            let shifted: Vec<(i32, u64)> = exterior[s - 1]
                .iter()
                .map(|(&e, &c)| (e + g.degree, c))
                .collect();
            for (e, c) in shifted {
                *exterior[s].entry(e).or_insert(0) += c;
            }
        }
    }
    let min_e = exterior
        .iter()
        .flat_map(|m| m.keys().copied())
        .min()
        .unwrap_or(0);
    let top = (hi - min_e).max(0) as usize;
    let mut poly = vec![0u64; top + 1];
    poly[0] = 1;
    for g in gens.iter().filter(|g| !g.invertible) {
        let d = g.degree as usize;
        for t in d..=top {
            poly[t] += poly[t - d];
        }
    }
    let mut table = BigradedTable::new(Method::Koszul, s_max, window);
    for (s, ext) in exterior.iter().enumerate() {
        for (&e, &c) in ext {
            for t in lo.max(e)..=hi {
                let k = (t - e) as usize;
                if k < poly.len() {
                    table.add(s as u32, t, c * poly[k]);
                }
            }
        }
    }
    Ok(table)
}
