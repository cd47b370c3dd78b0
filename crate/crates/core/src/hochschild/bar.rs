use std::collections::{BTreeMap, HashMap};

use super::table::{BigradedTable, Method};
use crate::algebra::{Coeff, ExactMatrix, Field, GradedPoly, Monomial, Presentation};
use crate::error::{Error, Result};

/// Default cap on the dimension of a single chain group.
pub const BAR_COLUMN_BUDGET: usize = 10_000;

/// Default homological cutoff.
pub const DEFAULT_S_MAX: u32 = 4;

/// Structure constants of a finite-dimensional algebra in its normal-form
/// monomial basis. Index 0 is the unit.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    field: Field,
    basis: Vec<Monomial>,
    degrees: Vec<i32>,
    products: Vec<Vec<Vec<(usize, Coeff)>>>,
}

impl FiniteAlgebra {
    pub fn new(pres: &Presentation) -> Result<FiniteAlgebra> {
        let ring = pres.ring();
        let mut basis = pres.module_basis(&[])?;
        let unit = basis
            .iter()
            .position(Monomial::is_one)
            .ok_or_else(|| Error::Unsupported("the algebra is zero".into()))?;
        basis.swap(0, unit);
        basis[1..].sort();
        let index: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let degrees: Vec<i32> = basis.iter().map(|m| ring.degree_of(m)).collect();
        let one = ring.field().one();
        let mut products = Vec::with_capacity(basis.len());
        let elements: Vec<GradedPoly> = basis
            .iter()
            .map(|m| GradedPoly::term(ring, m.clone(), one.clone()))
            .collect();
        for a in &elements {
            let mut row = Vec::with_capacity(basis.len());
            for b in &elements {
                let prod = pres.normal_form(&a.mul(b))?;
                let mut entry = Vec::new();
                for (m, c) in prod.terms() {
                    let k = index.get(m).ok_or_else(|| {
                        Error::Unsupported(format!("normal form {prod} leaves the monomial basis"))
                    })?;
                    entry.push((*k, c.clone()));
                }
                row.push(entry);
            }
            products.push(row);
        }
        Ok(FiniteAlgebra {
            field: ring.field(),
            basis,
            degrees,
            products,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    fn product(&self, a: usize, b: usize) -> &[(usize, Coeff)] {
        &self.products[a][b]
    }
}

/// The normalized Hochschild complex `A ⊗ Ā^{⊗s}` in one internal degree.
#[derive(Clone, Debug)]
pub struct BarComplexSlice {
    pub t: i32,
    /// Chain group dimensions for `s = 0, ..., s_max + 1`.
    pub ranks: Vec<usize>,
    /// `differentials[s]` maps degree `s` to `s - 1` (rows are the source
    /// basis); entry 0 is empty.
    pub differentials: Vec<ExactMatrix>,
}

impl BarComplexSlice {
    /// `d ∘ d = 0`, exactly.
    pub fn check_dd(&self) -> Result<()> {
        for s in 2..self.differentials.len() {
            let dd = self.differentials[s].mul(&self.differentials[s - 1]);
            if !dd.is_zero() {
                return Err(Error::AxiomFailure(format!(
                    "d∘d ≠ 0 from (s, t) = ({s}, {})",
                    self.t
                )));
            }
        }
        Ok(())
    }

    /// `dim ker d_s - rank d_{s+1}` for `s <= s_max`.
    pub fn homology(&self) -> Vec<u64> {
        let ranks: Vec<usize> = self.differentials.iter().map(ExactMatrix::rank).collect();
        (0..self.ranks.len() - 1)
            .map(|s| (self.ranks[s] - ranks[s] - ranks[s + 1]) as u64)
            .collect()
    }
}

/// Chain basis of the normalized complex, grouped by `(s, t)`.
struct Chains {
    groups: BTreeMap<(usize, i32), Vec<Vec<usize>>>,
}

impl Chains {
    fn build(alg: &FiniteAlgebra, top: usize, budget: usize) -> Result<Chains> {
        // dimensions first, so an oversized slice fails before enumeration
        let mut dims: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); top + 1];
        for &d in alg.degrees() {
            *dims[0].entry(d).or_insert(0) += 1;
        }
        for s in 1..=top {
            let prev = dims[s - 1].clone();
            for (&t, &n) in &prev {
                for &d in &alg.degrees()[1..] {
                    *dims[s].entry(t + d).or_insert(0) += n;
                }
            }
        }
        for (s, by_t) in dims.iter().enumerate() {
            for (&t, &n) in by_t {
                if n > budget {
                    return Err(Error::Budget {
                        what: format!(
                            "bar complex chain group at (s, t) = ({s}, {t}) of dimension {n}"
                        ),
                        limit: budget,
                    });
                }
            }
        }
        let mut groups: BTreeMap<(usize, i32), Vec<Vec<usize>>> = BTreeMap::new();
        let mut layer: Vec<(Vec<usize>, i32)> = (0..alg.dim())
            .map(|a| (vec![a], alg.degrees()[a]))
            .collect();
        for s in 0..=top {
            for (tuple, t) in &layer {
                groups.entry((s, *t)).or_default().push(tuple.clone());
            }
            if s < top {
                layer = layer
                    .iter()
                    .flat_map(|(tuple, t)| {
                        (1..alg.dim()).map(move |b| {
                            let mut next = tuple.clone();
                            next.push(b);
                            (next, t + alg.degrees()[b])
                        })
                    })
                    .collect();
            }
        }
        Ok(Chains { groups })
    }

    fn degrees(&self) -> Vec<i32> {
        let mut ts: Vec<i32> = self.groups.keys().map(|k| k.1).collect();
        ts.sort_unstable();
        ts.dedup();
        ts
    }

    fn get(&self, s: usize, t: i32) -> &[Vec<usize>] {
        self.groups.get(&(s, t)).map_or(&[], Vec::as_slice)
    }
}

/// Image of one chain `a_0 ⊗ ... ⊗ a_s` under the Hochschild differential,
/// with the Koszul sign on the cyclic face.
fn boundary(alg: &FiniteAlgebra, chain: &[usize]) -> Vec<(Vec<usize>, Coeff)> {
    let s = chain.len() - 1;
    let mut out = Vec::new();
    for j in 0..s {
        let sign = if j % 2 == 0 {
            alg.field.one()
        } else {
            alg.field.one().neg()
        };
        for (k, c) in alg.product(chain[j], chain[j + 1]) {
            if j > 0 && *k == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(s);
            next.extend_from_slice(&chain[..j]);
            next.push(*k);
            next.extend_from_slice(&chain[j + 2..]);
            out.push((next, c.mul(&sign)));
        }
    }
    let last = chain[s];
    let rest: i32 = chain[..s].iter().map(|&a| alg.degrees()[a]).sum();
    let koszul = (alg.degrees()[last] * rest).rem_euclid(2);
    let sign = if (s as i32 + koszul) % 2 == 0 {
        alg.field.one()
    } else {
        alg.field.one().neg()
    };
    for (k, c) in alg.product(last, chain[0]) {
        let mut next = Vec::with_capacity(s);
        next.push(*k);
        next.extend_from_slice(&chain[1..s]);
        out.push((next, c.mul(&sign)));
    }
    out
}

/// Builds every slice of the normalized complex through `s_max + 1`.
pub fn bar_slices(alg: &FiniteAlgebra, s_max: u32, budget: usize) -> Result<Vec<BarComplexSlice>> {
    let top = s_max as usize + 1;
    let chains = Chains::build(alg, top, budget)?;
    let mut slices = Vec::new();
    for t in chains.degrees() {
        let mut ranks = Vec::with_capacity(top + 1);
        let mut differentials = vec![ExactMatrix::zeros(alg.field, chains.get(0, t).len(), 0)];
        ranks.push(chains.get(0, t).len());
        for s in 1..=top {
            let (src, dst) = (chains.get(s, t), chains.get(s - 1, t));
            let index: HashMap<&[usize], usize> = dst
                .iter()
                .enumerate()
                .map(|(k, c)| (c.as_slice(), k))
                .collect();
            let mut d = ExactMatrix::zeros(alg.field, src.len(), dst.len());
            for (row, chain) in src.iter().enumerate() {
                for (image, c) in boundary(alg, chain) {
                    let col = index[image.as_slice()];
                    d.add_to(row, col, &c);
                }
            }
            ranks.push(src.len());
            differentials.push(d);
        }
        slices.push(BarComplexSlice {
            t,
            ranks,
            differentials,
        });
    }
    Ok(slices)
}

/// Hochschild homology of a finite-dimensional graded algebra from the
/// normalized bar complex; every slice is checked for `d ∘ d = 0`.
pub fn hh_bar(pres: &Presentation, s_max: u32) -> Result<BigradedTable> {
    hh_bar_with_budget(pres, s_max, BAR_COLUMN_BUDGET)
}

pub fn hh_bar_with_budget(pres: &Presentation, s_max: u32, budget: usize) -> Result<BigradedTable> {
    let alg = FiniteAlgebra::new(pres)?;
    let slices = bar_slices(&alg, s_max, budget)?;
    let lo = slices.first().map_or(0, |s| s.t);
    let hi = slices.last().map_or(0, |s| s.t);
    let mut table = BigradedTable::new(Method::Bar, s_max, (lo, hi));
    for slice in &slices {
        slice.check_dd()?;
        for (s, r) in slice.homology().into_iter().enumerate() {
            table.add(s as u32, slice.t, r);
        }
    }
    Ok(table)
}

/// Runs the bar oracle on a finite-dimensional specialization of `pres`,
/// recording the specialization in the table.
pub fn hh_bar_specialized(
    pres: &Presentation,
    values: &[(&str, Coeff)],
    s_max: u32,
) -> Result<BigradedTable> {
    let (special, record) = pres.specialize(values)?;
    let mut table = hh_bar(&special, s_max)?;
    table.specialization = Some(record);
    Ok(table)
}
