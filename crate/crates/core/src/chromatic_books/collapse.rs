use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PAGE_SCHEMA: &str = "chromatic.e2-page/v1";

/// An algebra generator of the page in bidegree `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageGenerator {
    pub name: String,
    pub s: i32,
    pub t: i32,
}

impl PageGenerator {
    pub fn new(name: impl Into<String>, s: i32, t: i32) -> Self {
        PageGenerator {
            name: name.into(),
            s,
            t,
        }
    }

    /// Odd total degree generators are exterior.
    pub fn is_exterior(&self) -> bool {
        (self.s + self.t).rem_euclid(2) == 1
    }
}

/// Internal degrees present in the filtration-zero base: the monoid
/// generated by `polynomial` plus the group generated by `units`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDegrees {
    pub polynomial: Vec<i32>,
    pub units: Vec<i32>,
}

impl BaseDegrees {
    /// Is `d` the degree of some base monomial? Exact for polynomial and
    /// Laurent bases, an over-approximation when the base has relations.
    pub fn contains(&self, d: i32) -> bool {
        let lattice = self.units.iter().fold(0i32, |g, u| g.gcd(u));
        if lattice != 0 {
            let g = self.polynomial.iter().fold(lattice, |g, u| g.gcd(u));
            return d.rem_euclid(g) == 0;
        }
        if d == 0 {
            return true;
        }
        let steps: Vec<i32> = self
            .polynomial
            .iter()
            .copied()
            .filter(|&x| x != 0)
            .collect();
        if steps.iter().any(|&x| x < 0) && steps.iter().any(|&x| x > 0) {
            let g = steps.iter().fold(0i32, |g, u| g.gcd(u));
            return d.rem_euclid(g) == 0;
        }
        let (d, steps): (i32, Vec<i32>) = if steps.iter().all(|&x| x < 0) {
            (-d, steps.iter().map(|x| -x).collect())
        } else {
            (d, steps)
        };
        if d < 0 || steps.is_empty() {
            return false;
        }
        let mut reach = vec![false; d as usize + 1];
        reach[0] = true;
        for k in 1..=d as usize {
            reach[k] = steps
                .iter()
                .any(|&s| s as usize <= k && reach[k - s as usize]);
        }
        reach[d as usize]
    }
}

/// The `E^2` page: the free graded-commutative algebra on `generators` over
/// a base in filtration zero, with `d^r: (s, t) -> (s - r, t + r - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Page {
    pub label: String,
    pub base: BaseDegrees,
    pub generators: Vec<PageGenerator>,
}

#[derive(Serialize, Deserialize)]
struct PageFile {
    schema: String,
    #[serde(flatten)]
    page: E2Page,
}

impl E2Page {
    pub fn to_json_string(&self) -> String {
        let file = PageFile {
            schema: PAGE_SCHEMA.into(),
            page: self.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("page serializes");
        out.push('\n');
        out
    }

    pub fn from_json_str(input: &str) -> Result<E2Page> {
        let file: PageFile = serde_json::from_str(input)?;
        if file.schema != PAGE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected {PAGE_SCHEMA}, found {}",
                file.schema
            )));
        }
        Ok(file.page)
    }

    /// Is the group in bidegree `(s, t)` possibly nonzero? Products of
    /// positive-filtration generators are enumerated; filtration-zero
    /// generators join the base.
    pub fn plausibly_nonzero(&self, s: i32, t: i32) -> bool {
        if s < 0 {
            return false;
        }
        let mut base = self.base.clone();
        base.polynomial
            .extend(self.generators.iter().filter(|g| g.s == 0).map(|g| g.t));
        let positive: Vec<&PageGenerator> = self.generators.iter().filter(|g| g.s > 0).collect();
        let mut internal = BTreeSet::new();
        products(&positive, 0, s, 0, &mut internal);
        internal.into_iter().any(|u| base.contains(t - u))
    }
}

/// Internal degrees of products of `gens[k..]` with filtration exactly `s`.
fn products(gens: &[&PageGenerator], k: usize, s: i32, t: i32, out: &mut BTreeSet<i32>) {
    if s == 0 {
        out.insert(t);
        return;
    }
    if k == gens.len() {
        return;
    }
    let g = gens[k];
    let max = if g.is_exterior() { 1 } else { s / g.s };
    for e in 0..=max {
        if e * g.s > s {
            break;
        }
        products(gens, k + 1, s - e * g.s, t + e * g.t, out);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetStatus {
    /// `s - r < 0`, for this `r` and every larger one.
    NegativeColumn,
    /// The target group is zero.
    Empty,
    /// The target group may be nonzero: a candidate differential.
    Plausible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialCheck {
    pub generator: String,
    pub r: i32,
    pub target: (i32, i32),
    pub status: TargetStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub label: String,
    pub checks: Vec<DifferentialCheck>,
    pub collapses: bool,
}

impl CollapseCertificate {
    pub fn candidates(&self) -> impl Iterator<Item = &DifferentialCheck> {
        self.checks
            .iter()
            .filter(|c| c.status == TargetStatus::Plausible)
    }
}

/// The differentials are derivations, so the page collapses once every
/// `d^r` with `r >= 2` vanishes on the generators for degree reasons.
pub fn bokstedt_collapse_check(page: &E2Page) -> CollapseCertificate {
    let mut checks = Vec::new();
    for g in &page.generators {
        for r in 2..=g.s.max(1) + 1 {
            let target = (g.s - r, g.t + r - 1);
            let status = if target.0 < 0 {
                TargetStatus::NegativeColumn
            } else if page.plausibly_nonzero(target.0, target.1) {
                TargetStatus::Plausible
            } else {
                TargetStatus::Empty
            };
            checks.push(DifferentialCheck {
                generator: g.name.clone(),
                r,
                target,
                status,
            });
        }
    }
    let collapses = checks.iter().all(|c| c.status != TargetStatus::Plausible);
    CollapseCertificate {
        label: page.label.clone(),
        checks,
        collapses,
    }
}

/// The `K(i)`-based page for `THH(E(n))`: exterior generators `dw_j` in
/// bidegree `(1, 2p^j - 2)` for `i < j <= n` over `K(i)_*E(n)`.
pub fn thh_page(p: u32, n: u32, i: u32) -> Result<E2Page> {
    if i > n || n == 0 {
        return Err(Error::OutOfRange(format!(
            "need 0 <= i <= n, got i = {i}, n = {n}"
        )));
    }
    let deg = |j: u32| 2 * (p.pow(j) as i32 - 1);
    let prefix = if i == 0 { "v" } else { "w" };
    let mut base = BaseDegrees::default();
    if i > 0 {
        base.units.push(deg(i));
        base.polynomial.extend((1..=n).map(deg));
    } else {
        base.polynomial.extend((1..n).map(deg));
    }
    base.units.push(deg(n));
    base.units.sort_unstable();
    base.units.dedup();
    Ok(E2Page {
        label: format!("K({i})_*THH(E({n})) at p = {p}"),
        base,
        generators: (i + 1..=n)
            .map(|j| PageGenerator::new(format!("d{prefix}_{j}"), 1, deg(j)))
            .collect(),
    })
}
