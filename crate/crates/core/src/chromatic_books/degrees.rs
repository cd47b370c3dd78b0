use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::is_prime;
use crate::error::{Error, Result};

/// `|dt_k| = 2p^k - 1`.
pub fn dt_degree(p: u32, k: u32) -> i32 {
    2 * p.pow(k) as i32 - 1
}

/// Generator degrees of a free module, compared modulo the subgroup
/// `lattice * Z` of unit degrees (`lattice = 0` means exact comparison).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMultiset {
    pub degrees: Vec<i32>,
    pub lattice: i32,
}

impl DegreeMultiset {
    pub fn new(mut degrees: Vec<i32>, lattice: i32) -> Self {
        degrees.sort_unstable();
        DegreeMultiset {
            degrees,
            lattice: lattice.abs(),
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn contains(&self, d: i32) -> bool {
        self.degrees.binary_search(&d).is_ok()
    }

    fn residue(&self, d: i32) -> i32 {
        if self.lattice == 0 {
            d
        } else {
            d.rem_euclid(self.lattice)
        }
    }

    /// Residues in sorted order, each paired with its original degree.
    fn keyed(&self) -> Vec<(i32, i32)> {
        let mut out: Vec<(i32, i32)> = self.degrees.iter().map(|&d| (self.residue(d), d)).collect();
        out.sort_unstable();
        out
    }
}

/// A degree of one side matched with a degree of the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMatch {
    pub conjectured: i32,
    pub expected: i32,
    /// `expected - conjectured`, a multiple of the lattice.
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub lattice: i32,
    pub consistent: bool,
    pub exact: bool,
    pub matches: Vec<DegreeMatch>,
    /// Residues present on one side only, as `(residue, conjectured count,
    /// expected count)`.
    pub unmatched: Vec<(i32, usize, usize)>,
}

/// Compares two multisets modulo the coarser of their lattices.
pub fn compare_mod_lattice(conjectured: &DegreeMultiset, expected: &DegreeMultiset) -> Comparison {
    let lattice = conjectured.lattice.gcd(&expected.lattice);
    let a = DegreeMultiset::new(conjectured.degrees.clone(), lattice).keyed();
    let b = DegreeMultiset::new(expected.degrees.clone(), lattice).keyed();
    let mut matches = Vec::new();
    let mut unmatched = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map(|x| x.0);
        let rb = b.get(j).map(|x| x.0);
        let r = match (ra, rb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => unreachable!(),
        };
        let ia = a[i..].iter().take_while(|x| x.0 == r).count();
        let jb = b[j..].iter().take_while(|x| x.0 == r).count();
        for k in 0..ia.min(jb) {
            let (c, e) = (a[i + k].1, b[j + k].1);
            matches.push(DegreeMatch {
                conjectured: c,
                expected: e,
                shift: e - c,
            });
        }
        if ia != jb {
            unmatched.push((r, ia, jb));
        }
        i += ia;
        j += jb;
    }
    let consistent = unmatched.is_empty();
    Comparison {
        lattice,
        consistent,
        exact: consistent && conjectured.degrees == expected.degrees,
        matches,
        unmatched,
    }
}

/// One summand `Σ^d L_j E(n)` labelled by a monomial in the `dt_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    /// Localization level; `j = n` is `E(n)` itself.
    pub level: u32,
    pub suspension: i32,
    /// Indices `k` of the factors `dt_k`, increasing.
    pub label: Vec<u32>,
}

impl Summand {
    pub fn label_text(&self) -> String {
        if self.label.is_empty() {
            "1".into()
        } else {
            self.label.iter().map(|k| format!("dt_{k}")).collect()
        }
    }

    pub fn name(&self, n: u32) -> String {
        let body = if self.level == n {
            "E".to_string()
        } else {
            format!("L_{}E", self.level)
        };
        if self.suspension == 0 {
            body
        } else {
            format!("Σ^{}{body}", self.suspension)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandSpec {
    pub p: u32,
    pub n: u32,
    pub summands: Vec<Summand>,
}

impl SummandSpec {
    /// Suspensions equal label degrees and levels lie in `0..=n`.
    pub fn validate(&self) -> Result<()> {
        for s in &self.summands {
            if s.level > self.n {
                return Err(Error::OutOfRange(format!(
                    "level {} above n = {}",
                    s.level, self.n
                )));
            }
            let d: i32 = s.label.iter().map(|&k| dt_degree(self.p, k)).sum();
            if d != s.suspension {
                return Err(Error::Mismatch(format!(
                    "summand {} has suspension {} but |{}| = {d}",
                    s.name(self.n),
                    s.suspension,
                    s.label_text()
                )));
            }
        }
        Ok(())
    }

    /// Degrees of the summands seen by `K(i)`.
    pub fn ki_degrees(&self, i: u32) -> Vec<i32> {
        let mut out: Vec<i32> = self
            .summands
            .iter()
            .flat_map(|s| ki_of_summand(i, s))
            .collect();
        out.sort_unstable();
        out
    }
}

/// `K(i)_*` of `Σ^d L_j E(n)` is nonzero exactly when `i <= j`; this is
/// taken as given, not derived.
pub fn ki_of_summand(i: u32, summand: &Summand) -> Option<i32> {
    (i <= summand.level).then_some(summand.suspension)
}

fn check_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

fn check_range(n: u32, i: u32) -> Result<()> {
    if n == 0 || i > n {
        return Err(Error::OutOfRange(format!(
            "need 0 <= i <= n and n >= 1, got i = {i}, n = {n}"
        )));
    }
    Ok(())
}

/// Unit degrees of `K(i)_*E(n)`: multiples of `gcd(2(p^i - 1), 2(p^n - 1))`.
pub fn unit_lattice(p: u32, n: u32, i: u32) -> i32 {
    let a = 2 * (p.pow(i) as i32 - 1);
    let b = 2 * (p.pow(n) as i32 - 1);
    a.gcd(&b)
}

/// The exterior generators `dw_{i+1}, ..., dw_n` of `K(i)_*THH(E(n))` over
/// `K(i)_*E(n)` produce one free generator per subset.
pub fn thh_ki_expected(p: u32, n: u32, i: u32) -> Result<DegreeMultiset> {
    check_prime(p)?;
    check_range(n, i)?;
    let gens: Vec<i32> = (i + 1..=n).map(|k| dt_degree(p, k)).collect();
    Ok(DegreeMultiset::new(
        subset_sums(&gens),
        unit_lattice(p, n, i),
    ))
}

fn subset_sums(gens: &[i32]) -> Vec<i32> {
    let mut sums = vec![0];
    for g in gens {
        let more: Vec<i32> = sums.iter().map(|s| s + g).collect();
        sums.extend(more);
    }
    sums.sort_unstable();
    sums
}

/// `E(n)` plus, for each `0 <= j < n`, the `2^{n-j-1}` summands
/// `Σ^{|ω|} L_j E(n)` with `ω` in `Λ(dt_1, ..., dt_{n-j-1}){dt_{n-j}}`.
pub fn conjectured_summands(p: u32, n: u32) -> Result<SummandSpec> {
    check_prime(p)?;
    check_range(n, 0)?;
    let mut summands = vec![Summand {
        level: n,
        suspension: 0,
        label: Vec::new(),
    }];
    for j in (0..n).rev() {
        let top = n - j;
        for mask in 0u32..(1 << (top - 1)) {
            let mut label: Vec<u32> = (1..top).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            label.push(top);
            let suspension = label.iter().map(|&k| dt_degree(p, k)).sum();
            summands.push(Summand {
                level: j,
                suspension,
                label,
            });
        }
    }
    let spec = SummandSpec { p, n, summands };
    spec.validate()?;
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureCheck {
    pub p: u32,
    pub n: u32,
    pub i: u32,
    pub conjectured: DegreeMultiset,
    pub expected: DegreeMultiset,
    pub comparison: Comparison,
}

impl ConjectureCheck {
    pub fn consistent(&self) -> bool {
        self.comparison.consistent
    }
}

/// `K(i)`-degrees of the conjectured splitting against those of
/// `K(i)_*THH(E(n))`, modulo unit degrees.
pub fn conjecture_check(p: u32, n: u32, i: u32) -> Result<ConjectureCheck> {
    let spec = conjectured_summands(p, n)?;
    check_range(n, i)?;
    let expected = thh_ki_expected(p, n, i)?;
    let conjectured = DegreeMultiset::new(spec.ki_degrees(i), expected.lattice);
    let comparison = compare_mod_lattice(&conjectured, &expected);
    Ok(ConjectureCheck {
        p,
        n,
        i,
        conjectured,
        expected,
        comparison,
    })
}

/// The splitting of `THH(E(2))` as stated: `E`, `Σ^{2p-1}L_1E`,
/// `Σ^{2p^2-1}L_0E` and `Σ^{2p^2+2p-2}L_0E`.
pub fn stated_e2_splitting(p: u32) -> SummandSpec {
    let (a, b) = (dt_degree(p, 1), dt_degree(p, 2));
    let p = p as i32;
    let summands = vec![
        Summand {
            level: 2,
            suspension: 0,
            label: vec![],
        },
        Summand {
            level: 1,
            suspension: 2 * p - 1,
            label: vec![1],
        },
        Summand {
            level: 0,
            suspension: 2 * p * p - 1,
            label: vec![2],
        },
        Summand {
            level: 0,
            suspension: 2 * p * p + 2 * p - 2,
            label: vec![1, 2],
        },
    ];
    debug_assert_eq!(summands[3].suspension, a + b);
    SummandSpec {
        p: p as u32,
        n: 2,
        summands,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingCheck {
    pub p: u32,
    pub checks: Vec<ConjectureCheck>,
    /// The stated summands coincide with the conjectured ones at `n = 2`.
    pub matches_conjecture: bool,
    /// `K(0)` degrees of the stated summands.
    pub k0_degrees: Vec<i32>,
    /// `K(0)` degrees without the unit summand `E`.
    pub reduced_k0_degrees: Vec<i32>,
    pub consistent: bool,
}

/// Checks the `THH(E(2))` splitting at `p` against `K(0)`, `K(1)` and `K(2)`.
pub fn e2_splitting_check(p: u32) -> Result<SplittingCheck> {
    check_prime(p)?;
    let stated = stated_e2_splitting(p);
    stated.validate()?;
    let conjectured = conjectured_summands(p, 2)?;
    let mut a = stated.summands.clone();
    let mut b = conjectured.summands.clone();
    a.sort_by(|x, y| x.label.cmp(&y.label));
    b.sort_by(|x, y| x.label.cmp(&y.label));
    let matches_conjecture = a == b;
    let checks = (0..=2)
        .map(|i| conjecture_check(p, 2, i))
        .collect::<Result<Vec<_>>>()?;
    let k0_degrees = stated.ki_degrees(0);
    let reduced: Vec<i32> = stated
        .summands
        .iter()
        .filter(|s| !s.label.is_empty())
        .filter_map(|s| ki_of_summand(0, s))
        .collect();
    let expected_k0 = thh_ki_expected(p, 2, 0)?;
    let consistent = matches_conjecture
        && checks.iter().all(ConjectureCheck::consistent)
        && k0_degrees == expected_k0.degrees
        && !reduced.contains(&0);
    Ok(SplittingCheck {
        p,
        checks,
        matches_conjecture,
        k0_degrees,
        reduced_k0_degrees: reduced,
        consistent,
    })
}

/// The summands arranged in a cube: columns are monomials in
/// `dt_1, ..., dt_c`, rows monomials in the remaining `dt_k`.
pub fn cube_tex(p: u32, n: u32) -> Result<String> {
    let spec = conjectured_summands(p, n)?;
    let c = n.div_ceil(2);
    let monomials = |range: std::ops::RangeInclusive<u32>| -> Vec<Vec<u32>> {
        let ks: Vec<u32> = range.collect();
        (0u32..(1 << ks.len()))
            .map(|mask| {
                ks.iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, &k)| k)
                    .collect()
            })
            .collect()
    };
    let cols = monomials(1..=c);
    let rows = monomials(c + 1..=n);
    let tex_label = |l: &[u32]| -> String {
        if l.is_empty() {
            "1".into()
        } else {
            l.iter().map(|k| format!("dt_{k}")).collect()
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{tabular}}{{r|{}}}", "c|".repeat(cols.len()));
    let header: Vec<String> = cols.iter().map(|l| format!("${}$", tex_label(l))).collect();
    let _ = writeln!(out, " & {} \\\\ \\hline", header.join(" & "));
    for row in &rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|col| {
                let mut label: Vec<u32> = col.iter().chain(row).copied().collect();
                label.sort_unstable();
                let s = spec
                    .summands
                    .iter()
                    .find(|s| s.label == label)
                    .expect("every monomial labels a summand");
                if s.level == n {
                    "$E$".to_string()
                } else {
                    format!("$L_{}E$", s.level)
                }
            })
            .collect();
        let _ = writeln!(
            out,
            "${}$ & {} \\\\ \\hline",
            tex_label(row),
            cells.join(" & ")
        );
    }
    out.push_str("\\end{tabular}\n");
    Ok(out)
}
