//! Finitely presented graded commutative algebras with rewrite-based normal forms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coeff::{Coeff, Field};
use super::poly::{GradedPoly, Monomial};
use super::ring::{Generator, PolyRing, RingMap};
use crate::error::{Error, Result};

pub const PRESENTATION_SCHEMA: &str = "chromatic.presentation/v1";

/// Default bound on rewrite steps in a single normal-form computation.
pub const DEFAULT_STEP_BUDGET: usize = 5_000_000;

/// `lhs -> rhs`, where `lhs` only involves non-invertible generators and every
/// monomial of `rhs` has a strictly smaller non-invertible part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: GradedPoly,
}

impl RewriteRule {
    fn divides(&self, m: &Monomial, ring: &PolyRing) -> bool {
        self.lhs
            .exps()
            .iter()
            .zip(m.exps())
            .zip(ring.gens())
            .all(|((l, e), g)| g.invertible || e >= l)
    }

    /// `Some((idx, k))` when the left side is `g_idx^k`.
    pub fn pure_power(&self) -> Option<(usize, i32)> {
        let nz: Vec<_> = self
            .lhs
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .collect();
        match nz.as_slice() {
            [(idx, e)] => Some((*idx, **e)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    ring: Arc<PolyRing>,
    relations: Vec<GradedPoly>,
    rules: Vec<RewriteRule>,
    base: Vec<usize>,
    step_budget: usize,
}

impl Presentation {
    /// The free algebra on `ring`'s generators.
    pub fn free(ring: &Arc<PolyRing>) -> Presentation {
        Presentation {
            ring: ring.clone(),
            relations: Vec::new(),
            rules: Vec::new(),
            base: Vec::new(),
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }

    pub fn new(
        ring: &Arc<PolyRing>,
        relations: Vec<GradedPoly>,
        base: &[&str],
    ) -> Result<Presentation> {
        let mut pres = Presentation::free(ring);
        pres.base = resolve_names(ring, base)?;
        for rel in relations {
            pres.push_relation(rel)?;
        }
        Ok(pres)
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn set_base(&mut self, base: &[&str]) -> Result<()> {
        self.base = resolve_names(&self.ring, base)?;
        Ok(())
    }

    /// Adds a homogeneous relation, orienting it into a rewrite rule after
    /// reducing it by the rules already present.
    pub fn push_relation(&mut self, rel: GradedPoly) -> Result<Option<&RewriteRule>> {
        if **rel.ring() != *self.ring {
            return Err(Error::RingMismatch);
        }
        rel.validate()?;
        rel.homogeneous_degree()?;
        let reduced = self.normal_form(&rel)?;
        self.relations.push(rel);
        if reduced.is_zero() {
            return Ok(None);
        }
        let rule = orient(&reduced)?;
        self.rules.push(rule);
        // Keep right-hand sides reduced against the new rule.
        let n = self.rules.len();
        for k in 0..n - 1 {
            let rhs = self.normal_form(&self.rules[k].rhs)?;
            self.rules[k].rhs = rhs;
        }
        Ok(self.rules.last())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn relations(&self) -> &[GradedPoly] {
        &self.relations
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn base_names(&self) -> Vec<&str> {
        self.base
            .iter()
            .map(|&i| self.ring.gens()[i].name.as_str())
            .collect()
    }

    pub fn var(&self, name: &str) -> Result<GradedPoly> {
        GradedPoly::var(&self.ring, name)
    }

    pub fn parse(&self, s: &str) -> Result<GradedPoly> {
        super::poly::parse_poly(&self.ring, s)
    }

    /// Fixpoint of rewriting. Largest monomials are rewritten first, so each
    /// monomial is finalized once.
    pub fn normal_form(&self, e: &GradedPoly) -> Result<GradedPoly> {
        if **e.ring() != *self.ring {
            return Err(Error::RingMismatch);
        }
        if self.rules.is_empty() {
            return Ok(e.clone());
        }
        if !e.terms().iter().any(|(m, _)| self.reducer(m).is_some()) {
            return Ok(e.clone());
        }
        let mut work: BTreeMap<Monomial, Coeff> = e.terms().iter().cloned().collect();
        let mut out: Vec<(Monomial, Coeff)> = Vec::new();
        let mut steps = 0usize;
        while let Some((m, c)) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            let Some(rule) = self.reducer(&m) else {
                out.push((m, c));
                continue;
            };
            steps += 1;
            if steps > self.step_budget {
                return Err(Error::RewriteBudget(self.step_budget));
            }
            let image = self.rewrite_term(rule, &m, &c);
            for (rm, rc) in image.into_terms() {
                match work.get_mut(&rm) {
                    Some(x) => x.add_assign(&rc),
                    None => {
                        work.insert(rm, rc);
                    }
                }
            }
        }
        Ok(GradedPoly::from_terms(&self.ring, out))
    }

    /// `c m` with one application of `rule`, which must divide `m`.
    fn rewrite_term(&self, rule: &RewriteRule, m: &Monomial, c: &Coeff) -> GradedPoly {
        let q = m.div(&rule.lhs);
        if self.ring.odd_indices().is_empty() {
            return rule.rhs.mul_term(&q, c);
        }
        // q * lhs = s * m in variable order, so c m = (c s) q lhs.
        let one = self.field().one();
        let qs = GradedPoly::term(&self.ring, q.clone(), one.clone()).mul(&GradedPoly::term(
            &self.ring,
            rule.lhs.clone(),
            one,
        ));
        let s = qs
            .leading()
            .map(|(_, s)| s.clone())
            .expect("admissible monomial");
        GradedPoly::term(&self.ring, q, c.mul(&s)).mul(&rule.rhs)
    }

    /// Normal form by a different strategy: always rewrite the smallest
    /// reducible monomial, trying rules in reverse order. Used to audit
    /// confluence against [`Presentation::normal_form`].
    pub fn normal_form_alternate(&self, e: &GradedPoly) -> Result<GradedPoly> {
        if **e.ring() != *self.ring {
            return Err(Error::RingMismatch);
        }
        let mut cur = e.clone();
        let mut steps = 0usize;
        loop {
            let hit = cur.terms().iter().rev().find_map(|(m, c)| {
                self.rules
                    .iter()
                    .rev()
                    .find(|r| r.divides(m, &self.ring))
                    .map(|r| (m, c, r))
            });
            let Some((m, c, rule)) = hit else {
                return Ok(cur);
            };
            steps += 1;
            if steps > self.step_budget {
                return Err(Error::RewriteBudget(self.step_budget));
            }
            let image = self.rewrite_term(rule, m, c);
            let lead = GradedPoly::term(&self.ring, m.clone(), c.clone());
            cur = cur.sub(&lead).add(&image);
        }
    }

    fn reducer(&self, m: &Monomial) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.divides(m, &self.ring))
    }

    pub fn is_normal(&self, e: &GradedPoly) -> bool {
        e.terms().iter().all(|(m, _)| self.reducer(m).is_none())
    }

    /// Product in the quotient.
    pub fn mul(&self, a: &GradedPoly, b: &GradedPoly) -> Result<GradedPoly> {
        self.normal_form(&a.mul(b))
    }

    pub fn pow(&self, a: &GradedPoly, e: u32) -> Result<GradedPoly> {
        let mut result = GradedPoly::one(&self.ring);
        let mut base = self.normal_form(a)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// Normal-form monomials in the non-base generators, i.e. a basis of the
    /// algebra as a module over the subalgebra generated by `over`.
    pub fn module_basis(&self, over: &[&str]) -> Result<Vec<Monomial>> {
        let over = resolve_names(&self.ring, over)?;
        let mut bounds = Vec::new();
        for (idx, g) in self.ring.gens().iter().enumerate() {
            if over.contains(&idx) {
                continue;
            }
            match self.bound_of(idx) {
                Some(b) => bounds.push((idx, b)),
                None => return Err(Error::UnboundedBasis(g.name.clone())),
            }
        }
        let mut out = Vec::new();
        let mut cur = Monomial::one(self.ring.len());
        enumerate_box(&bounds, 0, &mut cur, &mut |m| {
            if self.reducer(m).is_none() {
                out.push(m.clone());
            }
        });
        out.sort_by(|a, b| {
            let da: i32 = a.exps().iter().sum();
            let db: i32 = b.exps().iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        Ok(out)
    }

    /// Basis over the presentation's own base subalgebra.
    pub fn module_basis_over_base(&self) -> Result<Vec<Monomial>> {
        let names: Vec<String> = self.base_names().into_iter().map(String::from).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.module_basis(&refs)
    }

    /// Exponent bound of a generator: 2 for exterior generators, `k` when a
    /// rule rewrites `g^k`.
    fn bound_of(&self, idx: usize) -> Option<i32> {
        let g = &self.ring.gens()[idx];
        if g.invertible {
            return None;
        }
        if g.is_odd() {
            return Some(2);
        }
        self.rules
            .iter()
            .filter_map(|r| r.pure_power())
            .filter(|(i, _)| *i == idx)
            .map(|(_, k)| k)
            .min()
    }

    /// Number of normal-form monomials in the non-base generators in each
    /// internal degree of `[lo, hi]`; zero counts are omitted.
    pub fn hilbert_counts(&self, lo: i32, hi: i32, over: &[&str]) -> Result<BTreeMap<i32, u64>> {
        if lo > hi {
            return Err(Error::OutOfRange(format!("empty window [{lo}, {hi}]")));
        }
        let over = resolve_names(&self.ring, over)?;
        for r in &self.rules {
            if over.iter().any(|&b| r.lhs.exps()[b] != 0) {
                return Err(Error::Unsupported(
                    "rewrite rule involves a base generator; the algebra is not presented freely over the base"
                        .into(),
                ));
            }
        }
        let gens = self.ring.gens();
        let mut bounded = Vec::new();
        let mut free = Vec::new();
        let mut units = Vec::new();
        for (idx, g) in gens.iter().enumerate() {
            if over.contains(&idx) {
                continue;
            }
            if let Some(b) = self.bound_of(idx) {
                bounded.push((idx, b));
            } else if g.invertible {
                units.push(idx);
            } else {
                if g.degree <= 0 {
                    return Err(Error::InfinitePerDegree(format!(
                        "polynomial generator `{}` has degree {}",
                        g.name, g.degree
                    )));
                }
                free.push(idx);
            }
        }
        if units.len() > 1 || (units.len() == 1 && !free.is_empty()) {
            return Err(Error::InfinitePerDegree(format!(
                "invertible {} combines with other unbounded generators; count over a graded field containing it",
                gens[units[0]].name
            )));
        }
        if let Some(&u) = units.first() {
            if gens[u].degree == 0 {
                return Err(Error::InfinitePerDegree(format!(
                    "invertible `{}` has degree zero",
                    gens[u].name
                )));
            }
        }
        let mut counts = BTreeMap::new();
        let mut cur = Monomial::one(self.ring.len());
        let ctx = CountCtx {
            ring: &self.ring,
            bounded: &bounded,
            free: &free,
            unit: units.first().copied(),
            lo,
            hi,
        };
        ctx.walk(0, 0, &mut cur, &mut |m, d| {
            if self.reducer(m).is_none() {
                *counts.entry(d).or_insert(0u64) += 1;
            }
        });
        Ok(counts)
    }

    /// Sets the named generators to scalars. When any assigned generator has
    /// nonzero degree the grading of the result is collapsed to degree 0.
    pub fn specialize(&self, values: &[(&str, Coeff)]) -> Result<(Presentation, Specialization)> {
        let field = self.field();
        let mut collapse = false;
        for (name, c) in values {
            let idx = self.ring.index(name)?;
            let g = &self.ring.gens()[idx];
            if g.invertible && c.is_zero() {
                return Err(Error::NonUnit(format!("{name} = 0")));
            }
            if g.degree != 0 {
                collapse = true;
            }
        }
        let kept: Vec<Generator> = self
            .ring
            .gens()
            .iter()
            .filter(|g| !values.iter().any(|(n, _)| *n == g.name))
            .map(|g| Generator {
                degree: if collapse { 0 } else { g.degree },
                ..g.clone()
            })
            .collect();
        if collapse && self.ring.gens().iter().any(|g| g.is_odd()) {
            return Err(Error::Unsupported(
                "collapsing the grading of an exterior generator".into(),
            ));
        }
        let target = PolyRing::new(field, kept)?;
        let assign: Vec<(&str, GradedPoly)> = values
            .iter()
            .map(|(n, c)| {
                (
                    *n,
                    GradedPoly::constant(&target, field.convert(c).unwrap_or(c.clone())),
                )
            })
            .collect();
        let map = RingMap::by_names(&self.ring, &target, &assign)?;
        let relations = self
            .relations
            .iter()
            .map(|r| map.apply(r))
            .collect::<Result<Vec<_>>>()?;
        let base: Vec<&str> = self
            .base_names()
            .into_iter()
            .filter(|b| !values.iter().any(|(n, _)| n == b))
            .collect();
        let pres = Presentation::new(&target, relations, &base)?;
        let record = Specialization {
            assignments: values
                .iter()
                .map(|(n, c)| (n.to_string(), c.to_canonical()))
                .collect(),
            grading_collapsed: collapse,
        };
        Ok((pres, record))
    }

    /// Relation sets generate the same ideal: each side reduces to zero
    /// modulo the other. Rewrite systems here have coprime pure-power leading
    /// terms, so reduction decides membership.
    pub fn same_ideal(&self, other: &Presentation) -> Result<bool> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        for r in &self.relations {
            if !other.normal_form(r)?.is_zero() {
                return Ok(false);
            }
        }
        for r in &other.relations {
            if !self.normal_form(r)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> PresentationFile {
        let gens = self.ring.gens();
        PresentationFile {
            schema: PRESENTATION_SCHEMA.to_string(),
            prime: self.field().characteristic(),
            generators: gens.to_vec(),
            relations: self.relations.iter().map(encode_poly).collect(),
            base: self
                .base
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|i| gens[i].name.clone())
                .collect(),
        }
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(file: &PresentationFile) -> Result<Presentation> {
        if file.schema != PRESENTATION_SCHEMA {
            return Err(Error::Schema(format!("unknown schema `{}`", file.schema)));
        }
        let field = Field::from_characteristic(file.prime)?;
        let ring = PolyRing::new(field, file.generators.clone())?;
        let relations = file
            .relations
            .iter()
            .map(|r| decode_poly(&ring, r))
            .collect::<Result<Vec<_>>>()?;
        let base: Vec<&str> = file.base.iter().map(String::as_str).collect();
        Presentation::new(&ring, relations, &base)
    }

    pub fn from_json_str(s: &str) -> Result<Presentation> {
        let file: PresentationFile = serde_json::from_str(s)?;
        Presentation::from_json(&file)
    }
}

/// Record of a specialization, kept alongside any result computed from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub assignments: Vec<(String, String)>,
    pub grading_collapsed: bool,
}

fn resolve_names(ring: &PolyRing, names: &[&str]) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = names.iter().map(|n| ring.index(n)).collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Turns a reduced nonzero relation into a rule. The leading group (terms
/// sharing the largest non-invertible part) must be a single unit multiple.
fn orient(rel: &GradedPoly) -> Result<RewriteRule> {
    let ring = rel.ring();
    let gens = ring.gens();
    let noninv = |m: &Monomial| -> Monomial {
        let mut m = m.clone();
        for (e, g) in m.exps_mut().iter_mut().zip(gens) {
            if g.invertible {
                *e = 0;
            }
        }
        m
    };
    let (lead_m, lead_c) = rel.leading().expect("nonzero relation");
    let lhs = noninv(lead_m);
    let group = rel.terms().iter().filter(|(m, _)| noninv(m) == lhs).count();
    if group != 1 {
        return Err(Error::NonUnit(format!(
            "leading coefficient of {rel} is not a unit"
        )));
    }
    if lhs.is_one() {
        return Err(Error::NonUnit(format!(
            "relation {rel} only involves invertible generators"
        )));
    }
    let unit = GradedPoly::term(ring, lead_m.div(&lhs), lead_c.clone());
    let inv = unit.inverse_unit()?;
    let tail = GradedPoly::from_terms(ring, rel.terms()[1..].iter().cloned());
    let rhs = tail.mul(&inv).neg();
    Ok(RewriteRule { lhs, rhs })
}

struct CountCtx<'a> {
    ring: &'a PolyRing,
    bounded: &'a [(usize, i32)],
    free: &'a [usize],
    unit: Option<usize>,
    lo: i32,
    hi: i32,
}

impl CountCtx<'_> {
    fn slot_count(&self) -> usize {
        self.bounded.len() + self.free.len()
    }

    /// Smallest degree reachable from slot `k` onwards, ignoring the unit.
    fn min_rest(&self, k: usize) -> i32 {
        let gens = self.ring.gens();
        (k..self.slot_count())
            .map(|s| {
                if s < self.bounded.len() {
                    let (idx, b) = self.bounded[s];
                    (gens[idx].degree * (b - 1)).min(0)
                } else {
                    0
                }
            })
            .sum()
    }

    fn max_rest(&self, k: usize) -> Option<i32> {
        let gens = self.ring.gens();
        let mut total = 0;
        for s in k..self.slot_count() {
            if s < self.bounded.len() {
                let (idx, b) = self.bounded[s];
                total += (gens[idx].degree * (b - 1)).max(0);
            } else {
                return None;
            }
        }
        Some(total)
    }

    fn walk(&self, k: usize, deg: i32, cur: &mut Monomial, f: &mut impl FnMut(&Monomial, i32)) {
        let gens = self.ring.gens();
        if k == self.slot_count() {
            match self.unit {
                None => {
                    if deg >= self.lo && deg <= self.hi {
                        f(cur, deg);
                    }
                }
                Some(u) => {
                    let d = gens[u].degree;
                    // Exponents c with lo <= deg + c*d <= hi.
                    let (mut cmin, mut cmax) =
                        (div_ceil(self.lo - deg, d), div_floor(self.hi - deg, d));
                    if d < 0 {
                        cmin = div_ceil(self.hi - deg, d);
                        cmax = div_floor(self.lo - deg, d);
                    }
                    for c in cmin..=cmax {
                        cur.exps_mut()[u] = c;
                        f(cur, deg + c * d);
                    }
                    cur.exps_mut()[u] = 0;
                }
            }
            return;
        }
        if self.unit.is_none() {
            if deg + self.min_rest(k) > self.hi {
                return;
            }
            if let Some(mx) = self.max_rest(k) {
                if deg + mx < self.lo {
                    return;
                }
            }
        }
        if k < self.bounded.len() {
            let (idx, b) = self.bounded[k];
            for e in 0..b {
                cur.exps_mut()[idx] = e;
                self.walk(k + 1, deg + e * gens[idx].degree, cur, f);
            }
            cur.exps_mut()[idx] = 0;
        } else {
            let idx = self.free[k - self.bounded.len()];
            let d = gens[idx].degree;
            let mut e = 0;
            loop {
                let nd = deg + e * d;
                if self.unit.is_none() && nd + self.min_rest(k + 1) > self.hi {
                    break;
                }
                cur.exps_mut()[idx] = e;
                self.walk(k + 1, nd, cur, f);
                e += 1;
                if self.unit.is_some() {
                    // Unreachable: units never combine with free generators.
                    break;
                }
            }
            cur.exps_mut()[idx] = 0;
        }
    }
}

fn div_floor(a: i32, b: i32) -> i32 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i32, b: i32) -> i32 {
    -div_floor(-a, b)
}

fn enumerate_box(
    bounds: &[(usize, i32)],
    k: usize,
    cur: &mut Monomial,
    f: &mut impl FnMut(&Monomial),
) {
    if k == bounds.len() {
        f(cur);
        return;
    }
    let (idx, b) = bounds[k];
    for e in 0..b {
        cur.exps_mut()[idx] = e;
        enumerate_box(bounds, k + 1, cur, f);
    }
    cur.exps_mut()[idx] = 0;
}

/// Serialized presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub schema: String,
    pub prime: u32,
    pub generators: Vec<Generator>,
    pub relations: Vec<Vec<TermFile>>,
    pub base: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: String,
    pub monomial: Vec<(String, i32)>,
}

pub fn encode_poly(p: &GradedPoly) -> Vec<TermFile> {
    let gens = p.ring().gens();
    p.terms()
        .iter()
        .map(|(m, c)| TermFile {
            coeff: c.to_canonical(),
            monomial: m
                .exps()
                .iter()
                .zip(gens)
                .filter(|(e, _)| **e != 0)
                .map(|(e, g)| (g.name.clone(), *e))
                .collect(),
        })
        .collect()
}

pub fn decode_poly(ring: &Arc<PolyRing>, terms: &[TermFile]) -> Result<GradedPoly> {
    let field = ring.field();
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut m = Monomial::one(ring.len());
        for (name, e) in &t.monomial {
            m.exps_mut()[ring.index(name)?] += e;
        }
        ring.check_monomial(&m)?;
        out.push((m, field.parse(&t.coeff)?));
    }
    Ok(GradedPoly::from_terms(ring, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b1() -> Presentation {
        // B_1 at p = 3, i = 1, n = 2 over F_3[v_1^±, w_2^±].
        let ring = PolyRing::new(
            Field::prime(3).unwrap(),
            vec![
                Generator::new("t_1", 4),
                Generator::unit("w_2", 16),
                Generator::unit("v_1", 4),
            ],
        )
        .unwrap();
        let rel = super::super::poly::parse_poly(&ring, "v_1 t_1^3 + w_2 - v_1^3 t_1").unwrap();
        Presentation::new(&ring, vec![rel], &["w_2", "v_1"]).unwrap()
    }

    #[test]
    fn normal_form_of_t1_cubed() {
        let b = b1();
        let t3 = b.parse("t_1^3").unwrap();
        let expected = b.parse("v_1^2 t_1 - v_1^-1 w_2").unwrap();
        assert_eq!(b.normal_form(&t3).unwrap(), expected);
    }

    #[test]
    fn normal_form_of_zero_is_zero() {
        let b = b1();
        assert!(b
            .normal_form(&GradedPoly::zero(b.ring()))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn normal_form_of_t1_sixth_matches_hand_expansion() {
        // (v^2 t - v^-1 w)^2 = v^4 t^2 - 2 v t w + v^-2 w^2, and 2 = -1 in F_3.
        let b = b1();
        let nf = b.normal_form(&b.parse("t_1^6").unwrap()).unwrap();
        let expected = b.parse("v_1^4 t_1^2 + v_1 t_1 w_2 + v_1^-2 w_2^2").unwrap();
        assert_eq!(nf, expected);
    }

    #[test]
    fn basis_of_b1() {
        let b = b1();
        let basis = b.module_basis_over_base().unwrap();
        let shown: Vec<String> = basis
            .iter()
            .map(|m| super::super::poly::render_monomial(b.ring(), m, false))
            .collect();
        assert_eq!(shown, ["", "t_1", "t_1^2"]);
    }

    #[test]
    fn unbounded_generator_is_reported() {
        let b = b1();
        assert!(matches!(
            b.module_basis(&["v_1"]),
            Err(Error::UnboundedBasis(_))
        ));
    }

    #[test]
    fn polynomial_hilbert_counts() {
        let ring = PolyRing::new(Field::prime(3).unwrap(), vec![Generator::new("v_1", 4)]).unwrap();
        let p = Presentation::free(&ring);
        let counts = p.hilbert_counts(0, 12, &[]).unwrap();
        assert_eq!(counts, BTreeMap::from([(0, 1), (4, 1), (8, 1), (12, 1)]));
    }

    #[test]
    fn exterior_hilbert_counts() {
        let ring = PolyRing::new(
            Field::Rational,
            vec![Generator::new("dv_1", 5), Generator::new("dv_2", 17)],
        )
        .unwrap();
        let counts = Presentation::free(&ring)
            .hilbert_counts(0, 22, &[])
            .unwrap();
        assert_eq!(counts, BTreeMap::from([(0, 1), (5, 1), (17, 1), (22, 1)]));
    }

    #[test]
    fn laurent_counts_over_graded_field() {
        // B(1,2)_* = K(1)_*[w_2^±] counted over K(1)_* = F_3[v_1^±].
        let ring = PolyRing::new(
            Field::prime(3).unwrap(),
            vec![Generator::unit("w_2", 16), Generator::unit("v_1", 4)],
        )
        .unwrap();
        let p = Presentation::free(&ring);
        let counts = p.hilbert_counts(-32, 48, &["v_1"]).unwrap();
        assert_eq!(
            counts,
            BTreeMap::from([(-32, 1), (-16, 1), (0, 1), (16, 1), (32, 1), (48, 1)])
        );
        assert!(matches!(
            p.hilbert_counts(0, 16, &[]),
            Err(Error::InfinitePerDegree(_))
        ));
    }

    #[test]
    fn json_is_byte_reproducible() {
        let b = b1();
        let s = b.to_json_string();
        let back = Presentation::from_json_str(&s).unwrap();
        assert_eq!(back.to_json_string(), s);
        assert_eq!(back.rules(), b.rules());
    }
}
