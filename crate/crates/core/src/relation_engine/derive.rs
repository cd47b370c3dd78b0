use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    encode_poly, Field, Generator, GradedPoly, Monomial, PolyRing, Presentation, RewriteRule,
    RingMap, TermFile, DEFAULT_STEP_BUDGET,
};
use crate::error::{Error, Result};
use crate::formal_groups::{
    cached_universal, pushforward_universal, FGLaw, LawCache, Scheme, TruncSeries,
};

/// Default cap on the number of monomials in one expanded series.
pub const DEFAULT_MAX_TERMS: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct DerivationConfig {
    pub p: u32,
    pub i: u32,
    pub n: u32,
    pub m: u32,
    /// Truncation order; defaults to `p^{i+m} + p - 1`.
    pub trunc: Option<usize>,
    pub scheme: Scheme,
    pub cache: Option<LawCache>,
    pub step_budget: usize,
    pub max_terms: usize,
    /// Allow `n > 3` or `m > 2`.
    pub allow_large: bool,
}

impl DerivationConfig {
    pub fn new(p: u32, i: u32, n: u32, m: u32) -> Self {
        DerivationConfig {
            p,
            i,
            n,
            m,
            trunc: None,
            scheme: Scheme::Hazewinkel,
            cache: None,
            step_budget: DEFAULT_STEP_BUDGET,
            max_terms: DEFAULT_MAX_TERMS,
            allow_large: false,
        }
    }

    pub fn default_trunc(&self) -> usize {
        (self.p as usize).pow(self.i + self.m) + self.p as usize - 1
    }

    fn validate(&self) -> Result<usize> {
        Field::prime(self.p)?;
        if self.i < 1 || self.i > self.n {
            return Err(Error::OutOfRange(format!(
                "need 1 <= i <= n, got i={}, n={}",
                self.i, self.n
            )));
        }
        if self.m < 1 {
            return Err(Error::OutOfRange("need m >= 1".into()));
        }
        if !self.allow_large && (self.n > 3 || self.m > 2) {
            return Err(Error::OutOfRange(format!(
                "n={} m={} is beyond the default range n <= 3, m <= 2",
                self.n, self.m
            )));
        }
        let p = self.p as usize;
        let lo = p.pow(self.i + self.m);
        let hi = p.pow(self.i + self.m + 1);
        let trunc = self.trunc.unwrap_or_else(|| self.default_trunc());
        if trunc < lo || trunc >= hi {
            return Err(Error::OutOfRange(format!(
                "truncation {trunc} must lie in [{lo}, {hi}) for m = {}",
                self.m
            )));
        }
        Ok(trunc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConclusionKind {
    /// `w_j = 0`.
    Vanishes { generator: String },
    /// `w_i = v_i`.
    Identified { generator: String, with: String },
    /// The relation for `t_r`.
    Stage { r: u32 },
}

/// What one coefficient comparison forced.
#[derive(Clone, Debug)]
pub struct Conclusion {
    pub exponent: usize,
    pub kind: ConclusionKind,
    /// Coefficient of `x^exponent` on the `[p]_G(f(x))` side, with terms
    /// common to both sides removed.
    pub lhs_side: GradedPoly,
    /// Same for the `f([p]_F(x))` side.
    pub rhs_side: GradedPoly,
    /// `lhs_side - rhs_side`, reduced by everything concluded before.
    pub relation: GradedPoly,
    pub rule: RewriteRule,
}

impl Conclusion {
    pub fn display(&self) -> String {
        format!("{} = {}", self.lhs_side, self.rhs_side)
    }
}

#[derive(Clone, Debug)]
pub struct DerivationState {
    pub p: u32,
    pub i: u32,
    pub n: u32,
    pub m: u32,
    pub trunc: usize,
    pub scheme: Scheme,
    /// Free algebra on `t_m..t_1, w_1..w_n, v_i` modulo everything concluded.
    pub working: Presentation,
    pub conclusions: Vec<Conclusion>,
    /// Number of full series expansions performed.
    pub expansions: usize,
    /// Largest monomial count seen in one expanded series.
    pub peak_terms: usize,
    /// Universal law the expansions were pushed forward from.
    pub universal: Arc<FGLaw>,
}

impl DerivationState {
    pub fn stage(&self, r: u32) -> Result<&Conclusion> {
        self.conclusions
            .iter()
            .find(|c| c.kind == ConclusionKind::Stage { r })
            .ok_or(Error::MissingStage(r as usize))
    }

    pub fn stages(&self) -> impl Iterator<Item = &Conclusion> {
        self.conclusions
            .iter()
            .filter(|c| matches!(c.kind, ConclusionKind::Stage { .. }))
    }

    /// The working presentation holding only the conclusions made before the
    /// stage-`r` relation.
    pub fn working_before_stage(&self, r: u32) -> Result<Presentation> {
        let mut pres =
            Presentation::free(self.working.ring()).with_step_budget(DEFAULT_STEP_BUDGET);
        for c in &self.conclusions {
            if let ConclusionKind::Stage { r: s } = c.kind {
                if s >= r {
                    break;
                }
            }
            pres.push_relation(c.relation.clone())?;
        }
        Ok(pres)
    }

    /// `B_m` over `K(i)_*[w_{i+1}, ..., w_n^{±1}]`.
    pub fn presentation(&self) -> Result<Presentation> {
        let target = output_ring(self.p, self.i, self.n, self.m)?;
        let map = to_output(&self.working, &target, self.i, self.n)?;
        let relations = self
            .stages()
            .map(|c| map.apply(&c.relation))
            .collect::<Result<Vec<_>>>()?;
        let base = base_names(self.i, self.n);
        let base_refs: Vec<&str> = base.iter().map(String::as_str).collect();
        Presentation::new(&target, relations, &base_refs)
    }

    /// Both sides expanded through `x^order` modulo the conclusions made
    /// before stage `r`.
    pub fn expand_before_stage(&self, r: u32, order: usize) -> Result<Expansion> {
        let pres = self.working_before_stage(r)?;
        expand(
            &self.universal,
            &pres,
            self.p,
            self.i,
            self.n,
            self.m,
            order,
        )
    }

    /// The stage-`r` relation moved into the ring of [`output_ring`].
    pub fn stage_relation(&self, r: u32) -> Result<GradedPoly> {
        let target = output_ring(self.p, self.i, self.n, self.m)?;
        to_output(&self.working, &target, self.i, self.n)?.apply(&self.stage(r)?.relation)
    }
}

fn gen_degree(p: u32, j: u32) -> i32 {
    2 * (p.pow(j) as i32 - 1)
}

/// `t_m, ..., t_1, w_1, ..., w_n, v_i` over `F_p`; `w_n` is invertible unless
/// `i = n`, in which case it gets identified with `v_n` instead.
pub fn working_ring(p: u32, i: u32, n: u32, m: u32) -> Result<Arc<PolyRing>> {
    let mut gens = Vec::new();
    for r in (1..=m).rev() {
        gens.push(Generator::new(format!("t_{r}"), gen_degree(p, r)));
    }
    for j in 1..=n {
        let name = format!("w_{j}");
        if j == n && n > i {
            gens.push(Generator::unit(name, gen_degree(p, j)));
        } else {
            gens.push(Generator::new(name, gen_degree(p, j)));
        }
    }
    gens.push(Generator::unit(format!("v_{i}"), gen_degree(p, i)));
    PolyRing::new(Field::prime(p)?, gens)
}

/// Ring of `B_m`: `t_m, ..., t_1` over `K(i)_*[w_{i+1}, ..., w_n^{±1}]`.
pub fn output_ring(p: u32, i: u32, n: u32, m: u32) -> Result<Arc<PolyRing>> {
    let mut gens = Vec::new();
    for r in (1..=m).rev() {
        gens.push(Generator::new(format!("t_{r}"), gen_degree(p, r)));
    }
    for j in i + 1..=n {
        let name = format!("w_{j}");
        if j == n {
            gens.push(Generator::unit(name, gen_degree(p, j)));
        } else {
            gens.push(Generator::new(name, gen_degree(p, j)));
        }
    }
    gens.push(Generator::unit(format!("v_{i}"), gen_degree(p, i)));
    PolyRing::new(Field::prime(p)?, gens)
}

pub fn base_names(i: u32, n: u32) -> Vec<String> {
    let mut out: Vec<String> = (i + 1..=n).map(|j| format!("w_{j}")).collect();
    out.push(format!("v_{i}"));
    out
}

/// Working ring to output ring: `w_j -> 0` for `j < i`, `w_i -> v_i`.
fn to_output(working: &Presentation, target: &Arc<PolyRing>, i: u32, n: u32) -> Result<RingMap> {
    let mut assign = Vec::new();
    let names: Vec<String> = (1..i).map(|j| format!("w_{j}")).collect();
    for name in &names {
        assign.push((name.as_str(), GradedPoly::zero(target)));
    }
    let wi = format!("w_{i}");
    let vi = GradedPoly::var(target, &format!("v_{i}"))?;
    assign.push((wi.as_str(), vi));
    let _ = n;
    RingMap::by_names(working.ring(), target, &assign)
}

/// Both sides of `[p]_G(f(x)) = f([p]_F(x))` through `x^order`, reduced in
/// `pres`.
pub struct Expansion {
    pub lhs: TruncSeries,
    pub rhs: TruncSeries,
    /// `f(x)` itself.
    pub f: TruncSeries,
    pub law: FGLaw,
}

fn expand(
    universal: &FGLaw,
    pres: &Presentation,
    p: u32,
    i: u32,
    n: u32,
    m: u32,
    order: usize,
) -> Result<Expansion> {
    let ring = pres.ring().clone();
    let target = Arc::new(pres.clone());
    let law = pushforward_universal(
        &universal.truncate(order),
        target,
        |j| {
            if j <= n {
                GradedPoly::var(&ring, &format!("w_{j}"))
            } else {
                Ok(GradedPoly::zero(&ring))
            }
        },
        "eta_R G_n",
    )?;
    let pu = p as usize;
    let mut items = vec![TruncSeries::x(&ring, order)];
    for r in 1..=m {
        if pu.pow(r) > order {
            break;
        }
        let t = GradedPoly::var(&ring, &format!("t_{r}"))?;
        items.push(TruncSeries::monomial(&ring, order, pu.pow(r), t));
    }
    let f = law.formal_sum(&items)?;
    let p_series = law.p_series()?;
    let lhs = p_series.compose(&f, pres)?;
    let vi = GradedPoly::var(&ring, &format!("v_{i}"))?;
    let inner = TruncSeries::monomial(&ring, order, pu.pow(i), vi);
    let rhs = f.compose(&inner, pres)?;
    Ok(Expansion { lhs, rhs, f, law })
}

fn term_count(s: &TruncSeries) -> usize {
    s.coeffs().iter().map(GradedPoly::len).sum()
}

/// Splits `d = lhs - rhs` into the parts visible on each side.
fn split_sides(lhs: &GradedPoly, rhs: &GradedPoly, d: &GradedPoly) -> (GradedPoly, GradedPoly) {
    let ring = d.ring();
    let mut l = Vec::new();
    let mut r = Vec::new();
    for (mono, c) in d.terms() {
        if !lhs.coeff_of(mono).is_zero() || rhs.coeff_of(mono).is_zero() {
            l.push((mono.clone(), c.clone()));
        } else {
            r.push((mono.clone(), c.neg()));
        }
    }
    (
        GradedPoly::from_terms(ring, l),
        GradedPoly::from_terms(ring, r),
    )
}

fn p_log(p: usize, e: usize) -> Option<u32> {
    let mut k = 0;
    let mut q = 1;
    while q < e {
        q *= p;
        k += 1;
    }
    (q == e).then_some(k)
}

/// Scalar `c` with `d = c * target`, if any.
fn scalar_multiple(d: &GradedPoly, target: &GradedPoly) -> bool {
    let Some((m, c)) = target.leading() else {
        return false;
    };
    let dc = d.coeff_of(m);
    let Some(inv) = c.inv() else {
        return false;
    };
    let k = dc.mul(&inv);
    !k.is_zero() && target.scale(&k) == *d
}

pub fn derive_presentation(
    p: u32,
    i: u32,
    n: u32,
    m: u32,
) -> Result<(Presentation, DerivationState)> {
    derive_with(&DerivationConfig::new(p, i, n, m))
}

/// Compares coefficients of `[p]_G(f(x)) = f([p]_F(x))` in increasing exponent
/// order, pushing each forced relation into the working presentation and
/// re-expanding, until both sides agree through the truncation.
pub fn derive_with(config: &DerivationConfig) -> Result<(Presentation, DerivationState)> {
    let trunc = config.validate()?;
    let DerivationConfig { p, i, n, m, .. } = *config;
    let pu = p as usize;
    let universal = cached_universal(config.cache.as_ref(), p, trunc, config.scheme)?;
    let ring = working_ring(p, i, n, m)?;
    let mut state = DerivationState {
        p,
        i,
        n,
        m,
        trunc,
        scheme: config.scheme,
        working: Presentation::free(&ring).with_step_budget(config.step_budget),
        conclusions: Vec::new(),
        expansions: 0,
        peak_terms: 0,
        universal: Arc::new(universal),
    };
    let mut orders: Vec<usize> = (0..=m).map(|r| pu.pow(i + r)).collect();
    if trunc > *orders.last().unwrap() {
        orders.push(trunc);
    }
    let vi = GradedPoly::var(&ring, &format!("v_{i}"))?;
    for &order in &orders {
        loop {
            let exp = expand(&state.universal, &state.working, p, i, n, m, order)?;
            state.expansions += 1;
            let terms = term_count(&exp.lhs) + term_count(&exp.rhs) + term_count(&exp.f);
            state.peak_terms = state.peak_terms.max(terms);
            if terms > config.max_terms {
                return Err(Error::Budget {
                    what: format!("expansion at order {order} with {terms} monomials"),
                    limit: config.max_terms,
                });
            }
            let Some(e) = (1..=order).find(|&e| exp.lhs.coeff(e) != exp.rhs.coeff(e)) else {
                break;
            };
            let (l, r) = (exp.lhs.coeff(e), exp.rhs.coeff(e));
            let d = l.sub(r);
            let (lhs_side, rhs_side) = split_sides(l, r, &d);
            let kind = match p_log(pu, e) {
                Some(j) if j < i && j >= 1 => {
                    let w = GradedPoly::var(&ring, &format!("w_{j}"))?;
                    if !scalar_multiple(&d, &w) {
                        return Err(Error::Inconsistent {
                            exponent: e,
                            detail: format!("expected a multiple of w_{j}, found {d}"),
                        });
                    }
                    ConclusionKind::Vanishes {
                        generator: format!("w_{j}"),
                    }
                }
                Some(j) if j == i => {
                    let w = GradedPoly::var(&ring, &format!("w_{i}"))?;
                    if !scalar_multiple(&d, &w.sub(&vi)) {
                        return Err(Error::Inconsistent {
                            exponent: e,
                            detail: format!("expected a multiple of w_{i} - v_{i}, found {d}"),
                        });
                    }
                    ConclusionKind::Identified {
                        generator: format!("w_{i}"),
                        with: format!("v_{i}"),
                    }
                }
                Some(j) if j > i && j <= i + m => ConclusionKind::Stage { r: j - i },
                _ => {
                    return Err(Error::Inconsistent {
                        exponent: e,
                        detail: format!(
                            "{lhs_side} = {rhs_side} is not implied by earlier relations"
                        ),
                    })
                }
            };
            let rule = match state.working.push_relation(d.clone()) {
                Ok(Some(rule)) => rule.clone(),
                Ok(None) => {
                    return Err(Error::Inconsistent {
                        exponent: e,
                        detail: "relation reduces to zero yet the sides differ".into(),
                    })
                }
                Err(Error::NonUnit(detail)) => {
                    let stage = match kind {
                        ConclusionKind::Stage { r } => r as usize,
                        _ => 0,
                    };
                    return Err(Error::NonUnitLeading { stage, detail });
                }
                Err(err) => return Err(err),
            };
            if let ConclusionKind::Stage { r } = kind {
                let idx = ring.index(&format!("t_{r}"))?;
                let expect = Monomial::single(ring.len(), idx, pu.pow(i) as i32);
                if rule.lhs != expect {
                    return Err(Error::NonUnitLeading {
                        stage: r as usize,
                        detail: format!("relation {d} does not solve for t_{r}^{}", pu.pow(i)),
                    });
                }
            }
            state.conclusions.push(Conclusion {
                exponent: e,
                kind,
                lhs_side,
                rhs_side,
                relation: d,
                rule,
            });
        }
    }
    for r in 1..=m {
        state.stage(r)?;
    }
    let pres = state.presentation()?.with_step_budget(config.step_budget);
    Ok((pres, state))
}

/// Machine-readable record of one conclusion.
#[derive(Clone, Debug, Serialize)]
pub struct ConclusionRecord {
    pub exponent: usize,
    #[serde(flatten)]
    pub kind: ConclusionKind,
    pub lhs: String,
    pub rhs: String,
    pub relation: Vec<TermFile>,
}

impl From<&Conclusion> for ConclusionRecord {
    fn from(c: &Conclusion) -> Self {
        ConclusionRecord {
            exponent: c.exponent,
            kind: c.kind.clone(),
            lhs: c.lhs_side.to_string(),
            rhs: c.rhs_side.to_string(),
            relation: encode_poly(&c.relation),
        }
    }
}

/// `relation = 0` solved for `name`, when the relation is linear in it with a
/// unit coefficient.
pub fn solve_for(relation: &GradedPoly, name: &str) -> Result<GradedPoly> {
    let ring = relation.ring();
    let idx = ring.index(name)?;
    if relation
        .terms()
        .iter()
        .any(|(m, _)| m.exps()[idx] > 1 || m.exps()[idx] < 0)
    {
        return Err(Error::NonUnit(format!(
            "{relation} is not linear in {name}"
        )));
    }
    let coeff = relation.derivative(idx);
    let rest = GradedPoly::from_terms(
        ring,
        relation
            .terms()
            .iter()
            .filter(|(m, _)| m.exps()[idx] == 0)
            .cloned(),
    );
    let inv = coeff
        .inverse_unit()
        .map_err(|_| Error::NonUnit(format!("coefficient {coeff} of {name} is not a unit")))?;
    Ok(rest.mul(&inv).neg())
}
