use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::log::{universal_law, Scheme};
use super::series::{BiSeries, TruncSeries};
use crate::algebra::{Field, Generator, GradedPoly, PolyRing, Presentation, RingMap};
use crate::error::{Error, Result};

/// Where a law came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Universal {
        scheme: Scheme,
    },
    Honda {
        height: u32,
    },
    JohnsonWilson {
        height: u32,
    },
    Pushforward {
        from: Box<Provenance>,
        target: String,
    },
    Custom {
        label: String,
    },
}

/// A formal group law `F(x, y)` truncated at total degree `order`, with
/// coefficients in normal form for `presentation`.
#[derive(Clone, Debug)]
pub struct FGLaw {
    series: BiSeries,
    presentation: Arc<Presentation>,
    p: u32,
    p_typical: bool,
    provenance: Provenance,
}

impl PartialEq for FGLaw {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series && self.p == other.p && self.p_typical == other.p_typical
    }
}

impl FGLaw {
    pub fn new(
        series: BiSeries,
        presentation: Arc<Presentation>,
        p: u32,
        p_typical: bool,
        provenance: Provenance,
    ) -> FGLaw {
        FGLaw {
            series,
            presentation,
            p,
            p_typical,
            provenance,
        }
    }

    pub fn series(&self) -> &BiSeries {
        &self.series
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.series.ring()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_p_typical(&self) -> bool {
        self.p_typical
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `a_{j,k}`, the coefficient of `x^j y^k`.
    pub fn coeff(&self, j: usize, k: usize) -> &GradedPoly {
        self.series.coeff(j, k)
    }

    pub fn truncate(&self, order: usize) -> FGLaw {
        FGLaw {
            series: self.series.truncate(order),
            ..self.clone()
        }
    }

    /// `F(a, b)`.
    pub fn apply(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        self.series.apply(a, b, &self.presentation)
    }

    /// `s_1 +_F s_2 +_F ... +_F s_k`, associated from the left.
    pub fn formal_sum(&self, items: &[TruncSeries]) -> Result<TruncSeries> {
        let Some(first) = items.first() else {
            return Err(Error::Unsupported("empty formal sum".into()));
        };
        if !first.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = first.clone();
        for s in &items[1..] {
            acc = self.apply(&acc, s)?;
        }
        Ok(acc)
    }

    /// `[k]_F(x)`.
    pub fn n_series(&self, k: u32) -> Result<TruncSeries> {
        let x = TruncSeries::x(self.ring(), self.order());
        if k == 0 {
            return Ok(TruncSeries::zero(self.ring(), self.order()));
        }
        let items = vec![x; k as usize];
        self.formal_sum(&items)
    }

    /// `[p]_F(x)`.
    pub fn p_series(&self) -> Result<TruncSeries> {
        self.n_series(self.p)
    }

    /// Applies a degree-preserving ring map to the coefficients and reduces
    /// them in `target`.
    pub fn pushforward(
        &self,
        map: &RingMap,
        target: Arc<Presentation>,
        label: &str,
    ) -> Result<FGLaw> {
        map.check_degrees()?;
        if **map.target() != **target.ring() {
            return Err(Error::RingMismatch);
        }
        let series = self.series.map(map, &target)?;
        Ok(FGLaw {
            series,
            presentation: target,
            p: self.p,
            p_typical: self.p_typical,
            provenance: Provenance::Pushforward {
                from: Box::new(self.provenance.clone()),
                target: label.to_string(),
            },
        })
    }

    /// Unit and commutativity exactly; associativity through total degree
    /// `assoc_order`.
    pub fn check_axioms(&self, assoc_order: usize) -> Result<()> {
        let n = self.order();
        let one = GradedPoly::one(self.ring());
        for a in 0..=n {
            let expect_x = if a == 1 {
                one.clone()
            } else {
                GradedPoly::zero(self.ring())
            };
            if *self.coeff(a, 0) != expect_x || *self.coeff(0, a) != expect_x {
                return Err(Error::AxiomFailure(format!(
                    "unit axiom fails at degree {a}"
                )));
            }
        }
        for (a, b, c) in self.series.terms() {
            if self.coeff(b, a) != c {
                return Err(Error::AxiomFailure(format!(
                    "a_{{{a},{b}}} != a_{{{b},{a}}}"
                )));
            }
        }
        let lhs = self.assoc_left(assoc_order.min(n))?;
        let rhs = self.assoc_right(assoc_order.min(n))?;
        if lhs != rhs {
            let mut diff: Vec<_> = lhs
                .keys()
                .chain(rhs.keys())
                .filter(|k| lhs.get(k) != rhs.get(k))
                .collect();
            diff.sort();
            return Err(Error::AxiomFailure(format!(
                "associativity fails at x^{} y^{} z^{}",
                diff[0].0, diff[0].1, diff[0].2
            )));
        }
        Ok(())
    }

    /// Coefficients of `F(F(x, y), z)`.
    fn assoc_left(&self, order: usize) -> Result<HashMap<(usize, usize, usize), GradedPoly>> {
        let f = self.series.truncate(order);
        let mut out: HashMap<(usize, usize, usize), GradedPoly> = HashMap::new();
        let mut g_pow = BiSeries::zero(self.ring(), order);
        g_pow.set(0, 0, GradedPoly::one(self.ring()));
        for j in 0..=order {
            if j > 0 {
                g_pow = g_pow.mul(&f, &self.presentation)?;
            }
            for k in 0..=order - j {
                let c = f.coeff(j, k);
                if c.is_zero() {
                    continue;
                }
                for (a, b, x) in g_pow.terms() {
                    if a + b + k > order {
                        continue;
                    }
                    let e = out
                        .entry((a, b, k))
                        .or_insert_with(|| GradedPoly::zero(self.ring()));
                    *e = e.add(&c.mul(x));
                }
            }
        }
        self.finish(out)
    }

    /// Coefficients of `F(x, F(y, z))`.
    fn assoc_right(&self, order: usize) -> Result<HashMap<(usize, usize, usize), GradedPoly>> {
        let f = self.series.truncate(order);
        let mut out: HashMap<(usize, usize, usize), GradedPoly> = HashMap::new();
        let mut h_pow = BiSeries::zero(self.ring(), order);
        h_pow.set(0, 0, GradedPoly::one(self.ring()));
        for k in 0..=order {
            if k > 0 {
                h_pow = h_pow.mul(&f, &self.presentation)?;
            }
            for j in 0..=order - k {
                let c = f.coeff(j, k);
                if c.is_zero() {
                    continue;
                }
                for (b, d, x) in h_pow.terms() {
                    if j + b + d > order {
                        continue;
                    }
                    let e = out
                        .entry((j, b, d))
                        .or_insert_with(|| GradedPoly::zero(self.ring()));
                    *e = e.add(&c.mul(x));
                }
            }
        }
        self.finish(out)
    }

    fn finish(
        &self,
        raw: HashMap<(usize, usize, usize), GradedPoly>,
    ) -> Result<HashMap<(usize, usize, usize), GradedPoly>> {
        let mut out = HashMap::new();
        for (k, v) in raw {
            let v = self.presentation.normal_form(&v)?;
            if !v.is_zero() {
                out.insert(k, v);
            }
        }
        Ok(out)
    }
}

/// `f(x) = x +_F t_1 x^p +_F ... +_F t_m x^{p^m}`; the law's ring must contain
/// generators `t_1, ..., t_m`.
pub fn strict_iso_series(m: u32, law: &FGLaw) -> Result<TruncSeries> {
    let order = law.order();
    let p = law.p() as usize;
    if p.pow(m) > order {
        return Err(Error::OutOfRange(format!(
            "truncation {order} is below x^{}",
            p.pow(m)
        )));
    }
    let ring = law.ring();
    let mut items = vec![TruncSeries::x(ring, order)];
    for j in 1..=m {
        let t = GradedPoly::var(ring, &format!("t_{j}"))?;
        items.push(TruncSeries::monomial(ring, order, p.pow(j), t));
    }
    law.formal_sum(&items)
}

/// Pushes the universal law into `target`, sending `v_j` to `images(j)`.
pub fn universal_pushforward(
    p: u32,
    order: usize,
    scheme: Scheme,
    target: Arc<Presentation>,
    images: impl Fn(u32) -> Result<GradedPoly>,
    label: &str,
) -> Result<FGLaw> {
    let universal = universal_law(p, order, scheme)?;
    pushforward_universal(&universal, target, images, label)
}

/// Like [`universal_pushforward`] with an already computed universal law.
pub fn pushforward_universal(
    universal: &FGLaw,
    target: Arc<Presentation>,
    images: impl Fn(u32) -> Result<GradedPoly>,
    label: &str,
) -> Result<FGLaw> {
    let source = universal.ring();
    let imgs = (1..=source.len() as u32)
        .map(images)
        .collect::<Result<Vec<_>>>()?;
    let map = RingMap::new(source, target.ring(), imgs)?;
    universal.pushforward(&map, target, label)
}

/// The Honda law of height `i` over `F_p[v_i^{±1}]`, whose `p`-series is
/// `v_i x^{p^i}`.
pub fn honda_law(p: u32, i: u32, order: usize) -> Result<FGLaw> {
    let field = Field::prime(p)?;
    let v = format!("v_{i}");
    let ring = PolyRing::new(field, vec![Generator::unit(&v, 2 * (p.pow(i) as i32 - 1))])?;
    let target = Arc::new(Presentation::free(&ring));
    let mut law = universal_pushforward(
        p,
        order,
        Scheme::Hazewinkel,
        target,
        |j| {
            if j == i {
                GradedPoly::var(&ring, &v)
            } else {
                Ok(GradedPoly::zero(&ring))
            }
        },
        &format!("F_p[{v}^±]"),
    )?;
    law.provenance = Provenance::Honda { height: i };
    Ok(law)
}

/// The law over `k[x_1, ..., x_{n-1}, x_n^{±1}]` killing `v_j` for `j > n`;
/// `prefix` names the generators (`v` or `w`).
pub fn johnson_wilson_law(
    p: u32,
    n: u32,
    order: usize,
    field: Field,
    prefix: &str,
) -> Result<FGLaw> {
    let gens: Vec<Generator> = (1..=n)
        .map(|j| {
            let name = format!("{prefix}_{j}");
            let deg = 2 * (p.pow(j) as i32 - 1);
            if j == n {
                Generator::unit(name, deg)
            } else {
                Generator::new(name, deg)
            }
        })
        .collect();
    let ring = PolyRing::new(field, gens)?;
    let target = Arc::new(Presentation::free(&ring));
    let mut law = universal_pushforward(
        p,
        order,
        Scheme::Hazewinkel,
        target,
        |j| {
            if j <= n {
                GradedPoly::var(&ring, &format!("{prefix}_{j}"))
            } else {
                Ok(GradedPoly::zero(&ring))
            }
        },
        "johnson-wilson",
    )?;
    law.provenance = Provenance::JohnsonWilson { height: n };
    Ok(law)
}
