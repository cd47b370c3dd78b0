//! Truncated power series in one or two variables with polynomial coefficients.
//!
//! The series variables carry internal degree -2, so a series of total degree
//! -2 has its `x^e` coefficient in degree `2(e - 1)` and its `x^a y^b`
//! coefficient in degree `2(a + b - 1)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    decode_poly, encode_poly, Field, Generator, GradedPoly, PolyRing, Presentation, RingMap,
    TermFile,
};
use crate::error::{Error, Result};

pub const SERIES_SCHEMA: &str = "chromatic.series/v1";

fn reduce(pres: &Presentation, p: GradedPoly) -> Result<GradedPoly> {
    if pres.rules().is_empty() {
        Ok(p)
    } else {
        pres.normal_form(&p)
    }
}

/// `sum_{e <= order} c_e x^e`, exact modulo `x^{order + 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    ring: Arc<PolyRing>,
    coeffs: Vec<GradedPoly>,
}

impl TruncSeries {
    pub fn zero(ring: &Arc<PolyRing>, order: usize) -> Self {
        TruncSeries {
            ring: ring.clone(),
            coeffs: vec![GradedPoly::zero(ring); order + 1],
        }
    }

    /// The series variable itself.
    pub fn x(ring: &Arc<PolyRing>, order: usize) -> Self {
        Self::monomial(ring, order, 1, GradedPoly::one(ring))
    }

    /// `c x^e` (zero when `e > order`).
    pub fn monomial(ring: &Arc<PolyRing>, order: usize, e: usize, c: GradedPoly) -> Self {
        let mut s = Self::zero(ring, order);
        if e <= order {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn from_coeffs(ring: &Arc<PolyRing>, coeffs: Vec<GradedPoly>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, e: usize) -> &GradedPoly {
        &self.coeffs[e]
    }

    pub fn coeffs(&self) -> &[GradedPoly] {
        &self.coeffs
    }

    pub fn set(&mut self, e: usize, c: GradedPoly) {
        self.coeffs[e] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GradedPoly::is_zero)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Exponents with nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&e| !self.coeffs[e].is_zero())
            .collect()
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, GradedPoly::zero(&self.ring));
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    fn check(&self, other: &TruncSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch(self.order(), other.order()));
        }
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &GradedPoly, pres: &Presentation) -> Result<TruncSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| reduce(pres, a.mul(c)))
            .collect::<Result<_>>()?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn mul(&self, other: &TruncSeries, pres: &Presentation) -> Result<TruncSeries> {
        self.check(other)?;
        let n = self.order();
        let sa = self.support();
        let sb = other.support();
        let mut coeffs = vec![GradedPoly::zero(&self.ring); n + 1];
        for &i in &sa {
            for &j in &sb {
                if i + j > n {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| reduce(pres, c))
            .collect::<Result<_>>()?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, k: u32, pres: &Presentation) -> Result<TruncSeries> {
        let mut result =
            TruncSeries::monomial(&self.ring, self.order(), 0, GradedPoly::one(&self.ring));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, pres)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, pres)?;
            }
        }
        Ok(result)
    }

    /// Powers `self^0, ..., self^k` as long as they can be nonzero below the
    /// truncation.
    pub fn powers(&self, k: usize, pres: &Presentation) -> Result<Vec<TruncSeries>> {
        let n = self.order();
        let v = self.valuation().unwrap_or(n + 1);
        let mut out = vec![TruncSeries::monomial(
            &self.ring,
            n,
            0,
            GradedPoly::one(&self.ring),
        )];
        for j in 1..=k {
            if v == 0 || j * v <= n {
                let next = out[j - 1].mul(self, pres)?;
                out.push(next);
            } else {
                out.push(TruncSeries::zero(&self.ring, n));
            }
        }
        Ok(out)
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &TruncSeries, pres: &Presentation) -> Result<TruncSeries> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut acc = vec![GradedPoly::zero(&self.ring); n + 1];
        let v = inner.valuation().unwrap_or(n + 1);
        // Powers are built along the support of `self`, so sparse outer
        // series only pay for the exponents they use.
        let mut power = TruncSeries::monomial(&self.ring, n, 0, GradedPoly::one(&self.ring));
        let mut have = 0usize;
        for e in self.support() {
            if e > 0 && e * v > n {
                break;
            }
            if e > have {
                let step = if e - have == 1 {
                    inner.clone()
                } else {
                    inner.pow((e - have) as u32, pres)?
                };
                power = power.mul(&step, pres)?;
                have = e;
            }
            let c = &self.coeffs[e];
            for (k, pk) in power.coeffs.iter().enumerate() {
                if !pk.is_zero() {
                    acc[k] = acc[k].add(&c.mul(pk));
                }
            }
        }
        let coeffs = acc
            .into_iter()
            .map(|c| reduce(pres, c))
            .collect::<Result<_>>()?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Compositional inverse of a series `x + O(x^2)`.
    pub fn reversion(&self, pres: &Presentation) -> Result<TruncSeries> {
        let n = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[1].sub(&GradedPoly::one(&self.ring)).is_zero() {
            return Err(Error::Unsupported("reversion needs a strict series".into()));
        }
        // g = x - (f - x)(g). If g is right modulo x^{k+1} and f - x has
        // valuation v, the next iterate is right modulo x^{k+v}.
        let tail = self.sub(&TruncSeries::x(&self.ring, n))?;
        let Some(v) = tail.valuation() else {
            return Ok(TruncSeries::x(&self.ring, n));
        };
        let mut prec = 1;
        let mut g = TruncSeries::x(&self.ring, 1);
        while prec < n {
            prec = (prec + v - 1).min(n);
            let g_ext = g.truncate(prec);
            let x = TruncSeries::x(&self.ring, prec);
            g = x.sub(&tail.truncate(prec).compose(&g_ext, pres)?)?;
        }
        Ok(g)
    }

    /// Applies a ring map to every coefficient, reducing in `pres` (whose
    /// ring must be the map's target).
    pub fn map(&self, map: &RingMap, pres: &Presentation) -> Result<TruncSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| map.apply(c).and_then(|c| reduce(pres, c)))
            .collect::<Result<_>>()?;
        Ok(TruncSeries {
            ring: map.target().clone(),
            coeffs,
        })
    }

    pub fn normalize(&self, pres: &Presentation) -> Result<TruncSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| reduce(pres, c.clone()))
            .collect::<Result<_>>()?;
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Every coefficient of `x^e` is homogeneous of degree `total + 2e`.
    pub fn check_homogeneous(&self, total: i32) -> Result<()> {
        for (e, c) in self.coeffs.iter().enumerate() {
            if let Some(d) = c.homogeneous_degree()? {
                if d != total + 2 * e as i32 {
                    return Err(Error::NotHomogeneous(format!(
                        "coefficient of x^{e} has degree {d}, expected {}",
                        total + 2 * e as i32
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_tex(&self) -> String {
        render_series(self, true)
    }
}

fn render_series(s: &TruncSeries, tex: bool) -> String {
    let mut parts = Vec::new();
    for (e, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let body = if tex { c.to_tex() } else { c.to_string() };
        let xe = match e {
            0 => String::new(),
            1 => "x".to_string(),
            _ if tex => format!("x^{{{e}}}"),
            _ => format!("x^{e}"),
        };
        let term = if xe.is_empty() {
            body
        } else if body == "1" {
            xe
        } else if c.len() == 1 {
            format!("{body} {xe}")
        } else {
            format!("({body}) {xe}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let bound = if tex {
        format!("O(x^{{{}}})", s.order() + 1)
    } else {
        format!("O(x^{})", s.order() + 1)
    };
    parts.push(bound);
    parts.join(" + ")
}

impl std::fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", render_series(self, false))
    }
}

/// `sum_{a + b <= order} c_{a,b} x^a y^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    ring: Arc<PolyRing>,
    order: usize,
    coeffs: Vec<Vec<GradedPoly>>,
}

impl BiSeries {
    pub fn zero(ring: &Arc<PolyRing>, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|a| vec![GradedPoly::zero(ring); order - a + 1])
            .collect();
        BiSeries {
            ring: ring.clone(),
            order,
            coeffs,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, a: usize, b: usize) -> &GradedPoly {
        &self.coeffs[a][b]
    }

    pub fn set(&mut self, a: usize, b: usize, c: GradedPoly) {
        self.coeffs[a][b] = c;
    }

    /// Nonzero coefficients in `(a, b)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &GradedPoly)> {
        self.coeffs.iter().enumerate().flat_map(|(a, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(b, c)| (a, b, c))
        })
    }

    pub fn add(&self, other: &BiSeries) -> Result<BiSeries> {
        if self.order != other.order {
            return Err(Error::TruncationMismatch(self.order, other.order));
        }
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.coeffs[a][b] = out.coeffs[a][b].add(c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BiSeries, pres: &Presentation) -> Result<BiSeries> {
        if self.order != other.order {
            return Err(Error::TruncationMismatch(self.order, other.order));
        }
        let n = self.order;
        let mut out = BiSeries::zero(&self.ring, n);
        let rhs: Vec<_> = other.terms().collect();
        for (a1, b1, c1) in self.terms() {
            for &(a2, b2, c2) in &rhs {
                if a1 + a2 + b1 + b2 > n {
                    continue;
                }
                let slot = &mut out.coeffs[a1 + a2][b1 + b2];
                *slot = slot.add(&c1.mul(c2));
            }
        }
        out.normalize(pres)
    }

    pub fn scale(&self, c: &GradedPoly, pres: &Presentation) -> Result<BiSeries> {
        let mut out = BiSeries::zero(&self.ring, self.order);
        for (a, b, x) in self.terms() {
            out.coeffs[a][b] = reduce(pres, x.mul(c))?;
        }
        Ok(out)
    }

    pub fn normalize(&self, pres: &Presentation) -> Result<BiSeries> {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for c in row.iter_mut() {
                if !c.is_zero() {
                    *c = reduce(pres, std::mem::replace(c, GradedPoly::zero(&self.ring)))?;
                }
            }
        }
        Ok(out)
    }

    /// `F(y, x)`.
    pub fn swap(&self) -> BiSeries {
        let mut out = BiSeries::zero(&self.ring, self.order);
        for (a, b, c) in self.terms() {
            out.coeffs[b][a] = c.clone();
        }
        out
    }

    /// Embeds a one-variable series as a series in `x` (`in_y = false`) or `y`.
    pub fn from_single(s: &TruncSeries, in_y: bool) -> BiSeries {
        let mut out = BiSeries::zero(s.ring(), s.order());
        for (e, c) in s.coeffs().iter().enumerate() {
            if in_y {
                out.coeffs[0][e] = c.clone();
            } else {
                out.coeffs[e][0] = c.clone();
            }
        }
        out
    }

    /// `F(A(t), B(t))` for one-variable series with zero constant terms.
    pub fn apply(
        &self,
        a: &TruncSeries,
        b: &TruncSeries,
        pres: &Presentation,
    ) -> Result<TruncSeries> {
        let n = a.order();
        if b.order() != n {
            return Err(Error::TruncationMismatch(n, b.order()));
        }
        if n > self.order {
            return Err(Error::TruncationMismatch(self.order, n));
        }
        if !a.coeff(0).is_zero() || !b.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let va = a.valuation().unwrap_or(n + 1);
        let vb = b.valuation().unwrap_or(n + 1);
        let a_pows = a.powers(n / va.max(1), pres)?;
        let b_pows = b.powers(n / vb.max(1), pres)?;
        let mut acc = vec![GradedPoly::zero(&self.ring); n + 1];
        for (j, aj) in a_pows.iter().enumerate() {
            if j * va > n {
                break;
            }
            // inner = sum_k c_{j,k} B^k, truncated to what survives A^j.
            let mut inner = vec![GradedPoly::zero(&self.ring); n + 1];
            let mut any = false;
            for (k, bk) in b_pows.iter().enumerate() {
                if j + k > self.order || j * va + k * vb > n {
                    break;
                }
                let c = &self.coeffs[j][k];
                if c.is_zero() {
                    continue;
                }
                any = true;
                for (e, x) in bk.coeffs().iter().enumerate() {
                    if e + j * va > n {
                        break;
                    }
                    if !x.is_zero() {
                        inner[e] = inner[e].add(&c.mul(x));
                    }
                }
            }
            if !any {
                continue;
            }
            let inner: Vec<GradedPoly> = inner
                .into_iter()
                .map(|c| reduce(pres, c))
                .collect::<Result<_>>()?;
            for (e1, x1) in aj.coeffs().iter().enumerate() {
                if x1.is_zero() {
                    continue;
                }
                for (e2, x2) in inner.iter().enumerate() {
                    if e1 + e2 > n {
                        break;
                    }
                    if !x2.is_zero() {
                        acc[e1 + e2] = acc[e1 + e2].add(&x1.mul(x2));
                    }
                }
            }
        }
        let coeffs = acc
            .into_iter()
            .map(|c| reduce(pres, c))
            .collect::<Result<_>>()?;
        Ok(TruncSeries::from_coeffs(&self.ring, coeffs))
    }

    pub fn map(&self, map: &RingMap, pres: &Presentation) -> Result<BiSeries> {
        let mut out = BiSeries::zero(map.target(), self.order);
        for (a, b, c) in self.terms() {
            out.coeffs[a][b] = reduce(pres, map.apply(c)?)?;
        }
        Ok(out)
    }

    pub fn truncate(&self, order: usize) -> BiSeries {
        let mut out = BiSeries::zero(&self.ring, order);
        for (a, b, c) in self.terms() {
            if a + b <= order {
                out.coeffs[a][b] = c.clone();
            }
        }
        out
    }

    pub fn to_file(&self) -> SeriesFile {
        SeriesFile {
            schema: SERIES_SCHEMA.to_string(),
            prime: self.ring.field().characteristic(),
            generators: self.ring.gens().to_vec(),
            order: self.order,
            coefficients: self
                .terms()
                .map(|(a, b, c)| SeriesTerm {
                    x: a,
                    y: b,
                    terms: encode_poly(c),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &SeriesFile) -> Result<BiSeries> {
        if file.schema != SERIES_SCHEMA {
            return Err(Error::Schema(format!("unknown schema `{}`", file.schema)));
        }
        let ring = PolyRing::new(
            Field::from_characteristic(file.prime)?,
            file.generators.clone(),
        )?;
        let mut out = BiSeries::zero(&ring, file.order);
        for t in &file.coefficients {
            if t.x + t.y > file.order {
                return Err(Error::Schema(format!(
                    "term x^{} y^{} beyond order",
                    t.x, t.y
                )));
            }
            out.coeffs[t.x][t.y] = decode_poly(&ring, &t.terms)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub schema: String,
    pub prime: u32,
    pub generators: Vec<Generator>,
    pub order: usize,
    pub coefficients: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub x: usize,
    pub y: usize,
    pub terms: Vec<TermFile>,
}
