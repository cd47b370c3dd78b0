use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{AddAssign, Mul, Neg};

use super::law::{FGLaw, Provenance};
use super::series::{BiSeries, TruncSeries};
use crate::algebra::{Coeff, Field, Generator, GradedPoly, Monomial, PolyRing, Presentation};
use crate::error::{Error, Result};

/// Choice of polynomial generators of `BP_*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Hazewinkel,
    Araki,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Hazewinkel => "hazewinkel",
            Scheme::Araki => "araki",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hazewinkel" => Ok(Scheme::Hazewinkel),
            "araki" => Ok(Scheme::Araki),
            _ => Err(Error::Parse(format!("unknown generator scheme `{s}`"))),
        }
    }
}

/// `Z_(p)[v_1, ..., v_k]` generators with their usual degrees `2(p^j - 1)`.
pub fn bp_generators(p: u32, k: u32, prefix: &str) -> Vec<Generator> {
    (1..=k)
        .map(|j| Generator::new(format!("{prefix}_{j}"), 2 * (p.pow(j) as i32 - 1)))
        .collect()
}

/// The logarithm `sum_k m_k x^{p^k}` of the universal `p`-typical law.
#[derive(Clone, Debug)]
pub struct LogSeries {
    pub p: u32,
    pub scheme: Scheme,
    /// Number of `v` generators in the coefficient ring.
    pub k: u32,
    /// `m_0, ..., m_k`.
    pub m: Vec<GradedPoly>,
    ring: Arc<PolyRing>,
}

/// Solves the recursion for `m_1, ..., m_k` over `Q[v_1, ..., v_k]`.
pub fn bp_log(p: u32, k: u32, scheme: Scheme) -> Result<LogSeries> {
    Field::prime(p)?;
    let ring = PolyRing::new(Field::Rational, bp_generators(p, k, "v"))?;
    let mut log = LogSeries {
        p,
        scheme,
        k,
        m: vec![GradedPoly::one(&ring)],
        ring,
    };
    log.extend_to(k)?;
    Ok(log)
}

impl LogSeries {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Computes `m_j` for `j <= top`; generators `v_j` with `j > k` are zero.
    fn extend_to(&mut self, top: u32) -> Result<()> {
        let p = self.p;
        while (self.m.len() as u32) <= top {
            let k = self.m.len() as u32;
            let mut sum = GradedPoly::zero(&self.ring);
            for j in 0..k {
                if let Some(idx) = self.ring.index_of(&format!("v_{}", k - j)) {
                    let v = GradedPoly::generator(&self.ring, idx);
                    sum = sum.add(&self.m[j as usize].mul(&v.pow(p.pow(j))));
                }
            }
            let divisor = match self.scheme {
                Scheme::Hazewinkel => BigInt::from(p),
                Scheme::Araki => {
                    BigInt::from(p) - num_traits::pow(BigInt::from(p), p.pow(k) as usize)
                }
            };
            let inv = Coeff::Q(BigRational::new(BigInt::from(1), divisor));
            self.m.push(sum.scale(&inv));
        }
        Ok(())
    }

    /// `m_j`, with `v_j = 0` beyond the ring's generators.
    pub fn coefficient(&mut self, j: u32) -> Result<&GradedPoly> {
        self.extend_to(j)?;
        Ok(&self.m[j as usize])
    }

    /// `log(x)` through `x^order`.
    pub fn series(&mut self, order: usize) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(&self.ring, order);
        let mut j = 0u32;
        while (self.p as usize).pow(j) <= order {
            let c = self.coefficient(j)?.clone();
            s.set((self.p as usize).pow(j), c);
            j += 1;
        }
        Ok(s)
    }

    /// Compositional inverse of the logarithm.
    pub fn exp_series(&mut self, order: usize) -> Result<TruncSeries> {
        let pres = Presentation::free(&self.ring);
        self.series(order)?.reversion(&pres)
    }
}

/// Largest `k` with `p^k <= order`.
pub fn log_depth(p: u32, order: usize) -> u32 {
    let mut k = 0;
    while (p as usize).pow(k + 1) <= order {
        k += 1;
    }
    k
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::from(1);
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

fn p_power(p: u32, e: usize) -> Coeff {
    Coeff::Q(BigRational::from_integer(num_traits::pow(
        BigInt::from(p),
        e,
    )))
}

/// `F(x, y) = exp(log x + log y)` through total degree `order`, computed over
/// `Q` and checked to be `p`-local.
///
/// With `l(X) = log(pX)/p` and `e` its inverse, `F(x, y) = p e(l(x/p) + l(y/p))`.
/// For the Hazewinkel scheme `l` and hence `e` have integral coefficients,
/// which keeps the arithmetic free of denominators until the final division
/// of the `x^a y^b` coefficient by `p^{a+b-1}`.
pub fn fgl_from_log(log: &mut LogSeries, order: usize) -> Result<FGLaw> {
    let ring = log.ring().clone();
    let pres = Presentation::free(&ring);
    let p = log.p;
    let mut l = log.series(order)?;
    for e in l.support() {
        let c = l.coeff(e).scale(&p_power(p, e - 1));
        l.set(e, c);
    }
    let l: Vec<GradedPoly> = (0..=order).map(|d| l.coeff(d).clone()).collect();
    let scaled = match scaled_law::<BigInt>(&l, &ring, order) {
        Some(s) => s,
        None => scaled_law::<BigRational>(&l, &ring, order).expect("rational coefficients"),
    };
    let mut f = BiSeries::zero(&ring, order);
    for (a, b, c) in scaled.terms() {
        let inv = p_power(p, a + b - 1).inv().expect("nonzero");
        let c = c.scale(&inv);
        if c.terms().iter().any(|(_, x)| !x.is_p_local(p)) {
            return Err(Error::ResidualDenominator {
                coefficient: format!("a_{{{a},{b}}} = {c}"),
                p,
            });
        }
        f.set(a, b, c);
    }
    Ok(FGLaw::new(
        f,
        Arc::new(pres),
        p,
        true,
        Provenance::Universal { scheme: log.scheme },
    ))
}

/// Exact scalars the law kernel can run over.
trait Scalar: Clone + Zero + One + Neg<Output = Self> + AddAssign + for<'a> MulRef<'a> {
    fn from_rational(q: &BigRational) -> Option<Self>;
    fn from_int(n: BigInt) -> Self;
    fn to_rational(&self) -> BigRational;
}

trait MulRef<'a>: 'a + Sized {
    fn mul_ref(&'a self, other: &'a Self) -> Self;
}

impl<'a, T: 'a> MulRef<'a> for T
where
    &'a T: Mul<&'a T, Output = T>,
{
    fn mul_ref(&'a self, other: &'a Self) -> Self {
        self * other
    }
}

impl Scalar for BigInt {
    fn from_rational(q: &BigRational) -> Option<Self> {
        q.is_integer().then(|| q.numer().clone())
    }

    fn from_int(n: BigInt) -> Self {
        n
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn from_int(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

#[derive(Clone, Debug)]
struct Poly<T>(Vec<(Monomial, T)>);

impl<T> Default for Poly<T> {
    fn default() -> Self {
        Poly(Vec::new())
    }
}

impl<T: Scalar> Poly<T> {
    fn from_graded(f: &GradedPoly) -> Option<Self> {
        f.terms()
            .iter()
            .map(|(m, c)| match c {
                Coeff::Q(q) => T::from_rational(q).map(|x| (m.clone(), x)),
                Coeff::Fp(..) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Poly)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn to_graded(&self, ring: &Arc<PolyRing>) -> GradedPoly {
        GradedPoly::from_terms(
            ring,
            self.0
                .iter()
                .map(|(m, c)| (m.clone(), Coeff::Q(c.to_rational()))),
        )
    }
}

struct Acc<T>(HashMap<Monomial, T>);

impl<T: Scalar> Acc<T> {
    fn new() -> Self {
        Acc(HashMap::new())
    }

    fn add_product(&mut self, f: &Poly<T>, g: &Poly<T>, scale: &T) {
        for (mf, cf) in &f.0 {
            let cf = cf.mul_ref(scale);
            for (mg, cg) in &g.0 {
                *self.0.entry(mf.mul(mg)).or_insert_with(T::zero) += cf.mul_ref(cg);
            }
        }
    }

    fn finish(self) -> Poly<T> {
        Poly(self.0.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// `[x^d] f^k` for `1 <= k, d <= order`, where `f` has zero constant term.
fn power_table<T: Scalar>(f: &[Poly<T>], order: usize) -> Vec<Vec<Poly<T>>> {
    let mut powers = vec![vec![Poly::default(); order + 1]; order + 1];
    if order > 0 {
        powers[1] = f.to_vec();
    }
    let one = T::one();
    for k in 2..=order {
        for d in k..=order {
            let mut acc = Acc::new();
            for i in 1..=d - k + 1 {
                let (fi, prev) = (&f[i], &powers[k - 1][d - i]);
                if !fi.is_empty() && !prev.is_empty() {
                    acc.add_product(fi, prev, &one);
                }
            }
            powers[k][d] = acc.finish();
        }
    }
    powers
}

/// Compositional inverse of `x + sum_{k >= 2} l_k x^k`, one degree at a
/// time: `e_d = -sum_{k >= 2} l_k [x^d] e^k`.
fn reversion<T: Scalar>(l: &[Poly<T>], order: usize) -> Vec<Poly<T>> {
    let mut e = vec![Poly::default(); order + 1];
    if order == 0 {
        return e;
    }
    e[1] = l[1].clone();
    let mut powers = vec![vec![Poly::default(); order + 1]; order + 1];
    powers[1][1] = e[1].clone();
    let (one, minus_one) = (T::one(), -T::one());
    for d in 2..=order {
        let mut acc = Acc::new();
        for k in 2..=d {
            let mut pk = Acc::new();
            for i in 1..=d - k + 1 {
                let (ei, prev) = (&e[i], &powers[k - 1][d - i]);
                if !ei.is_empty() && !prev.is_empty() {
                    pk.add_product(ei, prev, &one);
                }
            }
            let pk = pk.finish();
            if !l[k].is_empty() && !pk.is_empty() {
                acc.add_product(&l[k], &pk, &minus_one);
            }
            powers[k][d] = pk;
        }
        e[d] = acc.finish();
        powers[1][d] = e[d].clone();
    }
    e
}

/// `[X^a Y^b] e(l(X) + l(Y))` for the scaled log `l`, or `None` when `l`
/// has coefficients outside `T`.
fn scaled_law<T: Scalar>(l: &[GradedPoly], ring: &Arc<PolyRing>, order: usize) -> Option<BiSeries> {
    let l: Vec<Poly<T>> = l.iter().map(Poly::from_graded).collect::<Option<_>>()?;
    let e = reversion(&l, order);
    let powers = power_table(&l, order);
    // Sum_{j,k} C(j+k, j) e_{j+k} [X^a] l^j [Y^b] l^k, as
    // sum_j [X^a] l^j * R[j][b] with R[j][b] the inner sum over k.
    let mut r = vec![vec![Poly::default(); order + 1]; order + 1];
    for j in 1..order {
        for b in 1..=order - j {
            let mut acc = Acc::new();
            for k in 1..=b {
                let (ek, lk) = (&e[j + k], &powers[k][b]);
                if !ek.is_empty() && !lk.is_empty() {
                    acc.add_product(ek, lk, &T::from_int(binomial(j + k, j)));
                }
            }
            r[j][b] = acc.finish();
        }
    }
    let one = T::one();
    let mut scaled = BiSeries::zero(ring, order);
    scaled.set(1, 0, GradedPoly::one(ring));
    scaled.set(0, 1, GradedPoly::one(ring));
    for a in 1..order {
        for b in 1..=(order - a).min(a) {
            let mut acc = Acc::new();
            for (row, pj) in r.iter().zip(&powers).take(a + 1).skip(1) {
                let (lj, rj) = (&pj[a], &row[b]);
                if !lj.is_empty() && !rj.is_empty() {
                    acc.add_product(lj, rj, &one);
                }
            }
            let acc = acc.finish().to_graded(ring);
            if a != b {
                scaled.set(b, a, acc.clone());
            }
            scaled.set(a, b, acc);
        }
    }
    Some(scaled)
}

/// Universal `p`-typical law through total degree `order`, over
/// `Q[v_1, ..., v_K]` with `p^K <= order`.
pub fn universal_law(p: u32, order: usize, scheme: Scheme) -> Result<FGLaw> {
    let mut log = bp_log(p, log_depth(p, order), scheme)?;
    fgl_from_log(&mut log, order)
}
