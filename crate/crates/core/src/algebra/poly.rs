use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::coeff::Coeff;
use super::ring::PolyRing;
use crate::error::{Error, Result};

/// Exponent vector, indexed by generator position in the ring's variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[i32; 8]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn from_exps(exps: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn exps_mut(&mut self) -> &mut [i32] {
        &mut self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn single(len: usize, idx: usize, e: i32) -> Self {
        let mut m = Monomial::one(len);
        m.0[idx] = e;
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }
}

/// Sign from reordering exterior factors of `a * b` into variable order, or
/// `None` when an exterior generator would be squared.
fn exterior_sign(ring: &PolyRing, a: &Monomial, b: &Monomial) -> Option<bool> {
    let odd = ring.odd_indices();
    if odd.is_empty() {
        return Some(false);
    }
    let mut negative = false;
    let mut a_above = 0usize;
    // Walk from the highest index down, counting odd factors of `a` that each
    // odd factor of `b` must pass.
    for &i in odd.iter().rev() {
        let (ea, eb) = (a.0[i], b.0[i]);
        if ea > 0 && eb > 0 {
            return None;
        }
        if eb > 0 && a_above % 2 == 1 {
            negative = !negative;
        }
        if ea > 0 {
            a_above += 1;
        }
    }
    Some(negative)
}

/// Sparse element of a graded (Laurent) polynomial ring.
///
/// Terms are kept in strictly decreasing monomial order with nonzero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
            && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        GradedPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        Self::term(ring, Monomial::one(ring.len()), c)
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        GradedPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn generator(ring: &Arc<PolyRing>, idx: usize) -> Self {
        Self::term(
            ring,
            Monomial::single(ring.len(), idx, 1),
            ring.field().one(),
        )
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        Ok(Self::generator(ring, ring.index(name)?))
    }

    /// Collects terms in any order, merging duplicates and dropping zeros.
    pub fn from_terms(
        ring: &Arc<PolyRing>,
        terms: impl IntoIterator<Item = (Monomial, Coeff)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(x) => x.add_assign(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<PolyRing>, acc: HashMap<Monomial, Coeff>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        GradedPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => self.ring.field().zero(),
        }
    }

    /// `Some(d)` when every term has internal degree `d`, `None` for zero.
    pub fn homogeneous_degree(&self) -> Result<Option<i32>> {
        let mut deg = None;
        for (m, _) in &self.terms {
            let d = self.ring.degree_of(m);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::NotHomogeneous(self.to_string()));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    pub fn validate(&self) -> Result<()> {
        for (m, c) in &self.terms {
            self.ring.check_monomial(m)?;
            if c.field() != self.ring.field() {
                return Err(Error::FieldMismatch {
                    expected: self.ring.field(),
                    found: c.field(),
                });
            }
        }
        Ok(())
    }

    fn same_ring(&self, other: &GradedPoly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "operands live in different rings"
        );
    }

    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        self.same_ring(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        GradedPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> GradedPoly {
        GradedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GradedPoly) -> GradedPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(&self.ring);
        }
        GradedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> GradedPoly {
        if c.is_zero() || self.is_zero() {
            return GradedPoly::zero(&self.ring);
        }
        if self.ring.odd_indices().is_empty() {
            // Multiplying by a fixed monomial preserves the order.
            return GradedPoly {
                ring: self.ring.clone(),
                terms: self
                    .terms
                    .iter()
                    .map(|(t, x)| (t.mul(m), x.mul(c)))
                    .collect(),
            };
        }
        let rhs = GradedPoly::term(&self.ring, m.clone(), c.clone());
        self.mul(&rhs)
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        self.same_ring(other);
        if self.is_zero() || other.is_zero() {
            return GradedPoly::zero(&self.ring);
        }
        if other.terms.len() == 1 && self.ring.odd_indices().is_empty() {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some(neg) = exterior_sign(&self.ring, ma, mb) else {
                    continue;
                };
                let mut c = ca.mul(cb);
                if neg {
                    c = c.neg();
                }
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(x) => x.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        GradedPoly::from_map(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut result = GradedPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_signed(&self, e: i32) -> Result<GradedPoly> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inverse_unit()?.pow((-e) as u32))
        }
    }

    /// Units of a graded Laurent ring over a field: a nonzero scalar times a
    /// monomial in the invertible generators.
    pub fn as_unit(&self) -> Option<(&Monomial, &Coeff)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = &self.terms[0];
        let ok = m
            .exps()
            .iter()
            .zip(self.ring.gens())
            .all(|(e, g)| *e == 0 || g.invertible);
        ok.then_some((m, c))
    }

    pub fn inverse_unit(&self) -> Result<GradedPoly> {
        let (m, c) = self
            .as_unit()
            .ok_or_else(|| Error::NonUnit(self.to_string()))?;
        let inv = c.inv().ok_or(Error::DivisionByZero)?;
        Ok(GradedPoly::term(&self.ring, m.inverse(), inv))
    }

    /// Formal partial derivative with respect to generator `idx`.
    pub fn derivative(&self, idx: usize) -> GradedPoly {
        let odd = self.ring.odd_indices();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exps()[idx];
            if e == 0 {
                return None;
            }
            let mut c = c.scale(e as i64);
            if c.is_zero() {
                return None;
            }
            if self.ring.gens()[idx].is_odd() {
                // Left derivative: move the generator to the front first.
                let before = odd.iter().filter(|&&k| k < idx && m.exps()[k] > 0).count();
                if before % 2 == 1 {
                    c = c.neg();
                }
            }
            let mut m = m.clone();
            m.exps_mut()[idx] -= 1;
            Some((m, c))
        });
        GradedPoly::from_terms(&self.ring, terms)
    }

    /// Exponent of generator `idx` in every term, if it is the same everywhere.
    pub fn max_exponent(&self, idx: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exps()[idx]).max()
    }

    /// Moves the element into another ring with the same generators and a
    /// different scalar field.
    pub fn change_field(&self, ring: &Arc<PolyRing>) -> Result<GradedPoly> {
        if ring.gens() != self.ring.gens() {
            return Err(Error::RingMismatch);
        }
        let field = ring.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let c = field.convert(c)?;
            if !c.is_zero() {
                terms.push((m.clone(), c));
            }
        }
        Ok(GradedPoly {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn to_tex(&self) -> String {
        self.render(true)
    }

    fn render(&self, tex: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.signed_repr();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = render_monomial(&self.ring, m, tex);
            if body.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    if tex && mag.contains('/') {
                        let (n, d) = mag.split_once('/').unwrap();
                        out.push_str(&format!("\\frac{{{n}}}{{{d}}}"));
                    } else {
                        out.push_str(&mag);
                    }
                    out.push(' ');
                }
                out.push_str(&body);
            }
        }
        out
    }
}

fn tex_name(name: &str) -> String {
    match name.split_once('_') {
        Some((head, tail)) if tail.len() > 1 => format!("{head}_{{{tail}}}"),
        _ => name.to_string(),
    }
}

pub fn render_monomial(ring: &PolyRing, m: &Monomial, tex: bool) -> String {
    let mut parts = Vec::new();
    for (e, g) in m.exps().iter().zip(ring.gens()) {
        if *e == 0 {
            continue;
        }
        let name = if tex {
            tex_name(&g.name)
        } else {
            g.name.clone()
        };
        if *e == 1 {
            parts.push(name);
        } else if tex {
            parts.push(format!("{name}^{{{e}}}"));
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join(" ")
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Parses `"v_1 t_1^3 + w_2 - 1/2 v_1^{-1}"`. Factors are separated by
/// whitespace or `*`; exponents may be written `^3`, `^-1` or `^{-1}`.
pub fn parse_poly(ring: &Arc<PolyRing>, input: &str) -> Result<GradedPoly> {
    let field = ring.field();
    let chars: Vec<char> = input.chars().collect();
    // Split into signed terms at top-level `+`/`-` not following `^` or `{`.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0;
    for (k, &ch) in chars.iter().enumerate() {
        let prev = chars[..k]
            .iter()
            .rev()
            .find(|c| !c.is_whitespace())
            .copied();
        match ch {
            '{' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            '}' | ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && prev != Some('^') => {
                if !cur.trim().is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = false;
                }
                cur.clear();
                if ch == '-' {
                    neg = !neg;
                }
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    let mut out = GradedPoly::zero(ring);
    for (neg, body) in terms {
        let mut coeff = field.one();
        let mut mono = Monomial::one(ring.len());
        let tokens = body.replace('*', " ").replace(['(', ')'], " ");
        for tok in tokens.split_whitespace() {
            if tok.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                coeff = coeff.mul(&field.parse(tok)?);
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_matches(|c| c == '{' || c == '}');
                    let e: i32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let idx = ring.index(name)?;
            mono.exps_mut()[idx] += exp;
        }
        ring.check_monomial(&mono)?;
        if neg {
            coeff = coeff.neg();
        }
        out = out.add(&GradedPoly::term(ring, mono, coeff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Generator};

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(
            Field::prime(3).unwrap(),
            vec![
                Generator::unit("v_1", 4),
                Generator::new("t_1", 4),
                Generator::unit("w_2", 16),
            ],
        )
        .unwrap()
    }

    #[test]
    fn variable_order_puts_invertibles_last() {
        let r = ring();
        let names: Vec<_> = r.gens().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["t_1", "v_1", "w_2"]);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let r = ring();
        let p = parse_poly(&r, "v_1 t_1^3 + w_2 - t_1 v_1^3").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.homogeneous_degree().unwrap(), Some(16));
        let q = parse_poly(&r, &p.to_string()).unwrap();
        assert_eq!(p, q);
        let neg = parse_poly(&r, "-v_1^{-1} w_2 + v_1^-2 w_2").unwrap();
        assert_eq!(neg.len(), 2);
    }

    #[test]
    fn characteristic_kills_pth_power_derivative() {
        let r = ring();
        let t = GradedPoly::var(&r, "t_1").unwrap();
        assert!(t.pow(3).derivative(r.index("t_1").unwrap()).is_zero());
    }

    #[test]
    fn units_and_inverses() {
        let r = ring();
        let u = parse_poly(&r, "-v_1^3 w_2^-1").unwrap();
        let inv = u.inverse_unit().unwrap();
        assert_eq!(u.mul(&inv), GradedPoly::one(&r));
        assert!(GradedPoly::var(&r, "t_1").unwrap().inverse_unit().is_err());
    }

    #[test]
    fn exterior_signs() {
        let r = PolyRing::new(
            Field::Rational,
            vec![
                Generator::new("a", 1),
                Generator::new("b", 3),
                Generator::new("x", 2),
            ],
        )
        .unwrap();
        let a = GradedPoly::var(&r, "a").unwrap();
        let b = GradedPoly::var(&r, "b").unwrap();
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        assert!(a.mul(&a).is_zero());
        let x = GradedPoly::var(&r, "x").unwrap();
        assert_eq!(a.mul(&x), x.mul(&a));
    }
}
