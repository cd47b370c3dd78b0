use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coeff::Field;
use super::poly::{GradedPoly, Monomial};
use crate::error::{Error, Result};

/// A named graded generator. Odd-degree generators are exterior.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub invertible: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
            invertible: false,
        }
    }

    pub fn unit(name: impl Into<String>, degree: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
            invertible: true,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Graded-commutative (Laurent) polynomial ring over a field.
///
/// Generators are stored in variable order: every non-invertible generator
/// precedes every invertible one, and otherwise declaration order is kept.
/// The monomial order is lexicographic in that order, so leading monomials
/// are decided by non-invertible exponents first.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Field,
    gens: Vec<Generator>,
    odd: Vec<usize>,
}

impl PolyRing {
    pub fn new(field: Field, gens: Vec<Generator>) -> Result<Arc<PolyRing>> {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.invertible && g.is_odd() {
                return Err(Error::InvalidGenerator(format!(
                    "odd generator `{}` cannot be invertible",
                    g.name
                )));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidGenerator(format!("bad name `{}`", g.name)));
            }
            if !g.name.chars().next().unwrap().is_alphabetic() {
                return Err(Error::InvalidGenerator(format!("bad name `{}`", g.name)));
            }
        }
        let mut gens = gens;
        gens.sort_by_key(|g| g.invertible);
        let odd = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_odd())
            .map(|(i, _)| i)
            .collect();
        Ok(Arc::new(PolyRing { field, gens, odd }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn odd_indices(&self) -> &[usize] {
        &self.odd
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn degree_of(&self, m: &Monomial) -> i32 {
        m.exps()
            .iter()
            .zip(&self.gens)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// Exponents are admissible: non-negative off the invertible generators, at
    /// most one on odd generators.
    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.exps().len() != self.gens.len() {
            return Err(Error::RingMismatch);
        }
        for (e, g) in m.exps().iter().zip(&self.gens) {
            if *e < 0 && !g.invertible {
                return Err(Error::NegativeExponent(g.name.clone()));
            }
            if *e > 1 && g.is_odd() {
                return Err(Error::InvalidGenerator(format!(
                    "exterior generator `{}` squared",
                    g.name
                )));
            }
        }
        Ok(())
    }

    /// Same ring with `field` as scalars.
    pub fn with_field(&self, field: Field) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            field,
            gens: self.gens.clone(),
            odd: self.odd.clone(),
        })
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.field)?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.name)?;
            if g.invertible {
                write!(f, "^±")?;
            }
        }
        write!(f, "]")
    }
}

/// Ring homomorphism determined by the images of the source generators.
/// Scalars are carried over by [`Field::convert`], so `Q -> F_p` reductions of
/// `p`-local coefficients are ring maps too.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<PolyRing>,
    target: Arc<PolyRing>,
    images: Vec<GradedPoly>,
}

impl RingMap {
    pub fn new(
        source: &Arc<PolyRing>,
        target: &Arc<PolyRing>,
        images: Vec<GradedPoly>,
    ) -> Result<RingMap> {
        if images.len() != source.len() || images.iter().any(|i| **i.ring() != **target) {
            return Err(Error::RingMismatch);
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Generators listed in `assign` go to the given images; every other
    /// source generator goes to the target generator with the same name.
    pub fn by_names(
        source: &Arc<PolyRing>,
        target: &Arc<PolyRing>,
        assign: &[(&str, GradedPoly)],
    ) -> Result<RingMap> {
        let mut images = Vec::with_capacity(source.len());
        for g in source.gens() {
            if let Some((_, img)) = assign.iter().find(|(n, _)| *n == g.name) {
                images.push(img.clone());
            } else {
                let idx = target.index(&g.name)?;
                images.push(GradedPoly::generator(target, idx));
            }
        }
        RingMap::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PolyRing> {
        &self.target
    }

    pub fn images(&self) -> &[GradedPoly] {
        &self.images
    }

    /// Every nonzero image is homogeneous of its generator's degree.
    pub fn check_degrees(&self) -> Result<()> {
        for (g, img) in self.source.gens().iter().zip(&self.images) {
            if img.is_zero() {
                continue;
            }
            match img.homogeneous_degree()? {
                Some(d) if d != g.degree => {
                    return Err(Error::DegreeMismatch {
                        generator: g.name.clone(),
                        expected: g.degree,
                        found: d,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if **p.ring() != *self.source {
            return Err(Error::RingMismatch);
        }
        let field = self.target.field();
        let mut powers: HashMap<(usize, i32), GradedPoly> = HashMap::new();
        let mut out = GradedPoly::zero(&self.target);
        for (m, c) in p.terms() {
            let c = field.convert(c)?;
            let mut acc = GradedPoly::constant(&self.target, c);
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 || acc.is_zero() {
                    continue;
                }
                let factor = match powers.get(&(idx, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = self.images[idx].pow_signed(e)?;
                        powers.insert((idx, e), f.clone());
                        f
                    }
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}
