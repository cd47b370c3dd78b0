use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::table::{BigradedTable, Method};
use crate::algebra::{render_monomial, GradedPoly, Presentation};
use crate::error::{Error, Result};
use crate::relation_engine::{EtaleReport, Verdict};

/// How a generator of the fibre was shown to be étale over the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateSource {
    /// A Kähler-differential report from the relation engine.
    Kahler,
    /// A unit diagonal entry of a triangular Jacobian.
    Jacobian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedGenerator {
    pub generator: String,
    /// `∂f/∂g` for the relation `f` bounding `g`, a unit.
    pub jacobian: String,
    pub source: CertificateSource,
}

/// Evidence that a presentation is étale over its base: each non-base
/// generator is bounded by a pure-power relation with a unit leading
/// coefficient, and the Jacobian of those relations is triangular with unit
/// diagonal. This is a sufficient condition, not a characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleCertificate {
    pub base: Vec<String>,
    pub generators: Vec<CertifiedGenerator>,
}

impl EtaleCertificate {
    /// Checks the Jacobian criterion directly on `pres`.
    pub fn jacobian(pres: &Presentation) -> Result<EtaleCertificate> {
        let ring = pres.ring();
        let fibre = fibre_indices(pres);
        let mut relations: BTreeMap<usize, GradedPoly> = BTreeMap::new();
        for rule in pres.rules() {
            let Some((g, _)) = rule.pure_power().filter(|(g, _)| fibre.contains(g)) else {
                return Err(Error::Unsupported(format!(
                    "rewrite rule on {} is not a pure power of a fibre generator",
                    render_monomial(ring, &rule.lhs, false)
                )));
            };
            let f = GradedPoly::term(ring, rule.lhs.clone(), ring.field().one()).sub(&rule.rhs);
            if relations.insert(g, f).is_some() {
                return Err(Error::Unsupported(format!(
                    "`{}` is bounded by more than one relation",
                    ring.gens()[g].name
                )));
            }
        }
        // Triangularity: peel off generators whose relation only involves
        // already peeled fibre generators.
        let mut done: BTreeSet<usize> = BTreeSet::new();
        let mut order = Vec::new();
        while done.len() < fibre.len() {
            let next = fibre.iter().copied().find(|g| {
                !done.contains(g)
                    && relations.get(g).is_some_and(|f| {
                        f.terms().iter().all(|(m, _)| {
                            fibre
                                .iter()
                                .all(|&h| h == *g || done.contains(&h) || m.exps()[h] == 0)
                        })
                    })
            });
            let Some(g) = next else {
                let stuck: Vec<&str> = fibre
                    .iter()
                    .filter(|g| !done.contains(g))
                    .map(|&g| ring.gens()[g].name.as_str())
                    .collect();
                return Err(Error::MissingEtaleCertificate(format!(
                    "no triangular relation bounds {}",
                    stuck.join(", ")
                )));
            };
            done.insert(g);
            order.push(g);
        }
        let mut generators = Vec::new();
        for g in order {
            let diag = pres.normal_form(&relations[&g].derivative(g))?;
            if diag.as_unit().is_none() {
                return Err(Error::MissingEtaleCertificate(format!(
                    "∂/∂{} of the bounding relation is {diag}, not a unit",
                    ring.gens()[g].name
                )));
            }
            generators.push(CertifiedGenerator {
                generator: ring.gens()[g].name.clone(),
                jacobian: diag.to_string(),
                source: CertificateSource::Jacobian,
            });
        }
        Ok(EtaleCertificate {
            base: pres.base_names().into_iter().map(String::from).collect(),
            generators,
        })
    }

    /// Packages the stage reports of a derived tower; stage `r` certifies `t_r`.
    pub fn from_reports(pres: &Presentation, reports: &[EtaleReport]) -> Result<EtaleCertificate> {
        let mut generators = Vec::new();
        for report in reports {
            if report.verdict != Verdict::Etale {
                return Err(Error::MissingEtaleCertificate(format!(
                    "stage {} is not certified",
                    report.stage
                )));
            }
            if **report.relation.ring() != **pres.ring() {
                return Err(Error::RingMismatch);
            }
            if !pres.normal_form(&report.relation)?.is_zero() {
                return Err(Error::MissingEtaleCertificate(format!(
                    "stage {} relation does not hold in the presentation",
                    report.stage
                )));
            }
            generators.push(CertifiedGenerator {
                generator: format!("t_{}", report.stage),
                jacobian: report.dt_coefficient.to_string(),
                source: CertificateSource::Kahler,
            });
        }
        Ok(EtaleCertificate {
            base: pres.base_names().into_iter().map(String::from).collect(),
            generators,
        })
    }

    /// Does the certificate account for every fibre generator of `pres`?
    pub fn covers(&self, pres: &Presentation) -> Result<()> {
        let base: Vec<String> = pres.base_names().into_iter().map(String::from).collect();
        if base != self.base {
            return Err(Error::MissingEtaleCertificate(format!(
                "certificate base {:?} differs from presentation base {base:?}",
                self.base
            )));
        }
        for g in fibre_indices(pres) {
            let name = &pres.ring().gens()[g].name;
            if !self.generators.iter().any(|c| &c.generator == name) {
                return Err(Error::MissingEtaleCertificate(format!(
                    "`{name}` is not certified"
                )));
            }
        }
        Ok(())
    }
}

fn fibre_indices(pres: &Presentation) -> Vec<usize> {
    (0..pres.ring().len())
        .filter(|i| !pres.base().contains(i))
        .collect()
}

/// An exterior generator `dg`: homological degree 1, internal degree `|g|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExteriorGenerator {
    pub name: String,
    pub internal_degree: i32,
}

impl ExteriorGenerator {
    pub fn total_degree(&self) -> i32 {
        self.internal_degree + 1
    }
}

/// `HH_*(P) = P ⊗ Λ(dg_1, ..., dg_k)`.
#[derive(Clone, Debug)]
pub struct HHAnswer {
    pub presentation: Presentation,
    pub exterior: Vec<ExteriorGenerator>,
    pub method: Method,
}

impl HHAnswer {
    /// Ranks of `P ⊗ Λ` as a module over the subalgebra generated by `over`
    /// (use the invertible generators, so that each degree is finite).
    pub fn table(&self, s_max: u32, window: (i32, i32), over: &[&str]) -> Result<BigradedTable> {
        let (lo, hi) = window;
        // exterior[s] = degrees of the s-fold products
        let mut exterior: Vec<Vec<i32>> = vec![Vec::new(); s_max as usize + 1];
        exterior[0].push(0);
        for g in &self.exterior {
            for s in (1..=s_max as usize).rev() {
                let shifted: Vec<i32> = exterior[s - 1]
                    .iter()
                    .map(|e| e + g.internal_degree)
                    .collect();
                exterior[s].extend(shifted);
            }
        }
        let all: Vec<i32> = exterior.iter().flatten().copied().collect();
        let (emin, emax) = (
            all.iter().copied().min().unwrap_or(0),
            all.iter().copied().max().unwrap_or(0),
        );
        let counts = self
            .presentation
            .hilbert_counts(lo - emax, hi - emin, over)?;
        let mut table = BigradedTable::new(self.method, s_max, window);
        for (s, degrees) in exterior.iter().enumerate() {
            for e in degrees {
                for (d, c) in counts.range(lo - e..=hi - e) {
                    table.add(s as u32, d + e, *c);
                }
            }
        }
        Ok(table)
    }
}

/// Hochschild homology by the HKR theorem and étale base change.
///
/// Without relations, `pres` must be a polynomial/Laurent algebra on
/// `smooth` over the graded field generated by its remaining (invertible)
/// generators. With relations, `certificate` must show `pres` étale over
/// its base, and `smooth` lists the base generators contributing `dg`.
pub fn hh_hkr(
    pres: &Presentation,
    smooth: &[&str],
    certificate: Option<&EtaleCertificate>,
) -> Result<HHAnswer> {
    let ring = pres.ring();
    let smooth_idx: Vec<usize> = smooth
        .iter()
        .map(|s| ring.index(s))
        .collect::<Result<_>>()?;
    if !pres.relations().is_empty() {
        let cert = certificate.ok_or_else(|| {
            Error::MissingEtaleCertificate(format!(
                "{} relations but no étale certificate; refusing to assume étaleness",
                pres.relations().len()
            ))
        })?;
        cert.covers(pres)?;
        if let Some(&g) = smooth_idx.iter().find(|g| !pres.base().contains(g)) {
            return Err(Error::Unsupported(format!(
                "`{}` is not a base generator",
                ring.gens()[g].name
            )));
        }
    }
    let scalars: Vec<usize> = if pres.relations().is_empty() {
        (0..ring.len())
            .filter(|i| !smooth_idx.contains(i))
            .collect()
    } else {
        pres.base()
            .iter()
            .copied()
            .filter(|i| !smooth_idx.contains(i))
            .collect()
    };
    if let Some(&g) = scalars.iter().find(|&&g| !ring.gens()[g].invertible) {
        return Err(Error::Unsupported(format!(
            "`{}` is neither listed as smooth nor invertible",
            ring.gens()[g].name
        )));
    }
    if let Some(&g) = smooth_idx.iter().find(|&&g| ring.gens()[g].is_odd()) {
        return Err(Error::Unsupported(format!(
            "odd generator `{}` is not smooth in the HKR sense",
            ring.gens()[g].name
        )));
    }
    let exterior = smooth_idx
        .iter()
        .map(|&g| ExteriorGenerator {
            name: format!("d{}", ring.gens()[g].name),
            internal_degree: ring.gens()[g].degree,
        })
        .collect();
    Ok(HHAnswer {
        presentation: pres.clone(),
        exterior,
        method: Method::Hkr,
    })
}
