use std::collections::BTreeMap;

use serde::Serialize;

use super::derive::DerivationState;
use crate::algebra::{GradedPoly, Presentation};
use crate::error::{Error, Result};

/// `sum_g c_g dg`, keyed by generator name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    pub terms: BTreeMap<String, GradedPoly>,
}

impl OneForm {
    pub fn coefficient(&self, generator: &str) -> Option<&GradedPoly> {
        self.terms.get(generator)
    }

    fn add_scaled(&mut self, other: &OneForm, c: &GradedPoly, pres: &Presentation) -> Result<()> {
        for (g, x) in &other.terms {
            let entry = self
                .terms
                .entry(g.clone())
                .or_insert_with(|| GradedPoly::zero(c.ring()));
            *entry = pres.normal_form(&entry.add(&x.mul(c)))?;
        }
        self.terms.retain(|_, x| !x.is_zero());
        Ok(())
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(g, c)| {
                let body = c.to_string();
                if body == "1" {
                    format!("d{g}")
                } else if c.len() == 1 {
                    format!("{body} d{g}")
                } else {
                    format!("({body}) d{g}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The solving coefficient is `scalar * v_i^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitCertificate {
    pub generator: String,
    pub exponent: i32,
    pub scalar: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Etale,
    NotCertified,
}

#[derive(Clone, Debug)]
pub struct EtaleReport {
    pub stage: u32,
    pub relation: GradedPoly,
    /// `d(relation)` with `dv_i = 0`.
    pub differential: OneForm,
    pub dt_coefficient: GradedPoly,
    pub certificate: Option<UnitCertificate>,
    /// `dt_r` in terms of the `dw_k`.
    pub dt: OneForm,
    /// `dw_{i+r}` solved from `dt`, when `w_{i+r}` is a generator and its
    /// coefficient is a unit.
    pub dw_identity: Option<(String, OneForm)>,
    /// Exponent of the rewrite rule's pure power `t_r^{p^i}`.
    pub basis_bound: i32,
    pub verdict: Verdict,
}

impl EtaleReport {
    pub fn dt_display(&self) -> String {
        format!("dt_{} = {}", self.stage, self.dt.render())
    }

    pub fn dw_display(&self) -> Option<String> {
        self.dw_identity
            .as_ref()
            .map(|(w, form)| format!("d{w} = {}", form.render()))
    }
}

/// Differentiates the stage-`r` relation of `B_m` and expresses `dt_r`
/// through the base differentials.
pub fn kahler_check(state: &DerivationState, r: u32) -> Result<EtaleReport> {
    let pres = state.presentation()?;
    let mut reports: Vec<EtaleReport> = Vec::new();
    for s in 1..=r {
        let report = stage_report(state, &pres, s, &reports)?;
        reports.push(report);
    }
    Ok(reports.pop().expect("r >= 1"))
}

/// Reports for every derived stage.
pub fn kahler_check_all(state: &DerivationState) -> Result<Vec<EtaleReport>> {
    let pres = state.presentation()?;
    let mut reports: Vec<EtaleReport> = Vec::new();
    for s in 1..=state.m {
        let report = stage_report(state, &pres, s, &reports)?;
        reports.push(report);
    }
    Ok(reports)
}

fn stage_report(
    state: &DerivationState,
    pres: &Presentation,
    r: u32,
    earlier: &[EtaleReport],
) -> Result<EtaleReport> {
    if r == 0 || r > state.m {
        return Err(Error::MissingStage(r as usize));
    }
    let ring = pres.ring().clone();
    let relation = pres.relations()[(r - 1) as usize].clone();
    let vi = format!("v_{}", state.i);
    let t_name = format!("t_{r}");
    let mut differential = OneForm {
        terms: BTreeMap::new(),
    };
    for (idx, g) in ring.gens().iter().enumerate() {
        if g.name == vi {
            continue;
        }
        let c = pres.normal_form(&relation.derivative(idx))?;
        if !c.is_zero() {
            differential.terms.insert(g.name.clone(), c);
        }
    }
    let dt_coefficient = differential
        .coefficient(&t_name)
        .cloned()
        .unwrap_or_else(|| GradedPoly::zero(&ring));
    let vi_idx = ring.index(&vi)?;
    let certificate = dt_coefficient.as_unit().and_then(|(m, c)| {
        let pure = m
            .exps()
            .iter()
            .enumerate()
            .all(|(k, e)| k == vi_idx || *e == 0);
        pure.then(|| UnitCertificate {
            generator: vi.clone(),
            exponent: m.exps()[vi_idx],
            scalar: c.to_string(),
        })
    });
    let rule = &pres.rules()[(r - 1) as usize];
    let basis_bound = rule
        .pure_power()
        .filter(|(idx, _)| ring.gens()[*idx].name == t_name)
        .map(|(_, k)| k)
        .unwrap_or(0);
    let expected_bound = (state.p as i32).pow(state.i);
    let mut dt = OneForm {
        terms: BTreeMap::new(),
    };
    let mut verdict = Verdict::NotCertified;
    if certificate.is_some() && basis_bound == expected_bound {
        let neg_inv = dt_coefficient.inverse_unit()?.neg();
        for (g, c) in &differential.terms {
            if *g == t_name {
                continue;
            }
            let scaled = pres.normal_form(&c.mul(&neg_inv))?;
            match g.strip_prefix("t_").and_then(|k| k.parse::<u32>().ok()) {
                Some(k) if k < r => {
                    let prev = &earlier[(k - 1) as usize].dt;
                    dt.add_scaled(prev, &scaled, pres)?;
                }
                Some(_) => {
                    return Err(Error::Inconsistent {
                        exponent: 0,
                        detail: format!("stage {r} relation involves {g}"),
                    })
                }
                None => {
                    let single = OneForm {
                        terms: BTreeMap::from([(g.clone(), GradedPoly::one(&ring))]),
                    };
                    dt.add_scaled(&single, &scaled, pres)?;
                }
            }
        }
        verdict = Verdict::Etale;
    }
    let w_name = format!("w_{}", state.i + r);
    let dw_identity = match dt.coefficient(&w_name).map(GradedPoly::inverse_unit) {
        Some(Ok(inv)) if verdict == Verdict::Etale => {
            let mut form = OneForm {
                terms: BTreeMap::from([(t_name.clone(), inv.clone())]),
            };
            for (g, c) in &dt.terms {
                if *g != w_name {
                    let x = pres.normal_form(&c.mul(&inv).neg())?;
                    form.terms.insert(g.clone(), x);
                }
            }
            Some((w_name, form))
        }
        _ => None,
    };
    Ok(EtaleReport {
        stage: r,
        relation,
        differential,
        dt_coefficient,
        certificate,
        dt,
        dw_identity,
        basis_bound,
        verdict,
    })
}
