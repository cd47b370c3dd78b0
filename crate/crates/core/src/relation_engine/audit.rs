use super::derive::DerivationState;
use crate::algebra::GradedPoly;
use crate::error::{Error, Result};

/// Contributions to the coefficient of `x^{p^{i+r}}` in `f([p]_F(x))`.
#[derive(Clone, Debug)]
pub struct CrossTermReport {
    pub stage: u32,
    pub exponent: usize,
    /// `t_r v_i^{p^r}` (`v_i` for `r = 0`).
    pub linear: GradedPoly,
    pub full: GradedPoly,
    /// `full - linear`: what the formal-sum cross terms add.
    pub cross: GradedPoly,
}

impl CrossTermReport {
    pub fn is_clean(&self) -> bool {
        self.cross.is_zero()
    }

    pub fn require_clean(&self) -> Result<()> {
        if self.is_clean() {
            Ok(())
        } else {
            Err(Error::CrossTerm {
                stage: self.stage,
                detail: format!("{} at x^{}", self.cross, self.exponent),
            })
        }
    }
}

/// Expands the right-hand side modulo the conclusions made before stage `r`
/// and separates the linear term of the formal sum from everything else.
pub fn cross_term_audit(state: &DerivationState, r: u32) -> Result<CrossTermReport> {
    if r > state.m {
        return Err(Error::MissingStage(r as usize));
    }
    let p = state.p as usize;
    let exponent = p.pow(state.i + r);
    let exp = state.expand_before_stage(r, exponent)?;
    let ring = exp.rhs.ring().clone();
    let vi = GradedPoly::var(&ring, &format!("v_{}", state.i))?;
    let mut linear = vi.pow(p.pow(r) as u32);
    if r > 0 {
        linear = linear.mul(&GradedPoly::var(&ring, &format!("t_{r}"))?);
    }
    let full = exp.rhs.coeff(exponent).clone();
    let cross = full.sub(&linear);
    Ok(CrossTermReport {
        stage: r,
        exponent,
        linear,
        full,
        cross,
    })
}
