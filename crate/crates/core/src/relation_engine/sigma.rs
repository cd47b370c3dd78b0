use super::derive::{derive_presentation, output_ring};
use crate::algebra::{GradedPoly, Presentation};
use crate::error::{Error, Result};

/// `K(n)_*[t_1, ..., t_m]/(v_n t_r^{p^n} - v_n^{p^r} t_r)`.
pub fn sigma_n_target(p: u32, n: u32, m: u32) -> Result<Presentation> {
    let ring = output_ring(p, n, n, m)?;
    let v = GradedPoly::var(&ring, &format!("v_{n}"))?;
    let relations = (1..=m)
        .map(|r| {
            let t = GradedPoly::var(&ring, &format!("t_{r}"))?;
            Ok(v.mul(&t.pow(p.pow(n))).sub(&v.pow(p.pow(r)).mul(&t)))
        })
        .collect::<Result<Vec<_>>>()?;
    let base = format!("v_{n}");
    Presentation::new(&ring, relations, &[base.as_str()])
}

/// The `i = n` derivation, checked against [`sigma_n_target`].
pub fn sigma_n_presentation(p: u32, n: u32, m: u32) -> Result<Presentation> {
    let (derived, _) = derive_presentation(p, n, n, m)?;
    let target = sigma_n_target(p, n, m)?;
    if !derived.same_ideal(&target)? {
        return Err(Error::Mismatch(format!(
            "derived relations for p={p}, n={n}, m={m} differ from v_n t_r^(p^n) - v_n^(p^r) t_r"
        )));
    }
    Ok(derived)
}
