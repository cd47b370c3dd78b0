//! Presentations of `K(i)_*E(n)` stages extracted from the strict
//! isomorphism identity `[p]_G(f(x)) = f([p]_F(x))`, with étaleness
//! certificates and the supporting arithmetic of `p`-powers.

mod audit;
mod derive;
mod kahler;
mod ppower;
mod sigma;

pub use audit::{cross_term_audit, CrossTermReport};
pub use derive::{
    base_names, derive_presentation, derive_with, output_ring, solve_for, working_ring, Conclusion,
    ConclusionKind, ConclusionRecord, DerivationConfig, DerivationState, Expansion,
    DEFAULT_MAX_TERMS,
};
pub use kahler::{kahler_check, kahler_check_all, EtaleReport, OneForm, UnitCertificate, Verdict};
pub use ppower::{ppower_is_sum, ppower_sweep, PowerSweep};
pub use sigma::{sigma_n_presentation, sigma_n_target};
