//! Degree bookkeeping for `THH` of Johnson-Wilson theories: collapse of the
//! Bökstedt spectral sequence, Morava K-homology of localized summands, and
//! the splitting conjecture.

mod collapse;
mod degrees;

pub use collapse::{
    bokstedt_collapse_check, thh_page, BaseDegrees, CollapseCertificate, DifferentialCheck, E2Page,
    PageGenerator, TargetStatus, PAGE_SCHEMA,
};
pub use degrees::{
    compare_mod_lattice, conjecture_check, conjectured_summands, cube_tex, dt_degree,
    e2_splitting_check, ki_of_summand, stated_e2_splitting, thh_ki_expected, unit_lattice,
    Comparison, ConjectureCheck, DegreeMatch, DegreeMultiset, SplittingCheck, Summand, SummandSpec,
};
