//! Hochschild homology of graded commutative algebras by three independent
//! routes: HKR with étale base change, the Koszul generating function for
//! polynomial algebras, and the normalized bar complex of a
//! finite-dimensional algebra.

mod bar;
mod hkr;
mod koszul;
mod table;

pub use bar::{
    bar_slices, hh_bar, hh_bar_specialized, hh_bar_with_budget, BarComplexSlice, FiniteAlgebra,
    BAR_COLUMN_BUDGET, DEFAULT_S_MAX,
};
pub use hkr::{
    hh_hkr, CertificateSource, CertifiedGenerator, EtaleCertificate, ExteriorGenerator, HHAnswer,
};
pub use koszul::hh_koszul;
pub use table::{compare_methods, BigradedTable, DiffEntry, DiffReport, Method, TABLE_SCHEMA};
