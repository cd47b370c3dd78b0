//! Exact computations around the Morava K-homology of Johnson-Wilson theories
//! and their topological Hochschild homology.
//!
//! * [`algebra`]: graded sparse polynomials over `Q` and `F_p`, presentations
//!   with rewrite normal forms, Hilbert counts and exact ranks.
//! * [`formal_groups`]: the universal `p`-typical formal group law, its
//!   pushforwards, `p`-series, formal sums and strict isomorphisms.
//! * [`relation_engine`]: derivation of the presentation of `K(i)_*E(n)`
//!   stage by stage, with Kähler-differential étaleness certificates.
//! * [`hochschild`]: Hochschild homology via HKR, Koszul and bar complexes.
//! * [`chromatic_books`]: Bökstedt collapse and splitting degree bookkeeping.

pub mod algebra;
pub mod chromatic_books;
pub mod error;
pub mod formal_groups;
pub mod hochschild;
pub mod relation_engine;

pub use error::{Error, Result};
