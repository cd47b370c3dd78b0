//! Exact arithmetic kernel: scalars, graded sparse polynomials, presentations
//! with rewrite-based normal forms, and exact linear algebra.

mod coeff;
mod matrix;
mod poly;
mod presentation;
mod ring;

pub use coeff::{is_prime, Coeff, Field};
pub use matrix::ExactMatrix;
pub use poly::{parse_poly, render_monomial, GradedPoly, Monomial};
pub use presentation::{
    decode_poly, encode_poly, Presentation, PresentationFile, RewriteRule, Specialization,
    TermFile, DEFAULT_STEP_BUDGET, PRESENTATION_SCHEMA,
};
pub use ring::{Generator, PolyRing, RingMap};
