//! Exact verification engine for exterior calculus on orbifolds with corners,
//! presented by étale proper groupoids over compact rational polytope charts.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, charts are
//! polytopes in H-representation, maps are affine, and differential forms are
//! piecewise polynomial. Identities (Stokes, projection formulas, base change,
//! averaging inverses, current dualities) are checked with literal equality.

pub mod affine;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod mwc;
pub mod poly;
pub mod chart;
pub mod currents;
pub mod epg;
pub mod fiberprod;
pub mod forms;
pub mod orb;
pub mod orient;
pub mod polytope;
pub mod rat;
pub mod report;
pub mod suites;
pub mod simplex;

pub use error::{Error, Result};
pub use rat::{Rat, Sign};
