//! Curvature, derivations, moduli representatives, solvsoliton certificates
//! and mean curvature of automorphism orbits for three-dimensional solvable
//! Lie groups.
//!
//! For every metric on `r3`, `r3,a`, `r'3,a`, `h3` and `r3,1` the crate can
//! decide whether the metric is a solvsoliton and whether its orbit under
//! `ℝ^× · Aut` in `GL(3)/O(3)` is minimal; [`report::verify_main_theorem`]
//! checks that the two answers agree across parameter sweeps.

#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod derivations;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod orbit;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod soliton;

pub use error::{Error, Result};
pub use lie::{make_family, Family, StructureConstants};
pub use linalg::Mat3;

/// Arithmetic used for structure constants and derivation algebras.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Arithmetic {
    #[default]
    Float,
    /// Exact rationals where the inputs allow it.
    Exact,
}
