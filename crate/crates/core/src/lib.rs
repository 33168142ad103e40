//! Exact even lattices, discriminant forms and overlattice gluing.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: integer/rational linear algebra (Bareiss determinants, Smith
//!   and Hermite forms, exact inertia).
//! * [`lattice`]: Gram-matrix lattices, the ADE root lattices and `U`,
//!   sublattices, orthogonal complements and primitive hulls.
//! * [`discriminant`]: finite quadratic forms `L∨/L`, isotropic elements and
//!   subgroups, orbit reduction under signed permutations.
//! * [`extensions`]: overlattices from isotropic kernels, root enumeration,
//!   quasi-primitivity, gluing along unimodular lattices, involution eigenlattices.
//! * [`verification`]: replayable reports checking the nonexistence argument
//!   for the 8-cusp curve, step by step.
//! * [`totality`]: genus/degree/cusp arithmetic and the low-degree case splits.
//! * [`wronskian`]: exact polynomials over `Q(i)`, Wronskians, Sturm counts,
//!   Möbius realifiability and the bidegree of the `(f, f̄)` image.
//! * [`cli`]: the `latglue` command-line front end.

pub mod cli;
pub mod discriminant;
pub mod error;
pub mod exact;
pub mod extensions;
pub mod lattice;
pub mod totality;
pub mod verification;
pub mod wronskian;

pub use error::{Error, Result};

/// Enumeration bounds shared by the enumerating operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Largest group order (or candidate count) an enumeration may visit.
    pub element_limit: u64,
    /// Largest group order accepted by brute-force isomorphism search.
    pub isomorphism_limit: u64,
    /// Largest rank accepted by root enumeration.
    pub root_rank_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { element_limit: 10_000_000, isomorphism_limit: 10_000, root_rank_limit: 24 }
    }
}
