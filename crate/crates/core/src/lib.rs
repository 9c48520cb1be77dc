//! Duality mappings on matrix spaces normed by Schatten-p norms.
//!
//! For `1 < p < inf` the duality map is the single-valued
//! [`dual_map_sp`](duality::dual_map_sp); for `p = 1` the rank-minimal selector
//! is [`sparse_dual_map_s1`](duality::sparse_dual_map_s1); for `p = inf` the
//! conjugate set is parameterized by [`SInfConjugateSet`](duality::SInfConjugateSet).
//! Every result can be checked against the two conjugacy conditions with
//! [`verify_conjugate_pair`](duality::verify_conjugate_pair) and, independently,
//! against the numerical maximizer in [`oracle`].

pub mod demos;
pub mod duality;
pub mod error;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod oracle;
pub mod sampling;
pub mod vector;

#[cfg(feature = "cli")]
pub mod cli;

pub use duality::{
    classify_saturation, dual_map_sp, sinf_conjugate_set, sinf_membership, sinf_rank1_conjugate,
    sparse_dual_map_s1, verify_conjugate_pair, ConjugacyReport, SInfConjugateSet, SInfMembership,
    SaturationForm, SaturationTag,
};
pub use error::{Error, Result};
pub use linalg::{
    effective_rank, leading_multiplicity, reconstruct, singular_values, svd_reduced, Matrix,
    ReducedSvd, ToleranceConfig,
};
pub use norms::{frobenius_inner, holder_gap, schatten_norm, HolderGap};
pub use vector::{HolderExponent, RealVector};
