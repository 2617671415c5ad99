//! Entanglement quantification.
//!
//! Pure-state measures are evaluated directly on coefficient matrices and are
//! homogeneous of degree two, so they can be applied to unnormalized vectors.
//! Mixed states go through the convex roof ([`roof`]), the exact two-qubit
//! formula ([`wootters`]), or the closed forms for isotropic states
//! ([`isotropic`]).

pub mod isotropic;
mod pure;
pub mod roof;
mod wootters;

pub use isotropic::{
    concurrence_trajectory, drop_time, isotropic_concurrence, isotropic_schmidt_number,
    rate_ratio, rate_ratio_at,
};
pub use pure::{
    binomial, c_k_pure, elementary_symmetric, g_concurrence_pure, schmidt_rank,
    schmidt_spectrum, Measure, SchmidtSpectrum,
};
pub use roof::{roof_estimate, EnsembleMember, RoofEstimate, RoofParams};
pub use wootters::wootters_concurrence;
