//! Entanglement evolution of two `d`-level systems when one or both halves
//! pass through a quantum channel.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex matrices, decompositions, Haar sampling.
//! - [`states`]: pure and mixed bipartite states, Kraus channels, the
//!   maximally entangled state, filters, Jamiołkowski states, depolarizing
//!   noise and isotropic states.
//! - [`measures`]: G-concurrence, the `C_k` hierarchy, convex-roof
//!   estimation, two-qubit concurrence and isotropic closed forms.
//! - [`estimators`]: mixed-state estimators as named, interchangeable
//!   strategies.
//! - [`lab`]: experiments checking the factorization law and its bounds,
//!   the depolarizing trajectory and Monte Carlo sweeps.

pub mod error;
pub mod estimators;
pub mod lab;
pub mod linalg;
pub mod measures;
pub mod seed;
pub mod states;

pub use error::{Error, Result};
pub use estimators::{Estimator, EstimatorRegistry, ToleranceTier};
pub use linalg::{ComplexMatrix, Subsystem, C64};
pub use measures::{Measure, RoofEstimate, RoofParams};
pub use states::{DensityMatrix, KrausChannel, PureState};
