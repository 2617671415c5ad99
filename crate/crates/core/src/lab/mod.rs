//! Experiments: the factorization law and its two inequalities, the
//! depolarizing trajectory, and seeded Monte Carlo sweeps over random
//! states and channels.

mod bounds;
mod factorization;
pub mod laws;
mod sweep;
mod trajectory;

pub use bounds::{verify_ck_bound, verify_two_sided_bound, CkBoundReport, TwoSidedReport};
pub use factorization::{verify_factorization, FactorizationReport};
pub use laws::{CaseInput, Law, LawOutcome, LawRegistry};
pub use sweep::{monte_carlo_sweep, run_sweep, CaseRecord, SweepConfig, SweepSummary};
pub use trajectory::{markers, trajectory, DropTime, TrajectoryMarkers, TrajectoryRecord};
