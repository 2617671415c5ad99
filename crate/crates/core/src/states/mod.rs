//! Bipartite states, Kraus channels and the constructions relating them.

mod channel;
mod construct;
mod density;
mod json;
mod pure;

pub use channel::{KrausChannel, COMPLETENESS_TOL};
pub use construct::*;
pub use density::{DensityMatrix, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
pub use pure::{PureState, NORM_TOL};

/// Either kind of bipartite state, for operations that accept both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

impl StateRef<'_> {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            StateRef::Pure(s) => (s.d(), s.f()),
            StateRef::Mixed(r) => r.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateRef::Pure(s) => s.density(),
            StateRef::Mixed(r) => (*r).clone(),
        }
    }
}
