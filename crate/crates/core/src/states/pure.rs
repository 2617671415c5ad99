use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::json;
use crate::error::{dim_err, Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem, C64};
use crate::seed::Rng;

/// Tolerance on `squared_norm` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Bipartite pure state `|chi> = sum_ij A_ij |i>|j>` stored as its `d x f`
/// coefficient matrix `A`, with `d <= f`.
///
/// States need not be normalized. All pure-state measures are evaluated on
/// the raw coefficients and scale with `squared_norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateJson", into = "PureStateJson")]
pub struct PureState {
    coeffs: ComplexMatrix,
    squared_norm: f64,
}

#[derive(Serialize, Deserialize)]
struct PureStateJson {
    d: usize,
    f: usize,
    #[serde(with = "json::matrix")]
    coeffs: ComplexMatrix,
}

impl TryFrom<PureStateJson> for PureState {
    type Error = Error;

    fn try_from(raw: PureStateJson) -> Result<Self> {
        if raw.coeffs.shape() != (raw.d, raw.f) {
            return Err(dim_err(format!(
                "declared {}x{} but coefficients are {}x{}",
                raw.d,
                raw.f,
                raw.coeffs.nrows(),
                raw.coeffs.ncols()
            )));
        }
        PureState::new(raw.coeffs)
    }
}

impl From<PureState> for PureStateJson {
    fn from(s: PureState) -> Self {
        PureStateJson {
            d: s.d(),
            f: s.f(),
            coeffs: s.coeffs,
        }
    }
}

impl PureState {
    pub fn new(coeffs: ComplexMatrix) -> Result<Self> {
        let (d, f) = coeffs.shape();
        if d == 0 || d > f {
            return Err(dim_err(format!("pure state needs 1 <= d <= f, got d={d}, f={f}")));
        }
        if !linalg::all_finite(&coeffs) {
            return Err(Error::InvalidState("non-finite coefficients".into()));
        }
        let squared_norm = coeffs.norm_squared();
        Ok(Self {
            coeffs,
            squared_norm,
        })
    }

    /// Builds a state from its amplitude vector in the `|i>|j>` product basis
    /// (index `i * f + j`).
    pub fn from_vector(d: usize, f: usize, amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != d * f {
            return Err(dim_err(format!(
                "expected {} amplitudes for a {d}x{f} state, got {}",
                d * f,
                amplitudes.len()
            )));
        }
        Self::new(ComplexMatrix::from_row_slice(d, f, amplitudes))
    }

    /// Haar-random normalized state.
    pub fn random(d: usize, f: usize, rng: &mut Rng) -> Result<Self> {
        let a = linalg::gaussian_matrix(d, f, rng);
        Self::new(a)?.normalized()
    }

    pub fn d(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn f(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    pub fn squared_norm(&self) -> f64 {
        self.squared_norm
    }

    pub fn is_normalized(&self) -> bool {
        (self.squared_norm - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.squared_norm <= 0.0 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        Self::new(self.coeffs.unscale(self.squared_norm.sqrt()))
    }

    pub fn vector(&self) -> DVector<C64> {
        DVector::from_iterator(self.d() * self.f(), self.coeffs.transpose().iter().copied())
    }

    /// `|chi><chi|`, flagged subnormalized when the norm is below one.
    pub fn density(&self) -> DensityMatrix {
        let v = self.vector();
        DensityMatrix::from_trusted(self.d(), self.f(), &v * v.adjoint())
    }

    /// Applies the operator `op` on one side: `A -> op A` on the first
    /// subsystem, `A -> A op^T` on the second.
    pub fn apply_local(&self, op: &ComplexMatrix, side: Subsystem) -> Result<Self> {
        let n = match side {
            Subsystem::First => self.d(),
            Subsystem::Second => self.f(),
        };
        if op.shape() != (n, n) {
            return Err(dim_err(format!(
                "local operator must be {n}x{n}, got {}x{}",
                op.nrows(),
                op.ncols()
            )));
        }
        let coeffs = match side {
            Subsystem::First => op * &self.coeffs,
            Subsystem::Second => &self.coeffs * op.transpose(),
        };
        Self::new(coeffs)
    }
}
