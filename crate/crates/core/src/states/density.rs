use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::json;
use crate::error::{dim_err, Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem, C64};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

/// Density operator on a `d x f` bipartite space.
///
/// Normalized states have unit trace. Operators with trace below one are
/// accepted only with the `subnormalized` flag set; they arise from
/// trace-decreasing filters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityMatrix {
    d: usize,
    f: usize,
    matrix: ComplexMatrix,
    subnormalized: bool,
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    d: usize,
    f: usize,
    #[serde(with = "json::matrix")]
    matrix: ComplexMatrix,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    subnormalized: bool,
}

impl TryFrom<DensityJson> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: DensityJson) -> Result<Self> {
        if raw.subnormalized {
            DensityMatrix::new_subnormalized(raw.d, raw.f, raw.matrix)
        } else {
            DensityMatrix::new(raw.d, raw.f, raw.matrix)
        }
    }
}

impl From<DensityMatrix> for DensityJson {
    fn from(r: DensityMatrix) -> Self {
        DensityJson {
            d: r.d,
            f: r.f,
            matrix: r.matrix,
            subnormalized: r.subnormalized,
        }
    }
}

impl DensityMatrix {
    /// Validated constructor for a unit-trace state.
    pub fn new(d: usize, f: usize, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::checked_shape(d, f, matrix, false)?;
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Validated constructor for a state with trace at most one.
    pub fn new_subnormalized(d: usize, f: usize, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::checked_shape(d, f, matrix, true)?;
        rho.check_invariants()?;
        Ok(rho)
    }

    fn checked_shape(d: usize, f: usize, matrix: ComplexMatrix, subnormalized: bool) -> Result<Self> {
        if d == 0 || f == 0 {
            return Err(dim_err("subsystem dimensions must be positive"));
        }
        if matrix.shape() != (d * f, d * f) {
            return Err(dim_err(format!(
                "density matrix for ({d}, {f}) must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                n = d * f
            )));
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        Ok(Self {
            d,
            f,
            matrix,
            subnormalized,
        })
    }

    /// For operators produced by completely positive maps from valid inputs.
    /// The subnormalized flag follows the trace.
    pub(crate) fn from_trusted(d: usize, f: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (d * f, d * f));
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let tr = matrix.trace().re;
        Self {
            d,
            f,
            matrix,
            subnormalized: tr < 1.0 - TRACE_TOL,
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        let herm = linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let (vals, _) = linalg::hermitian_eigen(&self.matrix)?;
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let tr = self.trace();
        if self.subnormalized {
            if tr > 1.0 + TRACE_TOL {
                return Err(Error::InvalidState(format!("trace {tr} exceeds one")));
            }
        } else if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not one")));
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d, self.f)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn reduced(&self, traced: Subsystem) -> ComplexMatrix {
        linalg::partial_trace(&self.matrix, self.dims(), traced)
            .expect("density matrix shape is checked at construction")
    }

    /// Eigen-ensemble `rho = sum_k w_k w_k†` with `w_k = sqrt(mu_k) e_k`,
    /// keeping eigenvalues above [`linalg::EIGEN_CUTOFF`] relative to the
    /// largest. Vectors are ordered by descending weight.
    pub fn weighted_eigenvectors(&self) -> Result<Vec<DVector<C64>>> {
        let (vals, vecs) = linalg::hermitian_eigen(&self.matrix)?;
        let max = vals.first().copied().unwrap_or(0.0);
        if max <= 0.0 {
            return Ok(Vec::new());
        }
        Ok(vals
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu > linalg::EIGEN_CUTOFF * max)
            .map(|(k, &mu)| vecs.column(k).scale(mu.sqrt()))
            .collect())
    }

    /// Number of eigenvalues kept by [`Self::weighted_eigenvectors`].
    pub fn rank(&self) -> Result<usize> {
        Ok(self.weighted_eigenvectors()?.len())
    }
}
