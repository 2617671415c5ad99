use crate::error::{dim_err, Result};
use crate::linalg::{self, ComplexMatrix, C64};
use crate::states::DensityMatrix;

/// `sigma_y ⊗ sigma_y` in the `|00>, |01>, |10>, |11>` basis.
fn spin_flip() -> ComplexMatrix {
    let mut yy = ComplexMatrix::zeros(4, 4);
    yy[(0, 3)] = C64::new(-1.0, 0.0);
    yy[(1, 2)] = C64::new(1.0, 0.0);
    yy[(2, 1)] = C64::new(1.0, 0.0);
    yy[(3, 0)] = C64::new(-1.0, 0.0);
    yy
}

/// Two-qubit concurrence `max(0, mu_1 - mu_2 - mu_3 - mu_4)`.
///
/// The `mu_i` are the square roots of the eigenvalues of
/// `rho (Y⊗Y) rho^* (Y⊗Y)`. They are obtained as the singular values of the
/// symmetric matrix `W^T (Y⊗Y) W`, where `rho = W W†` is the eigen-ensemble,
/// which avoids taking square roots of round-off sized eigenvalues.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != (2, 2) {
        return Err(dim_err(format!(
            "two-qubit concurrence needs a 2x2 system, got {}x{}",
            rho.d(),
            rho.f()
        )));
    }
    let ensemble = rho.weighted_eigenvectors()?;
    if ensemble.is_empty() {
        return Ok(0.0);
    }
    let w = ComplexMatrix::from_columns(&ensemble);
    let tau = w.transpose() * spin_flip() * &w;
    let mu = linalg::svd(&tau)?.singular_values;
    let tail: f64 = mu[1..].iter().sum();
    Ok((mu[0] - tail).max(0.0))
}
