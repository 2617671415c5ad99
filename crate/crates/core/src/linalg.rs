//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Matrices are [`nalgebra::DMatrix`] over `Complex<f64>`. Decompositions
//! from nalgebra are wrapped so that non-convergence surfaces as an
//! [`Error`] and spectra come back sorted.

use nalgebra::{DMatrix, SymmetricEigen, QR, SVD};
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{dim_err, Error, Result};
use crate::seed::{self, Rng};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// A singular value `s` counts as zero iff `s <= ZERO_THRESHOLD * s_max`.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Relative cutoff on eigenvalues of positive semidefinite operators.
///
/// Eigenvalues are squared amplitudes, so round-off leaves spurious values
/// around `eps * ||rho||`; anything below this fraction of the largest one is
/// discarded when building ensembles from a spectrum.
pub const EIGEN_CUTOFF: f64 = 1e-14;

const MAX_SWEEPS: usize = 10_000;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    First,
    Second,
}

/// Thin singular value decomposition `m = U diag(s) V†`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left_vectors: ComplexMatrix,
    /// Non-negative and descending.
    pub singular_values: Vec<f64>,
    pub right_vectors: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.left_vectors.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.right_vectors.adjoint()
    }

    /// Number of singular values above the relative zero threshold.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular_values)
    }
}

/// Counts entries of a descending, non-negative list that exceed
/// `ZERO_THRESHOLD` times the first entry.
pub fn numerical_rank(descending: &[f64]) -> usize {
    let Some(&max) = descending.first() else {
        return 0;
    };
    if max <= 0.0 {
        return 0;
    }
    descending.iter().filter(|&&s| s > ZERO_THRESHOLD * max).count()
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Largest absolute entry.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    if m.is_empty() {
        return Err(dim_err("svd of an empty matrix"));
    }
    if !all_finite(m) {
        return Err(Error::InvalidParameter("svd input has non-finite entries".into()));
    }
    let raw = SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let (u, v_t) = match (raw.u, raw.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::NonConvergence("singular value decomposition")),
    };
    let sv = raw.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));

    let p = order.len();
    let mut left = ComplexMatrix::zeros(m.nrows(), p);
    let mut right = ComplexMatrix::zeros(m.ncols(), p);
    let mut values = Vec::with_capacity(p);
    for (dst, &src) in order.iter().enumerate() {
        values.push(sv[src].max(0.0));
        left.set_column(dst, &u.column(src));
        right.set_column(dst, &v_t.row(src).adjoint());
    }
    Ok(SvdResult {
        left_vectors: left,
        singular_values: values,
        right_vectors: right,
    })
}

/// Determinant of a row-major `n x n` buffer by LU with partial pivoting.
/// The buffer is overwritten.
pub(crate) fn det_in_place(a: &mut [C64], n: usize) -> C64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = ONE;
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].norm();
        for row in col + 1..n {
            let v = a[row * n + col].norm();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return ZERO;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        let inv = p.inv();
        for row in col + 1..n {
            let factor = a[row * n + col] * inv;
            if factor == ZERO {
                continue;
            }
            for j in col + 1..n {
                let t = a[col * n + j];
                a[row * n + j] -= factor * t;
            }
        }
    }
    det
}

pub fn det(m: &ComplexMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(dim_err(format!(
            "determinant needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let mut buf: Vec<C64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    Ok(det_in_place(&mut buf, n))
}

/// Traces out `traced` from an operator on a `d x f` bipartite space.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    let (d, f) = dims;
    if rho.nrows() != d * f || rho.ncols() != d * f {
        return Err(dim_err(format!(
            "partial trace over ({d}, {f}) needs a {}x{} operator, got {}x{}",
            d * f,
            d * f,
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(match traced {
        Subsystem::Second => ComplexMatrix::from_fn(d, d, |i, k| {
            (0..f).map(|j| rho[(i * f + j, k * f + j)]).sum()
        }),
        Subsystem::First => ComplexMatrix::from_fn(f, f, |j, l| {
            (0..d).map(|i| rho[(i * f + j, i * f + l)]).sum()
        }),
    })
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// Only the Hermitian part `(m + m†)/2` is used.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(dim_err("hermitian eigendecomposition needs a square matrix"));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NonConvergence("hermitian eigendecomposition"))?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut vecs = ComplexMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[src]);
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((vals, vecs))
}

/// Standard complex Gaussian entry: real and imaginary parts `N(0, 1/2)`.
pub(crate) fn complex_gaussian(rng: &mut Rng) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

pub(crate) fn gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    // Row-major fill keeps the draw order independent of storage layout.
    let entries: Vec<C64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary drawn from `rng`.
///
/// QR of a complex Gaussian matrix, with the phases of `R`'s diagonal moved
/// into `Q` so the result does not depend on the QR sign convention.
pub fn haar_unitary_from(n: usize, rng: &mut Rng) -> ComplexMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let z = gaussian_matrix(n, n, rng);
    let qr = QR::new(z);
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, s: C64) {
        for z in self.iter_mut() {
            *z *= s;
        }
    }
}

pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("haar_unitary needs n >= 1".into()));
    }
    Ok(haar_unitary_from(n, &mut seed::rng(seed)))
}

/// First `cols` columns of a Haar unitary: a Haar-random isometry.
pub fn haar_isometry_from(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    assert!(cols <= rows);
    haar_unitary_from(rows, rng).columns(0, cols).into_owned()
}
