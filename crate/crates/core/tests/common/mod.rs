#![allow(dead_code)]

use gconc::linalg::{hermitian_eigen, kron};
use gconc::seed::Rng;
use gconc::{ComplexMatrix, DensityMatrix, C64};
use rand::Rng as _;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// `G G† / tr` for a `d f x rank` Gaussian `G`.
pub fn random_mixed(d: usize, f: usize, rank: usize, rng: &mut Rng) -> DensityMatrix {
    let g = gaussian_matrix(d * f, rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(d, f, m.unscale(tr)).expect("valid density matrix")
}

pub fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(m).unwrap();
    let n = m.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, v) in vals.iter().enumerate() {
        let col = vecs.column(j);
        out += (col * col.adjoint()).scale(v.max(0.0).sqrt());
    }
    out
}

/// Two-qubit concurrence from the spin-flipped state: the square roots of the
/// eigenvalues of `sqrt(rho) rho~ sqrt(rho)`.
pub fn spin_flip_concurrence(rho: &ComplexMatrix) -> f64 {
    let sy = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let yy = kron(&sy, &sy);
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let s = psd_sqrt(rho);
    let (vals, _) = hermitian_eigen(&(&s * tilde * &s)).unwrap();
    let l: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m).unwrap();
    *vals.last().unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
