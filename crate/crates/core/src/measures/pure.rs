use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};
use crate::linalg::{self, C64};
use crate::states::PureState;

/// Squared Schmidt coefficients, descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    pub lambdas: Vec<f64>,
    pub total: f64,
}

impl SchmidtSpectrum {
    /// Coefficients with singular values at or below the zero threshold
    /// replaced by exact zeros.
    pub fn thresholded(&self) -> Vec<f64> {
        let max = self.lambdas.first().copied().unwrap_or(0.0);
        // lambda = sigma^2, so the singular-value threshold is squared here.
        let cut = linalg::ZERO_THRESHOLD * linalg::ZERO_THRESHOLD * max;
        self.lambdas
            .iter()
            .map(|&l| if l > cut && max > 0.0 { l } else { 0.0 })
            .collect()
    }
}

pub fn schmidt_spectrum(chi: &PureState) -> Result<SchmidtSpectrum> {
    let svd = linalg::svd(chi.coeffs())?;
    let lambdas: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    let total = lambdas.iter().sum();
    Ok(SchmidtSpectrum { lambdas, total })
}

pub fn schmidt_rank(chi: &PureState) -> Result<usize> {
    Ok(linalg::svd(chi.coeffs())?.rank())
}

/// `d [det(A A†)]^(1/d)`, zero whenever the Schmidt rank is below `d`.
pub fn g_concurrence_pure(chi: &PureState) -> Result<f64> {
    let d = chi.d();
    if schmidt_rank(chi)? < d {
        return Ok(0.0);
    }
    let det = if d == chi.f() {
        linalg::det(chi.coeffs())?.norm_sqr()
    } else {
        linalg::det(&(chi.coeffs() * chi.coeffs().adjoint()))?.re
    };
    Ok(d as f64 * det.max(0.0).powf(1.0 / d as f64))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `e_k` of `values`; `e_0 = 1`.
pub fn elementary_symmetric(values: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &x in values {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e[k]
}

fn c_k_from_lambdas(lambdas: &[f64], k: usize) -> f64 {
    let d = lambdas.len();
    let ek = elementary_symmetric(lambdas, k).max(0.0);
    d as f64 * (ek / binomial(d, k)).powf(1.0 / k as f64)
}

/// `C_k = d [e_k(lambda) / binom(d, k)]^(1/k)`, so that `C_k(Phi) = 1` and
/// `C_d = G_d`.
pub fn c_k_pure(chi: &PureState, k: usize) -> Result<f64> {
    let d = chi.d();
    if k < 1 || k > d {
        return Err(param_err(format!("C_k needs 1 <= k <= d = {d}, got k = {k}")));
    }
    let spectrum = schmidt_spectrum(chi)?;
    Ok(c_k_from_lambdas(&spectrum.thresholded(), k))
}

/// Which pure-state monotone a mixed-state estimate extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    /// G-concurrence.
    G,
    /// The `k`-level member of the hierarchy.
    Ck(usize),
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::G => write!(f, "G"),
            Measure::Ck(k) => write!(f, "C_{k}"),
        }
    }
}

impl Measure {
    /// `C_d` is `G_d`; maps it to [`Measure::G`] so both share one code path.
    pub fn canonical(self, d: usize) -> Self {
        match self {
            Measure::Ck(k) if k == d => Measure::G,
            m => m,
        }
    }

    pub fn validate(self, d: usize) -> Result<()> {
        match self {
            Measure::Ck(k) if k < 1 || k > d => {
                Err(param_err(format!("C_k needs 1 <= k <= d = {d}, got k = {k}")))
            }
            _ => Ok(()),
        }
    }

    pub fn pure(self, chi: &PureState) -> Result<f64> {
        match self.canonical(chi.d()) {
            Measure::G => g_concurrence_pure(chi),
            Measure::Ck(k) => c_k_pure(chi, k),
        }
    }
}

/// Evaluates a measure on raw row-major amplitude slices without
/// allocating; used in the inner loop of the roof optimizer.
pub(crate) struct AmplitudeMeasure {
    measure: Measure,
    d: usize,
    f: usize,
    scratch: Vec<C64>,
    minor: Vec<C64>,
    subset: Vec<usize>,
}

impl AmplitudeMeasure {
    pub(crate) fn new(measure: Measure, d: usize, f: usize) -> Self {
        Self {
            measure: measure.canonical(d),
            d,
            f,
            scratch: vec![C64::new(0.0, 0.0); d * d],
            minor: vec![C64::new(0.0, 0.0); d * d],
            subset: Vec::with_capacity(d),
        }
    }

    fn gram(&mut self, amps: &[C64]) {
        let (d, f) = (self.d, self.f);
        for i in 0..d {
            for k in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..f {
                    acc += amps[i * f + j] * amps[k * f + j].conj();
                }
                self.scratch[i * d + k] = acc;
            }
        }
    }

    pub(crate) fn eval(&mut self, amps: &[C64]) -> f64 {
        debug_assert_eq!(amps.len(), self.d * self.f);
        let d = self.d;
        match self.measure {
            Measure::G => {
                let det_sq = if d == self.f {
                    self.scratch.copy_from_slice(amps);
                    linalg::det_in_place(&mut self.scratch, d).norm_sqr()
                } else {
                    self.gram(amps);
                    linalg::det_in_place(&mut self.scratch, d).re.max(0.0)
                };
                d as f64 * det_sq.powf(1.0 / d as f64)
            }
            Measure::Ck(k) => {
                self.gram(amps);
                let ek = self.principal_minor_sum(k).max(0.0);
                d as f64 * (ek / binomial(d, k)).powf(1.0 / k as f64)
            }
        }
    }

    /// `e_k` of the eigenvalues of the Gram matrix in `scratch`, as the sum of
    /// its `k x k` principal minors.
    fn principal_minor_sum(&mut self, k: usize) -> f64 {
        let d = self.d;
        self.subset.clear();
        self.subset.extend(0..k);
        let mut total = 0.0;
        loop {
            for (r, &i) in self.subset.iter().enumerate() {
                for (c, &j) in self.subset.iter().enumerate() {
                    self.minor[r * k + c] = self.scratch[i * d + j];
                }
            }
            total += linalg::det_in_place(&mut self.minor[..k * k], k).re;
            // next k-subset in lexicographic order
            let mut pos = k;
            while pos > 0 && self.subset[pos - 1] == d - k + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                return total;
            }
            self.subset[pos - 1] += 1;
            for q in pos..k {
                self.subset[q] = self.subset[q - 1] + 1;
            }
        }
    }
}
