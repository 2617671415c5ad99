//! Convex-roof upper bounds for mixed states.
//!
//! A state `rho = W W†` (eigen-ensemble `W`, `n x r`) decomposes into `m >= r`
//! unnormalized pure states `psi_i = sum_k U_ik w_k` for every `m x r`
//! isometry `U`. Because the pure measures are homogeneous of degree two,
//! the ensemble average `sum_i p_i E(psi_i / |psi_i|)` is simply
//! `sum_i E(psi_i)`.
//!
//! The optimizer works on the rows `psi_i` directly. A step mixes two random
//! rows with a small random SU(2) rotation (a left multiplication of `U` by a
//! unitary), and is kept only if the total decreases. After
//! [`SHRINK_AFTER`] consecutive rejections the rotation scale is multiplied
//! by [`SHRINK_FACTOR`]; a run stops when the scale falls below `tol` or the
//! iteration budget is spent.
//!
//! Run 0 starts from the eigen-ensemble and descends on the true objective
//! only. Later runs start from Haar-random isometries and first descend on a
//! smoothed surrogate, `|psi|^2 (E(psi)/|psi|^2)^q` with `q` the order of
//! the measure (`d` for `G`, `k` for `C_k`). The surrogate is polynomial in
//! the amplitudes and has no cusp where a member's measure vanishes, so it
//! does not trap members at zero the way the true objective does. The
//! polish phase then descends on the true objective from there.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pure::AmplitudeMeasure;
use super::Measure;
use crate::error::{dim_err, param_err, Error, Result};
use crate::linalg::{self, C64};
use crate::seed;
use crate::states::{DensityMatrix, PureState};

pub const SHRINK_AFTER: usize = 20;
pub const SHRINK_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoofParams {
    /// Number of pure states in the decomposition; `None` picks
    /// `min(d f, 2 rank)`.
    pub ensemble_size: Option<usize>,
    /// Independent runs, including the one started from the eigen-ensemble.
    pub restarts: usize,
    /// Iteration budget per run for the descent on the true objective.
    pub max_iters: usize,
    /// Iteration budget for the smoothed warm-up of runs started from random
    /// isometries.
    pub warmup_iters: usize,
    /// A run has converged once its rotation scale drops below this.
    pub tol: f64,
    pub initial_step: f64,
}

impl Default for RoofParams {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 20,
            max_iters: 50_000,
            warmup_iters: 50_000,
            tol: 1e-6,
            initial_step: 0.3,
        }
    }
}

impl RoofParams {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(param_err("roof optimizer needs at least one restart"));
        }
        if !(self.tol > 0.0 && self.initial_step > 0.0) {
            return Err(param_err("roof optimizer step sizes must be positive"));
        }
        if self.ensemble_size == Some(0) {
            return Err(param_err("ensemble size must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub weight: f64,
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofEstimate {
    /// Best ensemble average found; an upper bound on the convex roof.
    pub value: f64,
    pub measure: Measure,
    pub ensemble_size: usize,
    pub restarts: usize,
    /// Accepted plus rejected steps, summed over runs.
    pub iterations: usize,
    /// Whether the best run ended by step-size convergence rather than by
    /// exhausting its budget.
    pub converged: bool,
    /// Size of the best run's last accepted improvement.
    pub residual: f64,
    pub best_restart: usize,
    /// Average over the eigen-ensemble, where run 0 starts.
    pub starting_value: f64,
    pub seed: u64,
    pub decomposition: Vec<EnsembleMember>,
}

struct RunOutcome {
    value: f64,
    rows: Vec<Vec<C64>>,
    iterations: usize,
    converged: bool,
    residual: f64,
}

pub fn roof_estimate(
    rho: &DensityMatrix,
    measure: Measure,
    params: &RoofParams,
    seed: u64,
) -> Result<RoofEstimate> {
    params.validate()?;
    let (d, f) = rho.dims();
    if d != f {
        return Err(dim_err(format!("convex roof needs d = f, got {d}x{f}")));
    }
    if rho.is_subnormalized() || (rho.trace() - 1.0).abs() > crate::states::TRACE_TOL {
        return Err(Error::InvalidState("convex roof needs a normalized state".into()));
    }
    measure.validate(d)?;
    let measure = measure.canonical(d);

    let ensemble: Vec<Vec<C64>> = rho
        .weighted_eigenvectors()?
        .into_iter()
        .map(|w| w.as_slice().to_vec())
        .collect();
    let rank = ensemble.len();
    let m = params.ensemble_size.unwrap_or((d * f).min(2 * rank));
    if m < rank {
        return Err(param_err(format!("ensemble size {m} is below the rank {rank}")));
    }

    let mut kernel = AmplitudeMeasure::new(measure, d, f);
    let starting_value: f64 = ensemble.iter().map(|w| kernel.eval(w)).sum();

    if rank <= 1 {
        let decomposition = ensemble
            .iter()
            .map(|w| member(w, d, f))
            .collect::<Result<Vec<_>>>()?;
        return Ok(RoofEstimate {
            value: starting_value,
            measure,
            ensemble_size: rank,
            restarts: 0,
            iterations: 0,
            converged: true,
            residual: 0.0,
            best_restart: 0,
            starting_value,
            seed,
            decomposition,
        });
    }

    let runs: Vec<RunOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::rng(seed::split(seed, r as u64));
            if r == 0 {
                let rows = eigen_start(&ensemble, m);
                descend(rows, measure, None, d, f, params.max_iters, params, &mut rng)
            } else {
                let rows = random_start(&ensemble, m, &mut rng);
                let order = match measure {
                    Measure::G => d,
                    Measure::Ck(k) => k,
                };
                let warm = descend(rows, measure, Some(order as f64), d, f, params.warmup_iters, params, &mut rng);
                let mut polished = descend(warm.rows, measure, None, d, f, params.max_iters, params, &mut rng);
                polished.iterations += warm.iterations;
                polished
            }
        })
        .collect();

    // Lowest value wins; ties go to the lowest run index.
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &RunOutcome)>, |acc, (i, run)| match acc {
            Some((_, b)) if b.value <= run.value => acc,
            _ => Some((i, run)),
        })
        .expect("at least one restart");

    let decomposition = best
        .rows
        .iter()
        .filter(|row| row.iter().any(|z| z.norm_sqr() > 0.0))
        .map(|row| member(row, d, f))
        .collect::<Result<Vec<_>>>()?;

    Ok(RoofEstimate {
        value: best.value,
        measure,
        ensemble_size: m,
        restarts: params.restarts,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: best.converged,
        residual: best.residual,
        best_restart,
        starting_value,
        seed,
        decomposition,
    })
}

fn member(row: &[C64], d: usize, f: usize) -> Result<EnsembleMember> {
    let state = PureState::from_vector(d, f, row)?;
    Ok(EnsembleMember {
        weight: state.squared_norm(),
        state: state.normalized()?,
    })
}

fn eigen_start(ensemble: &[Vec<C64>], m: usize) -> Vec<Vec<C64>> {
    let n = ensemble[0].len();
    let mut rows = ensemble.to_vec();
    rows.resize(m, vec![C64::new(0.0, 0.0); n]);
    rows
}

fn random_start(ensemble: &[Vec<C64>], m: usize, rng: &mut seed::Rng) -> Vec<Vec<C64>> {
    let n = ensemble[0].len();
    let u = linalg::haar_isometry_from(m, ensemble.len(), rng);
    (0..m)
        .map(|i| {
            let mut row = vec![C64::new(0.0, 0.0); n];
            for (k, w) in ensemble.iter().enumerate() {
                let c = u[(i, k)];
                for (x, y) in row.iter_mut().zip(w) {
                    *x += c * y;
                }
            }
            row
        })
        .collect()
}

/// Local descent. With `smoothing = Some(q)` the objective is the surrogate
/// `|psi|^2 (E/|psi|^2)^q`; the returned value is always the true objective.
#[allow(clippy::too_many_arguments)]
fn descend(
    mut rows: Vec<Vec<C64>>,
    measure: Measure,
    smoothing: Option<f64>,
    d: usize,
    f: usize,
    max_iters: usize,
    params: &RoofParams,
    rng: &mut seed::Rng,
) -> RunOutcome {
    let m = rows.len();
    let n = d * f;
    let mut kernel = AmplitudeMeasure::new(measure, d, f);
    let mut objective = |row: &[C64]| {
        let v = kernel.eval(row);
        match smoothing {
            None => v,
            Some(q) => {
                let norm_sq: f64 = row.iter().map(|z| z.norm_sqr()).sum();
                if norm_sq > 0.0 {
                    norm_sq * (v / norm_sq).powf(q)
                } else {
                    0.0
                }
            }
        }
    };
    let mut values: Vec<f64> = rows.iter().map(|r| objective(r)).collect();

    let mut step = params.initial_step;
    let mut rejections = 0;
    let mut iterations = 0;
    let mut residual = 0.0;
    let mut new_i = vec![C64::new(0.0, 0.0); n];
    let mut new_j = vec![C64::new(0.0, 0.0); n];

    while iterations < max_iters && step >= params.tol {
        iterations += 1;
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let theta: f64 = step * rng.sample::<f64, _>(StandardNormal);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(s, phi);
        for q in 0..n {
            let (a, b) = (rows[i][q], rows[j][q]);
            new_i[q] = a * c - e * b;
            new_j[q] = e.conj() * a + b * c;
        }
        let vi = objective(&new_i);
        let vj = objective(&new_j);
        let delta = (vi + vj) - (values[i] + values[j]);
        if delta < 0.0 {
            rows[i].copy_from_slice(&new_i);
            rows[j].copy_from_slice(&new_j);
            values[i] = vi;
            values[j] = vj;
            residual = -delta;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= SHRINK_AFTER {
                step *= SHRINK_FACTOR;
                rejections = 0;
            }
        }
    }

    let value = match smoothing {
        None => values.iter().sum(),
        Some(_) => rows.iter().map(|r| kernel.eval(r)).sum(),
    };
    RunOutcome {
        value,
        rows,
        iterations,
        converged: step < params.tol,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic_state, max_entangled};

    fn quick() -> RoofParams {
        RoofParams {
            restarts: 4,
            max_iters: 5_000,
            warmup_iters: 5_000,
            ..RoofParams::default()
        }
    }

    #[test]
    fn pure_input_returns_pure_measure() {
        let mut rng = seed::rng(5);
        let chi = PureState::random(3, 3, &mut rng).unwrap();
        let est = roof_estimate(&chi.density(), Measure::G, &quick(), 1).unwrap();
        let exact = crate::measures::g_concurrence_pure(&chi).unwrap();
        assert!((est.value - exact).abs() < 1e-10);
        assert_eq!(est.iterations, 0);
    }

    #[test]
    fn rejects_small_ensemble_and_subnormalized() {
        let rho = isotropic_state(2, 0.7).unwrap();
        let params = RoofParams {
            ensemble_size: Some(3),
            ..quick()
        };
        assert!(roof_estimate(&rho, Measure::G, &params, 0).is_err());
        let sub = DensityMatrix::new_subnormalized(2, 2, linalg::identity(4).unscale(8.0)).unwrap();
        assert!(roof_estimate(&sub, Measure::G, &quick(), 0).is_err());
        let zero_restarts = RoofParams {
            restarts: 0,
            ..quick()
        };
        assert!(roof_estimate(&rho, Measure::G, &zero_restarts, 0).is_err());
    }

    #[test]
    fn value_bounded_by_eigen_ensemble_and_decomposition_reproduces_state() {
        let rho = isotropic_state(2, 0.8).unwrap();
        let est = roof_estimate(&rho, Measure::G, &quick(), 3).unwrap();
        assert!(est.value <= est.starting_value);
        let n = 4;
        let mut sum = linalg::ComplexMatrix::zeros(n, n);
        let mut avg = 0.0;
        for m in &est.decomposition {
            let v = m.state.vector();
            sum += (&v * v.adjoint()).scale(m.weight);
            avg += m.weight * crate::measures::g_concurrence_pure(&m.state).unwrap();
        }
        assert!(linalg::max_abs_diff(&sum, rho.matrix()) < 1e-12);
        assert!((avg - est.value).abs() < 1e-9);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rho = isotropic_state(2, 0.9).unwrap();
        let a = roof_estimate(&rho, Measure::G, &quick(), 11).unwrap();
        let b = roof_estimate(&rho, Measure::G, &quick(), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn maximally_entangled_stays_at_one() {
        let rho = max_entangled(3).unwrap().density();
        let est = roof_estimate(&rho, Measure::G, &quick(), 0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }
}
