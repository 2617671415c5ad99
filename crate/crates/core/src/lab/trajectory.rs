use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};
use crate::measures::{
    concurrence_trajectory, drop_time, isotropic_schmidt_number, rate_ratio, roof_estimate,
    Measure, RoofParams,
};
use crate::seed;
use crate::states::{fidelity_at_time, isotropic_state};

/// One grid point of `|Phi>` with one half depolarizing at rate `gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub concurrence: f64,
    pub schmidt_number: usize,
    /// Whether G-concurrence is still non-zero (`t < t_d`).
    pub g_positive: bool,
    /// Roof estimates of `C_2 ..= C_d` when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_k: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropTime {
    pub k: usize,
    pub t: f64,
}

/// Analytic event times and the rate ratio for a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMarkers {
    pub d: usize,
    pub gamma: f64,
    /// `t_k` for `k = 2 ..= d`, at which the Schmidt number falls to `k - 1`.
    pub drop_times: Vec<DropTime>,
    pub rate_ratio: f64,
}

pub fn markers(d: usize, gamma: f64) -> Result<TrajectoryMarkers> {
    let drop_times = (2..=d)
        .map(|k| Ok(DropTime { k, t: drop_time(d, gamma, k)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryMarkers {
        d,
        gamma,
        drop_times,
        rate_ratio: rate_ratio(d)?,
    })
}

/// Samples `steps` uniformly spaced times from `0` to `t_max` inclusive.
///
/// Drop times are not snapped onto the grid; use [`markers`] for them.
pub fn trajectory(
    d: usize,
    gamma: f64,
    t_max: f64,
    steps: usize,
    ck_roofs: Option<&RoofParams>,
    seed: u64,
) -> Result<Vec<TrajectoryRecord>> {
    if d < 2 {
        return Err(param_err(format!("trajectory needs d >= 2, got {d}")));
    }
    if steps < 2 {
        return Err(param_err(format!("trajectory needs at least 2 grid points, got {steps}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(param_err(format!("t_max must be positive, got {t_max}")));
    }
    if let Some(p) = ck_roofs {
        p.validate()?;
    }
    let t_d = drop_time(d, gamma, d)?;
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = if i + 1 == steps {
                t_max
            } else {
                t_max * i as f64 / (steps - 1) as f64
            };
            let fidelity = fidelity_at_time(d, gamma, t)?;
            let c_k = match ck_roofs {
                None => None,
                Some(params) => {
                    let rho = isotropic_state(d, fidelity)?;
                    let point_seed = seed::split(seed, i as u64);
                    let values = (2..=d)
                        .map(|k| {
                            roof_estimate(&rho, Measure::Ck(k), params, seed::split(point_seed, k as u64))
                                .map(|e| e.value)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Some(values)
                }
            };
            Ok(TrajectoryRecord {
                t,
                fidelity,
                concurrence: concurrence_trajectory(d, gamma, t)?,
                schmidt_number: isotropic_schmidt_number(d, fidelity)?,
                g_positive: t < t_d,
                c_k,
            })
        })
        .collect()
}
