use serde::{Deserialize, Serialize};

use super::factorization::{check_method, check_square_setup};
use crate::error::{dim_err, param_err, Result};
use crate::estimators::{Estimator, ToleranceTier};
use crate::linalg::Subsystem;
use crate::measures::{binomial, c_k_pure, Measure, RoofParams};
use crate::seed;
use crate::states::{
    apply_one_sided, apply_two_sided, jamiolkowski_state, max_entangled, DensityMatrix,
    KrausChannel, PureState,
};

/// `G[($1 ⊗ $2) rho0] <= G(rho0) G[($1 ⊗ I)Phi] G[(I ⊗ $2)Phi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative values violate the bound.
    pub slack: f64,
    pub initial: f64,
    pub first_channel: f64,
    pub second_channel: f64,
    pub method: String,
    pub tier: ToleranceTier,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<RoofParams>,
}

pub fn verify_two_sided_bound(
    rho0: &DensityMatrix,
    first: &KrausChannel,
    second: &KrausChannel,
    estimator: &dyn Estimator,
    seed: u64,
) -> Result<TwoSidedReport> {
    let (d, f) = rho0.dims();
    if d != f || first.d() != d || second.d() != d {
        return Err(dim_err(format!(
            "two-sided bound needs a d x d state and d-level channels, got {d}x{f}, {}, {}",
            first.d(),
            second.d()
        )));
    }
    check_method(first, estimator)?;
    check_method(second, estimator)?;
    let phi = max_entangled(d)?;
    let evolved = apply_two_sided(first, second, rho0)?;
    let lhs = estimator.estimate(&evolved, Measure::G, seed::split(seed, 0))?.value;
    let initial = estimator.estimate(rho0, Measure::G, seed::split(seed, 1))?.value;
    let first_state = apply_one_sided(first, &phi, Subsystem::First)?;
    let first_channel = estimator.estimate(&first_state, Measure::G, seed::split(seed, 2))?.value;
    let second_state = apply_one_sided(second, &phi, Subsystem::Second)?;
    let second_channel = estimator.estimate(&second_state, Measure::G, seed::split(seed, 3))?.value;
    let rhs = initial * first_channel * second_channel;
    Ok(TwoSidedReport {
        lhs,
        rhs,
        slack: rhs - lhs,
        initial,
        first_channel,
        second_channel,
        method: estimator.name().to_string(),
        tier: estimator.tier(),
        seed,
        params: estimator.roof_params(),
    })
}

/// `C_k[(I ⊗ $)chi] <= C_k(chi) C_k[(I ⊗ $)Phi] binom(d, k)^(1/k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkBoundReport {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub initial: f64,
    pub channel: f64,
    pub binomial_factor: f64,
    pub method: String,
    pub tier: ToleranceTier,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<RoofParams>,
}

/// Uses the same seed split as [`super::verify_factorization`], so at
/// `k = d` both report identical estimates.
pub fn verify_ck_bound(
    chi: &PureState,
    ch: &KrausChannel,
    k: usize,
    estimator: &dyn Estimator,
    seed: u64,
) -> Result<CkBoundReport> {
    check_square_setup(chi, ch)?;
    check_method(ch, estimator)?;
    let d = chi.d();
    if k < 2 || k > d {
        return Err(param_err(format!("C_k bound needs 2 <= k <= d = {d}, got {k}")));
    }
    let measure = Measure::Ck(k);
    let evolved = apply_one_sided(ch, chi, Subsystem::Second)?;
    let lhs = estimator.estimate(&evolved, measure, seed::split(seed, 0))?.value;
    let initial = c_k_pure(chi, k)?;
    let rho_ch = jamiolkowski_state(ch, d)?;
    let channel = estimator.estimate(&rho_ch, measure, seed::split(seed, 1))?.value;
    let binomial_factor = binomial(d, k).powf(1.0 / k as f64);
    let rhs = initial * channel * binomial_factor;
    Ok(CkBoundReport {
        k,
        lhs,
        rhs,
        slack: rhs - lhs,
        initial,
        channel,
        binomial_factor,
        method: estimator.name().to_string(),
        tier: estimator.tier(),
        seed,
        params: estimator.roof_params(),
    })
}
