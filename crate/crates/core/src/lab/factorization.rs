use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::estimators::{Estimator, ToleranceTier};
use crate::linalg::Subsystem;
use crate::measures::{g_concurrence_pure, Measure, RoofParams};
use crate::seed;
use crate::states::{apply_one_sided, jamiolkowski_state, KrausChannel, PureState};

/// Both sides of `G[(I ⊗ $)|chi><chi|] = G(chi) G[(I ⊗ $)|Phi><Phi|]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub lhs: f64,
    pub rhs_initial: f64,
    pub rhs_channel: f64,
    pub abs_error: f64,
    pub method: String,
    pub tier: ToleranceTier,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<RoofParams>,
}

impl FactorizationReport {
    pub fn rhs(&self) -> f64 {
        self.rhs_initial * self.rhs_channel
    }
}

pub(crate) fn check_square_setup(chi: &PureState, ch: &KrausChannel) -> Result<()> {
    if chi.d() != chi.f() {
        return Err(dim_err(format!("needs d = f, got {}x{}", chi.d(), chi.f())));
    }
    if ch.d() != chi.d() {
        return Err(dim_err(format!("channel on d={} for a d={} state", ch.d(), chi.d())));
    }
    if !chi.is_normalized() {
        return Err(Error::InvalidState("initial state must be normalized".into()));
    }
    Ok(())
}

pub(crate) fn check_method(ch: &KrausChannel, estimator: &dyn Estimator) -> Result<()> {
    if estimator.name() == "exact_pure" && ch.kraus().len() != 1 {
        return Err(Error::MethodMismatch(format!(
            "exact_pure needs a single-Kraus channel, got {} Kraus operators",
            ch.kraus().len()
        )));
    }
    Ok(())
}

/// Evaluates the final state's entanglement and the prediction from the
/// initial state and the channel's Jamiołkowski state with one estimator.
pub fn verify_factorization(
    chi: &PureState,
    ch: &KrausChannel,
    estimator: &dyn Estimator,
    seed: u64,
) -> Result<FactorizationReport> {
    check_square_setup(chi, ch)?;
    check_method(ch, estimator)?;
    let d = chi.d();
    let evolved = apply_one_sided(ch, chi, Subsystem::Second)?;
    let lhs = estimator.estimate(&evolved, Measure::G, seed::split(seed, 0))?.value;
    let rhs_initial = g_concurrence_pure(chi)?;
    let rho_ch = jamiolkowski_state(ch, d)?;
    let rhs_channel = estimator.estimate(&rho_ch, Measure::G, seed::split(seed, 1))?.value;
    Ok(FactorizationReport {
        lhs,
        rhs_initial,
        rhs_channel,
        abs_error: (lhs - rhs_initial * rhs_channel).abs(),
        method: estimator.name().to_string(),
        tier: estimator.tier(),
        seed,
        params: estimator.roof_params(),
    })
}
