//! Closed forms along the depolarizing trajectory of `|Phi>`, where the
//! state stays isotropic with fidelity `F(t)`.

use crate::error::{param_err, Result};
use crate::states::check_fidelity;

/// Concurrence normalized to its initial value: `(F d - 1)/(d - 1)` for
/// `F >= 1/d`, zero below.
pub fn isotropic_concurrence(d: usize, fidelity: f64) -> Result<f64> {
    check_fidelity(d, fidelity)?;
    let d = d as f64;
    Ok(((fidelity * d - 1.0) / (d - 1.0)).max(0.0))
}

/// The `k` in `1..=d` with `k - 1 < F d <= k`.
pub fn isotropic_schmidt_number(d: usize, fidelity: f64) -> Result<usize> {
    check_fidelity(d, fidelity)?;
    // Absorbs round-off so that F = k/d lands on k, not k + 1.
    let x = fidelity * d as f64 - 1e-12 * d as f64;
    Ok((x.ceil().max(1.0) as usize).min(d))
}

fn check_rate(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(param_err(format!("rate must be positive, got {gamma}")))
    }
}

/// Time at which the Schmidt number drops from `k` to `k - 1`:
/// `ln[(d^2 - 1)/(d k - d - 1)] / (2 d gamma)`.
pub fn drop_time(d: usize, gamma: f64, k: usize) -> Result<f64> {
    check_rate(gamma)?;
    if k < 2 || k > d {
        return Err(param_err(format!("drop time needs 2 <= k <= d = {d}, got {k}")));
    }
    let (df, kf) = (d as f64, k as f64);
    // (d^2 - 1) / (dk - d - 1) = 1 + d(d - k + 1)/(dk - d - 1)
    let excess = df * (df - kf + 1.0) / (df * kf - df - 1.0);
    Ok(excess.ln_1p() / (2.0 * df * gamma))
}

/// `C(t) = max(0, ((d + 1) exp(-2 d gamma t) - 1)/d)`.
pub fn concurrence_trajectory(d: usize, gamma: f64, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(param_err(format!("trajectory needs d >= 2, got {d}")));
    }
    check_rate(gamma)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(param_err(format!("time must be non-negative, got {t}")));
    }
    let df = d as f64;
    Ok((((df + 1.0) * (-2.0 * df * gamma * t).exp() - 1.0) / df).max(0.0))
}

/// `d / [(d + 1) ln((d^2 - 1)/(d^2 - d - 1))]`.
pub fn rate_ratio(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(param_err(format!("rate ratio needs d >= 2, got {d}")));
    }
    let df = d as f64;
    let log = (df / (df * df - df - 1.0)).ln_1p();
    Ok(df / ((df + 1.0) * log))
}

/// Same ratio built from its rates at a concrete `gamma`: `1/t_d` over the
/// initial relative decay rate `-C'(0)/C(0) = 2 gamma (d + 1)`.
pub fn rate_ratio_at(d: usize, gamma: f64) -> Result<f64> {
    if d < 2 {
        return Err(param_err(format!("rate ratio needs d >= 2, got {d}")));
    }
    let g_rate = 1.0 / drop_time(d, gamma, d)?;
    let c_rate = 2.0 * gamma * (d as f64 + 1.0);
    Ok(g_rate / c_rate)
}
