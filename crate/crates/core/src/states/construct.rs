use std::f64::consts::PI;

use super::{DensityMatrix, KrausChannel, PureState, StateRef};
use crate::error::{dim_err, param_err, Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem, C64, ZERO};
use crate::seed;

/// Tolerance on the first reduction of a Jamiołkowski state being `I/d`.
pub const REDUCTION_TOL: f64 = 1e-8;

/// Slack allowed when range-checking fidelities computed in floating point.
const FIDELITY_SLACK: f64 = 1e-12;

/// `|Phi> = sum_n |n>|n> / sqrt(d)`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(param_err(format!("maximally entangled state needs d >= 2, got {d}")));
    }
    PureState::new(linalg::identity(d).unscale((d as f64).sqrt()))
}

/// Filter `M = sqrt(d) A` with `(M ⊗ I)|Phi> = |chi>`.
pub fn filtering_operator(chi: &PureState) -> Result<ComplexMatrix> {
    if chi.d() != chi.f() {
        return Err(dim_err(format!(
            "filtering operator needs d = f, got {}x{}",
            chi.d(),
            chi.f()
        )));
    }
    if !chi.is_normalized() {
        return Err(Error::InvalidState("filtering operator needs a normalized state".into()));
    }
    Ok(chi.coeffs().scale((chi.d() as f64).sqrt()))
}

fn side_dim(dims: (usize, usize), side: Subsystem) -> usize {
    match side {
        Subsystem::First => dims.0,
        Subsystem::Second => dims.1,
    }
}

fn lift(op: &ComplexMatrix, dims: (usize, usize), side: Subsystem) -> ComplexMatrix {
    match side {
        Subsystem::First => linalg::kron(op, &linalg::identity(dims.1)),
        Subsystem::Second => linalg::kron(&linalg::identity(dims.0), op),
    }
}

/// Applies a channel to one side of a bipartite state.
pub fn apply_one_sided<'a>(
    ch: &KrausChannel,
    state: impl Into<StateRef<'a>>,
    side: Subsystem,
) -> Result<DensityMatrix> {
    let state = state.into();
    let dims = state.dims();
    if side_dim(dims, side) != ch.d() {
        return Err(dim_err(format!(
            "channel on d={} cannot act on the {side:?} side of a {}x{} system",
            ch.d(),
            dims.0,
            dims.1
        )));
    }
    let out = match state {
        StateRef::Pure(chi) => {
            let n = dims.0 * dims.1;
            ch.kraus().iter().try_fold(ComplexMatrix::zeros(n, n), |acc, k| {
                let v = chi.apply_local(k, side)?.vector();
                Ok::<_, Error>(acc + &v * v.adjoint())
            })?
        }
        StateRef::Mixed(rho) => {
            let n = dims.0 * dims.1;
            ch.kraus().iter().fold(ComplexMatrix::zeros(n, n), |acc, k| {
                let l = lift(k, dims, side);
                acc + &l * rho.matrix() * l.adjoint()
            })
        }
    };
    Ok(DensityMatrix::from_trusted(dims.0, dims.1, out))
}

/// `($1 ⊗ $2) rho`.
pub fn apply_two_sided(
    first: &KrausChannel,
    second: &KrausChannel,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    let mid = apply_one_sided(first, rho, Subsystem::First)?;
    apply_one_sided(second, &mid, Subsystem::Second)
}

/// `(I ⊗ $)|Phi><Phi|`.
pub fn jamiolkowski_state(ch: &KrausChannel, d: usize) -> Result<DensityMatrix> {
    if ch.d() != d {
        return Err(dim_err(format!("channel acts on d={}, requested d={d}", ch.d())));
    }
    apply_one_sided(ch, &max_entangled(d)?, Subsystem::Second)
}

/// Inverts [`jamiolkowski_state`] for a trace-preserving channel.
///
/// Each eigenpair `(mu, v)` of the state gives a Kraus operator
/// `sqrt(d mu) V^T`, where `V` is `v` reshaped row-major.
pub fn channel_from_jamiolkowski(rho: &DensityMatrix) -> Result<KrausChannel> {
    let (d, f) = rho.dims();
    if d != f {
        return Err(dim_err(format!("Jamiołkowski state needs d = f, got {d}x{f}")));
    }
    let first = rho.reduced(Subsystem::Second);
    let target = linalg::identity(d).unscale(d as f64);
    let dev = linalg::max_abs_diff(&first, &target);
    if dev > REDUCTION_TOL {
        return Err(Error::InvalidChannel(format!(
            "first reduction deviates from I/d by {dev:e}; not the image of a trace-preserving channel"
        )));
    }
    let scale = (d as f64).sqrt();
    let kraus = rho
        .weighted_eigenvectors()?
        .into_iter()
        .map(|w| ComplexMatrix::from_row_slice(d, d, w.as_slice()).transpose().scale(scale))
        .collect();
    KrausChannel::new(kraus)
}

/// `(M_chi ⊗ I) rho_$ (M_chi† ⊗ I)`: the same final state as
/// `apply_one_sided(ch, chi, Second)` with filter and channel exchanged.
pub fn dual_form(chi: &PureState, ch: &KrausChannel) -> Result<DensityMatrix> {
    let m = filtering_operator(chi)?;
    let d = chi.d();
    let rho_ch = jamiolkowski_state(ch, d)?;
    let l = linalg::kron(&m, &linalg::identity(d));
    let out = &l * rho_ch.matrix() * l.adjoint();
    Ok(DensityMatrix::from_trusted(d, d, out))
}

/// Generalized Pauli operator `X^a Z^b`, with `X|k> = |k+1>` and
/// `Z|k> = w^k |k>`, `w = exp(2 pi i / d)`.
pub fn weyl_operator(d: usize, a: usize, b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |row, col| {
        if row == (col + a) % d {
            C64::from_polar(1.0, 2.0 * PI * ((b * col) % d) as f64 / d as f64)
        } else {
            ZERO
        }
    })
}

/// `rho -> (1 - p) rho + p tr(rho) I/d` via `d^2` Weyl Kraus operators.
pub fn depolarizing_channel(d: usize, p: f64) -> Result<KrausChannel> {
    if d < 1 {
        return Err(param_err("depolarizing channel needs d >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(param_err(format!("depolarizing probability {p} outside [0, 1]")));
    }
    let d2 = (d * d) as f64;
    let mut kraus = Vec::with_capacity(d * d);
    kraus.push(linalg::identity(d).scale((1.0 - p + p / d2).sqrt()));
    let w = (p / d2).sqrt();
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            kraus.push(weyl_operator(d, a, b).scale(w));
        }
    }
    KrausChannel::new(kraus)
}

fn check_rate_and_time(gamma: f64, t: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(param_err(format!("rate must be positive, got {gamma}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(param_err(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

/// Depolarizing strength reached after time `t` at rate `gamma`:
/// `p = 1 - exp(-2 d gamma t)`.
pub fn depolarizing_probability(d: usize, gamma: f64, t: f64) -> Result<f64> {
    check_rate_and_time(gamma, t)?;
    Ok(-(-2.0 * d as f64 * gamma * t).exp_m1())
}

/// Overlap with `|Phi>` after depolarizing one half with strength `p`.
pub fn fidelity_from_probability(d: usize, p: f64) -> f64 {
    1.0 - p + p / (d * d) as f64
}

/// `F(t) = [1 + (d^2 - 1) exp(-2 d gamma t)] / d^2`.
pub fn fidelity_at_time(d: usize, gamma: f64, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(param_err(format!("fidelity trajectory needs d >= 2, got {d}")));
    }
    check_rate_and_time(gamma, t)?;
    let d2 = (d * d) as f64;
    Ok((1.0 + (d2 - 1.0) * (-2.0 * d as f64 * gamma * t).exp()) / d2)
}

pub(crate) fn check_fidelity(d: usize, fidelity: f64) -> Result<()> {
    if d < 2 {
        return Err(param_err(format!("isotropic states need d >= 2, got {d}")));
    }
    let lo = 1.0 / (d * d) as f64;
    if !(fidelity >= lo - FIDELITY_SLACK && fidelity <= 1.0 + FIDELITY_SLACK) {
        return Err(param_err(format!("fidelity {fidelity} outside [1/d^2, 1] for d={d}")));
    }
    Ok(())
}

/// `rho_F = (1 - F)/(d^2 - 1) (I - |Phi><Phi|) + F |Phi><Phi|`.
pub fn isotropic_state(d: usize, fidelity: f64) -> Result<DensityMatrix> {
    check_fidelity(d, fidelity)?;
    let phi = max_entangled(d)?.density();
    let n = d * d;
    let noise = (1.0 - fidelity) / (n as f64 - 1.0);
    let m = (linalg::identity(n) - phi.matrix()).scale(noise) + phi.matrix().scale(fidelity);
    Ok(DensityMatrix::from_trusted(d, d, m))
}

/// Trace-preserving channel from a Haar-random isometry `C^d -> C^(d n)`,
/// cut into `n` square blocks.
pub fn random_channel(d: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    random_channel_from(d, n_kraus, &mut seed::rng(seed))
}

pub fn random_channel_from(d: usize, n_kraus: usize, rng: &mut seed::Rng) -> Result<KrausChannel> {
    if d < 1 {
        return Err(param_err("random channel needs d >= 1"));
    }
    if n_kraus < 1 || n_kraus > d * d {
        return Err(param_err(format!("n_kraus must be in [1, {}], got {n_kraus}", d * d)));
    }
    let v = linalg::haar_isometry_from(d * n_kraus, d, rng);
    let kraus = (0..n_kraus).map(|k| v.rows(k * d, d).into_owned()).collect();
    KrausChannel::new(kraus)
}
