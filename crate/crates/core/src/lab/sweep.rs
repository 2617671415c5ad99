use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::laws::{CaseInput, DeviationKind, Law, LawRegistry};
use crate::error::{param_err, Result};
use crate::estimators::{Estimator, EstimatorRegistry, ToleranceTier};
use crate::measures::RoofParams;
use crate::seed;
use crate::states::{random_channel_from, PureState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub law: String,
    pub d: usize,
    pub k: Option<usize>,
    pub n_states: usize,
    /// Channels drawn per state.
    pub n_channels: usize,
    /// Kraus rank of every channel; `None` draws it uniformly from
    /// `1..=d^2` per channel.
    pub n_kraus: Option<usize>,
    pub method: String,
    pub params: RoofParams,
    pub seed: u64,
    /// Overrides the estimator's tier tolerance.
    pub tolerance: Option<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(param_err(format!("sweep needs d >= 2, got {}", self.d)));
        }
        if let Some(n) = self.n_kraus {
            if n < 1 || n > self.d * self.d {
                return Err(param_err(format!("n_kraus must be in [1, {}], got {n}", self.d * self.d)));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(param_err(format!("tolerance must be positive, got {t}")));
            }
        }
        self.params.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub state_index: usize,
    pub channel_index: usize,
    pub n_kraus: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub law: String,
    pub method: String,
    pub tier: ToleranceTier,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub seed: u64,
    pub tolerance: f64,
    pub n_cases: usize,
    pub failures: usize,
    pub max_abs_error: Option<f64>,
    pub mean_abs_error: Option<f64>,
    pub min_slack: Option<f64>,
    pub mean_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<RoofParams>,
    pub records: Vec<CaseRecord>,
}

impl SweepSummary {
    pub fn pass_fraction(&self) -> f64 {
        if self.n_cases == 0 {
            1.0
        } else {
            (self.n_cases - self.failures) as f64 / self.n_cases as f64
        }
    }
}

/// Runs a sweep with the built-in law and estimator registries.
pub fn monte_carlo_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    let laws = LawRegistry::with_builtins();
    let law = laws.get(&config.law)?;
    let estimator = EstimatorRegistry::with_builtins().create(&config.method, &config.params)?;
    run_sweep(config, law, estimator.as_ref())
}

fn draw_case(config: &SweepConfig, state_index: usize, channel_index: usize) -> Result<(CaseInput, Vec<usize>)> {
    let d = config.d;
    let mut state_rng = seed::rng(seed::split(config.seed, 2 * state_index as u64));
    let chi = PureState::random(d, d, &mut state_rng)?;
    let channel_seed = seed::split(seed::split(config.seed, 2 * state_index as u64 + 1), channel_index as u64);
    let mut rng = seed::rng(channel_seed);
    let mut ranks = Vec::with_capacity(2);
    let mut next_channel = |rng: &mut seed::Rng| {
        let n = config.n_kraus.unwrap_or_else(|| rng.random_range(1..=d * d));
        ranks.push(n);
        random_channel_from(d, n, rng)
    };
    let first = next_channel(&mut rng)?;
    let second = next_channel(&mut rng)?;
    Ok((
        CaseInput {
            chi,
            first,
            second,
            k: config.k,
            seed: seed::split(channel_seed, u64::MAX),
        },
        ranks,
    ))
}

/// Evaluates `law` on `n_states x n_channels` random cases. Cases run in
/// parallel; records come back in case order, so the summary depends only on
/// the config.
pub fn run_sweep(config: &SweepConfig, law: &dyn Law, estimator: &dyn Estimator) -> Result<SweepSummary> {
    config.validate()?;
    law.check_config(config.d, config.k)?;
    let tolerance = config.tolerance.unwrap_or(estimator.tier().tolerance());
    let kind = law.deviation_kind();
    let two_channels = law.name() == "two-sided";

    let records = (0..config.n_states * config.n_channels)
        .into_par_iter()
        .map(|c| {
            let (si, ci) = (c / config.n_channels, c % config.n_channels);
            let (case, mut ranks) = draw_case(config, si, ci)?;
            if !two_channels {
                ranks.truncate(1);
            }
            let out = law.evaluate(&case, estimator)?;
            let (abs_error, slack) = match kind {
                DeviationKind::AbsError => (Some(out.deviation), None),
                DeviationKind::Slack => (None, Some(out.deviation)),
            };
            Ok(CaseRecord {
                state_index: si,
                channel_index: ci,
                n_kraus: ranks,
                lhs: out.lhs,
                rhs: out.rhs,
                abs_error,
                slack,
                passed: law.passes(out.deviation, tolerance),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = records.len();
    let stats = |pick: fn(&CaseRecord) -> Option<f64>, worst: fn(f64, f64) -> f64| {
        let vals: Vec<f64> = records.iter().filter_map(pick).collect();
        if vals.is_empty() {
            return (None, None);
        }
        let w = vals.iter().copied().reduce(worst);
        (w, Some(vals.iter().sum::<f64>() / vals.len() as f64))
    };
    let (max_abs_error, mean_abs_error) = stats(|r| r.abs_error, f64::max);
    let (min_slack, mean_slack) = stats(|r| r.slack, f64::min);

    Ok(SweepSummary {
        law: law.name().to_string(),
        method: estimator.name().to_string(),
        tier: estimator.tier(),
        d: config.d,
        k: config.k,
        seed: config.seed,
        tolerance,
        n_cases: n,
        failures: records.iter().filter(|r| !r.passed).count(),
        max_abs_error,
        mean_abs_error,
        min_slack,
        mean_slack,
        params: estimator.roof_params(),
        records,
    })
}
