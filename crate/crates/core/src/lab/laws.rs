//! Verification laws as named strategies for [`super::run_sweep`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{verify_ck_bound, verify_factorization, verify_two_sided_bound};
use crate::error::{param_err, Error, Result};
use crate::estimators::Estimator;
use crate::states::{KrausChannel, PureState};

/// Inputs drawn for one sweep case. `second` is only used by laws acting
/// with two channels.
#[derive(Debug, Clone)]
pub struct CaseInput {
    pub chi: PureState,
    pub first: KrausChannel,
    pub second: KrausChannel,
    pub k: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationKind {
    /// `|lhs - rhs|`, must stay below the tolerance.
    AbsError,
    /// `rhs - lhs`, must stay above minus the tolerance.
    Slack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

pub trait Law: Send + Sync {
    fn name(&self) -> &'static str;

    fn deviation_kind(&self) -> DeviationKind;

    fn check_config(&self, _d: usize, _k: Option<usize>) -> Result<()> {
        Ok(())
    }

    fn evaluate(&self, case: &CaseInput, estimator: &dyn Estimator) -> Result<LawOutcome>;

    fn passes(&self, deviation: f64, tolerance: f64) -> bool {
        match self.deviation_kind() {
            DeviationKind::AbsError => deviation <= tolerance,
            DeviationKind::Slack => deviation >= -tolerance,
        }
    }
}

pub struct Factorization;

impl Law for Factorization {
    fn name(&self) -> &'static str {
        "factorization"
    }

    fn deviation_kind(&self) -> DeviationKind {
        DeviationKind::AbsError
    }

    fn evaluate(&self, case: &CaseInput, estimator: &dyn Estimator) -> Result<LawOutcome> {
        let r = verify_factorization(&case.chi, &case.first, estimator, case.seed)?;
        Ok(LawOutcome {
            lhs: r.lhs,
            rhs: r.rhs(),
            deviation: r.abs_error,
        })
    }
}

pub struct TwoSided;

impl Law for TwoSided {
    fn name(&self) -> &'static str {
        "two-sided"
    }

    fn deviation_kind(&self) -> DeviationKind {
        DeviationKind::Slack
    }

    fn evaluate(&self, case: &CaseInput, estimator: &dyn Estimator) -> Result<LawOutcome> {
        let r = verify_two_sided_bound(&case.chi.density(), &case.first, &case.second, estimator, case.seed)?;
        Ok(LawOutcome {
            lhs: r.lhs,
            rhs: r.rhs,
            deviation: r.slack,
        })
    }
}

pub struct CkHierarchy;

impl Law for CkHierarchy {
    fn name(&self) -> &'static str {
        "ck"
    }

    fn deviation_kind(&self) -> DeviationKind {
        DeviationKind::Slack
    }

    fn check_config(&self, d: usize, k: Option<usize>) -> Result<()> {
        match k {
            Some(k) if (2..=d).contains(&k) => Ok(()),
            Some(k) => Err(param_err(format!("ck law needs 2 <= k <= d = {d}, got {k}"))),
            None => Err(param_err("ck law needs k")),
        }
    }

    fn evaluate(&self, case: &CaseInput, estimator: &dyn Estimator) -> Result<LawOutcome> {
        let k = case.k.ok_or_else(|| param_err("ck law needs k"))?;
        let r = verify_ck_bound(&case.chi, &case.first, k, estimator, case.seed)?;
        Ok(LawOutcome {
            lhs: r.lhs,
            rhs: r.rhs,
            deviation: r.slack,
        })
    }
}

pub struct LawRegistry {
    laws: BTreeMap<&'static str, Box<dyn Law>>,
}

impl Default for LawRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl LawRegistry {
    pub fn empty() -> Self {
        Self {
            laws: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Factorization));
        reg.register(Box::new(TwoSided));
        reg.register(Box::new(CkHierarchy));
        reg
    }

    pub fn register(&mut self, law: Box<dyn Law>) {
        self.laws.insert(law.name(), law);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.laws.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Law> {
        self.laws
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "law",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }
}
