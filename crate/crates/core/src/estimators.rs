//! Mixed-state estimators behind one trait, selectable by name.
//!
//! | name         | scope                                  | tier      |
//! |--------------|----------------------------------------|-----------|
//! | `exact_pure` | rank-one (possibly subnormalized) input | exact     |
//! | `wootters`   | two qubits, `G` (= `C_2`)              | exact     |
//! | `roof`       | any `d x d`, any measure               | optimizer |

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, Measure, RoofEstimate, RoofParams};
use crate::states::{DensityMatrix, PureState};

/// How far an estimator's output may sit from the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceTier {
    Exact,
    Optimizer,
}

impl ToleranceTier {
    pub fn tolerance(self) -> f64 {
        match self {
            ToleranceTier::Exact => 1e-9,
            ToleranceTier::Optimizer => 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Optimizer metadata when the value came from the convex roof.
    pub roof: Option<RoofEstimate>,
}

impl From<f64> for Estimate {
    fn from(value: f64) -> Self {
        Estimate { value, roof: None }
    }
}

pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;

    fn tier(&self) -> ToleranceTier;

    fn estimate(&self, rho: &DensityMatrix, measure: Measure, seed: u64) -> Result<Estimate>;

    fn roof_params(&self) -> Option<RoofParams> {
        None
    }
}

impl fmt::Debug for dyn Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Estimator({})", self.name())
    }
}

/// Evaluates the pure measure of a rank-one operator.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactPure;

impl Estimator for ExactPure {
    fn name(&self) -> &'static str {
        "exact_pure"
    }

    fn tier(&self) -> ToleranceTier {
        ToleranceTier::Exact
    }

    fn estimate(&self, rho: &DensityMatrix, measure: Measure, _seed: u64) -> Result<Estimate> {
        let ensemble = rho.weighted_eigenvectors()?;
        match ensemble.as_slice() {
            [] => Ok(0.0.into()),
            [w] => {
                let chi = PureState::from_vector(rho.d(), rho.f(), w.as_slice())?;
                Ok(measure.pure(&chi)?.into())
            }
            _ => Err(Error::MethodMismatch(format!(
                "exact_pure needs a rank-one state, got rank {}",
                ensemble.len()
            ))),
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Wootters;

impl Estimator for Wootters {
    fn name(&self) -> &'static str {
        "wootters"
    }

    fn tier(&self) -> ToleranceTier {
        ToleranceTier::Exact
    }

    fn estimate(&self, rho: &DensityMatrix, measure: Measure, _seed: u64) -> Result<Estimate> {
        if rho.dims() != (2, 2) || measure.canonical(2) != Measure::G {
            return Err(Error::MethodMismatch(format!(
                "wootters covers G on 2x2 systems only, got {measure} on {}x{}",
                rho.d(),
                rho.f()
            )));
        }
        Ok(measures::wootters_concurrence(rho)?.into())
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Roof {
    pub params: RoofParams,
}

impl Estimator for Roof {
    fn name(&self) -> &'static str {
        "roof"
    }

    fn tier(&self) -> ToleranceTier {
        ToleranceTier::Optimizer
    }

    fn estimate(&self, rho: &DensityMatrix, measure: Measure, seed: u64) -> Result<Estimate> {
        let roof = measures::roof_estimate(rho, measure, &self.params, seed)?;
        Ok(Estimate {
            value: roof.value,
            roof: Some(roof),
        })
    }

    fn roof_params(&self) -> Option<RoofParams> {
        Some(self.params)
    }
}

pub type EstimatorFactory = fn(&RoofParams) -> Box<dyn Estimator>;

pub struct EstimatorRegistry {
    factories: BTreeMap<&'static str, EstimatorFactory>,
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("exact_pure", |_| Box::new(ExactPure));
        reg.register("wootters", |_| Box::new(Wootters));
        reg.register("roof", |p| Box::new(Roof { params: *p }));
        reg
    }

    pub fn register(&mut self, name: &'static str, factory: EstimatorFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str, params: &RoofParams) -> Result<Box<dyn Estimator>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownStrategy {
            kind: "estimator",
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        Ok(factory(params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic_state, max_entangled};

    #[test]
    fn registry_lookup() {
        let reg = EstimatorRegistry::with_builtins();
        assert_eq!(reg.names(), vec!["exact_pure", "roof", "wootters"]);
        let roof = reg.create("roof", &RoofParams::default()).unwrap();
        assert_eq!(roof.tier(), ToleranceTier::Optimizer);
        assert!(roof.roof_params().is_some());
        let err = reg.create("nope", &RoofParams::default()).unwrap_err();
        assert!(err.to_string().contains("exact_pure"));
    }

    #[test]
    fn exact_pure_rejects_mixed() {
        let rho = isotropic_state(2, 0.8).unwrap();
        assert!(matches!(
            ExactPure.estimate(&rho, Measure::G, 0),
            Err(Error::MethodMismatch(_))
        ));
        let phi = max_entangled(3).unwrap().density();
        assert!((ExactPure.estimate(&phi, Measure::G, 0).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wootters_scope() {
        let rho = isotropic_state(3, 0.8).unwrap();
        assert!(Wootters.estimate(&rho, Measure::G, 0).is_err());
        let rho = isotropic_state(2, 0.8).unwrap();
        assert!(Wootters.estimate(&rho, Measure::Ck(1), 0).is_err());
        let c2 = Wootters.estimate(&rho, Measure::Ck(2), 0).unwrap().value;
        assert!((c2 - 0.6).abs() < 1e-12);
    }
}
