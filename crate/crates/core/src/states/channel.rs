use serde::{Deserialize, Serialize};

use super::json;
use crate::error::{dim_err, Error, Result};
use crate::linalg::{self, ComplexMatrix, C64};

/// Tolerance on `sum_k K_k† K_k` against the identity.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Completely positive map on a `d`-level system, `X -> sum_k K_k X K_k†`.
///
/// Only square channels (`d` to `d`) are represented. The completeness
/// operator `sum_k K_k† K_k` must not exceed the identity; the channel is
/// flagged trace preserving when it equals the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct KrausChannel {
    d: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    d: usize,
    trace_preserving: bool,
    #[serde(with = "json::matrix_list")]
    kraus: Vec<ComplexMatrix>,
}

impl TryFrom<ChannelJson> for KrausChannel {
    type Error = Error;

    fn try_from(raw: ChannelJson) -> Result<Self> {
        let ch = KrausChannel::new(raw.kraus)?;
        if ch.d != raw.d {
            return Err(dim_err(format!("declared d={} but Kraus operators are {}x{}", raw.d, ch.d, ch.d)));
        }
        if ch.trace_preserving != raw.trace_preserving {
            return Err(Error::InvalidChannel(format!(
                "declared trace_preserving={} contradicts the Kraus operators",
                raw.trace_preserving
            )));
        }
        Ok(ch)
    }
}

impl From<KrausChannel> for ChannelJson {
    fn from(ch: KrausChannel) -> Self {
        ChannelJson {
            d: ch.d,
            trace_preserving: ch.trace_preserving,
            kraus: ch.kraus,
        }
    }
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.nrows();
        if d == 0 {
            return Err(dim_err("Kraus operators must be non-empty"));
        }
        for k in &kraus {
            if k.shape() != (d, d) {
                return Err(dim_err(format!(
                    "all Kraus operators must be {d}x{d}, found {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if !linalg::all_finite(k) {
                return Err(Error::InvalidChannel("non-finite Kraus entries".into()));
            }
        }
        let completeness = completeness(&kraus, d);
        let (vals, _) = linalg::hermitian_eigen(&completeness)?;
        if vals[0] > 1.0 + COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!(
                "sum K†K has eigenvalue {} > 1",
                vals[0]
            )));
        }
        let trace_preserving =
            linalg::max_abs_diff(&completeness, &linalg::identity(d)) <= COMPLETENESS_TOL;
        Ok(Self {
            d,
            kraus,
            trace_preserving,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            kraus: vec![linalg::identity(d)],
            trace_preserving: true,
        }
    }

    /// Single-Kraus channel; trace preserving iff `u` is unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn completeness(&self) -> ComplexMatrix {
        completeness(&self.kraus, self.d)
    }

    /// `X -> sum_k K_k X K_k†` on a single `d x d` operator.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.d, self.d) {
            return Err(dim_err(format!(
                "channel on d={} applied to a {}x{} operator",
                self.d,
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d, self.d), |acc, k| acc + k * x * k.adjoint()))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &KrausChannel) -> Result<Self> {
        if self.d != other.d {
            return Err(dim_err("composing channels of different dimension"));
        }
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a * b))
            .collect();
        Self::new(kraus)
    }

    /// Largest max-entry difference of the two channels' outputs over the
    /// matrix units `|i><j|`. Kraus lists are never compared directly since
    /// they are only defined up to a unitary mixing.
    pub fn action_distance(&self, other: &KrausChannel) -> Result<f64> {
        if self.d != other.d {
            return Err(dim_err("comparing channels of different dimension"));
        }
        let d = self.d;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut e = ComplexMatrix::zeros(d, d);
                e[(i, j)] = C64::new(1.0, 0.0);
                let a = self.apply_matrix(&e)?;
                let b = other.apply_matrix(&e)?;
                worst = worst.max(linalg::max_abs_diff(&a, &b));
            }
        }
        Ok(worst)
    }
}

fn completeness(kraus: &[ComplexMatrix], d: usize) -> ComplexMatrix {
    kraus
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k)
}
