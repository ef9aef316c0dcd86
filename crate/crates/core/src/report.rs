//! Serializable experiment results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "mucut/1";

/// Observed and predicted series with fitted constants. `max_residual` is
/// derived data: it is recomputed on deserialization and a mismatch is an
/// error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReport")]
pub struct ExperimentReport {
    pub schema: String,
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub observed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub fitted: BTreeMap<String, f64>,
    pub max_residual: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReport {
    schema: String,
    experiment: String,
    params: BTreeMap<String, Value>,
    observed: Vec<f64>,
    predicted: Vec<f64>,
    fitted: BTreeMap<String, f64>,
    max_residual: f64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ReportError {
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("observed and predicted lengths differ ({0} vs {1})")]
    Length(usize, usize),
    #[error("max_residual {stored} does not match recomputed {recomputed}")]
    Residual { stored: f64, recomputed: f64 },
}

impl TryFrom<RawReport> for ExperimentReport {
    type Error = ReportError;
    fn try_from(r: RawReport) -> Result<Self, ReportError> {
        if r.schema != SCHEMA {
            return Err(ReportError::Schema(r.schema));
        }
        if r.observed.len() != r.predicted.len() {
            return Err(ReportError::Length(r.observed.len(), r.predicted.len()));
        }
        let recomputed = max_residual(&r.observed, &r.predicted);
        let tol = 1e-9 * recomputed.abs().max(1.0);
        let diff = (r.max_residual - recomputed).abs();
        if diff.is_nan() || diff > tol {
            return Err(ReportError::Residual { stored: r.max_residual, recomputed });
        }
        Ok(ExperimentReport {
            schema: r.schema,
            experiment: r.experiment,
            params: r.params,
            observed: r.observed,
            predicted: r.predicted,
            fitted: r.fitted,
            max_residual: recomputed,
        })
    }
}

/// `max |observed − predicted|`, zero for empty series.
pub fn max_residual(observed: &[f64], predicted: &[f64]) -> f64 {
    observed.iter().zip(predicted).map(|(o, p)| (o - p).abs()).fold(0.0, f64::max)
}

impl ExperimentReport {
    pub fn new(
        experiment: &str,
        params: BTreeMap<String, Value>,
        observed: Vec<f64>,
        predicted: Vec<f64>,
        fitted: BTreeMap<String, f64>,
    ) -> Self {
        assert_eq!(observed.len(), predicted.len(), "series lengths differ");
        let max_residual = max_residual(&observed, &predicted);
        ExperimentReport {
            schema: SCHEMA.to_string(),
            experiment: experiment.to_string(),
            params,
            observed,
            predicted,
            fitted,
            max_residual,
        }
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.observed.iter().zip(&self.predicted).map(|(o, p)| o - p).collect()
    }

    /// The sample grid recorded under `params.grid`, if present.
    pub fn grid(&self) -> Option<Vec<f64>> {
        self.params.get("grid")?.as_array()?.iter().map(Value::as_f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        let mut params = BTreeMap::new();
        params.insert("grid".into(), serde_json::json!([1.0, 2.0]));
        ExperimentReport::new("demo", params, vec![1.0, 3.0], vec![1.5, 2.0], BTreeMap::from([("c".into(), 1.0)]))
    }

    #[test]
    fn round_trip() {
        let r = sample();
        assert_eq!(r.max_residual, 1.0);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentReport>(&s).unwrap(), r);
        assert_eq!(r.grid(), Some(vec![1.0, 2.0]));
    }

    #[test]
    fn tampered_residual_rejected() {
        let mut v = serde_json::to_value(sample()).unwrap();
        v["max_residual"] = serde_json::json!(0.25);
        assert!(serde_json::from_value::<ExperimentReport>(v).is_err());
    }
}
