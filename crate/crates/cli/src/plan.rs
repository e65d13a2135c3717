//! The JSON plan file.

use cluster_mech::periodicity::{Limits, MutationPlan};
use cluster_mech::seed::CoefficientKind;
use cluster_mech::ExchangeMatrix;
use serde::{Deserialize, Serialize};

use crate::Failure;

/// A starting point in canonical coordinates. Without `p` the point of the
/// small phase space over `u` is used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub u: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
}

/// Everything a command needs. Directions and σ are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    #[serde(rename = "B")]
    pub b: ExchangeMatrix,
    #[serde(default)]
    pub seq: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(default = "universal")]
    pub coefficients: CoefficientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// A positive evaluation point for the y-variables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default)]
    pub limits: Limits,
}

fn universal() -> CoefficientKind {
    CoefficientKind::Universal
}

impl PlanFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let plan: PlanFile = serde_json::from_str(text).map_err(|e| Failure::Input(format!("invalid plan file: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let n = self.b.n();
        self.mutation_plan()?;
        if let Some(labels) = &self.labels {
            let want = match self.coefficients {
                CoefficientKind::Universal => 2 * n,
                CoefficientKind::Trivial => n,
            };
            if labels.len() != want {
                return Err(Failure::Input(format!("expected {want} labels, got {}", labels.len())));
            }
        }
        if let Some(y) = &self.y0 {
            check_len("y0", y.len(), n)?;
            if let Some(v) = y.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
                return Err(Failure::Input(format!("y0 entries must be positive and finite, got {v}")));
            }
        }
        if let Some(pt) = &self.point {
            check_len("point.u", pt.u.len(), n)?;
            if let Some(p) = &pt.p {
                check_len("point.p", p.len(), n)?;
            }
        }
        if self.samples == Some(0) {
            return Err(Failure::Input("samples must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Failure::Input(format!("tol must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// The plan with the file's σ, or the identity when absent.
    pub fn mutation_plan(&self) -> Result<MutationPlan, Failure> {
        Ok(MutationPlan::from_one_based(self.b.clone(), &self.seq, self.sigma.as_deref())?)
    }
}

fn check_len(name: &str, got: usize, n: usize) -> Result<(), Failure> {
    if got == n {
        Ok(())
    } else {
        Err(Failure::Input(format!("{name} has length {got}, expected {n}")))
    }
}
