//! Reducing factor: how evenly a facility's flow is spread over its edges.
//!
//! Weights are sorted ascending and accumulated into a cumulative share
//! curve over equally spaced x positions `0, 1/k, ..., 1`. The area under
//! that curve (trapezoidal rule, origin included) is compared against the
//! area for perfectly even weights, which is exactly one half. The result
//! is 1 for equal weights and tends to `1/k` when one edge carries nearly
//! everything; algebraically it equals `1 - Gini` of the weights.

use serde::{Deserialize, Serialize};

use super::MetricsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Cumulative fraction of edges.
    pub x: f64,
    /// Cumulative fraction of weight.
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeCurve {
    pub points: Vec<CurvePoint>,
    pub auc: f64,
    pub auc_max: f64,
}

/// Area of the curve for uniform weights under the trapezoidal scheme.
pub const AUC_UNIFORM: f64 = 0.5;

fn check_weights(weights: &[f64]) -> Result<(), MetricsError> {
    match weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        Some(&w) => Err(MetricsError::NonPositiveWeight(w)),
        None => Ok(()),
    }
}

fn sorted(weights: &[f64]) -> Vec<f64> {
    let mut w = weights.to_vec();
    w.sort_by(f64::total_cmp);
    w
}

/// Cumulative weight-share curve of a non-empty multiset of positive weights.
pub fn cumulative_curve(weights: &[f64]) -> Result<CumulativeCurve, MetricsError> {
    if weights.is_empty() {
        return Err(MetricsError::EmptyWeights);
    }
    check_weights(weights)?;
    let w = sorted(weights);
    let k = w.len();
    let total: f64 = w.iter().sum();

    let mut points = Vec::with_capacity(k + 1);
    points.push(CurvePoint { x: 0.0, y: 0.0 });
    let mut running = 0.0;
    let mut interior = 0.0;
    for (i, wi) in w.iter().enumerate() {
        running += wi;
        let last = i + 1 == k;
        let y = if last { 1.0 } else { running / total };
        if !last {
            interior += y;
        }
        points.push(CurvePoint { x: (i + 1) as f64 / k as f64, y });
    }
    // Each trapezoid has width 1/k; interior heights count twice, the end
    // heights (0 and 1) once.
    let auc = (interior + 0.5) / k as f64;

    Ok(CumulativeCurve { points, auc, auc_max: AUC_UNIFORM })
}

/// `None` (reported as NA) for fewer than two weights.
pub fn reducing_factor(weights: &[f64]) -> Result<Option<f64>, MetricsError> {
    check_weights(weights)?;
    if weights.len() < 2 {
        return Ok(None);
    }
    let first = weights[0];
    if weights.iter().all(|&w| w == first) {
        return Ok(Some(1.0));
    }
    let curve = cumulative_curve(weights)?;
    Ok(Some((curve.auc / curve.auc_max).min(1.0)))
}
