//! A-priori bounds on `p(x) = sum_k w_k x_k(x)` for traveling waves.
//!
//! For weights `w`, diffusion rates `d` and an enclosing [`Region`] with
//! upper intercepts `U` and lower intercepts `V`:
//!
//! ```text
//! p_upper = max_k(w_k U_k) * max(d) / min(d)
//! p_lower = min_k(w_k V_k) * min(d) / max(d) * chi
//! ```
//!
//! where `chi` is zero when either far-field state is extinction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Region;
use crate::model::BoundaryState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} must be positive and finite: {values:?}")]
    NotPositive { what: &'static str, values: Vec<f64> },
    #[error("chi must be 0 or 1, got {0}")]
    InvalidChi(u8),
}

/// Positive weights `(alpha, beta (, gamma))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self, BoundsError> {
        if !(values.len() == 2 || values.len() == 3) {
            return Err(BoundsError::DimensionMismatch { expected: 2, got: values.len() });
        }
        if values.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(BoundsError::NotPositive { what: "weights", values });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self, BoundsError> {
        Self::new(self.0.iter().map(|w| w * c).collect())
    }
}

impl TryFrom<Vec<f64>> for Weights {
    type Error = BoundsError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Weights::new(v)
    }
}

impl From<Weights> for Vec<f64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

/// Bounds for one weight tuple, with the inputs echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub p_lower: f64,
    pub p_upper: f64,
    pub chi: u8,
    pub weights: Weights,
    pub diffusion: Vec<f64>,
    pub region: Region,
}

/// 0 when either endpoint is the extinction state, 1 otherwise.
pub fn chi_indicator(e_minus: &BoundaryState, e_plus: &BoundaryState) -> u8 {
    if e_minus.is_extinction() || e_plus.is_extinction() {
        0
    } else {
        1
    }
}

fn extremes(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Bound formulas for any species count matching the region.
pub fn bounds(weights: &Weights, diffusion: &[f64], region: &Region, chi: u8) -> Result<BoundsResult, BoundsError> {
    let n = region.species();
    for len in [weights.len(), diffusion.len()] {
        if len != n {
            return Err(BoundsError::DimensionMismatch { expected: n, got: len });
        }
    }
    if diffusion.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(BoundsError::NotPositive { what: "diffusion rates", values: diffusion.to_vec() });
    }
    if chi > 1 {
        return Err(BoundsError::InvalidChi(chi));
    }
    let w = weights.as_slice();
    let (d_min, d_max) = extremes(diffusion);
    let weighted_upper: Vec<f64> = w.iter().zip(&region.upper).map(|(w, u)| w * u).collect();
    let weighted_lower: Vec<f64> = w.iter().zip(&region.lower).map(|(w, l)| w * l).collect();
    let p_upper = extremes(&weighted_upper).1 * (d_max / d_min);
    let p_lower = extremes(&weighted_lower).0 * (d_min / d_max) * f64::from(chi);
    assert!(
        p_lower <= p_upper,
        "lower bound {p_lower} exceeds upper bound {p_upper} for a valid region"
    );
    Ok(BoundsResult {
        p_lower,
        p_upper,
        chi,
        weights: weights.clone(),
        diffusion: diffusion.to_vec(),
        region: region.clone(),
    })
}

/// Two-species bounds.
pub fn bounds_two(weights: &Weights, d: [f64; 2], region: &Region, chi: u8) -> Result<BoundsResult, BoundsError> {
    if region.species() != 2 {
        return Err(BoundsError::DimensionMismatch { expected: 2, got: region.species() });
    }
    bounds(weights, &d, region, chi)
}

/// Three-species bounds.
pub fn bounds_three(weights: &Weights, d: [f64; 3], region: &Region, chi: u8) -> Result<BoundsResult, BoundsError> {
    if region.species() != 3 {
        return Err(BoundsError::DimensionMismatch { expected: 3, got: region.species() });
    }
    bounds(weights, &d, region, chi)
}
