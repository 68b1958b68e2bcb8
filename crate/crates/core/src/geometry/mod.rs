//! Nullcline sampling and the enclosing region between two hyperplanes.
//!
//! A [`Region`] is the set of points `P` in the closed orthant with
//! `sum_k P_k / upper_k <= 1` and `sum_k P_k / lower_k >= 1`: the band between
//! the lower and upper lines (planes, for three species). Nullcline samples
//! are produced by grid sign analysis with bisection refinement, and
//! [`fit_region`] finds the tightest band containing them.

mod fit;
mod sampling;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;

pub use fit::{fit_points, fit_region};
pub use sampling::{check_combined_containment, sample_combined_field, sample_nullclines, CombinedContainment};
pub(crate) use sampling::{roots_on_scan, NodeGrid};

/// Equality tolerance used by [`contains`].
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Bisection depth cap when refining a nullcline crossing.
pub const MAX_BISECTIONS: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("no zero crossing of {label} in the bounding box (closest grid value at {closest:?})")]
    EmptyNullcline { label: FieldLabel, closest: Vec<f64> },
    #[error("degenerate fit on axis {axis}: {reason}")]
    DegenerateFit { axis: usize, reason: String, witness: Vec<f64> },
    #[error("fitted intercepts out of order on axis {axis}: upper {upper} <= lower {lower}")]
    OrderViolation { axis: usize, upper: f64, lower: f64 },
    #[error("no sample points to fit")]
    EmptySamples,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which zero set a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldLabel {
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "h")]
    H,
    /// The weighted combination `sum_k w_k x_k growth_k`.
    #[serde(rename = "F")]
    Combined,
}

impl FieldLabel {
    pub fn species(k: usize) -> Self {
        match k {
            0 => FieldLabel::F,
            1 => FieldLabel::G,
            2 => FieldLabel::H,
            _ => panic!("no growth field with index {k}"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldLabel::F => "f",
            FieldLabel::G => "g",
            FieldLabel::H => "h",
            FieldLabel::Combined => "F",
        }
    }
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Points of the orthant where one field is within `band_tol` of zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullclineSample {
    pub label: FieldLabel,
    pub points: Vec<Vec<f64>>,
    pub band_tol: f64,
}

impl NullclineSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `label,u,v[,w]`.
    pub fn to_csv(&self) -> String {
        let n = self.points.first().map_or(2, Vec::len);
        let mut out = csv_header(n);
        for p in &self.points {
            push_csv_row(&mut out, self.label.as_str(), p);
        }
        out
    }
}

pub(crate) fn csv_header(n: usize) -> String {
    let names = ["u", "v", "w"];
    format!("label,{}\n", names[..n].join(","))
}

pub(crate) fn push_csv_row(out: &mut String, label: &str, values: &[f64]) {
    out.push_str(label);
    for v in values {
        out.push(',');
        out.push_str(&v.to_string());
    }
    out.push('\n');
}

/// The band between the lower and upper hyperplanes, described by their axis
/// intercepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl Region {
    /// Requires `upper_k > lower_k > 0` on every axis.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Result<Self, GeometryError> {
        if upper.len() != lower.len() {
            return Err(GeometryError::DimensionMismatch { expected: upper.len(), got: lower.len() });
        }
        if !(upper.len() == 2 || upper.len() == 3) {
            return Err(GeometryError::InvalidArgument(format!(
                "region must have 2 or 3 axes, got {}",
                upper.len()
            )));
        }
        for (axis, (&hi, &lo)) in upper.iter().zip(&lower).enumerate() {
            if !(hi.is_finite() && lo.is_finite() && lo > 0.0) {
                return Err(GeometryError::InvalidArgument(format!(
                    "intercepts on axis {axis} must be finite and positive ({hi}, {lo})"
                )));
            }
            if hi <= lo {
                return Err(GeometryError::OrderViolation { axis, upper: hi, lower: lo });
            }
        }
        Ok(Self { upper, lower })
    }

    pub fn species(&self) -> usize {
        self.upper.len()
    }

    /// `sum_k p_k / upper_k`; at most one inside the region.
    pub fn upper_sum(&self, point: &[f64]) -> f64 {
        point.iter().zip(&self.upper).map(|(p, u)| p / u).sum()
    }

    /// `sum_k p_k / lower_k`; at least one inside the region.
    pub fn lower_sum(&self, point: &[f64]) -> f64 {
        point.iter().zip(&self.lower).map(|(p, l)| p / l).sum()
    }

    /// True when `other` lies inside `self` in the region partial order.
    pub fn encloses(&self, other: &Region) -> bool {
        self.upper.iter().zip(&other.upper).all(|(a, b)| a >= b)
            && self.lower.iter().zip(&other.lower).all(|(a, b)| a <= b)
    }

    /// Rows `upper,...` and `lower,...` under the header `label,u,v[,w]`.
    pub fn to_csv(&self) -> String {
        let mut out = csv_header(self.species());
        push_csv_row(&mut out, "upper", &self.upper);
        push_csv_row(&mut out, "lower", &self.lower);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Inside,
    Boundary,
    OutsideAbove,
    OutsideBelow,
}

impl Containment {
    /// Inside or on the boundary.
    pub fn is_contained(self) -> bool {
        matches!(self, Containment::Inside | Containment::Boundary)
    }
}

pub fn contains(region: &Region, point: &[f64]) -> Containment {
    let above = region.upper_sum(point);
    let below = region.lower_sum(point);
    if above > 1.0 + BOUNDARY_TOL {
        Containment::OutsideAbove
    } else if below < 1.0 - BOUNDARY_TOL {
        Containment::OutsideBelow
    } else if (above - 1.0).abs() <= BOUNDARY_TOL || (below - 1.0).abs() <= BOUNDARY_TOL {
        Containment::Boundary
    } else {
        Containment::Inside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_region() -> Region {
        Region::new(vec![1.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn containment_examples() {
        let r = unit_region();
        assert_eq!(contains(&r, &[0.4, 0.4]), Containment::Inside);
        assert_eq!(contains(&r, &[0.0, 0.0]), Containment::OutsideBelow);
        assert_eq!(contains(&r, &[1.0, 1.0]), Containment::OutsideAbove);
        assert_eq!(contains(&r, &[1.0, 0.0]), Containment::Boundary);
        assert_eq!(contains(&r, &[0.25, 0.25]), Containment::Boundary);
    }

    #[test]
    fn region_validation() {
        assert!(matches!(
            Region::new(vec![1.0, 0.5], vec![0.5, 0.5]),
            Err(GeometryError::OrderViolation { axis: 1, .. })
        ));
        assert!(Region::new(vec![1.0, 1.0], vec![0.0, 0.5]).is_err());
        assert!(Region::new(vec![1.0, 1.0], vec![0.5]).is_err());
        assert!(Region::new(vec![1.0], vec![0.5]).is_err());
    }

    #[test]
    fn encloses_is_partial_order() {
        let small = unit_region();
        let big = Region::new(vec![1.2, 1.0], vec![0.4, 0.5]).unwrap();
        assert!(big.encloses(&small));
        assert!(!small.encloses(&big));
        assert!(small.encloses(&small));
    }

    #[test]
    fn region_csv() {
        assert_eq!(unit_region().to_csv(), "label,u,v\nupper,1,1\nlower,0.5,0.5\n");
    }

    #[test]
    fn label_serde() {
        assert_eq!(serde_json::to_string(&FieldLabel::Combined).unwrap(), "\"F\"");
        assert_eq!(serde_json::to_string(&FieldLabel::G).unwrap(), "\"g\"");
    }
}
