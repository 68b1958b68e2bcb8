use serde::{Deserialize, Serialize};

use super::{contains, Containment, FieldLabel, GeometryError, NullclineSample, Region, MAX_BISECTIONS};
use crate::model::ReactionSystem;

/// Uniform node grid over `[0, box_0] x ... x [0, box_{n-1}]`, first axis slowest.
pub(crate) struct NodeGrid<'a> {
    bbox: &'a [f64],
    resolution: usize,
}

impl<'a> NodeGrid<'a> {
    pub(crate) fn new(bbox: &'a [f64], resolution: usize) -> Result<Self, GeometryError> {
        if resolution < 2 {
            return Err(GeometryError::InvalidArgument(format!("resolution {resolution} must be at least 2")));
        }
        if bbox.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(GeometryError::InvalidArgument(format!("bounding box {bbox:?} must be positive")));
        }
        Ok(Self { bbox, resolution })
    }

    pub(crate) fn dims(&self) -> usize {
        self.bbox.len()
    }

    pub(crate) fn len(&self) -> usize {
        self.resolution.pow(self.dims() as u32)
    }

    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.resolution.pow((self.dims() - 1 - axis) as u32)
    }

    pub(crate) fn index(&self, flat: usize, axis: usize) -> usize {
        (flat / self.stride(axis)) % self.resolution
    }

    pub(crate) fn coord(&self, axis: usize, i: usize) -> f64 {
        self.bbox[axis] * i as f64 / (self.resolution - 1) as f64
    }

    pub(crate) fn point(&self, flat: usize) -> Vec<f64> {
        (0..self.dims()).map(|k| self.coord(k, self.index(flat, k))).collect()
    }

    pub(crate) fn values(&self, field: &impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|flat| field(&self.point(flat))).collect()
    }
}

/// Bisection on the segment `lo + t (hi - lo)` along one axis, with
/// `field(lo)` and `field(hi)` of strictly opposite sign.
fn refine_crossing(
    field: &impl Fn(&[f64]) -> f64,
    mut lo: Vec<f64>,
    mut hi: Vec<f64>,
    axis: usize,
    f_lo: f64,
    band_tol: f64,
) -> Option<Vec<f64>> {
    let lo_negative = f_lo < 0.0;
    let mut mid = lo.clone();
    for _ in 0..MAX_BISECTIONS {
        mid[axis] = 0.5 * (lo[axis] + hi[axis]);
        let fm = field(&mid);
        if fm.abs() <= band_tol {
            return Some(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo[axis] = mid[axis];
        } else {
            hi[axis] = mid[axis];
        }
    }
    // discontinuous fields can flip sign without passing through the band
    None
}

/// Zero set of `field` on the grid: nodes already within `band_tol`, plus one
/// bisected point per axis-aligned edge with a strict sign change.
pub(crate) fn sample_zero_set(
    field: &impl Fn(&[f64]) -> f64,
    bbox: &[f64],
    resolution: usize,
    band_tol: f64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>), GeometryError> {
    if !(band_tol.is_finite() && band_tol > 0.0) {
        return Err(GeometryError::InvalidArgument(format!("band_tol {band_tol} must be positive")));
    }
    let grid = NodeGrid::new(bbox, resolution)?;
    let values = grid.values(field);
    let mut points = Vec::new();
    let mut closest = (f64::INFINITY, 0usize);
    for flat in 0..grid.len() {
        let f0 = values[flat];
        if f0.abs() < closest.0 {
            closest = (f0.abs(), flat);
        }
        if f0.abs() <= band_tol {
            points.push(grid.point(flat));
        }
        for axis in 0..grid.dims() {
            if grid.index(flat, axis) + 1 >= resolution {
                continue;
            }
            let next = flat + grid.stride(axis);
            let f1 = values[next];
            if f0 * f1 < 0.0 && f0.abs() > band_tol && f1.abs() > band_tol {
                if let Some(p) = refine_crossing(field, grid.point(flat), grid.point(next), axis, f0, band_tol) {
                    points.push(p);
                }
            }
        }
    }
    Ok((points, grid.point(closest.1)))
}

fn check_box(system: &ReactionSystem, bbox: &[f64]) -> Result<(), GeometryError> {
    if bbox.len() != system.species() {
        return Err(GeometryError::DimensionMismatch { expected: system.species(), got: bbox.len() });
    }
    Ok(())
}

/// Samples `C_f, C_g (, C_h)`, one [`NullclineSample`] per growth field.
pub fn sample_nullclines(
    system: &ReactionSystem,
    bbox: &[f64],
    resolution: usize,
    band_tol: f64,
) -> Result<Vec<NullclineSample>, GeometryError> {
    check_box(system, bbox)?;
    (0..system.species())
        .map(|k| {
            let label = FieldLabel::species(k);
            let field = |p: &[f64]| system.field(k, p);
            let (points, closest) = sample_zero_set(&field, bbox, resolution, band_tol)?;
            if points.is_empty() {
                return Err(GeometryError::EmptyNullcline { label, closest });
            }
            Ok(NullclineSample { label, points, band_tol })
        })
        .collect()
}

fn check_weights(weights: &[f64], n: usize) -> Result<(), GeometryError> {
    if weights.len() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, got: weights.len() });
    }
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(GeometryError::InvalidArgument(format!("weights {weights:?} must be positive")));
    }
    Ok(())
}

/// Samples the zero set of `F = sum_k w_k x_k growth_k` in the open orthant.
///
/// `F` vanishes identically on every coordinate hyperplane, so points with a
/// zero coordinate are dropped.
pub fn sample_combined_field(
    system: &ReactionSystem,
    weights: &[f64],
    bbox: &[f64],
    resolution: usize,
    band_tol: f64,
) -> Result<NullclineSample, GeometryError> {
    check_box(system, bbox)?;
    check_weights(weights, system.species())?;
    let combined = |p: &[f64]| -> f64 { (0..p.len()).map(|k| weights[k] * p[k] * system.field(k, p)).sum() };
    let (points, closest) = sample_zero_set(&combined, bbox, resolution, band_tol)?;
    let points: Vec<_> = points.into_iter().filter(|p| p.iter().all(|&x| x > 0.0)).collect();
    if points.is_empty() {
        return Err(GeometryError::EmptyNullcline { label: FieldLabel::Combined, closest });
    }
    Ok(NullclineSample { label: FieldLabel::Combined, points, band_tol })
}

/// Roots of `at` on the increasing scan points `ts`: scan points where it is
/// exactly zero, plus one bisected root per strict sign change.
pub(crate) fn roots_on_scan(at: impl Fn(f64) -> f64, ts: &[f64]) -> Vec<f64> {
    let mut roots = Vec::new();
    let Some(&first) = ts.first() else { return roots };
    let mut prev_t = first;
    let mut prev_f = at(first);
    if prev_f == 0.0 {
        roots.push(first);
    }
    for &t in &ts[1..] {
        let f = at(t);
        if f == 0.0 {
            roots.push(t);
        } else if prev_f * f < 0.0 {
            roots.push(bisect(&at, prev_t, t, prev_f, f));
        }
        prev_t = t;
        prev_f = f;
    }
    roots
}

/// Bisection to adjacent floats; returns the endpoint with the smaller residual.
fn bisect(at: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64, mut f_hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = at(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// Positive roots of `t -> field(t e_axis)` on `(0, limit]`, found by a
/// uniform scan followed by bisection.
pub(crate) fn axis_roots(
    field: &impl Fn(&[f64]) -> f64,
    n: usize,
    axis: usize,
    limit: f64,
    resolution: usize,
) -> Vec<f64> {
    let steps = resolution.max(2) - 1;
    let ts: Vec<f64> = (0..=steps).map(|i| limit * i as f64 / steps as f64).collect();
    let at = |t: f64| {
        let mut p = vec![0.0; n];
        p[axis] = t;
        field(&p)
    };
    roots_on_scan(at, &ts).into_iter().filter(|&t| t > 0.0).collect()
}

/// Result of testing the combined zero set against a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedContainment {
    pub weights: Vec<f64>,
    pub checked: usize,
    /// Points that fell outside, with their classification.
    pub outside: Vec<(Vec<f64>, Containment)>,
}

impl CombinedContainment {
    pub fn all_contained(&self) -> bool {
        self.outside.is_empty()
    }
}

/// Checks the interior zero set of `F` together with the axis anchors
/// (root of growth field `k` on axis `k`) against `region`.
pub fn check_combined_containment(
    system: &ReactionSystem,
    weights: &[f64],
    region: &Region,
    bbox: &[f64],
    resolution: usize,
    band_tol: f64,
) -> Result<CombinedContainment, GeometryError> {
    let n = system.species();
    if region.species() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, got: region.species() });
    }
    let sample = sample_combined_field(system, weights, bbox, resolution, band_tol)?;
    let mut points = sample.points;
    for k in 0..n {
        let field = |p: &[f64]| system.field(k, p);
        for root in axis_roots(&field, n, k, bbox[k], resolution) {
            let mut p = vec![0.0; n];
            p[k] = root;
            points.push(p);
        }
    }
    let outside = points
        .iter()
        .map(|p| (p, contains(region, p)))
        .filter(|(_, c)| !c.is_contained())
        .map(|(p, c)| (p.clone(), c))
        .collect();
    Ok(CombinedContainment { weights: weights.to_vec(), checked: points.len(), outside })
}
