//! Checks computed profiles against the a-priori bounds over a weight sweep.
//!
//! A record passes when `min p >= p_lower - tol` and `max p <= p_upper + tol`,
//! with the extrema of `p = sum_k w_k x_k` taken over grid nodes only.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{bounds, chi_indicator, BoundsError, BoundsResult, Weights};
use crate::geometry::Region;
use crate::model::{ModelError, ReactionSystem, SystemSpec};
use crate::solver::{Profiles, Snapshot, WaveSolution};

/// Tolerance for Newton-converged waves.
pub const TOL_BVP: f64 = 1e-3;
/// Tolerance for time-marched snapshots, which are only close to a wave.
pub const TOL_MARCH: f64 = 1e-2;
/// Log-spaced values whose Cartesian power is the default weight grid.
pub const DEFAULT_GRID_VALUES: [f64; 5] = [0.1, 0.3, 1.0, 3.0, 10.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight grid is empty")]
    EmptyGrid,
    #[error("tolerance {0} must be nonnegative and finite")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Pass,
    Fail,
}

impl RecordStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordStatus::Pass => "pass",
            RecordStatus::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub weights: Weights,
    pub p_lower: f64,
    pub p_upper: f64,
    pub observed_min_p: f64,
    pub observed_max_p: f64,
    /// `observed_min_p - p_lower`.
    pub margin_lo: f64,
    /// `p_upper - observed_max_p`.
    pub margin_hi: f64,
    pub status: RecordStatus,
}

/// Where the verified profile came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveInfo {
    /// `bvp` or `march`.
    pub source: String,
    pub theta: Option<f64>,
    pub half_length: f64,
    pub grid_points: usize,
    pub residual_norm: Option<f64>,
    /// Snapshot time for marched profiles.
    pub time: Option<f64>,
}

impl WaveInfo {
    pub fn from_solution(sol: &WaveSolution) -> Self {
        Self {
            source: "bvp".into(),
            theta: Some(sol.theta),
            half_length: sol.problem.half_length,
            grid_points: sol.problem.grid_points,
            residual_norm: Some(sol.residual_norm),
            time: None,
        }
    }

    pub fn from_snapshot(snapshot: &Snapshot, theta: Option<f64>) -> Self {
        let x = &snapshot.profiles.x;
        Self {
            source: "march".into(),
            theta,
            half_length: 0.5 * (x[x.len() - 1] - x[0]),
            grid_points: x.len() - 1,
            residual_norm: None,
            time: Some(snapshot.t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub system: String,
    pub system_spec: Option<SystemSpec>,
    pub diffusion: Vec<f64>,
    pub region: Region,
    pub chi: u8,
    pub tol_verify: f64,
    pub wave: WaveInfo,
    pub records: Vec<VerificationRecord>,
    pub overall: RecordStatus,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == RecordStatus::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serialisable");
        s.push('\n');
        s
    }

    /// Columns `alpha,beta[,gamma],p_lower,p_upper,min_p,max_p,margin_lo,margin_hi,status`.
    pub fn to_csv(&self) -> String {
        let names = ["alpha", "beta", "gamma"];
        let n = self.diffusion.len();
        let mut out = format!("{},p_lower,p_upper,min_p,max_p,margin_lo,margin_hi,status\n", names[..n].join(","));
        for r in &self.records {
            for w in r.weights.as_slice() {
                let _ = write!(out, "{w},");
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.p_lower,
                r.p_upper,
                r.observed_min_p,
                r.observed_max_p,
                r.margin_lo,
                r.margin_hi,
                r.status.as_str()
            );
        }
        out
    }

    /// Record with the smallest `min(margin_lo, margin_hi)`.
    pub fn tightest(&self) -> Option<&VerificationRecord> {
        self.records.iter().min_by(|a, b| a.margin_lo.min(a.margin_hi).total_cmp(&b.margin_lo.min(b.margin_hi)))
    }
}

/// `p_i = sum_k w_k x_k(x_i)` and `q_i = sum_k w_k d_k x_k(x_i)`.
pub fn combination_fields(
    profiles: &Profiles,
    diffusion: &[f64],
    weights: &Weights,
) -> Result<(Vec<f64>, Vec<f64>), VerifyError> {
    let n = profiles.species();
    for len in [diffusion.len(), weights.len()] {
        if len != n {
            return Err(VerifyError::DimensionMismatch { expected: n, got: len });
        }
    }
    let w = weights.as_slice();
    let mut p = vec![0.0; profiles.len()];
    let mut q = vec![0.0; profiles.len()];
    for k in 0..n {
        for (i, &a) in profiles.values[k].iter().enumerate() {
            p[i] += w[k] * a;
            q[i] += w[k] * diffusion[k] * a;
        }
    }
    Ok((p, q))
}

/// Compares `p` on the grid with precomputed bounds.
pub fn check_bounds(
    profiles: &Profiles,
    weights: &Weights,
    bounds: &BoundsResult,
    tol_verify: f64,
) -> Result<VerificationRecord, VerifyError> {
    if !(tol_verify.is_finite() && tol_verify >= 0.0) {
        return Err(VerifyError::InvalidTolerance(tol_verify));
    }
    let (p, _) = combination_fields(profiles, &bounds.diffusion, weights)?;
    let (min_p, max_p) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let pass = min_p >= bounds.p_lower - tol_verify && max_p <= bounds.p_upper + tol_verify;
    Ok(VerificationRecord {
        weights: weights.clone(),
        p_lower: bounds.p_lower,
        p_upper: bounds.p_upper,
        observed_min_p: min_p,
        observed_max_p: max_p,
        margin_lo: min_p - bounds.p_lower,
        margin_hi: bounds.p_upper - max_p,
        status: if pass { RecordStatus::Pass } else { RecordStatus::Fail },
    })
}

/// Cartesian power of `values` (first weight varies slowest).
pub fn weight_grid(values: &[f64], species: usize) -> Result<Vec<Weights>, VerifyError> {
    if values.is_empty() {
        return Err(VerifyError::EmptyGrid);
    }
    let total = values.len().pow(species as u32);
    (0..total)
        .map(|mut idx| {
            let mut w = vec![0.0; species];
            for slot in w.iter_mut().rev() {
                *slot = values[idx % values.len()];
                idx /= values.len();
            }
            Weights::new(w).map_err(VerifyError::from)
        })
        .collect()
}

/// One record per weight tuple, in grid order, with bounds recomputed per tuple.
pub fn sweep_weights(
    profiles: &Profiles,
    system: &ReactionSystem,
    wave: WaveInfo,
    region: &Region,
    chi: u8,
    grid: &[Weights],
    tol_verify: f64,
) -> Result<VerificationReport, VerifyError> {
    if grid.is_empty() {
        return Err(VerifyError::EmptyGrid);
    }
    let diffusion = system.diffusion();
    let records = grid
        .iter()
        .map(|w| {
            let b = bounds(w, diffusion, region, chi)?;
            check_bounds(profiles, w, &b, tol_verify)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let overall =
        if records.iter().all(|r| r.status == RecordStatus::Pass) { RecordStatus::Pass } else { RecordStatus::Fail };
    Ok(VerificationReport {
        system: system.name().to_string(),
        system_spec: system.spec().cloned(),
        diffusion: diffusion.to_vec(),
        region: region.clone(),
        chi,
        tol_verify,
        wave,
        records,
        overall,
    })
}

/// Sweep over a converged wave, with `chi` taken from its endpoints.
pub fn sweep_solution(
    sol: &WaveSolution,
    region: &Region,
    grid: &[Weights],
    tol_verify: f64,
) -> Result<VerificationReport, VerifyError> {
    let chi = chi_indicator(&sol.problem.e_minus, &sol.problem.e_plus);
    sweep_weights(&sol.profiles, &sol.problem.system, WaveInfo::from_solution(sol), region, chi, grid, tol_verify)
}

/// Sweep over a marched snapshot, with `chi` from its boundary values classified at `state_tol`.
pub fn sweep_snapshot(
    system: &ReactionSystem,
    snapshot: &Snapshot,
    theta: Option<f64>,
    region: &Region,
    grid: &[Weights],
    tol_verify: f64,
    state_tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let (left, right) = snapshot.profiles.endpoints(state_tol)?;
    let chi = chi_indicator(&left, &right);
    let wave = WaveInfo::from_snapshot(snapshot, theta);
    sweep_weights(&snapshot.profiles, system, wave, region, chi, grid, tol_verify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_lotka_volterra, LotkaVolterraParams};

    fn w(v: &[f64]) -> Weights {
        Weights::new(v.to_vec()).unwrap()
    }

    fn profiles(points: &[[f64; 2]]) -> Profiles {
        let x = (0..points.len()).map(|i| i as f64).collect();
        Profiles::new(x, vec![points.iter().map(|p| p[0]).collect(), points.iter().map(|p| p[1]).collect()]).unwrap()
    }

    fn bistable() -> ReactionSystem {
        let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        make_lotka_volterra(&params, &[1.0, 1.0]).unwrap()
    }

    fn unit_region() -> Region {
        Region::new(vec![1.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn combination_examples() {
        let p = profiles(&[[0.2, 0.6], [1.0, 0.0], [0.3, 0.3]]);
        let (pp, q) = combination_fields(&p, &[1.0, 1.0], &w(&[1.0, 1.0])).unwrap();
        assert_eq!(pp, q);
        let (pp, _) = combination_fields(&p, &[1.0, 1.0], &w(&[2.0, 0.5])).unwrap();
        assert!((pp[0] - 0.7).abs() < 1e-15);
        let x3 = Profiles::new(vec![0.0, 1.0, 2.0], vec![vec![0.0; 3], vec![0.0; 3], vec![1.0; 3]]).unwrap();
        let (p3, _) = combination_fields(&x3, &[1.0; 3], &w(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(p3, vec![1.0; 3]);
        assert!(matches!(
            combination_fields(&p, &[1.0, 1.0], &w(&[1.0, 1.0, 1.0])),
            Err(VerifyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn record_status_follows_tolerance() {
        let p = profiles(&[[1.0, 0.0], [0.4, 0.4], [0.0, 1.0]]);
        let b = bounds(&w(&[1.0, 1.0]), &[1.0, 1.0], &unit_region(), 1).unwrap();
        let r = check_bounds(&p, &w(&[1.0, 1.0]), &b, 1e-3).unwrap();
        assert_eq!(r.status, RecordStatus::Pass);
        assert_eq!(r.observed_max_p, 1.0);
        assert!((r.margin_lo - 0.3).abs() < 1e-15);
        let tight = BoundsResult { p_lower: 0.9, p_upper: 1.0, ..b.clone() };
        let r = check_bounds(&p, &w(&[1.0, 1.0]), &tight, 1e-3).unwrap();
        assert_eq!(r.status, RecordStatus::Fail);
        assert!(r.margin_lo < 0.0);
    }

    #[test]
    fn chi_zero_lower_check_is_trivial() {
        let p = profiles(&[[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]]);
        let b = bounds(&w(&[3.0, 0.2]), &[1.0, 1.0], &unit_region(), 0).unwrap();
        let r = check_bounds(&p, &w(&[3.0, 0.2]), &b, 1e-3).unwrap();
        assert_eq!(r.p_lower, 0.0);
        assert_eq!(r.status, RecordStatus::Pass);
    }

    #[test]
    fn grid_order_and_size() {
        let g = weight_grid(&DEFAULT_GRID_VALUES, 2).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g[0].as_slice(), &[0.1, 0.1]);
        assert_eq!(g[1].as_slice(), &[0.1, 0.3]);
        assert_eq!(g[24].as_slice(), &[10.0, 10.0]);
        assert_eq!(weight_grid(&[0.5, 1.0, 2.0], 3).unwrap().len(), 27);
        assert_eq!(weight_grid(&[], 2).unwrap_err(), VerifyError::EmptyGrid);
    }

    #[test]
    fn sweep_report_and_csv() {
        let p = profiles(&[[1.0, 0.0], [0.45, 0.45], [0.0, 1.0]]);
        let wave = WaveInfo {
            source: "bvp".into(),
            theta: Some(0.0),
            half_length: 1.0,
            grid_points: 2,
            residual_norm: None,
            time: None,
        };
        let report = sweep_weights(&p, &bistable(), wave, &unit_region(), 1, &[w(&[1.0, 1.0])], 1e-3).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report.passed());
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("alpha,beta,p_lower,p_upper,min_p,max_p,margin_lo,margin_hi,status"));
        assert_eq!(lines.next(), Some("1,1,0.5,1,0.9,1,0.4,0,pass"));
        let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
