//! Reaction systems, boundary states and wave problems.
//!
//! A [`ReactionSystem`] bundles the per-species growth fields `f, g (, h)` with
//! their diffusion rates. Growth fields are only assumed continuous, so nothing
//! here exposes derivatives; consumers that need them use finite differences.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Inputs this far below zero are treated as discretisation noise and clamped.
pub const ORTHANT_CLAMP: f64 = 1e-13;

/// Default threshold above which a coordinate counts as positive.
pub const DEFAULT_STATE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} is negative ({value})")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("growth field {field} is not finite at {point:?}")]
    NonFinite { field: usize, point: Vec<f64> },
    #[error("point {point:?} is not an equilibrium: residual {residual:e} exceeds {tol:e}")]
    NotAnEquilibrium { point: Vec<f64>, residual: f64, tol: f64 },
    #[error("point {0:?} is not an admissible boundary state")]
    InadmissibleState(Vec<f64>),
    #[error("invalid wave problem: {0}")]
    InvalidProblem(String),
}

/// Parameters of a Lotka-Volterra competition system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LotkaVolterraParams {
    pub sigma: Vec<f64>,
    pub c: Vec<Vec<f64>>,
}

impl LotkaVolterraParams {
    pub fn new(sigma: Vec<f64>, c: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let params = Self { sigma, c };
        params.validate()?;
        Ok(params)
    }

    pub fn species(&self) -> usize {
        self.sigma.len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.sigma.len();
        check_species(n)?;
        if self.c.len() != n {
            return Err(ModelError::DimensionMismatch { expected: n, got: self.c.len() });
        }
        for (i, &s) in self.sigma.iter().enumerate() {
            if !(s.is_finite() && s > 0.0) {
                return Err(ModelError::InvalidParameter(format!("sigma[{i}] = {s} must be positive")));
            }
        }
        for (i, row) in self.c.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(ModelError::InvalidParameter(format!("c[{i}][{j}] = {v} must be positive")));
                }
            }
        }
        Ok(())
    }
}

/// A scalar field sampled on a rectangular grid, evaluated by multilinear
/// interpolation. Outside the grid the boundary cell is extended linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedField {
    /// Strictly increasing node coordinates, one list per axis.
    pub axes: Vec<Vec<f64>>,
    /// Values in row-major order (last axis fastest).
    pub values: Vec<f64>,
}

impl TabulatedField {
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self, ModelError> {
        check_species(axes.len())?;
        let mut total = 1usize;
        for (k, axis) in axes.iter().enumerate() {
            if axis.len() < 2 {
                return Err(ModelError::InvalidParameter(format!("axis {k} needs at least two nodes")));
            }
            if axis.windows(2).any(|w| !(w[1] > w[0])) || axis.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::InvalidParameter(format!("axis {k} must be strictly increasing")));
            }
            total *= axis.len();
        }
        if values.len() != total {
            return Err(ModelError::DimensionMismatch { expected: total, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidParameter("tabulated values must be finite".into()));
        }
        Ok(Self { axes, values })
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let dims = self.axes.len();
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for k in 0..dims {
            let axis = &self.axes[k];
            let x = point[k];
            // partition_point gives the first node > x; clamp to a valid cell
            let idx = axis.partition_point(|&a| a <= x).clamp(1, axis.len() - 1) - 1;
            base[k] = idx;
            frac[k] = (x - axis[idx]) / (axis[idx + 1] - axis[idx]);
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << dims) {
            let mut weight = 1.0;
            let mut flat = 0usize;
            for k in 0..dims {
                let bit = (corner >> k) & 1;
                weight *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
                flat = flat * self.axes[k].len() + base[k] + bit;
            }
            acc += weight * self.values[flat];
        }
        acc
    }
}

type FieldFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// One growth field of a reaction system.
#[derive(Clone)]
pub enum Growth {
    /// `sigma - sum_j c_j x_j`
    LotkaVolterra { sigma: f64, row: Vec<f64> },
    Tabulated(Arc<TabulatedField>),
    Custom(Arc<FieldFn>),
}

impl Growth {
    pub fn custom(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Growth::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Growth::LotkaVolterra { sigma, row } => {
                sigma - row.iter().zip(point).map(|(c, x)| c * x).sum::<f64>()
            }
            Growth::Tabulated(t) => t.eval(point),
            Growth::Custom(f) => f(point),
        }
    }
}

impl fmt::Debug for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::LotkaVolterra { sigma, row } => {
                f.debug_struct("LotkaVolterra").field("sigma", sigma).field("row", row).finish()
            }
            Growth::Tabulated(_) => f.write_str("Tabulated(..)"),
            Growth::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A two- or three-species competition-diffusion system
/// `d_k L_xx + theta L_x + L * growth_k(U) = 0`.
#[derive(Debug, Clone)]
pub struct ReactionSystem {
    name: String,
    growth: Vec<Growth>,
    diffusion: Vec<f64>,
    spec: Option<SystemSpec>,
}

fn check_species(n: usize) -> Result<(), ModelError> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter(format!("species count must be 2 or 3, got {n}")))
    }
}

fn check_diffusion(d: &[f64], n: usize) -> Result<(), ModelError> {
    if d.len() != n {
        return Err(ModelError::DimensionMismatch { expected: n, got: d.len() });
    }
    for (i, &v) in d.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(ModelError::InvalidParameter(format!("diffusion d[{i}] = {v} must be positive")));
        }
    }
    Ok(())
}

/// Builds the Lotka-Volterra system `growth_i = sigma_i - sum_j c_ij x_j`.
pub fn make_lotka_volterra(params: &LotkaVolterraParams, diffusion: &[f64]) -> Result<ReactionSystem, ModelError> {
    params.validate()?;
    let n = params.species();
    check_diffusion(diffusion, n)?;
    let growth = params
        .sigma
        .iter()
        .zip(&params.c)
        .map(|(&sigma, row)| Growth::LotkaVolterra { sigma, row: row.clone() })
        .collect();
    let spec = SystemSpec {
        species: n,
        kind: SystemType::LotkaVolterra,
        sigma: Some(params.sigma.clone()),
        c: Some(params.c.clone()),
        axes: None,
        fields: None,
        d: diffusion.to_vec(),
        name: None,
    };
    Ok(ReactionSystem {
        name: format!("lotka_volterra_{n}"),
        growth,
        diffusion: diffusion.to_vec(),
        spec: Some(spec),
    })
}

impl ReactionSystem {
    /// System from arbitrary growth fields. Such systems cannot be serialised back to JSON.
    pub fn new(name: impl Into<String>, growth: Vec<Growth>, diffusion: &[f64]) -> Result<Self, ModelError> {
        check_species(growth.len())?;
        check_diffusion(diffusion, growth.len())?;
        Ok(Self { name: name.into(), growth, diffusion: diffusion.to_vec(), spec: None })
    }

    pub fn species(&self) -> usize {
        self.growth.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        if let Some(spec) = &mut self.spec {
            spec.name = Some(self.name.clone());
        }
        self
    }

    pub fn diffusion(&self) -> &[f64] {
        &self.diffusion
    }

    pub fn growth(&self) -> &[Growth] {
        &self.growth
    }

    /// Same nonlinearities, new diffusion rates.
    pub fn with_diffusion(&self, diffusion: &[f64]) -> Result<Self, ModelError> {
        check_diffusion(diffusion, self.species())?;
        let mut out = self.clone();
        out.diffusion = diffusion.to_vec();
        if let Some(spec) = &mut out.spec {
            spec.d = diffusion.to_vec();
        }
        Ok(out)
    }

    pub fn lotka_volterra_params(&self) -> Option<LotkaVolterraParams> {
        let spec = self.spec.as_ref()?;
        match spec.kind {
            SystemType::LotkaVolterra => Some(LotkaVolterraParams {
                sigma: spec.sigma.clone()?,
                c: spec.c.clone()?,
            }),
            SystemType::Tabulated => None,
        }
    }

    /// The JSON description this system was built from, if any.
    pub fn spec(&self) -> Option<&SystemSpec> {
        self.spec.as_ref()
    }

    /// Growth field `k` at `point` with no domain checks. Used inside solvers,
    /// where iterates may dip marginally below zero.
    #[inline]
    pub fn field(&self, k: usize, point: &[f64]) -> f64 {
        self.growth[k].eval(point)
    }

    /// Evaluates `f, g (, h)` (not the products with the densities).
    pub fn eval_reaction_terms(&self, point: &[f64]) -> Result<Vec<f64>, ModelError> {
        let p = self.orthant_point(point)?;
        let mut out = Vec::with_capacity(self.species());
        for (k, g) in self.growth.iter().enumerate() {
            let v = g.eval(&p);
            if !v.is_finite() {
                return Err(ModelError::NonFinite { field: k, point: p });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Checks dimension and sign, clamping noise-level negatives to zero.
    pub fn orthant_point(&self, point: &[f64]) -> Result<Vec<f64>, ModelError> {
        clamp_to_orthant(point, self.species())
    }
}

pub(crate) fn clamp_to_orthant(point: &[f64], n: usize) -> Result<Vec<f64>, ModelError> {
    if point.len() != n {
        return Err(ModelError::DimensionMismatch { expected: n, got: point.len() });
    }
    point
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value.is_nan() {
                Err(ModelError::InvalidParameter(format!("coordinate {index} is NaN")))
            } else if value >= 0.0 {
                Ok(value)
            } else if value > -ORTHANT_CLAMP {
                Ok(0.0)
            } else {
                Err(ModelError::NegativeCoordinate { index, value })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemType {
    LotkaVolterra,
    Tabulated,
}

/// JSON form of a reaction system, e.g.
/// `{"species": 2, "type": "lotka_volterra", "sigma": [1,1], "c": [[1,2],[2,1]], "d": [1,1]}`.
///
/// Tabulated systems use `"axes"` (node lists) and `"fields"` (one row-major
/// value table per species) instead of `sigma`/`c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub species: usize,
    #[serde(rename = "type")]
    pub kind: SystemType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<Vec<f64>>>,
    pub d: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<ReactionSystem, ModelError> {
        check_species(self.species)?;
        let missing = |what: &str| ModelError::InvalidParameter(format!("{what} is required for this system type"));
        let system = match self.kind {
            SystemType::LotkaVolterra => {
                let params = LotkaVolterraParams::new(
                    self.sigma.clone().ok_or_else(|| missing("sigma"))?,
                    self.c.clone().ok_or_else(|| missing("c"))?,
                )?;
                if params.species() != self.species {
                    return Err(ModelError::DimensionMismatch { expected: self.species, got: params.species() });
                }
                make_lotka_volterra(&params, &self.d)?
            }
            SystemType::Tabulated => {
                let axes = self.axes.clone().ok_or_else(|| missing("axes"))?;
                let tables = self.fields.clone().ok_or_else(|| missing("fields"))?;
                if axes.len() != self.species {
                    return Err(ModelError::DimensionMismatch { expected: self.species, got: axes.len() });
                }
                if tables.len() != self.species {
                    return Err(ModelError::DimensionMismatch { expected: self.species, got: tables.len() });
                }
                let growth = tables
                    .into_iter()
                    .map(|values| TabulatedField::new(axes.clone(), values).map(|t| Growth::Tabulated(Arc::new(t))))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut sys = ReactionSystem::new(format!("tabulated_{}", self.species), growth, &self.d)?;
                sys.spec = Some(self.clone());
                sys
            }
        };
        Ok(match &self.name {
            Some(name) => system.with_name(name.clone()),
            None => system,
        })
    }
}

impl std::str::FromStr for SystemSpec {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}

/// Positivity pattern of a boundary state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum StateKind {
    Extinction,
    /// Only species `k` (1-based) is present.
    Exclusive(usize),
    Coexistence,
}

impl From<StateKind> for String {
    fn from(kind: StateKind) -> String {
        kind.to_string()
    }
}

impl TryFrom<String> for StateKind {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "extinction" => Ok(StateKind::Extinction),
            "coexistence" => Ok(StateKind::Coexistence),
            other => other
                .strip_prefix("exclusive_")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=3).contains(k))
                .map(StateKind::Exclusive)
                .ok_or_else(|| format!("unknown state kind `{other}`")),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateKind::Extinction => f.write_str("extinction"),
            StateKind::Exclusive(k) => write!(f, "exclusive_{k}"),
            StateKind::Coexistence => f.write_str("coexistence"),
        }
    }
}

/// A far-field state `e_-` or `e_+` of a wave.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryState {
    pub point: Vec<f64>,
    pub kind: StateKind,
}

impl BoundaryState {
    /// Classifies by positivity pattern only; no equilibrium check.
    pub fn from_point(point: &[f64], tol: f64) -> Result<Self, ModelError> {
        let n = point.len();
        check_species(n)?;
        let point = clamp_to_orthant(point, n)?;
        let positive: Vec<usize> = (0..n).filter(|&k| point[k] > tol).collect();
        let kind = match positive.len() {
            0 => StateKind::Extinction,
            1 => StateKind::Exclusive(positive[0] + 1),
            m if m == n => StateKind::Coexistence,
            _ => return Err(ModelError::InadmissibleState(point)),
        };
        // coordinates at or below tol are exactly zero for this kind
        let point = point.iter().map(|&x| if x > tol { x } else { 0.0 }).collect();
        Ok(Self { point, kind })
    }

    pub fn is_extinction(&self) -> bool {
        self.kind == StateKind::Extinction
    }
}

/// Classifies `point` and, for exclusive and coexistence states, checks that
/// the defining growth equations vanish to within `tol`.
pub fn classify_boundary_state(system: &ReactionSystem, point: &[f64], tol: f64) -> Result<BoundaryState, ModelError> {
    if point.len() != system.species() {
        return Err(ModelError::DimensionMismatch { expected: system.species(), got: point.len() });
    }
    let state = BoundaryState::from_point(point, tol)?;
    let values = system.eval_reaction_terms(&state.point)?;
    let residual = match state.kind {
        StateKind::Extinction => 0.0,
        StateKind::Exclusive(k) => values[k - 1].abs(),
        StateKind::Coexistence => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    };
    if residual > tol {
        return Err(ModelError::NotAnEquilibrium { point: state.point, residual, tol });
    }
    Ok(state)
}

/// Wave speed: either prescribed or solved for together with the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Speed {
    Fixed(f64),
    Free(FreeTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeTag {
    Free,
}

impl Speed {
    pub const FREE: Speed = Speed::Free(FreeTag::Free);

    pub fn fixed(self) -> Option<f64> {
        match self {
            Speed::Fixed(t) => Some(t),
            Speed::Free(_) => None,
        }
    }
}

pub const DEFAULT_HALF_LENGTH: f64 = 30.0;
pub const DEFAULT_GRID_POINTS: usize = 600;
pub const MIN_GRID_POINTS: usize = 16;

/// A connection problem on the truncated line `[-L, L]` with `N` intervals.
#[derive(Debug, Clone)]
pub struct WaveProblem {
    pub system: ReactionSystem,
    pub e_minus: BoundaryState,
    pub e_plus: BoundaryState,
    pub theta: Speed,
    pub half_length: f64,
    pub grid_points: usize,
}

impl WaveProblem {
    pub fn new(
        system: ReactionSystem,
        e_minus: BoundaryState,
        e_plus: BoundaryState,
        theta: Speed,
        half_length: f64,
        grid_points: usize,
    ) -> Result<Self, ModelError> {
        let n = system.species();
        for state in [&e_minus, &e_plus] {
            if state.point.len() != n {
                return Err(ModelError::DimensionMismatch { expected: n, got: state.point.len() });
            }
        }
        if e_minus == e_plus {
            return Err(ModelError::InvalidProblem("e_minus and e_plus coincide".into()));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(ModelError::InvalidProblem(format!("half length {half_length} must be positive")));
        }
        if grid_points < MIN_GRID_POINTS {
            return Err(ModelError::InvalidProblem(format!(
                "grid_points {grid_points} below minimum {MIN_GRID_POINTS}"
            )));
        }
        if let Speed::Fixed(t) = theta {
            if !t.is_finite() {
                return Err(ModelError::InvalidProblem("wave speed must be finite".into()));
            }
        }
        Ok(Self { system, e_minus, e_plus, theta, half_length, grid_points })
    }

    /// Grid spacing `2L / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.grid_points as f64
    }

    /// Nodes `x_0 = -L, ..., x_N = L`.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.half_length, self.grid_points)
    }
}

pub(crate) fn uniform_grid(half_length: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| -half_length + 2.0 * half_length * i as f64 / intervals as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bistable() -> ReactionSystem {
        let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        make_lotka_volterra(&params, &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn lotka_volterra_values() {
        let sys = bistable();
        assert_eq!(sys.eval_reaction_terms(&[1.0, 0.0]).unwrap()[0], 0.0);
        assert_eq!(sys.eval_reaction_terms(&[0.0, 0.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(sys.eval_reaction_terms(&[0.0, 1.0]).unwrap()[1], 0.0);
        assert_eq!(sys.eval_reaction_terms(&[2.0, 2.0]).unwrap(), vec![-5.0, -5.0]);
        let at_root = sys.eval_reaction_terms(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(at_root.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(LotkaVolterraParams::new(vec![1.0, 0.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![2.0, 1.0]]).is_err());
        assert!(LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0]]).is_err());
        let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(make_lotka_volterra(&params, &[1.0, -1.0]).is_err());
        assert!(make_lotka_volterra(&params, &[1.0]).is_err());
    }

    #[test]
    fn orthant_clamping() {
        let sys = bistable();
        assert_eq!(sys.eval_reaction_terms(&[-5e-14, 0.0]).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(
            sys.eval_reaction_terms(&[-1e-6, 0.0]),
            Err(ModelError::NegativeCoordinate { index: 0, .. })
        ));
        assert!(matches!(
            sys.eval_reaction_terms(&[0.0]),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_field_is_reported() {
        let sys = ReactionSystem::new("bad", vec![Growth::custom(|p| 1.0 / p[0]), Growth::custom(|_| 1.0)], &[1.0, 1.0])
            .unwrap();
        assert!(matches!(sys.eval_reaction_terms(&[0.0, 1.0]), Err(ModelError::NonFinite { field: 0, .. })));
    }

    #[test]
    fn classification() {
        let sys = bistable();
        let third = 1.0 / 3.0;
        assert_eq!(classify_boundary_state(&sys, &[third, third], 1e-9).unwrap().kind, StateKind::Coexistence);
        assert_eq!(classify_boundary_state(&sys, &[0.0, 0.0], 1e-9).unwrap().kind, StateKind::Extinction);
        assert_eq!(classify_boundary_state(&sys, &[1.0, 0.0], 1e-9).unwrap().kind, StateKind::Exclusive(1));
        assert_eq!(classify_boundary_state(&sys, &[0.0, 1.0], 1e-9).unwrap().kind, StateKind::Exclusive(2));
        assert!(matches!(
            classify_boundary_state(&sys, &[0.5, 0.0], 1e-9),
            Err(ModelError::NotAnEquilibrium { .. })
        ));
        assert!(matches!(
            classify_boundary_state(&sys, &[0.3, 0.3], 1e-9),
            Err(ModelError::NotAnEquilibrium { .. })
        ));
        assert!(matches!(
            classify_boundary_state(&sys, &[-0.1, 0.0], 1e-9),
            Err(ModelError::NegativeCoordinate { .. })
        ));
    }

    #[test]
    fn classification_is_stable_across_tolerances() {
        let sys = bistable();
        for point in [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]] {
            let reference = classify_boundary_state(&sys, &point, 1e-9).unwrap();
            for tol in [1e-12, 1e-10, 1e-8, 1e-6] {
                let again = classify_boundary_state(&sys, &point, tol).unwrap();
                assert_eq!(again, reference);
                assert_eq!(classify_boundary_state(&sys, &again.point, tol).unwrap(), again);
            }
        }
    }

    #[test]
    fn mixed_three_species_state_is_inadmissible() {
        assert!(matches!(
            BoundaryState::from_point(&[0.5, 0.5, 0.0], 1e-9),
            Err(ModelError::InadmissibleState(_))
        ));
    }

    #[test]
    fn state_kind_strings() {
        for kind in [StateKind::Extinction, StateKind::Exclusive(2), StateKind::Coexistence] {
            assert_eq!(StateKind::try_from(kind.to_string()).unwrap(), kind);
        }
        assert!(StateKind::try_from("exclusive_4".to_string()).is_err());
    }

    #[test]
    fn system_spec_from_json() {
        let spec: SystemSpec =
            r#"{"species": 2, "type": "lotka_volterra", "sigma": [1, 1], "c": [[1, 2], [2, 1]], "d": [1, 2]}"#
                .parse()
                .unwrap();
        let sys = spec.build().unwrap();
        assert_eq!(sys.diffusion(), &[1.0, 2.0]);
        assert_eq!(sys.eval_reaction_terms(&[2.0, 2.0]).unwrap(), vec![-5.0, -5.0]);
        assert_eq!(sys.spec().unwrap(), &spec);

        let unknown = r#"{"species": 2, "type": "lotka_volterra", "sigma": [1, 1], "c": [[1, 2], [2, 1]], "d": [1, 1], "k": 3}"#;
        assert!(unknown.parse::<SystemSpec>().is_err());
        let zero = r#"{"species": 2, "type": "lotka_volterra", "sigma": [1, 1], "c": [[1, 0], [2, 1]], "d": [1, 1]}"#;
        assert!(zero.parse::<SystemSpec>().unwrap().build().is_err());
    }

    #[test]
    fn tabulated_field_reproduces_linear_data() {
        // f = 1 - u - 2v is reproduced exactly by bilinear interpolation, including extrapolation
        let axis: Vec<f64> = (0..=4).map(|i| i as f64 * 0.5).collect();
        let mut values = Vec::new();
        for &u in &axis {
            for &v in &axis {
                values.push(1.0 - u - 2.0 * v);
            }
        }
        let t = TabulatedField::new(vec![axis.clone(), axis], values).unwrap();
        for p in [[0.3, 0.7], [1.9, 0.1], [2.5, 0.0], [-1e-7, 0.2]] {
            assert!((t.eval(&p) - (1.0 - p[0] - 2.0 * p[1])).abs() < 1e-14);
        }
    }

    #[test]
    fn wave_problem_invariants() {
        let sys = bistable();
        let a = BoundaryState::from_point(&[1.0, 0.0], 1e-9).unwrap();
        let b = BoundaryState::from_point(&[0.0, 1.0], 1e-9).unwrap();
        assert!(WaveProblem::new(sys.clone(), a.clone(), a.clone(), Speed::Fixed(0.0), 30.0, 600).is_err());
        assert!(WaveProblem::new(sys.clone(), a.clone(), b.clone(), Speed::Fixed(0.0), 30.0, 8).is_err());
        let p = WaveProblem::new(sys, a, b, Speed::FREE, 30.0, 600).unwrap();
        let x = p.grid();
        assert_eq!(x.len(), 601);
        assert_eq!(x[0], -30.0);
        assert_eq!(x[300], 0.0);
        assert_eq!(x[600], 30.0);
    }

    #[test]
    fn speed_json() {
        assert_eq!(serde_json::from_str::<Speed>("\"free\"").unwrap(), Speed::FREE);
        assert_eq!(serde_json::from_str::<Speed>("-2.5").unwrap(), Speed::Fixed(-2.5));
    }
}
