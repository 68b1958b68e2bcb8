//! Traveling-wave profiles on a truncated line.
//!
//! [`solve_bvp`] and [`solve_bvp_free_speed`] discretise
//! `d_k L'' + theta L' + L growth_k(U) = 0` with second-order central
//! differences and Dirichlet values `e_minus`, `e_plus` at `-L` and `L`, then
//! run a damped Newton iteration. [`time_march`] integrates the parabolic
//! system with an IMEX scheme and serves as an independent oracle, and
//! [`estimate_speed`] reads a front speed off its snapshots.

mod bvp;
pub mod linalg;
mod march;
mod speed;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BoundaryState, ModelError, ReactionSystem, WaveProblem};

pub use bvp::{solve_bvp, solve_bvp_free_speed, solve_bvp_pinned, End, FreeSpeedOptions, InitialGuess, NewtonOptions, PinOptions};
pub use march::{time_march, MarchOptions, MarchTrajectory, Snapshot};
pub use speed::{estimate_speed, front_position};

/// Values in `[-NEGATIVE_TOL, 0)` are reported as zero.
pub const NEGATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("Jacobian is singular at column {column}")]
    JacobianSingular { column: usize },
    #[error("phase condition is degenerate: no component differs between the endpoints")]
    PhaseDegenerate,
    #[error("phase position {0} is not inside the domain")]
    PhaseOutsideDomain(f64),
    #[error("converged profile has negative value {value:e} at x = {x}")]
    NegativeProfile { value: f64, x: f64 },
    #[error("time step {dt} violates the reaction stability bound (dt * max|growth| = {product} > 0.5)")]
    UnstableTimeStep { dt: f64, product: f64 },
    #[error("solution blew up at t = {t}: value {value:e} exceeds {threshold:e}")]
    BlowUp { t: f64, value: f64, threshold: f64 },
    #[error("front at x = {position} is within {cells} cells of the boundary at t = {t}")]
    FrontTooClose { t: f64, position: f64, cells: usize },
    #[error("no crossing of level {level} in snapshot {snapshot}")]
    NoCrossing { snapshot: usize, level: f64 },
    #[error("need at least {needed} snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Species profiles sampled on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profiles {
    pub x: Vec<f64>,
    /// `values[k][i]` is species `k` at `x[i]`.
    pub values: Vec<Vec<f64>>,
}

impl Profiles {
    pub fn new(x: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, SolverError> {
        if x.len() < 3 {
            return Err(SolverError::InvalidInput(format!("grid needs at least 3 nodes, got {}", x.len())));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SolverError::InvalidInput("grid must be strictly increasing".into()));
        }
        if values.is_empty() || values.iter().any(|v| v.len() != x.len()) {
            return Err(SolverError::InvalidInput("every profile must match the grid length".into()));
        }
        Ok(Self { x, values })
    }

    pub fn species(&self) -> usize {
        self.values.len()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// State vector at node `i`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[i]).collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().flatten().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Boundary values as far-field states.
    pub fn endpoints(&self, tol: f64) -> Result<(BoundaryState, BoundaryState), ModelError> {
        let last = self.len() - 1;
        Ok((BoundaryState::from_point(&self.point(0), tol)?, BoundaryState::from_point(&self.point(last), tol)?))
    }

    /// Resamples onto `x` with a natural cubic spline per species.
    pub fn resample_spline(&self, x: &[f64]) -> Profiles {
        let values = self
            .values
            .iter()
            .map(|v| {
                let s = linalg::CubicSpline::new(&self.x, v);
                x.iter().map(|&t| s.eval(t)).collect()
            })
            .collect();
        Profiles { x: x.to_vec(), values }
    }

    /// Resamples onto `x` by linear interpolation, constant outside the grid.
    pub fn resample_linear(&self, x: &[f64]) -> Profiles {
        let values = self
            .values
            .iter()
            .map(|v| x.iter().map(|&t| linalg::interp_linear(&self.x, v, t)).collect())
            .collect();
        Profiles { x: x.to_vec(), values }
    }

    /// The profiles moved right by `shift`, sampled on the same grid.
    pub fn shifted(&self, shift: f64) -> Profiles {
        let source: Vec<f64> = self.x.iter().map(|t| t - shift).collect();
        let moved = self.resample_linear(&source);
        Profiles { x: self.x.clone(), values: moved.values }
    }

    /// CSV with columns `x,u,v[,w],p,q` for the given weights and diffusion rates.
    pub fn to_csv(&self, weights: &[f64], diffusion: &[f64]) -> String {
        let names = ["u", "v", "w"];
        let mut out = format!("x,{},p,q\n", names[..self.species()].join(","));
        for i in 0..self.len() {
            let point = self.point(i);
            let p: f64 = point.iter().zip(weights).map(|(a, w)| a * w).sum();
            let q: f64 = point.iter().zip(weights).zip(diffusion).map(|((a, w), d)| a * w * d).sum();
            out.push_str(&self.x[i].to_string());
            for v in &point {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push_str(&format!(",{p},{q}\n"));
        }
        out
    }

    fn clamp_small_negatives(&mut self) -> Result<(), SolverError> {
        for v in &mut self.values {
            for (i, a) in v.iter_mut().enumerate() {
                if *a < 0.0 {
                    if *a < -NEGATIVE_TOL {
                        return Err(SolverError::NegativeProfile { value: *a, x: self.x[i] });
                    }
                    *a = 0.0;
                }
            }
        }
        Ok(())
    }
}

/// A converged wave together with the problem it solves.
#[derive(Debug, Clone)]
pub struct WaveSolution {
    pub profiles: Profiles,
    pub theta: f64,
    pub residual_norm: f64,
    pub iterations: usize,
    pub problem: WaveProblem,
}

/// Serializable summary of a [`WaveSolution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveMetadata {
    pub system: String,
    pub e_minus: BoundaryState,
    pub e_plus: BoundaryState,
    pub theta: f64,
    pub speed_mode: String,
    pub half_length: f64,
    pub grid_points: usize,
    pub residual_norm: f64,
    pub iterations: usize,
    pub bc_error: f64,
    pub min_value: f64,
    pub max_value: f64,
}

impl WaveSolution {
    pub fn x(&self) -> &[f64] {
        &self.profiles.x
    }

    /// Largest deviation of the boundary values from `e_minus`, `e_plus`.
    pub fn bc_error(&self) -> f64 {
        let last = self.profiles.len() - 1;
        let left = self.profiles.point(0);
        let right = self.profiles.point(last);
        left.iter()
            .zip(&self.problem.e_minus.point)
            .chain(right.iter().zip(&self.problem.e_plus.point))
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }

    pub fn metadata(&self) -> WaveMetadata {
        WaveMetadata {
            system: self.problem.system.name().to_string(),
            e_minus: self.problem.e_minus.clone(),
            e_plus: self.problem.e_plus.clone(),
            theta: self.theta,
            speed_mode: if self.problem.theta.fixed().is_some() { "fixed" } else { "free" }.into(),
            half_length: self.problem.half_length,
            grid_points: self.problem.grid_points,
            residual_norm: self.residual_norm,
            iterations: self.iterations,
            bc_error: self.bc_error(),
            min_value: self.profiles.min_value(),
            max_value: self.profiles.max_value(),
        }
    }

    pub fn to_csv(&self, weights: &[f64]) -> String {
        self.profiles.to_csv(weights, self.problem.system.diffusion())
    }
}

/// Initial guess blending `e_minus` into `e_plus` with weight `(1 + tanh((x - center)/width))/2`.
pub fn tanh_guess(problem: &WaveProblem, center: f64, width: f64) -> Profiles {
    let x = problem.grid();
    let values = problem
        .e_minus
        .point
        .iter()
        .zip(&problem.e_plus.point)
        .map(|(&a, &b)| {
            x.iter()
                .map(|&t| {
                    let s = 0.5 * (1.0 + ((t - center) / width).tanh());
                    a + s * (b - a)
                })
                .collect()
        })
        .collect();
    Profiles { x, values }
}

/// Max-norm over interior nodes and species of
/// `d_k L'' + theta L' + L growth_k(U)` with central differences.
pub fn residual_norm(system: &ReactionSystem, profiles: &Profiles, theta: f64) -> f64 {
    let x = &profiles.x;
    let n = profiles.species();
    let mut worst = 0.0f64;
    let mut point = vec![0.0; n];
    for i in 1..x.len() - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        for (k, p) in point.iter_mut().enumerate() {
            *p = profiles.values[k][i];
        }
        for k in 0..n {
            let v = &profiles.values[k];
            let second = 2.0 * (h0 * v[i + 1] - (h0 + h1) * v[i] + h1 * v[i - 1]) / (h0 * h1 * (h0 + h1));
            let first = (v[i + 1] - v[i - 1]) / (h0 + h1);
            let r = system.diffusion()[k] * second + theta * first + v[i] * system.field(k, &point);
            worst = worst.max(r.abs());
        }
    }
    worst
}
