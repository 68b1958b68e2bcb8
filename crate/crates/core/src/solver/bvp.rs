//! Damped Newton on the finite-difference traveling-wave equations.
//!
//! Unknowns are the interior nodal values, interleaved by species, so the
//! Jacobian has `n` sub- and super-diagonals for `n` species. The diffusion
//! and advection stencils enter the Jacobian exactly; the local reaction
//! block `d(L_k growth_k)/dL_l` is formed by central differences with step
//! `fd_step * scale`. In free-speed mode the speed is one more unknown,
//! closed by a phase condition and eliminated by block bordering. The pinned
//! fixed-speed mode does the same with the boundary value of one species at
//! one end, which is the right count of boundary conditions when that end is
//! an unstable node (monostable fronts).

use serde::{Deserialize, Serialize};

use super::linalg::BandedMatrix;
use super::{residual_norm, tanh_guess, Profiles, SolverError, WaveSolution};
use crate::model::{ReactionSystem, WaveProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NewtonOptions {
    /// Success when the residual max-norm is at most this.
    pub tol: f64,
    pub max_iterations: usize,
    /// Relative finite-difference step for the reaction Jacobian.
    pub fd_step: f64,
    /// Smallest damping factor tried by the backtracking line search.
    pub min_damping: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iterations: 200, fd_step: 1e-7, min_damping: 1.0 / 1024.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreeSpeedOptions {
    /// Fraction in `(0, 1)` of the way from `e_minus` to `e_plus` pinned at `phase_position`.
    pub phase_anchor: f64,
    pub phase_position: f64,
    pub theta_guess: f64,
}

impl Default for FreeSpeedOptions {
    fn default() -> Self {
        Self { phase_anchor: 0.5, phase_position: 0.0, theta_guess: 0.0 }
    }
}

/// Which end of the truncated line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Minus,
    Plus,
}

/// Fixed-speed solve with the phase species left free at one end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PinOptions {
    pub free_end: End,
    pub phase_anchor: f64,
    pub phase_position: f64,
}

impl Default for PinOptions {
    fn default() -> Self {
        Self { free_end: End::Minus, phase_anchor: 0.5, phase_position: 0.0 }
    }
}

/// Starting profile for the Newton iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialGuess {
    /// `e_minus + s (e_plus - e_minus)` with `s = (1 + tanh((x - center) / width)) / 2`.
    Tanh { center: f64, width: f64 },
    /// Given profiles, linearly resampled onto the problem grid.
    Profiles(Profiles),
}

impl Default for InitialGuess {
    fn default() -> Self {
        InitialGuess::Tanh { center: 0.0, width: 1.0 }
    }
}

impl InitialGuess {
    fn realise(&self, problem: &WaveProblem) -> Result<Profiles, SolverError> {
        let mut p = match self {
            InitialGuess::Tanh { center, width } => {
                if !(width.is_finite() && *width > 0.0 && center.is_finite()) {
                    return Err(SolverError::InvalidInput(format!("tanh width {width} must be positive")));
                }
                tanh_guess(problem, *center, *width)
            }
            InitialGuess::Profiles(p) => {
                if p.species() != problem.system.species() {
                    return Err(SolverError::InvalidInput(format!(
                        "initial guess has {} species, problem has {}",
                        p.species(),
                        problem.system.species()
                    )));
                }
                p.resample_linear(&problem.grid())
            }
        };
        let last = p.len() - 1;
        for (k, v) in p.values.iter_mut().enumerate() {
            v[0] = problem.e_minus.point[k];
            v[last] = problem.e_plus.point[k];
        }
        Ok(p)
    }
}

struct Discretisation<'a> {
    system: &'a ReactionSystem,
    n: usize,
    nodes: usize,
    h: f64,
    fd_step: f64,
}

impl<'a> Discretisation<'a> {
    fn new(problem: &'a WaveProblem, opts: &NewtonOptions) -> Self {
        let scale = problem
            .e_minus
            .point
            .iter()
            .chain(&problem.e_plus.point)
            .fold(1.0f64, |m, v| m.max(v.abs()));
        Self {
            system: &problem.system,
            n: problem.system.species(),
            nodes: problem.grid_points + 1,
            h: problem.spacing(),
            fd_step: opts.fd_step * scale,
        }
    }

    fn unknowns(&self) -> usize {
        (self.nodes - 2) * self.n
    }

    fn residual(&self, p: &Profiles, theta: f64) -> Vec<f64> {
        let (n, h) = (self.n, self.h);
        let mut r = vec![0.0; self.unknowns()];
        let mut point = vec![0.0; n];
        for i in 1..self.nodes - 1 {
            for (k, a) in point.iter_mut().enumerate() {
                *a = p.values[k][i];
            }
            for k in 0..n {
                let v = &p.values[k];
                let second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
                let first = (v[i + 1] - v[i - 1]) / (2.0 * h);
                r[(i - 1) * n + k] =
                    self.system.diffusion()[k] * second + theta * first + v[i] * self.system.field(k, &point);
            }
        }
        r
    }

    /// Derivative of the residual with respect to the speed.
    fn speed_column(&self, p: &Profiles) -> Vec<f64> {
        let n = self.n;
        let mut col = vec![0.0; self.unknowns()];
        for i in 1..self.nodes - 1 {
            for k in 0..n {
                let v = &p.values[k];
                col[(i - 1) * n + k] = (v[i + 1] - v[i - 1]) / (2.0 * self.h);
            }
        }
        col
    }

    /// Derivative of the residual with respect to the value of `component` at boundary `node`.
    fn boundary_column(&self, node: usize, component: usize, theta: f64) -> Vec<f64> {
        let d = self.system.diffusion()[component];
        let h = self.h;
        let mut col = vec![0.0; self.unknowns()];
        if node == 0 {
            col[component] = d / (h * h) - theta / (2.0 * h);
        } else {
            col[(self.nodes - 3) * self.n + component] = d / (h * h) + theta / (2.0 * h);
        }
        col
    }

    fn jacobian(&self, p: &Profiles, theta: f64) -> BandedMatrix {
        let (n, h) = (self.n, self.h);
        let m = self.unknowns();
        let mut jac = BandedMatrix::zeros(m, n, n);
        let mut point = vec![0.0; n];
        for i in 1..self.nodes - 1 {
            for (k, a) in point.iter_mut().enumerate() {
                *a = p.values[k][i];
            }
            let base = (i - 1) * n;
            for k in 0..n {
                let d = self.system.diffusion()[k];
                let row = base + k;
                jac.add(row, row, -2.0 * d / (h * h));
                if i > 1 {
                    jac.add(row, row - n, d / (h * h) - theta / (2.0 * h));
                }
                if i < self.nodes - 2 {
                    jac.add(row, row + n, d / (h * h) + theta / (2.0 * h));
                }
            }
            for l in 0..n {
                let saved = point[l];
                point[l] = saved + self.fd_step;
                let plus: Vec<f64> = (0..n).map(|k| point[k] * self.system.field(k, &point)).collect();
                point[l] = saved - self.fd_step;
                let minus: Vec<f64> = (0..n).map(|k| point[k] * self.system.field(k, &point)).collect();
                point[l] = saved;
                for k in 0..n {
                    jac.add(base + k, base + l, (plus[k] - minus[k]) / (2.0 * self.fd_step));
                }
            }
        }
        jac
    }

    fn apply_step(&self, p: &Profiles, step: &[f64], lambda: f64) -> Profiles {
        let mut out = p.clone();
        for i in 1..self.nodes - 1 {
            for k in 0..self.n {
                out.values[k][i] += lambda * step[(i - 1) * self.n + k];
            }
        }
        out
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// Solves the fixed-speed problem.
pub fn solve_bvp(problem: &WaveProblem, init: &InitialGuess, opts: &NewtonOptions) -> Result<WaveSolution, SolverError> {
    let theta = problem.theta.fixed().ok_or_else(|| {
        SolverError::InvalidInput("solve_bvp needs a fixed speed; use solve_bvp_free_speed".into())
    })?;
    let disc = Discretisation::new(problem, opts);
    let mut profiles = init.realise(problem)?;
    let mut r = disc.residual(&profiles, theta);
    let mut norm = max_norm(&r);
    let mut iterations = 0;
    while norm > opts.tol {
        if iterations == opts.max_iterations {
            return Err(SolverError::NoConvergence { iterations, residual: norm });
        }
        iterations += 1;
        let lu = disc
            .jacobian(&profiles, theta)
            .factorize()
            .map_err(|s| SolverError::JacobianSingular { column: s.column })?;
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = lu.solve(&rhs);
        let (next, next_r, next_norm) = line_search(norm, opts, |lambda| {
            let trial = disc.apply_step(&profiles, &step, lambda);
            let tr = disc.residual(&trial, theta);
            let tn = max_norm(&tr);
            (trial, tr, tn)
        });
        profiles = next;
        r = next_r;
        norm = next_norm;
    }
    finish(problem, profiles, theta, iterations)
}

/// Armijo backtracking on the residual max-norm. Takes the smallest step
/// when no trial satisfies the decrease condition.
fn line_search<T>(norm: f64, opts: &NewtonOptions, mut trial: impl FnMut(f64) -> (T, Vec<f64>, f64)) -> (T, Vec<f64>, f64) {
    let mut lambda = 1.0;
    loop {
        let (state, r, n) = trial(lambda);
        if n.is_finite() && n <= (1.0 - 1e-4 * lambda) * norm {
            return (state, r, n);
        }
        if lambda * 0.5 < opts.min_damping {
            return (state, r, n);
        }
        lambda *= 0.5;
    }
}

fn finish(problem: &WaveProblem, mut profiles: Profiles, theta: f64, iterations: usize) -> Result<WaveSolution, SolverError> {
    if profiles.values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(SolverError::NoConvergence { iterations, residual: f64::NAN });
    }
    profiles.clamp_small_negatives()?;
    let residual = residual_norm(&problem.system, &profiles, theta);
    Ok(WaveSolution { profiles, theta, residual_norm: residual, iterations, problem: problem.clone() })
}

/// Linear phase functional `sum_j c_j U_j` over the unknown vector.
struct Phase {
    entries: Vec<(usize, f64)>,
    target: f64,
    component: usize,
    nodes: Vec<(usize, f64)>,
}

impl Phase {
    fn new(problem: &WaveProblem, anchor: f64, position: f64) -> Result<Self, SolverError> {
        let n = problem.system.species();
        let component = (0..n)
            .find(|&k| problem.e_minus.point[k] != problem.e_plus.point[k])
            .filter(|&k| k < 2)
            .ok_or(SolverError::PhaseDegenerate)?;
        if !(anchor > 0.0 && anchor < 1.0) {
            return Err(SolverError::InvalidInput(format!("phase anchor {anchor} must lie in (0, 1)")));
        }
        let x = problem.grid();
        let last = x.len() - 1;
        let xp = position;
        if !(xp >= x[1] && xp <= x[last - 1]) {
            return Err(SolverError::PhaseOutsideDomain(xp));
        }
        let h = problem.spacing();
        let j = (((xp - x[0]) / h).floor() as usize).clamp(1, last - 2);
        let s = ((xp - x[j]) / h).clamp(0.0, 1.0);
        let nodes = vec![(j, 1.0 - s), (j + 1, s)];
        let entries = nodes
            .iter()
            .filter(|(_, w)| *w != 0.0)
            .map(|&(i, w)| ((i - 1) * n + component, w))
            .collect();
        let (a, b) = (problem.e_minus.point[component], problem.e_plus.point[component]);
        Ok(Self { entries, target: a + anchor * (b - a), component, nodes })
    }

    fn value(&self, p: &Profiles) -> f64 {
        self.nodes.iter().map(|&(i, w)| w * p.values[self.component][i]).sum::<f64>() - self.target
    }

    fn dot(&self, v: &[f64]) -> f64 {
        self.entries.iter().map(|&(j, w)| w * v[j]).sum()
    }
}

/// The extra unknown eliminated by bordering.
#[derive(Clone, Copy)]
enum Border {
    Speed,
    Boundary { node: usize, component: usize },
}

/// Solves for the profile and the speed together.
pub fn solve_bvp_free_speed(
    problem: &WaveProblem,
    init: &InitialGuess,
    free: &FreeSpeedOptions,
    opts: &NewtonOptions,
) -> Result<WaveSolution, SolverError> {
    let phase = Phase::new(problem, free.phase_anchor, free.phase_position)?;
    bordered_newton(problem, init, &phase, Border::Speed, free.theta_guess, opts)
}

/// Fixed-speed solve where the phase species is left free at `pin.free_end`
/// and the phase condition removes translation invariance instead.
pub fn solve_bvp_pinned(
    problem: &WaveProblem,
    init: &InitialGuess,
    pin: &PinOptions,
    opts: &NewtonOptions,
) -> Result<WaveSolution, SolverError> {
    let theta = problem.theta.fixed().ok_or_else(|| {
        SolverError::InvalidInput("solve_bvp_pinned needs a fixed speed".into())
    })?;
    let phase = Phase::new(problem, pin.phase_anchor, pin.phase_position)?;
    let node = match pin.free_end {
        End::Minus => 0,
        End::Plus => problem.grid_points,
    };
    let border = Border::Boundary { node, component: phase.component };
    bordered_newton(problem, init, &phase, border, theta, opts)
}

fn bordered_newton(
    problem: &WaveProblem,
    init: &InitialGuess,
    phase: &Phase,
    border: Border,
    theta0: f64,
    opts: &NewtonOptions,
) -> Result<WaveSolution, SolverError> {
    let disc = Discretisation::new(problem, opts);
    let mut profiles = init.realise(problem)?;
    let mut theta = theta0;
    let mut r = disc.residual(&profiles, theta);
    let mut phi = phase.value(&profiles);
    let mut norm = max_norm(&r).max(phi.abs());
    let mut iterations = 0;
    while norm > opts.tol {
        if iterations == opts.max_iterations {
            return Err(SolverError::NoConvergence { iterations, residual: norm });
        }
        iterations += 1;
        let lu = disc
            .jacobian(&profiles, theta)
            .factorize()
            .map_err(|s| SolverError::JacobianSingular { column: s.column })?;
        let column = match border {
            Border::Speed => disc.speed_column(&profiles),
            Border::Boundary { node, component } => disc.boundary_column(node, component, theta),
        };
        let y = lu.solve(&column);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let z = lu.solve(&rhs);
        let cy = phase.dot(&y);
        if cy.abs() < f64::EPSILON {
            return Err(SolverError::JacobianSingular { column: disc.unknowns() });
        }
        let extra = (phase.dot(&z) + phi) / cy;
        let step: Vec<f64> = z.iter().zip(&y).map(|(a, b)| a - extra * b).collect();
        let ((next, next_theta), next_r, next_norm) = line_search(norm, opts, |lambda| {
            let mut trial = disc.apply_step(&profiles, &step, lambda);
            let mut t = theta;
            match border {
                Border::Speed => t += lambda * extra,
                Border::Boundary { node, component } => trial.values[component][node] += lambda * extra,
            }
            let tr = disc.residual(&trial, t);
            let tn = max_norm(&tr).max(phase.value(&trial).abs());
            ((trial, t), tr, tn)
        });
        profiles = next;
        theta = next_theta;
        r = next_r;
        phi = phase.value(&profiles);
        norm = next_norm;
    }
    finish(problem, profiles, theta, iterations)
}
