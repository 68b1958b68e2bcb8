//! IMEX method of lines for `u_t = d_k u_yy + u growth_k(U)`.
//!
//! Each step applies the reaction explicitly and then backward-Euler
//! diffusion with zero-flux (ghost-node) boundaries, one tridiagonal solve
//! per species. When `dt * max|growth| <= 1/2` the explicit factor
//! `1 + dt growth` is positive and the implicit matrix is an M-matrix, so
//! nonnegative data stay nonnegative.

use serde::{Deserialize, Serialize};

use super::linalg::solve_tridiagonal;
use super::speed::front_position;
use super::{Profiles, SolverError};
use crate::model::ReactionSystem;

/// Front monitoring: the crossing of `level` by species `component`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontTracking {
    pub component: usize,
    pub level: f64,
    /// Minimum allowed distance, in cells, between the front and either boundary.
    pub min_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarchOptions {
    pub dt: f64,
    pub t_final: f64,
    /// Times at which to keep snapshots, rounded to the nearest step; the final state is always kept.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    /// Any value above this aborts with `BlowUp`.
    #[serde(default)]
    pub blowup_threshold: Option<f64>,
    #[serde(default)]
    pub front: Option<FrontTracking>,
}

impl MarchOptions {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self { dt, t_final, snapshot_times: Vec::new(), blowup_threshold: None, front: None }
    }

    pub fn with_snapshots(mut self, times: impl IntoIterator<Item = f64>) -> Self {
        self.snapshot_times = times.into_iter().collect();
        self
    }

    pub fn with_blowup_threshold(mut self, threshold: f64) -> Self {
        self.blowup_threshold = Some(threshold);
        self
    }

    pub fn with_front(mut self, component: usize, level: f64) -> Self {
        self.front = Some(FrontTracking { component, level, min_cells: 10 });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub profiles: Profiles,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarchTrajectory {
    pub snapshots: Vec<Snapshot>,
    pub dt: f64,
    pub steps: usize,
    /// `(t, position)` at every step when front tracking is enabled.
    pub front_history: Vec<(f64, f64)>,
}

impl MarchTrajectory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("the final state is always recorded")
    }
}

fn uniform_spacing(x: &[f64]) -> Result<f64, SolverError> {
    let h = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    let uniform = x.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if uniform {
        Ok(h)
    } else {
        Err(SolverError::InvalidInput("time marching needs a uniform grid".into()))
    }
}

pub fn time_march(system: &ReactionSystem, initial: &Profiles, opts: &MarchOptions) -> Result<MarchTrajectory, SolverError> {
    let n = system.species();
    if initial.species() != n {
        return Err(SolverError::InvalidInput(format!(
            "initial data has {} species, system has {n}",
            initial.species()
        )));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0 && opts.t_final.is_finite() && opts.t_final >= 0.0) {
        return Err(SolverError::InvalidInput(format!("bad dt {} or final time {}", opts.dt, opts.t_final)));
    }
    if initial.min_value() < 0.0 {
        return Err(SolverError::InvalidInput("initial data must be nonnegative".into()));
    }
    let h = uniform_spacing(&initial.x)?;
    let nodes = initial.len();
    let steps = (opts.t_final / opts.dt).round() as usize;
    let mut keep: Vec<usize> = opts
        .snapshot_times
        .iter()
        .map(|t| {
            if !(t.is_finite() && *t >= 0.0 && *t <= opts.t_final + 0.5 * opts.dt) {
                Err(SolverError::InvalidInput(format!("snapshot time {t} outside [0, {}]", opts.t_final)))
            } else {
                Ok((t / opts.dt).round() as usize)
            }
        })
        .collect::<Result<_, _>>()?;
    keep.push(steps);
    keep.sort_unstable();
    keep.dedup();

    let diag_terms: Vec<f64> = system.diffusion().iter().map(|d| opts.dt * d / (h * h)).collect();
    let mut state = initial.clone();
    let mut snapshots = Vec::with_capacity(keep.len());
    let mut front_history = Vec::new();
    let mut next_keep = 0;
    let mut point = vec![0.0; n];
    let mut growth = vec![0.0; n * nodes];
    for step in 0..=steps {
        let t = step as f64 * opts.dt;
        if let Some(front) = &opts.front {
            if let Some(pos) = front_position(&state, front.component, front.level) {
                let margin = front.min_cells as f64 * h;
                if pos < state.x[0] + margin || pos > state.x[nodes - 1] - margin {
                    return Err(SolverError::FrontTooClose { t, position: pos, cells: front.min_cells });
                }
                front_history.push((t, pos));
            }
        }
        if next_keep < keep.len() && keep[next_keep] == step {
            snapshots.push(Snapshot { t, profiles: state.clone() });
            next_keep += 1;
        }
        if step == steps {
            break;
        }
        let mut worst = 0.0f64;
        for i in 0..nodes {
            for (k, a) in point.iter_mut().enumerate() {
                *a = state.values[k][i];
            }
            for k in 0..n {
                let g = system.field(k, &point);
                worst = worst.max(g.abs());
                growth[k * nodes + i] = g;
            }
        }
        if opts.dt * worst > 0.5 || !worst.is_finite() {
            return Err(SolverError::UnstableTimeStep { dt: opts.dt, product: opts.dt * worst });
        }
        for k in 0..n {
            let r = diag_terms[k];
            let rhs: Vec<f64> =
                (0..nodes).map(|i| state.values[k][i] * (1.0 + opts.dt * growth[k * nodes + i])).collect();
            let mut lower = vec![-r; nodes];
            let diag = vec![1.0 + 2.0 * r; nodes];
            let mut upper = vec![-r; nodes];
            upper[0] = -2.0 * r;
            lower[nodes - 1] = -2.0 * r;
            state.values[k] = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        }
        let peak = state.max_value();
        let threshold = opts.blowup_threshold.unwrap_or(f64::INFINITY);
        if !peak.is_finite() || peak > threshold {
            return Err(SolverError::BlowUp { t: t + opts.dt, value: peak, threshold });
        }
    }
    Ok(MarchTrajectory { snapshots, dt: opts.dt, steps, front_history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_lotka_volterra, uniform_grid, LotkaVolterraParams};

    fn bistable() -> ReactionSystem {
        let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        make_lotka_volterra(&params, &[1.0, 1.0]).unwrap()
    }

    fn constant(value: [f64; 2]) -> Profiles {
        let x = uniform_grid(10.0, 100);
        Profiles::new(x, vec![vec![value[0]; 101], vec![value[1]; 101]]).unwrap()
    }

    #[test]
    fn coexistence_state_is_fixed() {
        let third = 1.0 / 3.0;
        let traj = time_march(&bistable(), &constant([third, third]), &MarchOptions::new(0.05, 50.0)).unwrap();
        let last = traj.last();
        for v in last.profiles.values.iter().flatten() {
            assert!((v - third).abs() <= 1e-10);
        }
        assert_eq!(last.t, 50.0);
    }

    #[test]
    fn extinction_is_fixed() {
        let traj = time_march(&bistable(), &constant([0.0, 0.0]), &MarchOptions::new(0.1, 10.0)).unwrap();
        assert!(traj.last().profiles.values.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn snapshots_land_on_requested_steps() {
        let opts = MarchOptions::new(0.1, 2.0).with_snapshots([0.0, 1.0, 1.04]);
        let traj = time_march(&bistable(), &constant([0.5, 0.1]), &opts).unwrap();
        let times: Vec<f64> = traj.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times.len(), 3);
        assert_eq!(times[0], 0.0);
        assert!((times[1] - 1.0).abs() < 1e-12);
        assert!((times[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stiff_step_is_rejected() {
        let err = time_march(&bistable(), &constant([0.0, 0.0]), &MarchOptions::new(0.6, 1.0)).unwrap_err();
        assert!(matches!(err, SolverError::UnstableTimeStep { .. }));
    }

    #[test]
    fn blowup_threshold_triggers() {
        let opts = MarchOptions::new(0.1, 5.0).with_blowup_threshold(0.2);
        let err = time_march(&bistable(), &constant([0.1, 0.0]), &opts).unwrap_err();
        assert!(matches!(err, SolverError::BlowUp { .. }));
    }

    #[test]
    fn moving_front_near_boundary_is_reported() {
        let x = uniform_grid(10.0, 200);
        let u: Vec<f64> = x.iter().map(|&t| if t < 5.0 { 1.0 } else { 0.0 }).collect();
        let init = Profiles::new(x, vec![u, vec![0.0; 201]]).unwrap();
        let opts = MarchOptions::new(0.05, 20.0).with_front(0, 0.5);
        let err = time_march(&bistable(), &init, &opts).unwrap_err();
        assert!(matches!(err, SolverError::FrontTooClose { .. }));
    }

    #[test]
    fn positivity_is_preserved() {
        let x = uniform_grid(20.0, 200);
        let u: Vec<f64> = x.iter().map(|&t| if t.abs() < 2.0 { 1.0 } else { 0.0 }).collect();
        let v: Vec<f64> = x.iter().map(|&t| if t > 4.0 { 1.0 } else { 0.0 }).collect();
        let init = Profiles::new(x, vec![u, v]).unwrap();
        let traj = time_march(&bistable(), &init, &MarchOptions::new(0.05, 10.0)).unwrap();
        assert!(traj.last().profiles.min_value() >= 0.0);
    }
}
