use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, ReactionSystem, Speed, WaveProblem};
use nbarrier::solver::{
    estimate_speed, front_position, residual_norm, solve_bvp, solve_bvp_free_speed, solve_bvp_pinned, time_march,
    FreeSpeedOptions, InitialGuess, MarchOptions, NewtonOptions, PinOptions, Profiles, WaveSolution,
};

fn lv(sigma: [f64; 2], d: [f64; 2]) -> ReactionSystem {
    let params = LotkaVolterraParams::new(sigma.to_vec(), vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    make_lotka_volterra(&params, &d).unwrap()
}

fn state(p: &[f64]) -> BoundaryState {
    BoundaryState::from_point(p, 1e-9).unwrap()
}

fn grid(half_length: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals).map(|i| -half_length + 2.0 * half_length * i as f64 / intervals as f64).collect()
}

fn free_wave(system: ReactionSystem, e_plus: [f64; 2], n: usize, free: FreeSpeedOptions) -> WaveSolution {
    let p = WaveProblem::new(system, state(&[1.0, 0.0]), state(&e_plus), Speed::FREE, 30.0, n).unwrap();
    solve_bvp_free_speed(&p, &InitialGuess::default(), &free, &NewtonOptions::default()).unwrap()
}

fn sup_distance(a: &Profiles, b: &Profiles) -> f64 {
    a.values
        .iter()
        .flatten()
        .zip(b.values.iter().flatten())
        .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

fn step_data(x: &[f64]) -> Profiles {
    let u: Vec<f64> = x.iter().map(|&t| if t < 0.0 { 1.0 } else { 0.0 }).collect();
    let v: Vec<f64> = u.iter().map(|a| 1.0 - a).collect();
    Profiles::new(x.to_vec(), vec![u, v]).unwrap()
}

/// Residual on the doubled grid of the spline interpolant of a converged solution.
fn refined_residual(n: usize) -> f64 {
    let sol = free_wave(lv([1.0, 0.9], [1.0, 1.0]), [0.0, 0.9], n, FreeSpeedOptions::default());
    let fine = sol.profiles.resample_spline(&grid(30.0, 2 * n));
    residual_norm(&sol.problem.system, &fine, sol.theta)
}

#[test]
fn grid_refinement_is_second_order() {
    let coarse = refined_residual(300);
    let fine = refined_residual(600);
    let ratio = coarse / fine;
    assert!((2.5..=6.0).contains(&ratio), "ratio {ratio} ({coarse:e} / {fine:e})");
}

#[test]
fn translation_quotient() {
    let system = lv([1.0, 1.0], [1.0, 1.0]);
    let base = free_wave(system.clone(), [0.0, 1.0], 600, FreeSpeedOptions::default());
    let shift = 1.0;
    let guess = InitialGuess::Tanh { center: 3.0, width: 2.0 };
    let p = WaveProblem::new(system, state(&[1.0, 0.0]), state(&[0.0, 1.0]), Speed::FREE, 30.0, 600).unwrap();
    let free = FreeSpeedOptions { phase_position: shift, ..Default::default() };
    let moved = solve_bvp_free_speed(&p, &guess, &free, &NewtonOptions::default()).unwrap();
    let aligned = moved.profiles.shifted(-shift);
    let cells = 10;
    let len = base.profiles.len();
    let inner = |p: &Profiles| Profiles {
        x: p.x[cells..len - cells].to_vec(),
        values: p.values.iter().map(|v| v[cells..len - cells].to_vec()).collect(),
    };
    let gap = sup_distance(&inner(&aligned), &inner(&base.profiles));
    assert!(gap <= 1e-6, "translation gap {gap:e}");
    assert!((moved.theta - base.theta).abs() <= 1e-6);
}

#[test]
fn bvp_matches_late_time_march() {
    let system = lv([1.0, 1.0], [1.0, 1.0]);
    let wave = free_wave(system.clone(), [0.0, 1.0], 600, FreeSpeedOptions::default());
    let x = wave.x().to_vec();
    let opts = MarchOptions::new(0.05, 200.0)
        .with_snapshots((0..=10).map(|j| 100.0 + 10.0 * j as f64))
        .with_front(0, 0.5);
    let traj = time_march(&system, &step_data(&x), &opts).unwrap();
    let late = &traj.last().profiles;
    let pos = front_position(late, 0, 0.5).unwrap();
    let aligned = late.shifted(-pos);
    let gap = sup_distance(&aligned, &wave.profiles);
    assert!(gap <= 1e-2, "BVP/march gap {gap:e}");
    let drift = estimate_speed(&traj.snapshots, 0, Some(0.5)).unwrap();
    assert!(drift.abs() <= 1e-3, "drift {drift:e}");
    assert!(traj.snapshots.iter().all(|s| s.profiles.min_value() >= -1e-12));
}

#[test]
fn asymmetric_speed_matches_march() {
    let system = lv([1.0, 0.9], [1.0, 1.0]);
    let wave = free_wave(system.clone(), [0.0, 0.9], 600, FreeSpeedOptions::default());
    let x = grid(60.0, 1200);
    let u: Vec<f64> = x.iter().map(|&t| if t < 0.0 { 1.0 } else { 0.0 }).collect();
    let v: Vec<f64> = x.iter().map(|&t| if t < 0.0 { 0.0 } else { 0.9 }).collect();
    let init = Profiles::new(x, vec![u, v]).unwrap();
    let opts = MarchOptions::new(0.05, 60.0)
        .with_snapshots((0..=10).map(|j| 30.0 + 3.0 * j as f64))
        .with_front(0, 0.5);
    let traj = time_march(&system, &init, &opts).unwrap();
    let marched = estimate_speed(&traj.snapshots, 0, Some(0.5)).unwrap();
    assert!(wave.theta.abs() > 1e-2);
    assert!((marched - wave.theta).abs() <= 2e-2, "march {marched} vs BVP {}", wave.theta);
}

#[test]
fn symmetric_fixed_speed_is_mirror_symmetric() {
    let p = WaveProblem::new(lv([1.0, 1.0], [1.0, 1.0]), state(&[1.0, 0.0]), state(&[0.0, 1.0]), Speed::Fixed(0.0), 30.0, 600)
        .unwrap();
    let sol = solve_bvp(&p, &InitialGuess::default(), &NewtonOptions::default()).unwrap();
    let u = &sol.profiles.values[0];
    let v = &sol.profiles.values[1];
    let last = u.len() - 1;
    for i in 0..=last {
        assert!((u[i] - v[last - i]).abs() <= 1e-8);
    }
}

#[test]
fn monostable_fixed_speed_from_marched_profile() {
    let system = lv([1.0, 1.0], [1.0, 1.0]);
    let x = grid(60.0, 1200);
    let u: Vec<f64> = x.iter().map(|&t| if t > 45.0 { 1.0 } else { 0.0 }).collect();
    let init = Profiles::new(x, vec![u, vec![0.0; 1201]]).unwrap();
    let opts = MarchOptions::new(0.05, 30.0).with_snapshots([20.0, 25.0, 30.0]).with_front(0, 0.5);
    let traj = time_march(&system, &init, &opts).unwrap();
    let speed = estimate_speed(&traj.snapshots, 0, Some(0.5)).unwrap();
    assert!(speed < -1.5 && speed > -2.2, "invasion speed {speed}");
    let late = &traj.last().profiles;
    let guess = late.shifted(-front_position(late, 0, 0.5).unwrap());
    let p = WaveProblem::new(system, state(&[0.0, 0.0]), state(&[1.0, 0.0]), Speed::Fixed(-2.5), 30.0, 600).unwrap();
    let sol = solve_bvp_pinned(&p, &InitialGuess::Profiles(guess), &PinOptions::default(), &NewtonOptions::default())
        .unwrap();
    assert!(sol.residual_norm <= 1e-10);
    assert!(sol.profiles.min_value() >= 0.0);
    assert!((front_position(&sol.profiles, 0, 0.5).unwrap()).abs() < 1e-9);
}
