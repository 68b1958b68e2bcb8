//! Marches step initial data forward in time and estimates the front speed
//! from level-set crossings of the snapshots.

use nbarrier::model::{make_lotka_volterra, LotkaVolterraParams};
use nbarrier::solver::{estimate_speed, front_position, time_march, MarchOptions, Profiles};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LotkaVolterraParams::new(vec![1.0, 0.9], vec![vec![1.0, 2.0], vec![2.0, 1.0]])?;
    let system = make_lotka_volterra(&params, &[1.0, 1.0])?;
    let x: Vec<f64> = (0..=1200).map(|i| -60.0 + 0.1 * i as f64).collect();
    let u = x.iter().map(|&t| if t < 0.0 { 1.0 } else { 0.0 }).collect();
    let v = x.iter().map(|&t| if t < 0.0 { 0.0 } else { 0.9 }).collect();
    let init = Profiles::new(x, vec![u, v])?;
    let opts = MarchOptions::new(0.05, 60.0)
        .with_snapshots((0..=12).map(|j| 5.0 * j as f64))
        .with_front(0, 0.5);
    let traj = time_march(&system, &init, &opts)?;
    for s in &traj.snapshots {
        println!("t = {:>5.1}  front = {:+.4}", s.t, front_position(&s.profiles, 0, 0.5).unwrap_or(f64::NAN));
    }
    let late: Vec<_> = traj.snapshots.iter().filter(|s| s.t >= 30.0).cloned().collect();
    println!("estimated speed {:+.5} over {} steps", estimate_speed(&late, 0, Some(0.5))?, traj.steps);
    Ok(())
}
