//! Three competitors starting in bands u | w | v: marches the system, then
//! checks the bounds on a 3x3x3 weight grid for the final snapshot.

use nbarrier::hypotheses::{verify_hypotheses, HypothesisOptions};
use nbarrier::model::{make_lotka_volterra, LotkaVolterraParams};
use nbarrier::solver::{time_march, MarchOptions, Profiles};
use nbarrier::verify::{sweep_snapshot, weight_grid, TOL_MARCH};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = vec![vec![1.0, 2.0, 2.0], vec![2.0, 1.0, 2.0], vec![2.0, 2.0, 1.0]];
    let system = make_lotka_volterra(&LotkaVolterraParams::new(vec![1.0; 3], c)?, &[1.0, 1.0, 1.0])?;
    let report = verify_hypotheses(&system, &HypothesisOptions::default());
    println!("{}", report.to_table());
    let region = report.region.ok_or("no region")?;
    let x: Vec<f64> = (0..=800).map(|i| -40.0 + 0.1 * i as f64).collect();
    let band = |lo: f64, hi: f64| x.iter().map(|&t| if t >= lo && t < hi { 1.0 } else { 0.0 }).collect();
    let init = Profiles::new(x.clone(), vec![band(f64::NEG_INFINITY, -5.0), band(5.0, f64::INFINITY), band(-5.0, 5.0)])?;
    let traj = time_march(&system, &init, &MarchOptions::new(0.05, 50.0).with_snapshots([25.0, 50.0]))?;
    let last = traj.last();
    let grid = weight_grid(&[0.5, 1.0, 2.0], 3)?;
    let verification = sweep_snapshot(&system, last, Some(0.0), &region, &grid, TOL_MARCH, 1e-3)?;
    println!("t = {}: {} tuples, overall {:?}", last.t, verification.records.len(), verification.overall);
    if let Some(t) = verification.tightest() {
        println!("tightest {:?}: margins {:e} / {:e}", t.weights.as_slice(), t.margin_lo, t.margin_hi);
    }
    Ok(())
}
