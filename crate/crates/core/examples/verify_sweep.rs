//! Solves a wave, sweeps the default weight grid and reports how close the
//! observed range of `p` comes to the a-priori bounds.

use nbarrier::hypotheses::{verify_hypotheses, HypothesisOptions};
use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, Speed, WaveProblem};
use nbarrier::solver::{solve_bvp_free_speed, FreeSpeedOptions, InitialGuess, NewtonOptions};
use nbarrier::verify::{sweep_solution, weight_grid, DEFAULT_GRID_VALUES, TOL_BVP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]])?;
    let system = make_lotka_volterra(&params, &[1.0, 2.0])?;
    let region = verify_hypotheses(&system, &HypothesisOptions::default()).region.ok_or("no region")?;
    let e_minus = BoundaryState::from_point(&[1.0, 0.0], 1e-9)?;
    let e_plus = BoundaryState::from_point(&[0.0, 1.0], 1e-9)?;
    let problem = WaveProblem::new(system, e_minus, e_plus, Speed::FREE, 30.0, 600)?;
    let sol =
        solve_bvp_free_speed(&problem, &InitialGuess::default(), &FreeSpeedOptions::default(), &NewtonOptions::default())?;
    let grid = weight_grid(&DEFAULT_GRID_VALUES, 2)?;
    let report = sweep_solution(&sol, &region, &grid, TOL_BVP)?;
    print!("{}", report.to_csv());
    println!("overall: {:?}", report.overall);
    Ok(())
}
