//! Solves for profile and speed together when the two competitors have
//! different intrinsic growth rates; the fitter species invades.

use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, Speed, WaveProblem};
use nbarrier::solver::{solve_bvp_free_speed, FreeSpeedOptions, InitialGuess, NewtonOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for sigma2 in [1.0, 0.95, 0.9, 0.8] {
        let params = LotkaVolterraParams::new(vec![1.0, sigma2], vec![vec![1.0, 2.0], vec![2.0, 1.0]])?;
        let system = make_lotka_volterra(&params, &[1.0, 1.0])?;
        let e_minus = BoundaryState::from_point(&[1.0, 0.0], 1e-9)?;
        let e_plus = BoundaryState::from_point(&[0.0, sigma2], 1e-9)?;
        let problem = WaveProblem::new(system, e_minus, e_plus, Speed::FREE, 30.0, 600)?;
        let sol = solve_bvp_free_speed(
            &problem,
            &InitialGuess::default(),
            &FreeSpeedOptions::default(),
            &NewtonOptions::default(),
        )?;
        println!("sigma2 = {sigma2:<5} theta = {:+.6}  residual = {:e}", sol.theta, sol.residual_norm);
    }
    Ok(())
}
