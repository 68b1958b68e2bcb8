//! Solves the symmetric bistable connection at prescribed speed zero and
//! prints a coarse view of the profile.

use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, Speed, WaveProblem};
use nbarrier::solver::{solve_bvp, InitialGuess, NewtonOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]])?;
    let system = make_lotka_volterra(&params, &[1.0, 1.0])?;
    let e_minus = BoundaryState::from_point(&[1.0, 0.0], 1e-9)?;
    let e_plus = BoundaryState::from_point(&[0.0, 1.0], 1e-9)?;
    let problem = WaveProblem::new(system, e_minus, e_plus, Speed::Fixed(0.0), 30.0, 600)?;
    let sol = solve_bvp(&problem, &InitialGuess::default(), &NewtonOptions::default())?;
    println!("residual {:e} after {} iterations", sol.residual_norm, sol.iterations);
    for i in (0..=600).step_by(50) {
        let p = sol.profiles.point(i);
        println!("x = {:>6.1}  u = {:.6}  v = {:.6}", sol.x()[i], p[0], p[1]);
    }
    Ok(())
}
