//! Invasion of an empty habitat by a single species at a prescribed
//! supercritical speed, with the phase species left free at the far end.

use nbarrier::bounds::{bounds, chi_indicator, Weights};
use nbarrier::hypotheses::{verify_hypotheses, HypothesisOptions};
use nbarrier::model::{make_lotka_volterra, BoundaryState, LotkaVolterraParams, Speed, WaveProblem};
use nbarrier::solver::{solve_bvp_pinned, InitialGuess, NewtonOptions, PinOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LotkaVolterraParams::new(vec![1.0, 1.0], vec![vec![1.0, 2.0], vec![2.0, 1.0]])?;
    let system = make_lotka_volterra(&params, &[1.0, 1.0])?;
    let e_minus = BoundaryState::from_point(&[0.0, 0.0], 1e-9)?;
    let e_plus = BoundaryState::from_point(&[1.0, 0.0], 1e-9)?;
    let chi = chi_indicator(&e_minus, &e_plus);
    let problem = WaveProblem::new(system.clone(), e_minus, e_plus, Speed::Fixed(-2.5), 30.0, 600)?;
    let guess = InitialGuess::Tanh { center: 0.0, width: 2.0 };
    let sol = solve_bvp_pinned(&problem, &guess, &PinOptions::default(), &NewtonOptions::default())?;
    println!("theta = {}, residual = {:e}, min = {:e}", sol.theta, sol.residual_norm, sol.profiles.min_value());
    let region = verify_hypotheses(&system, &HypothesisOptions::default()).region.ok_or("no region")?;
    let b = bounds(&Weights::new(vec![1.0, 1.0])?, system.diffusion(), &region, chi)?;
    println!("chi = {chi}: bounds [{}, {}]", b.p_lower, b.p_upper);
    Ok(())
}
