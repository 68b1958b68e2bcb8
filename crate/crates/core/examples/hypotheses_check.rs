//! Checks the structural hypotheses for a bistable competition system and
//! for one without a coexistence state.

use nbarrier::hypotheses::{verify_hypotheses, HypothesisOptions};
use nbarrier::model::{make_lotka_volterra, LotkaVolterraParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, c) in [
        ("bistable", vec![vec![1.0, 2.0], vec![2.0, 1.0]]),
        ("no coexistence", vec![vec![1.0, 2.0], vec![0.5, 1.0]]),
    ] {
        let system = make_lotka_volterra(&LotkaVolterraParams::new(vec![1.0, 1.0], c)?, &[1.0, 1.0])?;
        let report = verify_hypotheses(&system, &HypothesisOptions::default());
        println!("== {name}: all pass = {}", report.all_pass());
        println!("{}", report.to_table());
    }
    Ok(())
}
