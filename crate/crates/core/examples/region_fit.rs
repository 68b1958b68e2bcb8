//! Samples the growth nullclines of a two-species system, fits the tightest
//! enclosing region and classifies a few points against it.

use nbarrier::geometry::{contains, fit_region, sample_nullclines};
use nbarrier::model::{make_lotka_volterra, LotkaVolterraParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LotkaVolterraParams::new(vec![1.0, 0.8], vec![vec![1.0, 1.5], vec![2.0, 1.0]])?;
    let system = make_lotka_volterra(&params, &[1.0, 1.0])?;
    let samples = sample_nullclines(&system, &[2.0, 2.0], 401, 1e-10)?;
    for s in &samples {
        println!("{}: {} nullcline samples", s.label.as_str(), s.len());
    }
    for margin in [0.0, 0.05] {
        let region = fit_region(&samples, margin)?;
        println!("margin {margin}: upper {:?}, lower {:?}", region.upper, region.lower);
    }
    let region = fit_region(&samples, 0.0)?;
    for p in [[0.5, 0.3], [0.1, 0.1], [1.5, 1.5], [1.0, 0.0]] {
        println!("{p:?} -> {:?}", contains(&region, &p));
    }
    Ok(())
}
