//! Tabulates the a-priori bounds on `p = sum w_k u_k` over a small weight grid
//! for two diffusion vectors.

use nbarrier::bounds::{bounds, Weights};
use nbarrier::geometry::Region;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let region = Region::new(vec![1.0, 1.0], vec![0.5, 0.5])?;
    println!("{:>6} {:>6} {:>8} | {:>10} {:>10}", "w1", "w2", "d2", "p_lower", "p_upper");
    for d2 in [1.0, 2.0] {
        for w1 in [0.5, 1.0, 2.0] {
            for w2 in [0.5, 1.0, 2.0] {
                let b = bounds(&Weights::new(vec![w1, w2])?, &[1.0, d2], &region, 1)?;
                println!("{w1:>6} {w2:>6} {d2:>8} | {:>10.6} {:>10.6}", b.p_lower, b.p_upper);
            }
        }
    }
    let monostable = bounds(&Weights::new(vec![1.0, 1.0])?, &[1.0, 1.0], &region, 0)?;
    println!("chi = 0: p_lower = {}, p_upper = {}", monostable.p_lower, monostable.p_upper);
    Ok(())
}
