//! The solver against a brute-force gauge in dimension three.

use renorm_lab::handle::gaussian_vectors;
use renorm_lab::oracle::brute_force_gauge;
use renorm_lab::{hull_gauge, Result, SplitNormSpec};

pub fn run() -> Result<()> {
    for p in [2.0, 3.0] {
        let spec = SplitNormSpec::new(p, 3)?;
        let mut worst = 0.0f64;
        for x in gaussian_vectors(3, 10, 4) {
            let solver = hull_gauge(&x, &spec, 1e-9)?.value;
            worst = worst.max((solver - brute_force_gauge(&x, p)?).abs());
        }
        println!("p = {p}: max |solver - brute force| = {worst:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
