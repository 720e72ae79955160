//! Boundary points of the hull written as `λb + (1−λ)c` with `b` on the split
//! sphere and `c` on the θ-ellipsoid, plus the segment test at `±√2 e₁`.

use std::f64::consts::SQRT_2;

use renorm_lab::handle::gaussian_vectors;
use renorm_lab::{
    boundary_decompose, horizontal_segment_probe, t_apply, unit_vector, HullGauge, Result,
    SplitNormSpec,
};

pub fn run() -> Result<()> {
    let dim = 16;
    let gauge = HullGauge::new(SplitNormSpec::new(2.0, dim)?, 1e-9);
    let shaped: Vec<_> = gaussian_vectors(dim, 4, 3).iter().map(t_apply).collect();
    for x in gaussian_vectors(dim, 4, 2).iter().chain(&shaped) {
        let x = x * (1.0 / gauge.value(x)?);
        let d = boundary_decompose(&gauge, &x, 1e-8)?;
        println!(
            "lambda {:.6}  residual {:.2e}  unit defect {:.2e}",
            d.lambda,
            d.residual,
            d.unit_defect(2.0)
        );
    }
    for sign in [1.0, -1.0] {
        let x = &unit_vector(dim, 1)? * (sign * SQRT_2);
        let probe = horizontal_segment_probe(&gauge, &x, 0.01, 1e-6)?;
        println!("segment at {sign:+}sqrt2 e1: {probe:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
