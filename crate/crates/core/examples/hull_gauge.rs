//! Gauge of the convex hull of the split ball and the θ-ellipsoid, through
//! both solvers, with the decomposition `x = u + v` it returns.

use std::f64::consts::SQRT_2;

use renorm_lab::hull::GaugeMethod;
use renorm_lab::{
    split_norm, theta_norm, unit_vector, HullGauge, Result, SplitNormSpec, TruncatedVector,
};

pub fn run() -> Result<()> {
    let dim = 16;
    let gauge = HullGauge::new(SplitNormSpec::new(2.0, dim)?, 1e-9);
    let general = gauge.clone().with_method(GaugeMethod::InfimalConvolution);
    let points = [
        ("sqrt2 e1", &unit_vector(dim, 1)? * SQRT_2),
        ("e2", unit_vector(dim, 2)?),
        ("e1 + e5", &unit_vector(dim, 1)? + &unit_vector(dim, 5)?),
        (
            "mixed",
            TruncatedVector::from_prefix(dim, &[1.0, 0.05, -0.02, 0.01])?,
        ),
    ];
    println!(
        "{:<10} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "x", "split", "theta", "dual", "general", "lambda"
    );
    for (name, x) in &points {
        let g = gauge.eval(x)?;
        println!(
            "{name:<10} {:>12.9} {:>12.6e} {:>12.9} {:>12.9} {:>8.4}",
            split_norm(x, &gauge.spec),
            theta_norm(x),
            g.value,
            general.value(x)?,
            g.lambda,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
