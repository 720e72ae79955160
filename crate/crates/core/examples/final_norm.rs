//! The final norm `|x|² = ‖x‖² + Σ 2⁻ⁿ fₙ(x)²`, its gradient, and the dual
//! norm of the first coordinate functional.

use std::f64::consts::SQRT_2;

use renorm_lab::{unit_vector, FinalNormSpec, Functional, ModelConfig, Result};

pub fn run() -> Result<()> {
    let model = FinalNormSpec::new(&ModelConfig::default())?;
    let dim = model.dim();
    for (name, x) in [
        ("sqrt2 e1", &unit_vector(dim, 1)? * SQRT_2),
        ("e3", unit_vector(dim, 3)?),
        ("e1 + e2", &unit_vector(dim, 1)? + &unit_vector(dim, 2)?),
    ] {
        let e = model.eval(&x)?;
        let grad = model.gradient(&x)?;
        println!(
            "{name:<9} |x| = {:.12}  gauge = {:.12}  tail = {:.6e}  grad_1 = {:.6}",
            e.value,
            e.gauge.value,
            model.h_tail(&x),
            grad.coord(1)
        );
    }
    let b = model.dual_norm_final(&Functional::coordinate(dim, 1)?, 4)?;
    println!(
        "|g1|* in [{:.9}, {:.9}], attained near sqrt2 e1",
        b.lower, b.upper
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
