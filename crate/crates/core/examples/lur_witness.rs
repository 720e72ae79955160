//! The sequence `xₙ = (e₁ + e₃ₙ)/√2` approaching `x₀ = √2 e₁` in the
//! midpoint sense while staying at distance one from it.

use renorm_lab::probes::lur_failure_trace;
use renorm_lab::{FinalNormSpec, ModelConfig, Result};

pub fn run() -> Result<()> {
    let config = ModelConfig::default();
    let model = FinalNormSpec::new(&config)?;
    let (report, table, _) = lur_failure_trace(&model, 20, (&config).into())?;
    print!("{}", table.to_csv());
    println!("all checks pass: {}", report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
