//! `αₖ` with `|αₖx₀ + βeₖ| = 1`: the norm stays bounded away from the weak
//! limit `x₀/2`, so `|αx₀|` keeps a margin below one.

use renorm_lab::probes::{kadec_margin, kadec_probe};
use renorm_lab::{FinalNormSpec, ModelConfig, Result};

pub fn run() -> Result<()> {
    let config = ModelConfig::default();
    let model = FinalNormSpec::new(&config)?;
    for beta in [0.1, 0.5] {
        let (report, rows) = kadec_probe(&model, beta, &[8, 16, 32, 63], (&config).into())?;
        println!("beta = {beta}  margin {}", kadec_margin(beta));
        for r in rows {
            println!(
                "  k = {:>2}  alpha = {:.9}  bound {:.6}",
                r.k, r.alpha, r.bound
            );
        }
        println!("  checks pass: {}", report.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
