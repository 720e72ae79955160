//! Midpoint defects `2|x|² + 2|y|² − |x+y|²` over random sphere pairs.

use renorm_lab::probes::rotundity_defects;
use renorm_lab::{FinalNormSpec, ModelConfig, NormHandle, Result};

pub fn run() -> Result<()> {
    let model = FinalNormSpec::new(&ModelConfig::default())?;
    for (name, handle) in [
        ("final", NormHandle::final_norm(model)),
        ("l1 renorming", NormHandle::TroyanskiL1),
        ("euclidean", NormHandle::BaseP(2.0)),
    ] {
        let d = rotundity_defects(&handle, 64, 200, 0)?;
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        println!("{name:<13} min defect {min:.4}  mean {mean:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
