//! The norm on `X ⊕ Y`: final norm on the head block, Euclidean on the tail,
//! combined in ℓ₂.

use renorm_lab::handle::gaussian_vectors;
use renorm_lab::{FinalNormSpec, LiftedModel, ModelConfig, Result};

pub fn run() -> Result<()> {
    let lifted = LiftedModel::new(&ModelConfig::new(32, 2.0)?, 16)?;
    let head = FinalNormSpec::new(&ModelConfig::new(16, 2.0)?)?;
    for x in gaussian_vectors(16, 3, 1) {
        let embedded = lifted.embed(&x)?;
        println!(
            "head {:.12}  lifted {:.12}",
            head.final_norm(&x)?,
            lifted.lift_direct_sum(&embedded)?
        );
    }
    for z in gaussian_vectors(32, 2, 2) {
        println!("full vector: {:.12}", lifted.lift_direct_sum(&z)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
