//! The ℓ₁ renorming `Σ|xₙ| + (Σ xₙ²/n²)^{1/2}`: rotund, yet the functional
//! `(2, 1, 1, …)` has slices of every depth with diameter above one half.

use renorm_lab::probes::{l1_suite, L1Options};
use renorm_lab::{ModelConfig, Result};

pub fn run() -> Result<()> {
    let opts = L1Options {
        n_range: (2, 200),
        deltas: vec![0.1, 0.01],
        samples: 2000,
        pairs: 200,
        ..L1Options::default()
    };
    let report = l1_suite(&opts, (&ModelConfig::default()).into())?;
    for row in &report.rows {
        println!("{:<60} {:>14.6e}  {:?}", row.label, row.value, row.status);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
