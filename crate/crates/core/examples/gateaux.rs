//! One-sided difference quotients `(|x+hy| + |x−hy| − 2|x|)/h` as `h` shrinks.
//!
//! At generic sphere points they fall like `h`. At `x₀/|x₀|` the θ-ellipsoid
//! tip is so sharp that the decay only starts far below `h = 1e-4`.

use renorm_lab::suites::gateaux_scan;
use renorm_lab::{FinalNormSpec, ModelConfig, Result};

pub fn run() -> Result<()> {
    let steps = [1e-2, 1e-3, 1e-4, 1e-6, 1e-8];
    for dim in [16, 64] {
        let config = ModelConfig::new(dim, 2.0)?;
        let model = FinalNormSpec::new(&config)?;
        let (_, table) = gateaux_scan(&model, 3, &steps, 0, (&config).into())?;
        println!("dim {dim}");
        println!("{}", table.columns.join("  "));
        for row in &table.rows {
            let cells: Vec<String> = row[1..].iter().map(|v| format!("{v:.3e}")).collect();
            println!("{:<5}  {}", row[0], cells.join("  "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
