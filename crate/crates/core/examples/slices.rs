//! Slices `{x ∈ B : f(x) > sup f(B) − α}` of the final norm's ball and the
//! exposure trace of the first coordinate functional at `√2 e₁`.

use std::f64::consts::SQRT_2;

use renorm_lab::probes::{
    local_sphere_candidates, slice_contains, slice_diameter_lb, strongly_exposed_probe, SliceSpec,
};
use renorm_lab::{unit_vector, FinalNormSpec, Functional, ModelConfig, NormHandle, Result};

pub fn run() -> Result<()> {
    let dim = 16;
    let handle = NormHandle::final_norm(FinalNormSpec::new(&ModelConfig::new(dim, 2.0)?)?);
    let g1 = Functional::coordinate(dim, 1)?;
    let x0 = &unit_vector(dim, 1)? * SQRT_2;
    let nearby = local_sphere_candidates(&handle, &x0, &[0.3, 0.1, 0.03, 0.01, 0.003], 32, 0)?;
    for alpha in [0.1, 0.01] {
        let s = SliceSpec::new(g1.clone(), alpha, handle.clone())?;
        let d = slice_diameter_lb(&s, dim, &nearby, 0, 0)?;
        println!(
            "alpha {alpha}: x0 inside {}, members {}, diameter >= {:?}",
            slice_contains(&s, &x0)?,
            d.members,
            d.lower_bound
        );
    }
    let trace = strongly_exposed_probe(&handle, &x0, &g1, 5, &[], 0)?;
    for (a, dist) in trace.alphas.iter().zip(&trace.distances) {
        println!("depth {a:.0e}: farthest member at {dist:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
