//! Executable checks of the geometric claims: midpoint defects and rotundity,
//! symmetric Gâteaux quotients, the LUR-failure witnesses, slices and
//! strong exposure, sequential Kadec probes, and the ℓ₁ counterexample.

mod kadec;
mod l1;
mod slices;
mod witness;

pub use kadec::{kadec_margin, kadec_probe, KadecRow};
pub use l1::{l1_suite, troyanski_functional, troyanski_sphere_point, L1Options};
pub use slices::{
    local_sphere_candidates, slice_contains, slice_diameter_lb, strongly_exposed_probe,
    DiameterEstimate, ExposureTrace, SliceSpec, SupBound,
};
pub use witness::{
    defect_bound, lur_failure_trace, lur_witness, witness_row, WitnessRow, WitnessTriple,
};

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::handle::{sphere_sample, NormHandle};
use crate::report::{ModelSnapshot, ProbeReport, ReportRow};
use crate::types::TruncatedVector;

/// Minimum Euclidean separation of the pairs drawn by [`rotundity_scan`].
pub const PAIR_SEPARATION: f64 = 0.1;
/// Slack granted to convexity checks for rounding.
pub const CONVEXITY_SLACK: f64 = 1e-9;
const MAX_PAIR_BATCHES: usize = 64;

/// `2N(x)² + 2N(y)² − N(x+y)²`.
pub fn midpoint_defect(
    handle: &NormHandle,
    x: &TruncatedVector,
    y: &TruncatedVector,
) -> Result<f64> {
    let nx = handle.eval(x)?;
    let ny = handle.eval(y)?;
    let nxy = handle.eval(&(x + y))?;
    Ok(2.0 * nx * nx + 2.0 * ny * ny - nxy * nxy)
}

/// Symmetric difference quotient `(N(x+hy) + N(x−hy) − 2N(x))/h` at a sphere point.
///
/// `2N(x)` stands in for the constant `2` so that the rounding left by
/// normalization does not bias small-`h` quotients.
pub fn gateaux_quotient(
    handle: &NormHandle,
    x: &TruncatedVector,
    y: &TruncatedVector,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(LabError::Config("h must be positive".into()));
    }
    let tol = handle.tolerance().max(1e-9);
    let nx = handle.eval(x)?;
    let ny = handle.eval(y)?;
    if (nx - 1.0).abs() > tol || (ny - 1.0).abs() > tol {
        return Err(LabError::Domain(format!(
            "gateaux quotient needs unit vectors, got |x| = {nx}, |y| = {ny}"
        )));
    }
    let plus = handle.eval(&x.axpy(h, y))?;
    let minus = handle.eval(&x.axpy(-h, y))?;
    Ok((plus + minus - 2.0 * nx) / h)
}

/// Unit-sphere pairs with `‖x − y‖₂ ≥ 0.1`, deterministic in `seed`.
///
/// Fails when the sphere is too small in ℓ₂ for enough pairs to be found.
pub fn separated_sphere_pairs(
    handle: &NormHandle,
    dim: usize,
    pairs: usize,
    seed: u64,
) -> Result<Vec<(TruncatedVector, TruncatedVector)>> {
    let mut out = Vec::with_capacity(pairs);
    let mut batch_seed = seed;
    for _ in 0..MAX_PAIR_BATCHES {
        if out.len() == pairs {
            break;
        }
        let need = 2 * (pairs - out.len()) + 2;
        let pool = sphere_sample(handle, dim, need, batch_seed)?;
        batch_seed = batch_seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut it = pool.into_iter();
        while let Some(x) = it.next() {
            if out.len() == pairs {
                break;
            }
            for y in it.by_ref() {
                if (&x - &y).euclidean() >= PAIR_SEPARATION {
                    out.push((x, y));
                    break;
                }
            }
        }
    }
    if out.len() < pairs {
        return Err(LabError::Domain(format!(
            "found {} of {pairs} sphere pairs separated by {PAIR_SEPARATION}",
            out.len()
        )));
    }
    Ok(out)
}

/// Midpoint defects over consecutive sphere samples, with no separation floor.
pub fn sphere_pair_defects(
    handle: &NormHandle,
    dim: usize,
    pairs: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if pairs == 0 {
        return Err(LabError::Config("pairs must be >= 1".into()));
    }
    let xs = sphere_sample(handle, dim, 2 * pairs, seed)?;
    xs.par_chunks(2)
        .map(|c| midpoint_defect(handle, &c[0], &c[1]))
        .collect()
}

/// Midpoint defects over separated sphere pairs, computed in parallel.
pub fn rotundity_defects(
    handle: &NormHandle,
    dim: usize,
    pairs: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if pairs == 0 {
        return Err(LabError::Config("pairs must be >= 1".into()));
    }
    let samples = separated_sphere_pairs(handle, dim, pairs, seed)?;
    samples
        .par_iter()
        .map(|(x, y)| midpoint_defect(handle, x, y))
        .collect()
}

/// Samples separated sphere pairs and checks every defect is strictly positive.
pub fn rotundity_scan(
    handle: &NormHandle,
    dim: usize,
    pairs: usize,
    seed: u64,
    model: ModelSnapshot,
) -> Result<ProbeReport> {
    let defects = rotundity_defects(handle, dim, pairs, seed)?;
    let tag = format!("{:?}", handle.tag());
    let min = defects.iter().copied().fold(f64::INFINITY, f64::min);
    let nonpositive = defects.iter().filter(|&&d| d <= 0.0).count();
    let nonconvex = defects.iter().filter(|&&d| d < -CONVEXITY_SLACK).count();
    let mut report = ProbeReport::new(format!("rotundity/{tag}"), model);
    report.push(ReportRow::above(
        format!("{tag}: min defect over {pairs} pairs"),
        min,
        0.0,
    ));
    report.push(ReportRow::at_most(
        format!("{tag}: nonpositive defects"),
        nonpositive as f64,
        0.0,
    ));
    report.push(ReportRow::at_most(
        format!("{tag}: convexity violations"),
        nonconvex as f64,
        0.0,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::unit_vector;

    #[test]
    fn defect_examples() {
        let e1 = unit_vector(8, 1).unwrap();
        let h = NormHandle::BaseP(2.0);
        assert_eq!(midpoint_defect(&h, &e1, &e1).unwrap(), 0.0);
        assert_eq!(midpoint_defect(&h, &e1, &-&e1).unwrap(), 4.0);
        for h in [
            NormHandle::Theta,
            NormHandle::TroyanskiL1,
            NormHandle::BaseP(3.0),
        ] {
            assert!(midpoint_defect(&h, &e1, &e1).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn euclidean_quotient_closed_form() {
        let h = NormHandle::BaseP(2.0);
        let e1 = unit_vector(8, 1).unwrap();
        let e2 = unit_vector(8, 2).unwrap();
        for step in [1e-1, 1e-2, 1e-3] {
            let q = gateaux_quotient(&h, &e1, &e2, step).unwrap();
            let exact = (2.0 * (1.0 + step * step).sqrt() - 2.0) / step;
            assert!((q - exact).abs() < 1e-12);
        }
        assert_eq!(gateaux_quotient(&h, &e1, &e1, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn quotient_requires_unit_vectors() {
        let h = NormHandle::BaseP(2.0);
        let x = &unit_vector(4, 1).unwrap() * 2.0;
        assert!(gateaux_quotient(&h, &x, &unit_vector(4, 2).unwrap(), 1e-3).is_err());
    }

    #[test]
    fn euclidean_scan_floor() {
        let defects = rotundity_defects(&NormHandle::BaseP(2.0), 8, 200, 1).unwrap();
        assert!(defects.iter().all(|&d| d >= 0.01 * (1.0 - 1e-9)));
    }

    #[test]
    fn theta_sphere_too_small_for_separated_pairs() {
        assert!(matches!(
            separated_sphere_pairs(&NormHandle::Theta, 64, 10, 0),
            Err(LabError::Domain(_))
        ));
    }

    #[test]
    fn pairs_are_separated() {
        let pairs = separated_sphere_pairs(&NormHandle::BaseP(2.0), 3, 50, 9).unwrap();
        assert_eq!(pairs.len(), 50);
        assert!(pairs
            .iter()
            .all(|(x, y)| (x - y).euclidean() >= PAIR_SEPARATION));
    }
}
