use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::final_norm::FinalNormSpec;
use crate::report::{ModelSnapshot, ProbeReport, ReportRow};
use crate::types::{unit_vector, TruncatedVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KadecRow {
    pub k: usize,
    pub alpha: f64,
    pub bound: f64,
}

/// Required gap below 1 for the weak limit: `β/2`.
pub fn kadec_margin(beta: f64) -> f64 {
    0.5 * beta
}

/// Solves `|α√2e₁ + βe_k| = 1` for each `k` by bisection and checks that the
/// coefficient of the weak limit `α√2e₁` stays below `1 − β/2`. Also checks
/// that the witness midpoints' weak limit `x₀/2` has norm `1/2`.
///
/// A sphere sequence keeping tail mass `β` on escaping coordinates has its
/// weak limit strictly inside the ball, which is what the Kadec property
/// requires.
pub fn kadec_probe(
    model: &FinalNormSpec,
    beta: f64,
    ks: &[usize],
    snapshot: ModelSnapshot,
) -> Result<(ProbeReport, Vec<KadecRow>)> {
    if !(0.0..1.0).contains(&beta) {
        return Err(LabError::Config(format!(
            "beta must lie in [0, 1), got {beta}"
        )));
    }
    let dim = model.dim();
    let x0 = &unit_vector(dim, 1)? * SQRT_2;
    let mut report = ProbeReport::new("kadec", snapshot);
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        if k < 2 || k > dim {
            return Err(LabError::Dimension(format!("index {k} outside 2..={dim}")));
        }
        let alpha = if beta == 0.0 {
            1.0 / model.final_norm(&x0)?
        } else {
            solve_alpha(model, &x0, &(&unit_vector(dim, k)? * beta))?
        };
        let bound = 1.0 - kadec_margin(beta);
        report.push(ReportRow::at_most(
            format!("beta={beta}, k={k}: alpha_k"),
            alpha,
            bound,
        ));
        rows.push(KadecRow { k, alpha, bound });
    }
    report.push(ReportRow::within(
        "weak limit: |x0/2| = 1/2",
        model.final_norm(&(&x0 * 0.5))?,
        0.5,
        1e-6,
    ));
    Ok((report, rows))
}

fn solve_alpha(model: &FinalNormSpec, x0: &TruncatedVector, tail: &TruncatedVector) -> Result<f64> {
    let phi = |a: f64| -> Result<f64> { Ok(model.final_norm(&tail.axpy(a, x0))? - 1.0) };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (f_lo, f_hi) = (phi(lo)?, phi(hi)?);
    if f_lo >= 0.0 || f_hi < 0.0 {
        return Err(LabError::numerical(
            "no sign change for the Kadec root on [0, 1]",
            0,
            f_lo.min(-f_hi).abs(),
        ));
    }
    let mut iterations = 0;
    while hi - lo > 1e-14 && iterations < 100 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if phi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ModelConfig;

    fn model() -> (FinalNormSpec, ModelSnapshot) {
        let c = ModelConfig::default();
        (FinalNormSpec::new(&c).unwrap(), (&c).into())
    }

    #[test]
    fn zero_tail_gives_unit_alpha() {
        let (m, s) = model();
        let (_, rows) = kadec_probe(&m, 0.0, &[8], s).unwrap();
        assert_eq!(rows[0].alpha, 1.0);
    }

    #[test]
    fn alpha_below_bound_and_monotone_in_beta() {
        let (m, s) = model();
        let (report, small) = kadec_probe(&m, 0.1, &[8, 16, 32], s).unwrap();
        assert!(report.passed());
        assert!(small.iter().all(|r| r.alpha <= 0.95));
        let (_, large) = kadec_probe(&m, 0.5, &[8, 16, 32], s).unwrap();
        for (a, b) in small.iter().zip(&large) {
            assert!(1.0 - b.alpha > 1.0 - a.alpha);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let (m, s) = model();
        assert!(kadec_probe(&m, 1.0, &[8], s).is_err());
        assert!(kadec_probe(&m, 0.1, &[65], s).is_err());
    }
}
