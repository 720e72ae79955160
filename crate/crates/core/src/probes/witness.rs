use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::final_norm::FinalNormSpec;
use crate::hull::support_d;
use crate::report::{ProbeReport, ReportRow, Table};
use crate::types::{pair, unit_vector, Functional, TruncatedVector};

/// `x₀ = √2e₁`, `xₙ = (e₁+e₃ₙ)/√2`, `xₙ* = g₁+g₃ₙ` and the push-out point `zₙ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTriple {
    pub n: usize,
    pub x0: TruncatedVector,
    pub xn: TruncatedVector,
    pub zn: TruncatedVector,
    pub xn_star: Functional,
}

impl WitnessTriple {
    pub fn midpoint(&self) -> TruncatedVector {
        &(&self.x0 + &self.xn) * 0.5
    }

    /// `1/(3n)²`.
    pub fn push(&self) -> f64 {
        let m = (3 * self.n) as f64;
        1.0 / (m * m)
    }
}

pub fn lur_witness(dim: usize, n: usize) -> Result<WitnessTriple> {
    if n == 0 || 3 * n > dim {
        return Err(LabError::Dimension(format!(
            "witness index {n} needs 3n <= {dim}"
        )));
    }
    let e1 = unit_vector(dim, 1)?;
    let e3n = unit_vector(dim, 3 * n)?;
    let x0 = &e1 * SQRT_2;
    let xn = &(&e1 + &e3n) * (1.0 / SQRT_2);
    let m = (3 * n) as f64;
    let mid = &(&x0 + &xn) * 0.5;
    let zn = mid.axpy(1.0 / (SQRT_2 * m * m), &xn);
    let xn_star = Functional::coordinate(dim, 1)?.plus(&Functional::coordinate(dim, 3 * n)?);
    Ok(WitnessTriple {
        n,
        x0,
        xn,
        zn,
        xn_star,
    })
}

/// Per-index quantities of the LUR-failure trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub n: usize,
    pub xn_norm_sq: f64,
    pub norm_sq_bound: f64,
    pub gauge_mid: f64,
    pub defect: f64,
    pub dist: f64,
    pub pair_xn: f64,
    pub pair_zn: f64,
    pub support: f64,
}

/// Bound on the witness defect: `5/n²`.
pub fn defect_bound(n: usize) -> f64 {
    5.0 / (n * n) as f64
}

pub fn witness_row(model: &FinalNormSpec, n: usize) -> Result<WitnessRow> {
    let w = lur_witness(model.dim(), n)?;
    let x0_norm = model.final_norm(&w.x0)?;
    let xn_norm = model.final_norm(&w.xn)?;
    let sum_norm = model.final_norm(&(&w.x0 + &w.xn))?;
    let gauge_mid = model.gauge.value(&w.midpoint())?;
    Ok(WitnessRow {
        n,
        xn_norm_sq: xn_norm * xn_norm,
        norm_sq_bound: 1.0 + 0.5f64.powi(3 * n as i32 + 1),
        gauge_mid,
        defect: 2.0 * x0_norm * x0_norm + 2.0 * xn_norm * xn_norm - sum_norm * sum_norm,
        dist: model.final_norm(&(&w.xn - &w.x0))?,
        pair_xn: pair(&w.xn_star, &w.xn)?,
        pair_zn: pair(&w.xn_star, &w.zn)?,
        support: support_d(&w.xn_star, &model.split),
    })
}

/// Witness quantities for `n = 1..=n_max` with every bound checked.
pub fn lur_failure_trace(
    model: &FinalNormSpec,
    n_max: usize,
    snapshot: crate::report::ModelSnapshot,
) -> Result<(ProbeReport, Table, Vec<WitnessRow>)> {
    if n_max == 0 || 3 * n_max > model.dim() {
        return Err(LabError::Dimension(format!(
            "n_max {n_max} needs 3·n_max <= {}",
            model.dim()
        )));
    }
    let mut report = ProbeReport::new("lur-witness", snapshot);
    let mut table = Table::new(&[
        "n",
        "xn_norm_sq",
        "norm_sq_bound",
        "gauge_mid",
        "defect",
        "dist",
    ]);
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = witness_row(model, n)?;
        let push = 1.0 / ((3 * n) as f64).powi(2);
        table.push(vec![
            n as f64,
            r.xn_norm_sq,
            r.norm_sq_bound,
            r.gauge_mid,
            r.defect,
            r.dist,
        ]);
        report.push(ReportRow::at_most(
            format!("n={n}: |xn|^2 <= 1+2^(-3n-1)"),
            r.xn_norm_sq,
            r.norm_sq_bound + 1e-9,
        ));
        report.push(ReportRow::within(
            format!("n={n}: xn*(xn) = sqrt2"),
            r.pair_xn,
            SQRT_2,
            1e-12,
        ));
        report.push(ReportRow::within(
            format!("n={n}: xn*(zn) = sqrt2 + 1/(3n)^2"),
            r.pair_zn,
            SQRT_2 + push,
            1e-12,
        ));
        report.push(ReportRow::at_most(
            format!("n={n}: sup xn*(D) <= sqrt2 + 1/(3n)^2"),
            r.support,
            SQRT_2 + push + 1e-12,
        ));
        report.push(ReportRow::at_least(
            format!("n={n}: gauge(mid) >= 1 - |xn|/(sqrt2 (3n)^2)"),
            r.gauge_mid,
            1.0 - r.xn_norm_sq.sqrt() * push / SQRT_2,
        ));
        report.push(ReportRow::above(
            format!("n={n}: defect > 0"),
            r.defect,
            0.0,
        ));
        report.push(ReportRow::at_most(
            format!("n={n}: defect <= 5/n^2"),
            r.defect,
            defect_bound(n),
        ));
        report.push(ReportRow::at_least(
            format!("n={n}: |xn - x0| >= 0.5"),
            r.dist,
            0.5,
        ));
        rows.push(r);
    }
    Ok((report, table, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ModelConfig;

    #[test]
    fn witness_formulas() {
        let w = lur_witness(64, 1).unwrap();
        assert!((w.xn.coord(1) - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((w.xn.coord(3) - 1.0 / SQRT_2).abs() < 1e-15);
        let expected_z = w.midpoint().axpy(1.0 / (9.0 * SQRT_2), &w.xn);
        assert!((&w.zn - &expected_z).euclidean() < 1e-15);
        for n in 1..=21 {
            let w = lur_witness(64, n).unwrap();
            assert!((pair(&w.xn_star, &w.xn).unwrap() - SQRT_2).abs() < 1e-12);
            assert!((pair(&w.xn_star, &w.x0).unwrap() - SQRT_2).abs() < 1e-12);
            assert!((pair(&w.xn_star, &w.zn).unwrap() - SQRT_2 - w.push()).abs() < 1e-12);
        }
        assert!(lur_witness(64, 22).is_err());
    }

    #[test]
    fn trace_passes_on_default_model() {
        let config = ModelConfig::default();
        let model = FinalNormSpec::new(&config).unwrap();
        let (report, table, rows) = lur_failure_trace(&model, 10, (&config).into()).unwrap();
        assert!(
            report.passed(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert_eq!(table.rows.len(), 10);
        assert!(rows[9].defect <= 0.05);
    }
}
