use serde::{Deserialize, Serialize};

use crate::base::split_norm_slice;
use crate::error::{LabError, Result};
use crate::hull::{theta_norm, HullGauge};
use crate::types::{unit_vector, TruncatedVector};

/// `x = λb + (1−λ)c` with `b` on the split sphere and `c` on the θ-sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub lambda: f64,
    pub b: Option<TruncatedVector>,
    pub c: Option<TruncatedVector>,
    /// `‖λb + (1−λ)c − x‖₂`.
    pub residual: f64,
}

impl Decomposition {
    pub fn reconstruct(&self, dim: usize) -> TruncatedVector {
        let mut out = TruncatedVector::zeros(dim);
        if let Some(b) = &self.b {
            out = out.axpy(self.lambda, b);
        }
        if let Some(c) = &self.c {
            out = out.axpy(1.0 - self.lambda, c);
        }
        out
    }
}

/// Splits a boundary point of `D` into its split-sphere and θ-sphere parts.
pub fn boundary_decompose(
    gauge: &HullGauge,
    x: &TruncatedVector,
    tol: f64,
) -> Result<Decomposition> {
    let r = gauge.eval(x)?;
    if (r.value - 1.0).abs() > tol {
        return Err(LabError::Domain(format!(
            "point is not on the boundary: gauge {}",
            r.value
        )));
    }
    let mut d = Decomposition {
        lambda: r.lambda,
        b: r.b,
        c: r.c,
        residual: 0.0,
    };
    d.residual = (&d.reconstruct(x.dim()) - x).euclidean();
    Ok(d)
}

impl Decomposition {
    /// Largest deviation of the factors from their unit spheres.
    pub fn unit_defect(&self, p: f64) -> f64 {
        let b = self
            .b
            .as_ref()
            .map_or(0.0, |b| (split_norm_slice(b.as_slice(), p) - 1.0).abs());
        let c = self.c.as_ref().map_or(0.0, |c| (theta_norm(c) - 1.0).abs());
        b.max(c)
    }
}

/// Outcome of pushing a boundary point along `±e₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentProbe {
    pub plus_out: bool,
    pub minus_out: bool,
    pub plus_gauge: f64,
    pub minus_gauge: f64,
}

impl SegmentProbe {
    pub fn holds(&self) -> bool {
        self.plus_out || self.minus_out
    }
}

/// Checks that `x ± te₁` leaves `D` on at least one side (gauge `> 1 + margin`).
pub fn horizontal_segment_probe(
    gauge: &HullGauge,
    x: &TruncatedVector,
    t: f64,
    margin: f64,
) -> Result<SegmentProbe> {
    if !(t > 0.0) {
        return Err(LabError::Config("step t must be positive".into()));
    }
    let e1 = unit_vector(x.dim(), 1)?;
    let plus_gauge = gauge.value(&x.axpy(t, &e1))?;
    let minus_gauge = gauge.value(&x.axpy(-t, &e1))?;
    Ok(SegmentProbe {
        plus_out: plus_gauge > 1.0 + margin,
        minus_out: minus_gauge > 1.0 + margin,
        plus_gauge,
        minus_gauge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::SplitNormSpec;
    use std::f64::consts::SQRT_2;

    fn gauge() -> HullGauge {
        HullGauge::new(SplitNormSpec::new(2.0, 16).unwrap(), 1e-9)
    }

    #[test]
    fn anchor_is_pure_theta() {
        let x0 = &unit_vector(16, 1).unwrap() * SQRT_2;
        let d = boundary_decompose(&gauge(), &x0, 1e-9).unwrap();
        assert_eq!(d.lambda, 0.0);
        assert!((d.c.as_ref().unwrap() - &x0).euclidean() < 1e-12);
        assert!(d.residual <= 1e-9);
    }

    #[test]
    fn e2_is_pure_split() {
        let e2 = unit_vector(16, 2).unwrap();
        let d = boundary_decompose(&gauge(), &e2, 1e-9).unwrap();
        assert_eq!(d.lambda, 1.0);
        assert!((d.b.as_ref().unwrap() - &e2).euclidean() < 1e-12);
    }

    #[test]
    fn interior_point_is_rejected() {
        let x = &unit_vector(16, 2).unwrap() * 0.5;
        assert!(matches!(
            boundary_decompose(&gauge(), &x, 1e-9),
            Err(LabError::Domain(_))
        ));
    }

    #[test]
    fn segment_probe_at_anchor() {
        let x0 = &unit_vector(16, 1).unwrap() * SQRT_2;
        let s = horizontal_segment_probe(&gauge(), &x0, 0.01, 1e-6).unwrap();
        assert!(s.plus_out && !s.minus_out);
        let s = horizontal_segment_probe(&gauge(), &-&x0, 0.01, 1e-6).unwrap();
        assert!(!s.plus_out && s.minus_out);
    }
}
