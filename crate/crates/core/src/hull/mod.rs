//! The compact diagonal operator `T`, the transported Hilbert norm `‖·‖_θ`,
//! and the Minkowski gauge of `D = conv(B_split ∪ T·B_ℓ₂)`.
//!
//! Two solvers compute the gauge. [`hull_gauge`] minimizes the infimal
//! convolution `inf{|||u||| + ‖x−u‖_θ}` for any exponent; for `p = 2`,
//! [`hull_gauge_hilbert_dual`] maximizes `f(x)` over the polar
//! `{‖f‖₂ ≤ 1} ∩ {‖T f‖₂ ≤ 1}` through a one-parameter family of ellipsoids.
//! Both return a dual certificate, so every value carries its own gap.

mod boundary;
mod dual;
mod general;

pub use boundary::{boundary_decompose, horizontal_segment_probe, Decomposition, SegmentProbe};
pub use dual::hull_gauge_hilbert_dual;
pub use general::{hull_gauge, hull_gauge_with, SolverOptions};

use serde::{Deserialize, Serialize};

use crate::base::{split_dual_slice, split_norm_slice, SplitNormSpec};
use crate::error::{LabError, Result};
use crate::types::{t_weight, Functional, TruncatedVector};

/// Diagonal of `T`: `(√2, 1/4, 1/9, …, 1/dim²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TOperatorSpec {
    pub weights: Vec<f64>,
}

impl TOperatorSpec {
    pub fn new(dim: usize) -> Self {
        Self {
            weights: (1..=dim).map(t_weight).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &w) in self.weights.iter().enumerate() {
            if w != t_weight(i + 1) {
                return Err(LabError::Config(format!("T weight {} is {w}", i + 1)));
            }
        }
        Ok(())
    }
}

/// `Tα = √2α₁e₁ + Σ αₙeₙ/n²`.
pub fn t_apply(alpha: &TruncatedVector) -> TruncatedVector {
    TruncatedVector::from_raw(
        alpha
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, a)| a * t_weight(i + 1))
            .collect(),
    )
}

/// `‖T⁻¹y‖₂`.
pub fn theta_norm(y: &TruncatedVector) -> f64 {
    theta_slice(y.as_slice())
}

pub(crate) fn theta_slice(y: &[f64]) -> f64 {
    y.iter()
        .enumerate()
        .map(|(i, c)| {
            let s = c / t_weight(i + 1);
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖T*f‖₂`, the support function of the θ-ball.
pub(crate) fn theta_dual_slice(f: &[f64]) -> f64 {
    f.iter()
        .enumerate()
        .map(|(i, c)| {
            let s = c * t_weight(i + 1);
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// Support function of `D`: `max(|||f|||*, ‖T*f‖₂)`.
pub fn support_d(f: &Functional, spec: &SplitNormSpec) -> f64 {
    support_slice(f.as_slice(), spec.p)
}

pub(crate) fn support_slice(f: &[f64], p: f64) -> f64 {
    split_dual_slice(f, p).max(theta_dual_slice(f))
}

/// Which solver a [`HullGauge`] routes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeMethod {
    /// Ellipsoid dual when `p = 2`, infimal convolution otherwise.
    Auto,
    InfimalConvolution,
    HilbertDual,
}

/// Gauge evaluator bound to a split model, tolerance and solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullGauge {
    pub spec: SplitNormSpec,
    pub tol: f64,
    pub method: GaugeMethod,
}

impl HullGauge {
    pub fn new(spec: SplitNormSpec, tol: f64) -> Self {
        Self {
            spec,
            tol,
            method: GaugeMethod::Auto,
        }
    }

    pub fn with_method(mut self, method: GaugeMethod) -> Self {
        self.method = method;
        self
    }

    pub fn eval(&self, x: &TruncatedVector) -> Result<GaugeResult> {
        match self.method {
            GaugeMethod::HilbertDual => hull_gauge_hilbert_dual(x, self.spec.p, self.tol),
            GaugeMethod::InfimalConvolution => hull_gauge(x, &self.spec, self.tol),
            GaugeMethod::Auto if self.spec.p == 2.0 => {
                hull_gauge_hilbert_dual(x, self.spec.p, self.tol)
            }
            GaugeMethod::Auto => hull_gauge(x, &self.spec, self.tol),
        }
    }

    pub fn value(&self, x: &TruncatedVector) -> Result<f64> {
        self.eval(x).map(|r| r.value)
    }
}

/// Gauge value together with the optimal split and its dual certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeResult {
    pub value: f64,
    pub u: TruncatedVector,
    pub v: TruncatedVector,
    pub lambda: f64,
    pub b: Option<TruncatedVector>,
    pub c: Option<TruncatedVector>,
    pub certificate: Functional,
    pub iterations: usize,
    pub residual: f64,
}

impl GaugeResult {
    pub(crate) fn zero(dim: usize) -> Self {
        Self {
            value: 0.0,
            u: TruncatedVector::zeros(dim),
            v: TruncatedVector::zeros(dim),
            lambda: 0.0,
            b: None,
            c: None,
            certificate: Functional::zeros(dim),
            iterations: 0,
            residual: 0.0,
        }
    }

    /// Fills `λ, b, c` from the split `x = u + v`, snapping at `tol`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_split(
        value: f64,
        u: Vec<f64>,
        v: Vec<f64>,
        p: f64,
        certificate: Vec<f64>,
        iterations: usize,
        residual: f64,
        tol: f64,
    ) -> Self {
        let nu = split_norm_slice(&u, p);
        let nv = theta_slice(&v);
        let b_live = nu > tol;
        let c_live = nv > tol;
        let lambda = match (b_live, c_live) {
            (true, true) => nu / (nu + nv),
            (true, false) => 1.0,
            _ => 0.0,
        };
        let b = b_live.then(|| TruncatedVector::from_raw(u.iter().map(|c| c / nu).collect()));
        let c = c_live.then(|| TruncatedVector::from_raw(v.iter().map(|c| c / nv).collect()));
        Self {
            value,
            u: TruncatedVector::from_raw(u),
            v: TruncatedVector::from_raw(v),
            lambda,
            b,
            c,
            certificate: Functional::from_raw(certificate),
            iterations,
            residual,
        }
    }
}
