use nalgebra::{DMatrix, DVector};

use crate::base::{lp, split_dual_slice, split_gradient, split_norm_slice, SplitNormSpec};
use crate::error::{LabError, Result};
use crate::hull::{support_slice, theta_dual_slice, theta_slice, GaugeResult};
use crate::types::{t_weight, TruncatedVector};

/// Tuning for the infimal-convolution solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Smoothing levels, relative to `‖x‖₂`, run from coarse to fine.
    pub smoothing: Vec<f64>,
    pub max_newton: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            smoothing: vec![1e-2, 1e-4, 1e-8],
            max_newton: 100,
        }
    }
}

/// Gauge of `D` as `inf{|||u||| + ‖x−u‖_θ : u ∈ ℝᴺ}`.
pub fn hull_gauge(x: &TruncatedVector, spec: &SplitNormSpec, tol: f64) -> Result<GaugeResult> {
    hull_gauge_with(x, spec, tol, &SolverOptions::default())
}

pub fn hull_gauge_with(
    x: &TruncatedVector,
    spec: &SplitNormSpec,
    tol: f64,
    options: &SolverOptions,
) -> Result<GaugeResult> {
    if !(tol > 0.0) {
        return Err(LabError::Config("tolerance must be positive".into()));
    }
    let dim = x.dim();
    if x.is_zero() {
        return Ok(GaugeResult::zero(dim));
    }
    let p = spec.p;
    let xs = x.as_slice();
    let inv_w2: Vec<f64> = (1..=dim).map(|n| t_weight(n).powi(-2)).collect();

    // u = 0 is optimal iff ∇‖x‖_θ lies in the dual split ball.
    let theta_x = theta_slice(xs);
    let grad_theta: Vec<f64> = xs
        .iter()
        .zip(&inv_w2)
        .map(|(c, iw)| c * iw / theta_x)
        .collect();
    if split_dual_slice(&grad_theta, p) <= 1.0 {
        return Ok(kink_result(
            theta_x,
            vec![0.0; dim],
            xs.to_vec(),
            grad_theta,
            p,
            tol,
        ));
    }
    // u = x is optimal iff ∇|||x||| lies in the polar of the θ-ball.
    let split_x = split_norm_slice(xs, p);
    let grad_split = split_gradient(xs, p);
    if theta_dual_slice(&grad_split) <= 1.0 {
        return Ok(kink_result(
            split_x,
            xs.to_vec(),
            vec![0.0; dim],
            grad_split,
            p,
            tol,
        ));
    }

    let scale = xs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut u: Vec<f64> = xs.iter().map(|c| 0.5 * c).collect();
    let mut iterations = 0;
    let mut levels: Vec<f64> = options.smoothing.iter().map(|e| e * scale).collect();
    levels.push(0.0);
    for eps in levels {
        iterations += newton(&mut u, xs, &inv_w2, p, eps, options.max_newton);
    }

    let v: Vec<f64> = xs.iter().zip(&u).map(|(a, b)| a - b).collect();
    let upper = split_norm_slice(&u, p) + theta_slice(&v);

    // Both gradients certify; keep whichever bound is tighter.
    let mut best: Option<(f64, Vec<f64>)> = None;
    let nv = theta_slice(&v);
    let nu = split_norm_slice(&u, p);
    let mut candidates = Vec::new();
    if nv > 0.0 {
        candidates.push(
            v.iter()
                .zip(&inv_w2)
                .map(|(c, iw)| c * iw / nv)
                .collect::<Vec<_>>(),
        );
    }
    if nu > 0.0 {
        candidates.push(split_gradient(&u, p));
    }
    for f in candidates {
        let s = support_slice(&f, p);
        if s <= 0.0 {
            continue;
        }
        let f: Vec<f64> = f.iter().map(|c| c / s).collect();
        let lower: f64 = f.iter().zip(xs).map(|(a, b)| a * b).sum();
        if best.as_ref().is_none_or(|(l, _)| lower > *l) {
            best = Some((lower, f));
        }
    }
    let (lower, certificate) = best.ok_or_else(|| {
        LabError::numerical(
            "solver collapsed to a degenerate split",
            iterations,
            f64::INFINITY,
        )
    })?;
    let residual = (upper - lower).max(0.0);
    if residual > tol {
        return Err(LabError::numerical(
            "infimal convolution did not close its duality gap",
            iterations,
            residual,
        ));
    }
    Ok(GaugeResult::from_split(
        upper,
        u,
        v,
        p,
        certificate,
        iterations,
        residual,
        tol,
    ))
}

fn kink_result(
    value: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    cert: Vec<f64>,
    p: f64,
    tol: f64,
) -> GaugeResult {
    let s = support_slice(&cert, p);
    let cert: Vec<f64> = cert.iter().map(|c| c / s).collect();
    let lower = value / s;
    GaugeResult::from_split(value, u, v, p, cert, 0, (value - lower).max(0.0), tol)
}

/// Smoothed objective `√(|||u|||²+ε²) + √(‖x−u‖_θ²+ε²)`.
fn objective(u: &[f64], x: &[f64], p: f64, eps: f64) -> f64 {
    let v: Vec<f64> = x.iter().zip(u).map(|(a, b)| a - b).collect();
    split_norm_slice(u, p).hypot(eps) + theta_slice(&v).hypot(eps)
}

/// Gradient and Hessian of the smoothed objective.
fn derivatives(
    u: &[f64],
    x: &[f64],
    inv_w2: &[f64],
    p: f64,
    eps: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let n = u.len();
    let mut grad = DVector::zeros(n);
    let mut hess = DMatrix::zeros(n, n);

    // Split part: S² = u₁² + M², M = ‖u_tail‖_p.
    let s_eps = split_norm_slice(u, p).hypot(eps);
    if s_eps > 0.0 {
        let tail = &u[1..];
        let m = lp(tail, p);
        // a = ∇(S²)/2
        let mut a = DVector::zeros(n);
        a[0] = u[0];
        let mut half_h = DMatrix::zeros(n, n);
        half_h[(0, 0)] = 1.0;
        if m > 0.0 {
            let s: Vec<f64> = tail
                .iter()
                .map(|&t| t.signum() * (t.abs() / m).powf(p - 1.0))
                .collect();
            for i in 0..tail.len() {
                a[i + 1] = m * s[i];
                let r = (tail[i].abs() / m).max(1e-12);
                half_h[(i + 1, i + 1)] += (p - 1.0) * r.powf(p - 2.0);
                for j in 0..tail.len() {
                    half_h[(i + 1, j + 1)] -= (p - 2.0) * s[i] * s[j];
                }
            }
        } else if p <= 2.0 {
            for i in 1..n {
                half_h[(i, i)] = if p == 2.0 { 1.0 } else { 1e12 };
            }
        }
        let g = &a / s_eps;
        hess += (half_h - &g * g.transpose()) / s_eps;
        grad += g;
    }

    // θ part on v = x − u.
    let v: Vec<f64> = x.iter().zip(u).map(|(a, b)| a - b).collect();
    let t_eps = theta_slice(&v).hypot(eps);
    if t_eps > 0.0 {
        let g = DVector::from_iterator(n, v.iter().zip(inv_w2).map(|(c, iw)| c * iw / t_eps));
        let mut h = DMatrix::from_diagonal(&DVector::from_column_slice(inv_w2));
        h -= &g * g.transpose();
        hess += h / t_eps;
        grad -= g;
    }
    (grad, hess)
}

/// Damped Newton with backtracking; returns the iteration count.
fn newton(u: &mut Vec<f64>, x: &[f64], inv_w2: &[f64], p: f64, eps: f64, max_iter: usize) -> usize {
    let mut f = objective(u, x, p, eps);
    for it in 0..max_iter {
        let (grad, hess) = derivatives(u, x, inv_w2, p, eps);
        let diag_scale = (0..hess.nrows())
            .map(|i| hess[(i, i)].abs())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let mut shift = 0.0;
        let step = loop {
            let mut h = hess.clone();
            for i in 0..h.nrows() {
                h[(i, i)] += shift;
            }
            if let Some(ch) = h.cholesky() {
                break -ch.solve(&grad);
            }
            shift = if shift == 0.0 {
                1e-14 * diag_scale
            } else {
                shift * 10.0
            };
            if shift > diag_scale {
                break -&grad / diag_scale;
            }
        };
        let decrement = -grad.dot(&step);
        if !(decrement > 1e-30 * f.max(1e-300)) {
            return it;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let ft = objective(&trial, x, p, eps);
            if ft <= f - 1e-4 * t * decrement {
                *u = trial;
                let improvement = f - ft;
                f = ft;
                accepted = true;
                if improvement <= 1e-16 * f {
                    return it + 1;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return it + 1;
        }
    }
    max_iter
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::unit_vector;
    use std::f64::consts::SQRT_2;

    fn spec(p: f64, dim: usize) -> SplitNormSpec {
        SplitNormSpec::new(p, dim).unwrap()
    }

    #[test]
    fn anchor_value() {
        let x0 = &unit_vector(64, 1).unwrap() * SQRT_2;
        let r = hull_gauge(&x0, &spec(2.0, 64), 1e-6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        assert_eq!(r.lambda, 0.0);
    }

    #[test]
    fn e1_and_e2() {
        let r = hull_gauge(&unit_vector(2, 1).unwrap(), &spec(2.0, 2), 1e-6).unwrap();
        assert!((r.value - 1.0 / SQRT_2).abs() < 1e-9);
        let r = hull_gauge(&unit_vector(3, 2).unwrap(), &spec(2.0, 3), 1e-6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_has_empty_decomposition() {
        let r = hull_gauge(&TruncatedVector::zeros(5), &spec(2.0, 5), 1e-6).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.b.is_none() && r.c.is_none());
    }

    #[test]
    fn interior_split_closes_gap() {
        let x =
            TruncatedVector::new(vec![1.2, 0.05, -0.02, 0.01, 0.003, 0.0, 0.001, -0.002]).unwrap();
        for p in [1.5, 2.0, 3.0, 4.0] {
            let r = hull_gauge(&x, &spec(p, 8), 1e-6).unwrap();
            assert!(r.residual <= 1e-6, "p={p} residual {}", r.residual);
            assert!(
                r.lambda > 0.0 && r.lambda < 1.0,
                "p={p} lambda {}",
                r.lambda
            );
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        let x = unit_vector(4, 1).unwrap();
        assert!(hull_gauge(&x, &spec(2.0, 4), 0.0).is_err());
    }
}
