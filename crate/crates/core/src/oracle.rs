//! Brute-force gauge of `D = conv(A ∪ B)` in dimensions 2 and 3.
//!
//! `x ∈ D` iff some `λ ∈ [0,1]` and `a` on the split sphere satisfy
//! `‖T⁻¹(x − λa)‖₂ ≤ 1 − λ`. The split sphere is parametrized by angles,
//! scanned on a grid and refined by pattern search; the gauge then follows by
//! bisection on the scale. None of this shares code with the solvers it
//! validates.

use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::types::{t_weight, TruncatedVector};

/// Target accuracy of [`brute_force_gauge`].
pub const ORACLE_ACCURACY: f64 = 1e-3;

const POLAR_STEPS: usize = 24;
const AZIMUTH_STEPS: usize = 48;

/// Point of the split sphere at polar angle `phi` (from `e₁`) and tail angle `psi`.
fn split_sphere_point(dim: usize, p: f64, phi: f64, psi: f64) -> [f64; 3] {
    let (s, c) = phi.sin_cos();
    if dim == 2 {
        return [c, s, 0.0];
    }
    let (u, v) = (psi.cos(), psi.sin());
    let r = (u.abs().powf(p) + v.abs().powf(p)).powf(1.0 / p);
    [c, s * u / r, s * v / r]
}

fn theta_residual(x: &[f64], a: &[f64; 3], lambda: f64) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            let d = (xi - lambda * a[i]) / t_weight(i + 1);
            d * d
        })
        .sum::<f64>()
        .sqrt()
        - (1.0 - lambda)
}

/// `min_λ ‖T⁻¹(x − λa)‖₂ − (1 − λ)`, a convex function of `λ`.
fn best_lambda(x: &[f64], a: &[f64; 3]) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let l = hi - g * (hi - lo);
        let r = lo + g * (hi - lo);
        if theta_residual(x, a, l) <= theta_residual(x, a, r) {
            hi = r;
        } else {
            lo = l;
        }
    }
    let mid = 0.5 * (lo + hi);
    theta_residual(x, a, mid)
        .min(theta_residual(x, a, 0.0))
        .min(theta_residual(x, a, 1.0))
}

/// Smallest membership margin over the split sphere; `≤ 0` means `x ∈ D`.
fn membership_margin(x: &[f64], p: f64) -> f64 {
    let dim = x.len();
    let azimuths = if dim == 2 { 1 } else { AZIMUTH_STEPS };
    let polar_span = if dim == 2 { 2.0 * PI } else { PI };
    let polar_steps = if dim == 2 {
        2 * POLAR_STEPS
    } else {
        POLAR_STEPS
    };
    let eval = |phi: f64, psi: f64| best_lambda(x, &split_sphere_point(dim, p, phi, psi));
    let mut grid = Vec::with_capacity((polar_steps + 1) * azimuths);
    for i in 0..=polar_steps {
        let phi = polar_span * i as f64 / polar_steps as f64;
        for j in 0..azimuths {
            let psi = 2.0 * PI * j as f64 / azimuths as f64;
            let m = eval(phi, psi);
            if m <= 0.0 {
                return m;
            }
            grid.push((m, phi, psi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = grid[0].0;
    for &(m0, phi0, psi0) in grid.iter().take(4) {
        let (mut m, mut phi, mut psi) = (m0, phi0, psi0);
        let mut step = polar_span / polar_steps as f64;
        while step > 1e-9 {
            let mut moved = false;
            for (dp, ds) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                if dim == 2 && ds != 0.0 {
                    continue;
                }
                let trial = eval(phi + dp, psi + ds);
                if trial < m {
                    (m, phi, psi) = (trial, phi + dp, psi + ds);
                    moved = true;
                    if m <= 0.0 {
                        return m;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.min(m);
    }
    best
}

/// Gauge of `D` at `x` by bisection on membership, for `dim ∈ {2, 3}`.
pub fn brute_force_gauge(x: &TruncatedVector, p: f64) -> Result<f64> {
    let dim = x.dim();
    if !(2..=3).contains(&dim) {
        return Err(LabError::Dimension(format!(
            "brute-force gauge supports dimensions 2 and 3, got {dim}"
        )));
    }
    if !(p > 1.0) {
        return Err(LabError::Config(format!("p must exceed 1, got {p}")));
    }
    if x.is_zero() {
        return Ok(0.0);
    }
    let xs = x.as_slice();
    let tail = (xs[1..].iter().map(|c| c.abs().powf(p)).sum::<f64>()).powf(1.0 / p);
    let split = xs[0].hypot(tail);
    let theta = xs
        .iter()
        .enumerate()
        .map(|(i, c)| (c / t_weight(i + 1)).powi(2))
        .sum::<f64>()
        .sqrt();
    // D contains both balls and sits inside √2·B₂
    let mut hi = split.min(theta);
    let mut lo = x.euclidean() / 2f64.sqrt();
    let scaled = |t: f64| -> Vec<f64> { xs.iter().map(|c| c / t).collect() };
    while hi - lo > 1e-7 * hi {
        let mid = 0.5 * (lo + hi);
        if membership_margin(&scaled(mid), p) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn anchor_and_axes() {
        let x0 = TruncatedVector::new(vec![SQRT_2, 0.0, 0.0]).unwrap();
        assert!((brute_force_gauge(&x0, 2.0).unwrap() - 1.0).abs() < ORACLE_ACCURACY);
        let e2 = TruncatedVector::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert!((brute_force_gauge(&e2, 2.0).unwrap() - 1.0).abs() < ORACLE_ACCURACY);
        let e1 = TruncatedVector::new(vec![1.0, 0.0]).unwrap();
        assert!((brute_force_gauge(&e1, 3.0).unwrap() - 1.0 / SQRT_2).abs() < ORACLE_ACCURACY);
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(brute_force_gauge(&TruncatedVector::zeros(4), 2.0).is_err());
    }
}
