use crate::error::{LabError, Result};
use crate::hull::{support_slice, GaugeResult};
use crate::types::{t_weight, TruncatedVector};

/// `Σ xₙ²/Mₙ(μ)` with `Mₙ(μ) = μ + (1−μ)wₙ²`.
fn dual_objective(x: &[f64], mu: f64) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, c)| {
            let w = t_weight(i + 1);
            c * c / (mu + (1.0 - mu) * w * w)
        })
        .sum()
}

/// Derivative of [`dual_objective`] in `μ`.
fn dual_slope(x: &[f64], mu: f64) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, c)| {
            let w2 = t_weight(i + 1).powi(2);
            let m = mu + (1.0 - mu) * w2;
            -c * c * (1.0 - w2) / (m * m)
        })
        .sum()
}

/// Gauge of `D` for the Hilbert model (`p = 2`) via
/// `γ_D(x)² = min_{μ∈[0,1]} Σ xₙ²/Mₙ(μ)`, solved by bisection on its derivative.
pub fn hull_gauge_hilbert_dual(x: &TruncatedVector, p: f64, tol: f64) -> Result<GaugeResult> {
    if p != 2.0 {
        return Err(LabError::Unsupported(format!(
            "the ellipsoid dual path needs p = 2, got {p}"
        )));
    }
    let dim = x.dim();
    if x.is_zero() {
        return Ok(GaugeResult::zero(dim));
    }
    let xs = x.as_slice();

    // Convex in μ; the endpoint slopes decide the boundary cases exactly.
    let mut iterations = 0;
    let mu = if dual_slope(xs, 0.0) >= 0.0 {
        0.0
    } else if dual_slope(xs, 1.0) <= 0.0 {
        1.0
    } else {
        // bisection on the monotone slope resolves μ to adjacent floats, which
        // value comparisons cannot do near the sharp end μ ≈ 0
        let (mut a, mut b) = (0.0f64, 1.0f64);
        while iterations < 2000 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            iterations += 1;
            if dual_slope(xs, m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };

    let value = dual_objective(xs, mu).sqrt();
    let scaled: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let w2 = t_weight(i + 1).powi(2);
            c / (mu + (1.0 - mu) * w2)
        })
        .collect();
    let certificate: Vec<f64> = scaled.iter().map(|s| s / value).collect();
    let u: Vec<f64> = scaled.iter().map(|s| mu * s).collect();
    let v: Vec<f64> = xs.iter().zip(&u).map(|(a, b)| a - b).collect();

    let support = support_slice(&certificate, 2.0);
    let lower = certificate.iter().zip(xs).map(|(f, c)| f * c).sum::<f64>() / support;
    let residual = (value - lower).max(0.0);
    if residual > tol.max(1e-12 * value) {
        return Err(LabError::numerical(
            "ellipsoid dual left a duality gap",
            iterations,
            residual,
        ));
    }
    let certificate: Vec<f64> = certificate.iter().map(|f| f / support).collect();
    Ok(GaugeResult::from_split(
        value,
        u,
        v,
        2.0,
        certificate,
        iterations,
        residual,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{pair, unit_vector};
    use std::f64::consts::SQRT_2;

    #[test]
    fn anchor_is_on_the_sphere() {
        let x0 = &unit_vector(64, 1).unwrap() * SQRT_2;
        let r = hull_gauge_hilbert_dual(&x0, 2.0, 1e-9).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.lambda, 0.0);
        assert!(r.b.is_none());
    }

    #[test]
    fn e2_and_e3_are_pure_split_points() {
        for n in [2, 3] {
            let e = unit_vector(64, n).unwrap();
            let r = hull_gauge_hilbert_dual(&e, 2.0, 1e-9).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            assert_eq!(r.lambda, 1.0);
        }
    }

    #[test]
    fn e1_reduces_to_one_dimension() {
        let r = hull_gauge_hilbert_dual(&unit_vector(8, 1).unwrap(), 2.0, 1e-9).unwrap();
        assert!((r.value - 1.0 / SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn witness_point_is_interior_but_bounded_below() {
        let x = &(&unit_vector(64, 1).unwrap() + &unit_vector(64, 3).unwrap()) * (1.0 / SQRT_2);
        let r = hull_gauge_hilbert_dual(&x, 2.0, 1e-9).unwrap();
        assert!(r.value < 1.0);
        assert!(r.value >= SQRT_2 / (SQRT_2 + 1.0 / 9.0));
        assert!((pair(&r.certificate, &x).unwrap() - r.value).abs() < 1e-9);
    }

    #[test]
    fn rejects_other_exponents() {
        let e = unit_vector(8, 1).unwrap();
        assert!(matches!(
            hull_gauge_hilbert_dual(&e, 3.0, 1e-9),
            Err(LabError::Unsupported(_))
        ));
    }
}
