//! Base norms: the canonical ℓp model norm, the split norm built on top of it,
//! their dual norms, and the ℓ₁ renorming used as a counterexample.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::types::{Functional, TruncatedVector};

/// Exponent and dimension of the split model `|||x|||² = ‖Q₁x‖_p² + x₁²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitNormSpec {
    pub p: f64,
    pub dim: usize,
}

impl SplitNormSpec {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { p, dim })
    }

    /// Conjugate exponent `p* = p/(p−1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(LabError::Config(format!("exponent must be > 1, got {p}")))
    }
}

/// Scaled ℓp norm of a slice; avoids overflow for large `p`.
pub(crate) fn lp(coords: &[f64], p: f64) -> f64 {
    let max = coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        return coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    }
    let sum: f64 = coords.iter().map(|c| (c.abs() / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}

/// `(Σ|xₙ|^p)^{1/p}`.
pub fn base_lur_norm(x: &TruncatedVector, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp(x.as_slice(), p))
}

/// `Q₁x = x − g₁(x)e₁`.
pub fn q1_project(x: &TruncatedVector) -> TruncatedVector {
    let mut out = x.clone();
    if out.dim() > 0 {
        out.set_coord(1, 0.0);
    }
    out
}

/// `sqrt(‖Q₁x‖_p² + x₁²)`.
pub fn split_norm(x: &TruncatedVector, spec: &SplitNormSpec) -> f64 {
    split_norm_slice(x.as_slice(), spec.p)
}

pub(crate) fn split_norm_slice(x: &[f64], p: f64) -> f64 {
    match x.split_first() {
        None => 0.0,
        Some((head, tail)) => head.hypot(lp(tail, p)),
    }
}

/// Closed-form dual of the split norm: `sqrt(f₁² + ‖(f₂,…)‖_{p*}²)`.
pub(crate) fn split_dual_slice(f: &[f64], p: f64) -> f64 {
    let q = p / (p - 1.0);
    match f.split_first() {
        None => 0.0,
        Some((head, tail)) => head.hypot(lp(tail, q)),
    }
}

/// Gradient of the split norm at a nonzero point.
pub(crate) fn split_gradient(x: &[f64], p: f64) -> Vec<f64> {
    let s = split_norm_slice(x, p);
    let mut g = vec![0.0; x.len()];
    if s == 0.0 {
        return g;
    }
    g[0] = x[0] / s;
    let tail = &x[1..];
    let m = lp(tail, p);
    if m > 0.0 {
        // M·∂M/∂xᵢ = sign(xᵢ)|xᵢ|^{p−1} M^{2−p}
        for (gi, &xi) in g[1..].iter_mut().zip(tail) {
            let r = xi.abs() / m;
            *gi = xi.signum() * m * r.powf(p - 1.0) / s;
        }
    }
    g
}

/// Maximizer direction reported by [`dual_norm_base`]'s iterative cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct DualNormEstimate {
    pub value: f64,
    pub ascent_value: f64,
    pub iterations: usize,
}

/// `sup{f(x) : |||x||| ≤ 1}` for the split model, computed in closed form and
/// cross-checked by projected gradient ascent on the unit sphere, started
/// from `f` and from the Hölder extremal point.
pub fn dual_norm_base(f: &Functional, spec: &SplitNormSpec, budget: usize) -> Result<f64> {
    dual_norm_base_checked(f, spec, budget).map(|e| e.value)
}

pub fn dual_norm_base_checked(
    f: &Functional,
    spec: &SplitNormSpec,
    budget: usize,
) -> Result<DualNormEstimate> {
    check_exponent(spec.p)?;
    if budget == 0 {
        return Err(LabError::Config("budget must be >= 1".into()));
    }
    let fc = f.as_slice();
    let value = split_dual_slice(fc, spec.p);
    if value == 0.0 {
        return Ok(DualNormEstimate {
            value,
            ascent_value: 0.0,
            iterations: 0,
        });
    }
    let (from_f, i1) = sphere_ascent(fc, holder_start(fc, 2.0), spec.p, budget);
    let (from_holder, i2) = sphere_ascent(fc, holder_start(fc, spec.p), spec.p, budget);
    let (ascent_value, iterations) = (from_f.max(from_holder), i1 + i2);
    let gap = (value - ascent_value) / value;
    if !(-1e-9..=1e-6).contains(&gap) {
        return Err(LabError::numerical(
            "dual norm cross-check disagrees with the closed form",
            iterations,
            gap.abs(),
        ));
    }
    Ok(DualNormEstimate {
        value,
        ascent_value,
        iterations,
    })
}

fn normalize(x: &mut [f64], p: f64) -> bool {
    let s = split_norm_slice(x, p);
    if s == 0.0 || !s.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|c| *c /= s);
    true
}

/// `(f₁, ‖f_tail‖_q·u)` with `u` the unit-`ℓ_p` vector aligned with the tail
/// of `f`; at `p = 2` this is `f` itself.
fn holder_start(f: &[f64], p: f64) -> Vec<f64> {
    let mut x = f.to_vec();
    let q = p / (p - 1.0);
    let tail = &mut x[1..];
    let max = tail.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max > 0.0 && p != 2.0 {
        let target = lp(&f[1..], q);
        tail.iter_mut()
            .for_each(|c| *c = c.signum() * (c.abs() / max).powf(q - 1.0));
        let scale = target / lp(tail, p);
        tail.iter_mut().for_each(|c| *c *= scale);
    }
    x
}

fn sphere_ascent(f: &[f64], start: Vec<f64>, p: f64, budget: usize) -> (f64, usize) {
    let dot = |x: &[f64]| -> f64 { x.iter().zip(f).map(|(a, b)| a * b).sum() };
    let mut x = start;
    normalize(&mut x, p);
    let mut value = dot(&x);
    let mut step = 1.0;
    let mut iterations = 0;
    while iterations < budget {
        iterations += 1;
        let grad_s = split_gradient(&x, p);
        let dir: Vec<f64> = f
            .iter()
            .zip(&grad_s)
            .map(|(fi, gi)| fi - value * gi)
            .collect();
        let dir_norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if dir_norm <= 1e-14 * value.abs().max(1.0) {
            break;
        }
        let mut improved = false;
        for _ in 0..60 {
            let mut trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            if normalize(&mut trial, p) {
                let v = dot(&trial);
                if v > value {
                    x = trial;
                    value = v;
                    improved = true;
                    step *= 2.0;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (value, iterations)
}

/// `Σ|xₙ| + (Σ xₙ²/n²)^{1/2}` on the truncation.
pub fn troyanski_l1_norm(x: &TruncatedVector) -> f64 {
    let l1: f64 = x.as_slice().iter().map(|c| c.abs()).sum();
    let weighted: f64 = x
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            c * c / (n * n)
        })
        .sum();
    l1 + weighted.sqrt()
}

/// Certified bracket for the dual of the ℓ₁ renorming.
///
/// The upper bound comes from the decomposition `f = a + b` with
/// `a = clamp(f, ±m)`, bounded by `max(‖a‖_∞, ‖(n·bₙ)‖₂)`; the lower bound
/// from unit-vector evaluations `|fₙ|/‖eₙ‖`.
pub fn troyanski_dual_bounds(f: &Functional) -> (f64, f64) {
    let fc = f.as_slice();
    let lower = fc
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            c.abs() / (1.0 + 1.0 / n)
        })
        .fold(0.0, f64::max);
    let bound = |m: f64| -> f64 {
        let excess: f64 = fc
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let b = c.abs() - m;
                if b > 0.0 {
                    let n = (i + 1) as f64;
                    (n * b) * (n * b)
                } else {
                    0.0
                }
            })
            .sum();
        m.max(excess.sqrt())
    };
    let top = fc.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let (mut lo, mut hi) = (0.0, top);
    // max(m, decreasing) is unimodal in m
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if bound(a) <= bound(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let upper = bound(0.5 * (lo + hi)).min(bound(top));
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::unit_vector;
    use std::f64::consts::SQRT_2;

    fn v(prefix: &[f64]) -> TruncatedVector {
        TruncatedVector::from_prefix(8, prefix).unwrap()
    }

    #[test]
    fn lp_examples() {
        assert_eq!(
            base_lur_norm(&unit_vector(8, 1).unwrap(), 4.0).unwrap(),
            1.0
        );
        assert!((base_lur_norm(&v(&[3.0, 4.0]), 2.0).unwrap() - 5.0).abs() < 1e-15);
        let r = base_lur_norm(&v(&[1.0, 1.0]), 4.0).unwrap();
        assert!((r - 2f64.powf(0.25)).abs() < 1e-15);
        assert!(matches!(
            base_lur_norm(&v(&[1.0]), 1.0),
            Err(LabError::Config(_))
        ));
    }

    #[test]
    fn q1_examples() {
        assert!(q1_project(&unit_vector(8, 1).unwrap()).is_zero());
        assert_eq!(
            q1_project(&unit_vector(8, 2).unwrap()),
            unit_vector(8, 2).unwrap()
        );
        assert_eq!(q1_project(&v(&[5.0, 7.0])), v(&[0.0, 7.0]));
    }

    #[test]
    fn split_examples() {
        for p in [1.5, 2.0, 4.0] {
            let spec = SplitNormSpec::new(p, 8).unwrap();
            for n in 1..=8 {
                let e = unit_vector(8, n).unwrap();
                assert!((split_norm(&e, &spec) - 1.0).abs() < 1e-15);
            }
        }
        let s4 = SplitNormSpec::new(4.0, 8).unwrap();
        assert!((split_norm(&v(&[1.0, 1.0]), &s4) - SQRT_2).abs() < 1e-15);
        let s2 = SplitNormSpec::new(2.0, 8).unwrap();
        assert!((split_norm(&v(&[3.0, 4.0]), &s2) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn dual_examples() {
        for p in [1.5, 2.0, 4.0] {
            let spec = SplitNormSpec::new(p, 8).unwrap();
            for n in 1..=8 {
                let g = Functional::coordinate(8, n).unwrap();
                assert!((dual_norm_base(&g, &spec, 100).unwrap() - 1.0).abs() < 1e-9);
            }
        }
        let s2 = SplitNormSpec::new(2.0, 8).unwrap();
        let f = Functional::coordinate(8, 1)
            .unwrap()
            .plus(&Functional::coordinate(8, 3).unwrap());
        assert!((dual_norm_base(&f, &s2, 100).unwrap() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn dual_cross_check_converges_for_p4() {
        let spec = SplitNormSpec::new(4.0, 8).unwrap();
        let f = Functional::new(vec![0.3, -1.2, 0.7, 0.1, 2.0, -0.4, 0.05, 0.9]).unwrap();
        let est = dual_norm_base_checked(&f, &spec, 2000).unwrap();
        assert!((est.value - est.ascent_value) / est.value < 1e-6);
    }

    #[test]
    fn holder_start_attains_the_dual_and_plain_start_needs_iterations() {
        let f = [0.3, -1.2, 0.7, 0.1, 2.0, -0.4, 0.05, 0.9];
        let value = split_dual_slice(&f, 4.0);
        let (starved, _) = sphere_ascent(&f, f.to_vec(), 4.0, 1);
        assert!(value - starved > 1e-3);
        let (held, _) = sphere_ascent(&f, holder_start(&f, 4.0), 4.0, 1);
        assert!((held - value).abs() < 1e-12);
    }

    #[test]
    fn troyanski_examples() {
        assert!((troyanski_l1_norm(&unit_vector(8, 1).unwrap()) - 2.0).abs() < 1e-15);
        assert!((troyanski_l1_norm(&(&unit_vector(8, 1).unwrap() * 0.5)) - 1.0).abs() < 1e-15);
        for n in 2..=8 {
            let t = n as f64 / (n as f64 + 1.0);
            let x = &unit_vector(8, n).unwrap() * t;
            assert!((troyanski_l1_norm(&x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn troyanski_dual_of_supporting_functional() {
        let mut c = vec![1.0; 16];
        c[0] = 2.0;
        let (lo, hi) = troyanski_dual_bounds(&Functional::new(c).unwrap());
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 1.0).abs() < 1e-9);
    }
}
