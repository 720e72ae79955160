use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::base::{troyanski_dual_bounds, troyanski_l1_norm};
use crate::error::{LabError, Result};
use crate::handle::NormHandle;
use crate::report::{ModelSnapshot, ProbeReport, ReportRow};
use crate::types::{pair, unit_vector, Functional, TruncatedVector};

use super::rotundity_scan;
use super::slices::{slice_contains, slice_diameter_lb, SliceSpec, SupBound};

/// Parameters of the ℓ₁ renorming suite.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Options {
    /// Inclusive index range for the points `(n/(n+1))eₙ`; the truncation
    /// dimension is the upper end.
    pub n_range: (usize, usize),
    pub deltas: Vec<f64>,
    pub samples: usize,
    /// Sphere pairs for the rotundity scan, drawn in dimension `min(64, n_max)`.
    pub pairs: usize,
    pub seed: u64,
}

impl Default for L1Options {
    fn default() -> Self {
        Self {
            n_range: (2, 1000),
            deltas: vec![0.1, 0.01, 0.001],
            samples: 10_000,
            pairs: 1000,
            seed: 0,
        }
    }
}

/// `x* = (2, 1, 1, …)`.
pub fn troyanski_functional(dim: usize) -> Functional {
    let mut c = vec![1.0; dim];
    c[0] = 2.0;
    Functional::from_raw(c)
}

/// `(n/(n+1))eₙ`.
pub fn troyanski_sphere_point(dim: usize, n: usize) -> Result<TruncatedVector> {
    let t = n as f64 / (n as f64 + 1.0);
    Ok(&unit_vector(dim, n)? * t)
}

/// Mixed test vectors: dense Gaussian, sparse, and first-coordinate heavy.
fn dual_test_vectors(dim: usize, samples: usize, seed: u64) -> Vec<TruncatedVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| {
            let mut y = vec![0.0; dim];
            match i % 3 {
                0 => y
                    .iter_mut()
                    .for_each(|c| *c = StandardNormal.sample(&mut rng)),
                1 => {
                    for _ in 0..rng.random_range(1..=4) {
                        y[rng.random_range(0..dim)] = StandardNormal.sample(&mut rng);
                    }
                }
                _ => {
                    y[0] = 10.0 * Distribution::<f64>::sample(&StandardNormal, &mut rng).signum();
                    for _ in 0..rng.random_range(0..=3) {
                        y[rng.random_range(1..dim)] =
                            1e-3 * Distribution::<f64>::sample(&StandardNormal, &mut rng);
                    }
                }
            }
            TruncatedVector::from_raw(y)
        })
        .collect()
}

/// The ℓ₁ renorming end to end: `x*` has dual norm 1 and attains it at
/// `e₁/2`, the sphere points `(n/(n+1))eₙ` enter every slice of `x*` while
/// staying more than `1/2` away from `e₁/2`, and the norm is rotund.
pub fn l1_suite(opts: &L1Options, snapshot: ModelSnapshot) -> Result<ProbeReport> {
    let (n_lo, dim) = opts.n_range;
    if n_lo < 2 || dim < n_lo {
        return Err(LabError::Config(format!(
            "n range {n_lo}:{dim} must satisfy 2 <= lo <= hi"
        )));
    }
    if opts.samples == 0 {
        return Err(LabError::Config("samples must be >= 1".into()));
    }
    let mut report = ProbeReport::new("l1", snapshot);
    let star = troyanski_functional(dim);
    let x = &unit_vector(dim, 1)? * 0.5;

    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for y in dual_test_vectors(dim, opts.samples, opts.seed) {
        let norm = troyanski_l1_norm(&y);
        let gap = pair(&star, &y)?.abs() - norm;
        worst = worst.max(gap / norm);
        if gap > 1e-12 * norm {
            violations += 1;
        }
    }
    report.push(ReportRow::at_most(
        format!(
            "(a) |x*(y)| <= |y| violations over {} samples",
            opts.samples
        ),
        violations as f64,
        0.0,
    ));
    report.push(ReportRow::at_most(
        "(a) max (|x*(y)| - |y|)/|y|",
        worst,
        1e-12,
    ));
    let (lower, upper) = troyanski_dual_bounds(&star);
    report.push(ReportRow::within(
        "(a) dual bracket lower end",
        lower,
        1.0,
        1e-12,
    ));
    report.push(ReportRow::within(
        "(a) dual bracket upper end",
        upper,
        1.0,
        1e-12,
    ));

    report.push(ReportRow::within(
        "(b) x*(e1/2) = 1",
        pair(&star, &x)?,
        1.0,
        1e-15,
    ));
    report.push(ReportRow::within(
        "(b) |e1/2| = 1",
        troyanski_l1_norm(&x),
        1.0,
        1e-15,
    ));

    let mut max_dev = 0.0f64;
    let mut min_dist = f64::INFINITY;
    let mut points = Vec::with_capacity(dim - n_lo + 1);
    for n in n_lo..=dim {
        let y = troyanski_sphere_point(dim, n)?;
        max_dev = max_dev.max((troyanski_l1_norm(&y) - 1.0).abs());
        min_dist = min_dist.min(troyanski_l1_norm(&(&x - &y)));
        points.push((n, y));
    }
    report.push(ReportRow::at_most(
        format!("(c) max ||(n/(n+1))e_n| - 1| over n={n_lo}..{dim}"),
        max_dev,
        1e-12,
    ));

    let handle = NormHandle::TroyanskiL1;
    for &delta in &opts.deltas {
        let s = SliceSpec::with_sup(star.clone(), delta, handle.clone(), SupBound::exact(1.0))?;
        let mut mismatches = 0usize;
        let mut first_member = None;
        for (n, y) in &points {
            let t = *n as f64 / (*n as f64 + 1.0);
            let inside = slice_contains(&s, y)?;
            if inside != (t > 1.0 - delta) {
                mismatches += 1;
            }
            if inside && first_member.is_none() {
                first_member = Some(y.clone());
            }
        }
        report.push(ReportRow::holds(
            format!("(d) delta={delta}: e1/2 in slice"),
            slice_contains(&s, &x)?,
        ));
        report.push(ReportRow::at_most(
            format!("(d) delta={delta}: membership mismatches"),
            mismatches as f64,
            0.0,
        ));
        // no point of the truncated range is deep enough when n_max < 1/delta
        let diameter = match first_member {
            Some(y) => slice_diameter_lb(&s, dim, &[x.clone(), y], 0, opts.seed)?
                .lower_bound
                .unwrap_or(0.0),
            None => 0.0,
        };
        report.push(ReportRow::above(
            format!("(d) delta={delta}: slice diameter lower bound"),
            diameter,
            0.5,
        ));
    }
    report.push(ReportRow::above(
        format!("(e) min |e1/2 - (n/(n+1))e_n| over n={n_lo}..{dim}"),
        min_dist,
        0.5,
    ));

    if opts.pairs > 0 {
        let scan = rotundity_scan(&handle, dim.min(64), opts.pairs, opts.seed, snapshot)?;
        report.extend(scan);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ModelConfig;

    #[test]
    fn distance_closed_form_at_two() {
        let x = &unit_vector(8, 1).unwrap() * 0.5;
        let y = troyanski_sphere_point(8, 2).unwrap();
        let expected = (0.5 + 2.0 / 3.0) + (0.25f64 + 1.0 / 9.0).sqrt();
        assert!((troyanski_l1_norm(&(&x - &y)) - expected).abs() < 1e-15);
    }

    #[test]
    fn small_suite_passes() {
        let opts = L1Options {
            n_range: (2, 50),
            deltas: vec![0.1],
            samples: 300,
            pairs: 100,
            seed: 3,
        };
        let r = l1_suite(&opts, (&ModelConfig::default()).into()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn short_range_cannot_reach_deep_slices() {
        let opts = L1Options {
            n_range: (2, 50),
            deltas: vec![0.001],
            samples: 10,
            pairs: 0,
            seed: 0,
        };
        let r = l1_suite(&opts, (&ModelConfig::default()).into()).unwrap();
        let row = r
            .row("(d) delta=0.001: slice diameter lower bound")
            .unwrap();
        assert_eq!(row.value, 0.0);
        assert!(!r.passed());
    }

    #[test]
    fn bad_range_rejected() {
        let opts = L1Options {
            n_range: (1, 10),
            ..L1Options::default()
        };
        assert!(l1_suite(&opts, (&ModelConfig::default()).into()).is_err());
    }
}
