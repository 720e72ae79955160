//! The renormed norm `|x|² = ‖x‖² + Σₙ₌₂ 2⁻ⁿ fₙ(x)²`, where `‖·‖` is the
//! hull gauge and `fₙ = gₙ/|||gₙ|||*`, plus its derivative and dual estimators
//! and the direct-sum lift onto a larger space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::base::{dual_norm_base, lp, SplitNormSpec};
use crate::error::{LabError, Result};
use crate::hull::{support_slice, GaugeResult, HullGauge};
use crate::types::{pair, series_weight, Functional, ModelConfig, TruncatedVector};

/// Tolerance used by the infimal-convolution path when `p ≠ 2`.
pub const GENERAL_PATH_TOL: f64 = 1e-6;

/// Everything needed to evaluate `|·|` on one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalNormSpec {
    pub split: SplitNormSpec,
    pub f_normalizers: Vec<f64>,
    pub gauge: HullGauge,
}

impl FinalNormSpec {
    pub fn new(config: &ModelConfig) -> Result<Self> {
        config.validate()?;
        let split = SplitNormSpec::new(config.p, config.dim)?;
        let f_normalizers = (1..=config.dim)
            .map(|n| dual_norm_base(&Functional::coordinate(config.dim, n)?, &split, 200))
            .collect::<Result<Vec<_>>>()?;
        let tol = if config.p == 2.0 {
            config.gauge_tol
        } else {
            config.gauge_tol.max(GENERAL_PATH_TOL)
        };
        Ok(Self {
            split,
            f_normalizers,
            gauge: HullGauge::new(split, tol),
        })
    }

    pub fn dim(&self) -> usize {
        self.split.dim
    }

    pub fn tol(&self) -> f64 {
        self.gauge.tol
    }

    /// `fₙ(x) = xₙ/|||gₙ|||*`.
    pub fn f(&self, n: usize, x: &TruncatedVector) -> f64 {
        x.coord(n) / self.f_normalizers[n - 1]
    }

    /// `fₙ` as dual coordinates.
    pub fn f_functional(&self, n: usize) -> Functional {
        let mut c = vec![0.0; self.dim()];
        c[n - 1] = 1.0 / self.f_normalizers[n - 1];
        Functional::from_raw(c)
    }

    fn check_dim(&self, x: &TruncatedVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(LabError::Dimension(format!(
                "vector of dimension {} for a model of dimension {}",
                x.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `H(x) = Σₙ₌₂ 2⁻ⁿ fₙ(x)²`.
    pub fn h_tail(&self, x: &TruncatedVector) -> f64 {
        (2..=x.dim().min(self.dim()))
            .map(|n| series_weight(n) * self.f(n, x).powi(2))
            .sum()
    }

    pub fn eval(&self, x: &TruncatedVector) -> Result<FinalEvaluation> {
        self.check_dim(x)?;
        let gauge = self.gauge.eval(x)?;
        let tail = self.h_tail(x);
        Ok(FinalEvaluation {
            value: (gauge.value * gauge.value + tail).sqrt(),
            tail,
            gauge,
        })
    }

    pub fn final_norm(&self, x: &TruncatedVector) -> Result<f64> {
        self.eval(x).map(|e| e.value)
    }

    /// Gradient of `|·|` assembled from the gauge certificate.
    pub fn gradient(&self, x: &TruncatedVector) -> Result<Functional> {
        let e = self.eval(x)?;
        if e.value == 0.0 {
            return Ok(Functional::zeros(self.dim()));
        }
        let mut g: Vec<f64> = e
            .gauge
            .certificate
            .as_slice()
            .iter()
            .map(|c| c * e.gauge.value)
            .collect();
        for n in 2..=self.dim() {
            g[n - 1] += series_weight(n) * self.f(n, x) / self.f_normalizers[n - 1];
        }
        Ok(Functional::from_raw(
            g.iter().map(|c| c / e.value).collect(),
        ))
    }

    /// Gâteaux derivative at a sphere point by coordinate central differences.
    ///
    /// Estimates are formed for every step in `h_schedule` (largest first) and
    /// the smallest step whose estimate agrees with its predecessor to `1e−3`
    /// is kept.
    pub fn support_functional(
        &self,
        x: &TruncatedVector,
        h_schedule: &[f64],
    ) -> Result<Functional> {
        let norm = self.final_norm(x)?;
        if (norm - 1.0).abs() > 1e-6_f64.max(self.tol()) {
            return Err(LabError::Domain(format!(
                "|x| = {norm}, expected a unit vector"
            )));
        }
        let mut steps = h_schedule.to_vec();
        steps.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if steps.len() < 2 || steps.iter().any(|h| !(*h > 0.0)) {
            return Err(LabError::Config("need at least two positive steps".into()));
        }
        let mut estimates = Vec::with_capacity(steps.len());
        for &h in &steps {
            let mut g = vec![0.0; self.dim()];
            for (n, gn) in g.iter_mut().enumerate() {
                let mut plus = x.clone();
                plus.set_coord(n + 1, x.coord(n + 1) + h);
                let mut minus = x.clone();
                minus.set_coord(n + 1, x.coord(n + 1) - h);
                *gn = (self.final_norm(&plus)? - self.final_norm(&minus)?) / (2.0 * h);
            }
            estimates.push(g);
        }
        let mut chosen = None;
        let mut worst = 0.0f64;
        for i in 1..estimates.len() {
            let diff = estimates[i]
                .iter()
                .zip(&estimates[i - 1])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
            if diff <= 1e-3 {
                chosen = Some(i);
            }
        }
        let i = chosen.ok_or_else(|| {
            LabError::numerical(
                "finite differences unstable across the step schedule",
                steps.len(),
                worst,
            )
        })?;
        let f = Functional::from_raw(estimates.swap_remove(i));
        let euler = pair(&f, x)?;
        if (euler - 1.0).abs() > 1e-4 {
            return Err(LabError::numerical(
                "supporting functional fails f(x) = 1",
                steps.len(),
                (euler - 1.0).abs(),
            ));
        }
        Ok(f)
    }

    /// Certified bracket for `sup{f(x) : |x| ≤ 1}`.
    ///
    /// The lower bound is the best value found by projected ascent over the
    /// sphere from `budget` starts. The upper bound comes from writing
    /// `f = a + Σ cₙ fₙ`, which gives `|f|* ≤ √(h_D(a)² + Σ 2ⁿcₙ²)`.
    pub fn dual_norm_final(&self, f: &Functional, budget: usize) -> Result<DualBounds> {
        if budget == 0 {
            return Err(LabError::Config("budget must be >= 1".into()));
        }
        if f.dim() != self.dim() {
            return Err(LabError::Dimension("functional dimension mismatch".into()));
        }
        if f.as_slice().iter().all(|&c| c == 0.0) {
            return Ok(DualBounds {
                lower: 0.0,
                upper: 0.0,
                maximizer: TruncatedVector::zeros(self.dim()),
                flagged: false,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let fv = f.to_vector();
        let fscale = f.euclidean();
        let mut best: Option<(f64, TruncatedVector)> = None;
        for restart in 0..budget {
            let start = if restart == 0 {
                fv.clone()
            } else {
                let noise: Vec<f64> = (0..self.dim())
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect();
                let noise = TruncatedVector::from_raw(noise);
                let noise = &noise * (fscale / noise.euclidean().max(1e-300));
                fv.axpy(restart as f64 / budget as f64, &noise)
            };
            let (value, x) = self.sphere_ascent(f, start, 300)?;
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, x));
            }
        }
        let (lower, maximizer) = best.expect("budget >= 1");

        let mut upper = support_slice(f.as_slice(), self.split.p);
        // Decomposition suggested by the maximizer.
        let mut a = f.as_slice().to_vec();
        let mut penalty = 0.0;
        for n in 2..=self.dim() {
            let c = lower * series_weight(n) * self.f(n, &maximizer);
            a[n - 1] -= c / self.f_normalizers[n - 1];
            penalty += c * c / series_weight(n);
        }
        let candidate = (support_slice(&a, self.split.p).powi(2) + penalty).sqrt();
        upper = upper.min(candidate);
        Ok(DualBounds {
            lower,
            upper,
            maximizer,
            flagged: upper - lower > 1e-3,
        })
    }

    fn sphere_ascent(
        &self,
        f: &Functional,
        start: TruncatedVector,
        iterations: usize,
    ) -> Result<(f64, TruncatedVector)> {
        let normalize = |x: &TruncatedVector| -> Result<Option<TruncatedVector>> {
            let n = self.final_norm(x)?;
            Ok((n > 0.0).then(|| x * (1.0 / n)))
        };
        let mut x = match normalize(&start)? {
            Some(x) => x,
            None => return Ok((f64::NEG_INFINITY, start)),
        };
        let mut value = pair(f, &x)?;
        let mut step = 1.0;
        for _ in 0..iterations {
            let grad = self.gradient(&x)?;
            let dir = TruncatedVector::from_raw(
                f.as_slice()
                    .iter()
                    .zip(grad.as_slice())
                    .map(|(a, g)| a - value * g)
                    .collect(),
            );
            if dir.euclidean() <= 1e-13 * f.euclidean() {
                break;
            }
            let mut improved = false;
            for _ in 0..50 {
                if let Some(trial) = normalize(&x.axpy(step, &dir))? {
                    let v = pair(f, &trial)?;
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
        Ok((value, x))
    }
}

/// Result of [`FinalNormSpec::eval`].
#[derive(Debug, Clone, PartialEq)]
pub struct FinalEvaluation {
    pub value: f64,
    pub tail: f64,
    pub gauge: GaugeResult,
}

/// Bracket on a dual norm; `flagged` when the bracket is wider than `1e−3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualBounds {
    pub lower: f64,
    pub upper: f64,
    pub maximizer: TruncatedVector,
    pub flagged: bool,
}

/// `|x|² = ‖(I−P)x‖_p² + |Px|²` where `P` keeps coordinates `1..=split_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedModel {
    pub dim: usize,
    pub split_index: usize,
    pub head: FinalNormSpec,
}

impl LiftedModel {
    pub fn new(config: &ModelConfig, split_index: usize) -> Result<Self> {
        if split_index < 1 || split_index >= config.dim {
            return Err(LabError::Dimension(format!(
                "split index {split_index} outside 1..{}",
                config.dim
            )));
        }
        let mut head_config = ModelConfig::new(split_index, config.p)
            .map_err(|e| LabError::Dimension(format!("head block: {e}")))?;
        head_config.gauge_tol = config.gauge_tol;
        head_config.seed = config.seed;
        Ok(Self {
            dim: config.dim,
            split_index,
            head: FinalNormSpec::new(&head_config)?,
        })
    }

    pub fn lift_direct_sum(&self, x: &TruncatedVector) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(LabError::Dimension(format!(
                "vector of dimension {} for a lifted model of dimension {}",
                x.dim(),
                self.dim
            )));
        }
        let head = self.head.final_norm(&x.block(1, self.split_index))?;
        let tail = lp(&x.as_slice()[self.split_index..], self.head.split.p);
        Ok(head.hypot(tail))
    }

    /// Zero-pads a head-block vector to the full dimension.
    pub fn embed(&self, head: &TruncatedVector) -> Result<TruncatedVector> {
        TruncatedVector::from_prefix(self.dim, head.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::unit_vector;
    use std::f64::consts::SQRT_2;

    fn model(dim: usize) -> FinalNormSpec {
        FinalNormSpec::new(&ModelConfig::new(dim, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn h_tail_examples() {
        let m = model(64);
        assert_eq!(m.h_tail(&(&unit_vector(64, 1).unwrap() * SQRT_2)), 0.0);
        assert_eq!(m.h_tail(&unit_vector(64, 2).unwrap()), 0.25);
        assert_eq!(m.h_tail(&unit_vector(64, 3).unwrap()), 0.125);
    }

    #[test]
    fn final_norm_examples() {
        let m = model(64);
        let x0 = &unit_vector(64, 1).unwrap() * SQRT_2;
        assert!((m.final_norm(&x0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(m.final_norm(&TruncatedVector::zeros(64)).unwrap(), 0.0);
        let e3 = unit_vector(64, 3).unwrap();
        assert!((m.final_norm(&e3).unwrap() - 1.125f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalizers_are_one_in_the_model() {
        for p in [2.0, 4.0] {
            let m = FinalNormSpec::new(&ModelConfig::new(16, p).unwrap()).unwrap();
            assert!(m.f_normalizers.iter().all(|c| (c - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn supporting_functional_at_anchor() {
        let m = model(16);
        let x0 = &unit_vector(16, 1).unwrap() * SQRT_2;
        let f = m
            .support_functional(&x0, &[1e-2, 1e-3, 1e-4, 1e-5])
            .unwrap();
        assert!((f.coord(1) - 1.0 / SQRT_2).abs() < 1e-4);
        assert!(f.as_slice()[1..].iter().all(|c| c.abs() < 1e-4));
    }

    #[test]
    fn supporting_functional_at_e2_ignores_e1() {
        let m = model(16);
        let e2 = unit_vector(16, 2).unwrap();
        let x = &e2 * (1.0 / m.final_norm(&e2).unwrap());
        let f = m.support_functional(&x, &[1e-2, 1e-3, 1e-4, 1e-5]).unwrap();
        assert!(pair(&f, &unit_vector(16, 1).unwrap()).unwrap().abs() < 1e-4);
        assert!((pair(&f, &x).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn dual_of_g1_is_attained_at_the_anchor() {
        let m = model(16);
        let b = m
            .dual_norm_final(&Functional::coordinate(16, 1).unwrap(), 3)
            .unwrap();
        assert!(!b.flagged);
        assert!((b.lower - SQRT_2).abs() < 1e-9);
        assert!((b.upper - SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn dual_of_zero() {
        let m = model(8);
        let b = m.dual_norm_final(&Functional::zeros(8), 1).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn lift_blocks() {
        let config = ModelConfig::new(16, 2.0).unwrap();
        let lifted = LiftedModel::new(&config, 8).unwrap();
        let head = TruncatedVector::new(vec![0.3, -0.1, 0.2, 0.0, 0.05, 0.0, 0.0, 0.4]).unwrap();
        let x = lifted.embed(&head).unwrap();
        assert_eq!(
            lifted.lift_direct_sum(&x).unwrap(),
            lifted.head.final_norm(&head).unwrap()
        );
        let mut tail = TruncatedVector::zeros(16);
        tail.set_coord(10, 3.0);
        tail.set_coord(12, 4.0);
        assert!((lifted.lift_direct_sum(&tail).unwrap() - 5.0).abs() < 1e-15);
        assert!(LiftedModel::new(&config, 16).is_err());
        assert!(LiftedModel::new(&config, 0).is_err());
    }
}
