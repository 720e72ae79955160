use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::base::{lp, split_dual_slice, troyanski_dual_bounds};
use crate::error::{LabError, Result};
use crate::handle::{sphere_sample, NormHandle};
use crate::hull::{support_d, theta_dual_slice};
use crate::types::{pair, Functional, TruncatedVector};

/// Bracket on `sup f(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBound {
    pub lower: f64,
    pub upper: f64,
}

impl SupBound {
    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v }
    }
}

/// `S(B, f, α) = {x ∈ B : f(x) > sup f(B) − α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSpec {
    pub f: Functional,
    pub alpha: f64,
    pub handle: NormHandle,
    pub sup: SupBound,
}

impl SliceSpec {
    /// Resolves `sup f(B)` from the handle's dual evaluator.
    pub fn new(f: Functional, alpha: f64, handle: NormHandle) -> Result<Self> {
        let sup = sup_ball(&handle, &f)?;
        Self::with_sup(f, alpha, handle, sup)
    }

    /// Uses a known supremum instead of evaluating one.
    pub fn with_sup(f: Functional, alpha: f64, handle: NormHandle, sup: SupBound) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(LabError::Config(format!(
                "slice depth must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            f,
            alpha,
            handle,
            sup,
        })
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_sup(self.f.clone(), alpha, self.handle.clone(), self.sup)
    }
}

/// `sup{f(x) : N(x) ≤ 1}` for each handle.
pub fn sup_ball(handle: &NormHandle, f: &Functional) -> Result<SupBound> {
    let fs = f.as_slice();
    let bound = match handle {
        NormHandle::BaseP(p) => SupBound::exact(lp(fs, p / (p - 1.0))),
        NormHandle::Split(spec) => SupBound::exact(split_dual_slice(fs, spec.p)),
        NormHandle::Theta => SupBound::exact(theta_dual_slice(fs)),
        NormHandle::HullGauge(g) => SupBound::exact(support_d(f, &g.spec)),
        NormHandle::Final(spec) => {
            let b = spec.dual_norm_final(f, 4)?;
            if b.flagged {
                return Err(LabError::numerical(
                    "dual bracket too wide",
                    4,
                    b.upper - b.lower,
                ));
            }
            SupBound {
                lower: b.lower,
                upper: b.upper,
            }
        }
        NormHandle::TroyanskiL1 => {
            let (lower, upper) = troyanski_dual_bounds(f);
            if upper - lower > 1e-3 {
                return Err(LabError::numerical(
                    "dual bracket too wide",
                    0,
                    upper - lower,
                ));
            }
            SupBound { lower, upper }
        }
        NormHandle::Lifted(m) => {
            let k = m.split_index;
            let head = m
                .head
                .dual_norm_final(&Functional::new(fs[..k].to_vec())?, 4)?;
            if head.flagged {
                return Err(LabError::numerical(
                    "dual bracket too wide",
                    4,
                    head.upper - head.lower,
                ));
            }
            let p = m.head.split.p;
            let tail = lp(&fs[k..], p / (p - 1.0));
            SupBound {
                lower: head.lower.hypot(tail),
                upper: head.upper.hypot(tail),
            }
        }
    };
    Ok(bound)
}

/// Certified membership: `f(x) > sup − α` against the upper end of the bracket.
pub fn slice_contains(s: &SliceSpec, x: &TruncatedVector) -> Result<bool> {
    let n = s.handle.eval(x)?;
    let tol = s.handle.tolerance().max(1e-12);
    if n > 1.0 + tol {
        return Err(LabError::Domain(format!(
            "point outside the unit ball (norm {n})"
        )));
    }
    Ok(pair(&s.f, x)? > s.sup.upper - s.alpha)
}

/// Lower bound on a slice diameter from explicit members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    /// `None` when fewer than two members were found.
    pub lower_bound: Option<f64>,
    pub members: usize,
    pub farthest: Option<(TruncatedVector, TruncatedVector)>,
}

impl DiameterEstimate {
    pub fn inconclusive(&self) -> bool {
        self.lower_bound.is_none()
    }
}

/// Max pairwise distance among slice members drawn from `candidates` and
/// `budget` random sphere points.
pub fn slice_diameter_lb(
    s: &SliceSpec,
    dim: usize,
    candidates: &[TruncatedVector],
    budget: usize,
    seed: u64,
) -> Result<DiameterEstimate> {
    if budget < 2 && candidates.len() < 2 {
        return Err(LabError::Config(
            "need at least two candidate points".into(),
        ));
    }
    let mut pool = candidates.to_vec();
    if budget > 0 {
        pool.extend(sphere_sample(&s.handle, dim, budget, seed)?);
    }
    let mut members = Vec::new();
    for x in pool {
        if slice_contains(s, &x)? {
            members.push(x);
        }
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let d = s.handle.eval(&(&members[i] - &members[j]))?;
            if best.is_none_or(|(b, _, _)| d > b) {
                best = Some((d, i, j));
            }
        }
    }
    Ok(DiameterEstimate {
        lower_bound: best.map(|(d, _, _)| d),
        members: members.len(),
        farthest: best.map(|(_, i, j)| (members[i].clone(), members[j].clone())),
    })
}

/// Sphere points `(c + s·r)/N(c + s·r)` scattered around `center`.
pub fn local_sphere_candidates(
    handle: &NormHandle,
    center: &TruncatedVector,
    scales: &[f64],
    per_scale: usize,
    seed: u64,
) -> Result<Vec<TruncatedVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = center.dim();
    let mut out = Vec::with_capacity(scales.len() * per_scale);
    for &s in scales {
        for _ in 0..per_scale {
            let r =
                TruncatedVector::new((0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())?;
            let r = &r * (1.0 / r.euclidean());
            let y = center.axpy(s, &r);
            let n = handle.eval(&y)?;
            if n > 1e-12 {
                out.push(&y * (1.0 / n));
            }
        }
    }
    Ok(out)
}

/// Farthest slice member from `x` at each depth `α_j = 10^{-j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureTrace {
    pub alphas: Vec<f64>,
    pub distances: Vec<f64>,
}

impl ExposureTrace {
    /// Distances shrink by at least a factor ten across the trace, or vanish.
    pub fn distances_vanish(&self) -> bool {
        match (self.distances.first(), self.distances.last()) {
            (Some(&first), Some(&last)) => last <= 1e-6 || last <= 0.1 * first,
            _ => false,
        }
    }
}

/// Builds near-maximizing sequences of `f` over the ball and records how far
/// they stay from `x`.
///
/// Level `j` picks, among `candidates`, local sphere points around `x` and `x`
/// itself, the slice member of depth `10^{-j}` farthest from `x`.
pub fn strongly_exposed_probe(
    handle: &NormHandle,
    x: &TruncatedVector,
    f: &Functional,
    k: usize,
    candidates: &[TruncatedVector],
    seed: u64,
) -> Result<ExposureTrace> {
    if k == 0 {
        return Err(LabError::Config("need at least one level".into()));
    }
    let sup = sup_ball(handle, f)?;
    let attained = pair(f, x)?;
    if sup.upper - attained > 1e-6_f64.max(handle.tolerance()) {
        return Err(LabError::Domain(format!(
            "f does not support the ball at x: f(x) = {attained}, sup = {}",
            sup.upper
        )));
    }
    let mut pool = vec![x.clone()];
    pool.extend_from_slice(candidates);
    pool.extend(local_sphere_candidates(
        handle,
        x,
        &[1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4],
        64,
        seed,
    )?);
    let mut alphas = Vec::with_capacity(k);
    let mut distances = Vec::with_capacity(k);
    for j in 1..=k {
        let alpha = 10f64.powi(-(j as i32));
        let s = SliceSpec::with_sup(f.clone(), alpha, handle.clone(), sup)?;
        let mut far = 0.0f64;
        for (i, y) in pool.iter().enumerate() {
            // pool[0] is x itself, a member of every slice
            if i == 0 || slice_contains(&s, y)? {
                far = far.max(handle.eval(&(y - x))?);
            }
        }
        alphas.push(alpha);
        distances.push(far);
    }
    Ok(ExposureTrace { alphas, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::unit_vector;

    fn troyanski_star(dim: usize) -> Functional {
        let mut c = vec![1.0; dim];
        c[0] = 2.0;
        Functional::new(c).unwrap()
    }

    #[test]
    fn l1_slices() {
        let dim = 64;
        let s = SliceSpec::with_sup(
            troyanski_star(dim),
            0.1,
            NormHandle::TroyanskiL1,
            SupBound::exact(1.0),
        )
        .unwrap();
        let x = &unit_vector(dim, 1).unwrap() * 0.5;
        assert!(slice_contains(&s, &x).unwrap());
        for n in 2..=dim {
            let t = n as f64 / (n as f64 + 1.0);
            let y = &unit_vector(dim, n).unwrap() * t;
            assert_eq!(slice_contains(&s, &y).unwrap(), t > 0.9);
        }
    }

    #[test]
    fn whole_ball_slice() {
        let s = SliceSpec::new(
            Functional::coordinate(8, 1).unwrap(),
            2.0,
            NormHandle::BaseP(2.0),
        )
        .unwrap();
        for x in sphere_sample(&NormHandle::BaseP(2.0), 8, 20, 1).unwrap() {
            assert!(slice_contains(&s, &x).unwrap());
        }
        let d = slice_diameter_lb(&s, 8, &[], 50, 2).unwrap();
        assert!(d.lower_bound.unwrap() > 1.5);
    }

    #[test]
    fn l1_point_not_strongly_exposed() {
        let dim = 200;
        let x = &unit_vector(dim, 1).unwrap() * 0.5;
        let cands: Vec<_> = (2..=dim)
            .map(|n| &unit_vector(dim, n).unwrap() * (n as f64 / (n as f64 + 1.0)))
            .collect();
        let t = strongly_exposed_probe(
            &NormHandle::TroyanskiL1,
            &x,
            &troyanski_star(dim),
            2,
            &cands,
            0,
        )
        .unwrap();
        assert!(t.distances.iter().all(|&d| d > 0.5));
        assert!(!t.distances_vanish());
    }

    #[test]
    fn hilbert_point_strongly_exposed() {
        let e1 = unit_vector(8, 1).unwrap();
        let g1 = Functional::coordinate(8, 1).unwrap();
        let t = strongly_exposed_probe(&NormHandle::BaseP(2.0), &e1, &g1, 4, &[], 0).unwrap();
        assert!(t.distances_vanish(), "{t:?}");
        for (a, d) in t.alphas.iter().zip(&t.distances) {
            // the cap {x₁ > 1−α} has radius √(2α)
            assert!(*d <= (2.0 * a).sqrt() + 1e-12);
        }
    }

    #[test]
    fn constant_sequence_has_zero_distance() {
        let e1 = unit_vector(4, 1).unwrap();
        let g1 = Functional::coordinate(4, 1).unwrap();
        let s = SliceSpec::new(g1, 1e-12, NormHandle::BaseP(2.0)).unwrap();
        let d = slice_diameter_lb(&s, 4, &[e1.clone(), e1.clone()], 0, 0).unwrap();
        assert_eq!(d.lower_bound, Some(0.0));
    }

    #[test]
    fn slice_monotone_in_depth() {
        let s = SliceSpec::new(
            Functional::coordinate(8, 2).unwrap(),
            0.05,
            NormHandle::BaseP(2.0),
        )
        .unwrap();
        for x in sphere_sample(&NormHandle::BaseP(2.0), 8, 200, 3).unwrap() {
            if slice_contains(&s, &x).unwrap() {
                assert!(slice_contains(&s.with_alpha(0.5).unwrap(), &x).unwrap());
            }
        }
    }
}
