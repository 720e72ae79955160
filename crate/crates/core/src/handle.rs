//! A uniform handle over every norm in the lab, plus sphere sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::base::{base_lur_norm, split_norm, troyanski_l1_norm, SplitNormSpec};
use crate::error::{LabError, Result};
use crate::final_norm::{FinalNormSpec, LiftedModel};
use crate::hull::{theta_norm, HullGauge};
use crate::types::TruncatedVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormTag {
    BaseP,
    Split,
    Theta,
    HullGauge,
    Final,
    TroyanskiL1,
    Lifted,
}

/// A norm together with whatever model data it needs to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum NormHandle {
    BaseP(f64),
    Split(SplitNormSpec),
    Theta,
    HullGauge(HullGauge),
    Final(Box<FinalNormSpec>),
    TroyanskiL1,
    Lifted(Box<LiftedModel>),
}

impl NormHandle {
    pub fn final_norm(spec: FinalNormSpec) -> Self {
        NormHandle::Final(Box::new(spec))
    }

    pub fn tag(&self) -> NormTag {
        match self {
            NormHandle::BaseP(_) => NormTag::BaseP,
            NormHandle::Split(_) => NormTag::Split,
            NormHandle::Theta => NormTag::Theta,
            NormHandle::HullGauge(_) => NormTag::HullGauge,
            NormHandle::Final(_) => NormTag::Final,
            NormHandle::TroyanskiL1 => NormTag::TroyanskiL1,
            NormHandle::Lifted(_) => NormTag::Lifted,
        }
    }

    pub fn eval(&self, x: &TruncatedVector) -> Result<f64> {
        match self {
            NormHandle::BaseP(p) => base_lur_norm(x, *p),
            NormHandle::Split(spec) => Ok(split_norm(x, spec)),
            NormHandle::Theta => Ok(theta_norm(x)),
            NormHandle::HullGauge(g) => g.value(x),
            NormHandle::Final(spec) => spec.final_norm(x),
            NormHandle::TroyanskiL1 => Ok(troyanski_l1_norm(x)),
            NormHandle::Lifted(m) => m.lift_direct_sum(x),
        }
    }

    /// Accuracy of a single evaluation.
    pub fn tolerance(&self) -> f64 {
        match self {
            NormHandle::HullGauge(g) => g.tol,
            NormHandle::Final(spec) => spec.tol(),
            NormHandle::Lifted(m) => m.head.tol(),
            _ => 1e-12,
        }
    }
}

/// `count` points on the unit sphere of `handle`, from normalized Gaussian draws.
pub fn sphere_sample(
    handle: &NormHandle,
    dim: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<TruncatedVector>> {
    if count == 0 {
        return Err(LabError::Config("count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let raw: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let x = TruncatedVector::from_raw(raw);
        let n = handle.eval(&x)?;
        if n < 1e-12 {
            continue;
        }
        out.push(&x * (1.0 / n));
    }
    Ok(out)
}

/// Standard Gaussian vectors (not normalized), deterministic in `seed`.
pub fn gaussian_vectors(dim: usize, count: usize, seed: u64) -> Vec<TruncatedVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            TruncatedVector::from_raw((0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
        })
        .collect()
}
