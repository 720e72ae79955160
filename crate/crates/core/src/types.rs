//! Shared data model: truncated vectors, dual functionals and model configuration.
//!
//! Coordinates are stored 0-based but every public index is 1-based, so
//! `unit_vector(dim, 1)` is `e₁`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

fn check_finite(coords: &[f64], what: &str) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        Some(i) => Err(LabError::Domain(format!(
            "{what} coordinate {} is not finite ({})",
            i + 1,
            coords[i]
        ))),
        None => Ok(()),
    }
}

/// Coordinates of `x = Σ xₙ eₙ` in an N-dimensional truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedVector(Vec<f64>);

impl TruncatedVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords, "vector")?;
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Builds a vector from its leading coordinates, zero-padded to `dim`.
    pub fn from_prefix(dim: usize, prefix: &[f64]) -> Result<Self> {
        if prefix.len() > dim {
            return Err(LabError::Dimension(format!(
                "{} coordinates given for dimension {dim}",
                prefix.len()
            )));
        }
        let mut coords = vec![0.0; dim];
        coords[..prefix.len()].copy_from_slice(prefix);
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coefficient of `eₙ` (1-based).
    pub fn coord(&self, n: usize) -> f64 {
        self.0[n - 1]
    }

    pub fn set_coord(&mut self, n: usize, value: f64) {
        self.0[n - 1] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn euclidean(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TruncatedVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// `self + t·other`.
    pub fn axpy(&self, t: f64, other: &TruncatedVector) -> TruncatedVector {
        TruncatedVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    /// Restriction to the coordinates `first..=last` (1-based).
    pub fn block(&self, first: usize, last: usize) -> TruncatedVector {
        TruncatedVector(self.0[first - 1..last].to_vec())
    }

    /// Concatenation `(self, tail)`.
    pub fn concat(&self, tail: &TruncatedVector) -> TruncatedVector {
        let mut coords = self.0.clone();
        coords.extend_from_slice(&tail.0);
        TruncatedVector(coords)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

impl Add for &TruncatedVector {
    type Output = TruncatedVector;
    fn add(self, rhs: &TruncatedVector) -> TruncatedVector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &TruncatedVector {
    type Output = TruncatedVector;
    fn sub(self, rhs: &TruncatedVector) -> TruncatedVector {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &TruncatedVector {
    type Output = TruncatedVector;
    fn mul(self, rhs: f64) -> TruncatedVector {
        TruncatedVector(self.0.iter().map(|c| c * rhs).collect())
    }
}

impl Neg for &TruncatedVector {
    type Output = TruncatedVector;
    fn neg(self) -> TruncatedVector {
        self * -1.0
    }
}

/// Dual coordinates; `f(x) = Σ fₙ xₙ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(Vec<f64>);

impl Functional {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords, "functional")?;
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Coordinate functional `gₙ` (1-based).
    pub fn coordinate(dim: usize, n: usize) -> Result<Self> {
        Ok(Self(unit_vector(dim, n)?.into_vec()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, n: usize) -> f64 {
        self.0[n - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn euclidean(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Functional {
        Functional(self.0.iter().map(|c| c * t).collect())
    }

    pub fn plus(&self, other: &Functional) -> Functional {
        Functional(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Riesz identification with a vector (same coordinates).
    pub fn to_vector(&self) -> TruncatedVector {
        TruncatedVector(self.0.clone())
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

impl From<&TruncatedVector> for Functional {
    fn from(x: &TruncatedVector) -> Self {
        Functional(x.0.clone())
    }
}

/// `Σ fₙ xₙ`.
pub fn pair(f: &Functional, x: &TruncatedVector) -> Result<f64> {
    if f.dim() != x.dim() {
        return Err(LabError::Dimension(format!(
            "functional of dimension {} paired with vector of dimension {}",
            f.dim(),
            x.dim()
        )));
    }
    Ok(f.0.iter().zip(&x.0).map(|(a, b)| a * b).sum())
}

/// `eₙ` in dimension `dim` (1-based `n`).
pub fn unit_vector(dim: usize, n: usize) -> Result<TruncatedVector> {
    if n == 0 || n > dim {
        return Err(LabError::Dimension(format!("index {n} outside 1..={dim}")));
    }
    let mut x = TruncatedVector::zeros(dim);
    x.0[n - 1] = 1.0;
    Ok(x)
}

/// Diagonal of the compact operator: `w₁ = √2`, `wₙ = 1/n²`.
pub fn t_weight(n: usize) -> f64 {
    if n == 1 {
        std::f64::consts::SQRT_2
    } else {
        let n = n as f64;
        1.0 / (n * n)
    }
}

/// Weight `2⁻ⁿ` of the smoothing series (`n ≥ 2`; zero at `n = 1`).
pub fn series_weight(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        0.5f64.powi(n as i32)
    }
}

pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_GAUGE_TOL: f64 = 1e-9;
pub const DEFAULT_FD_STEPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Truncation dimension, base exponent, weights, tolerances and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub dim: usize,
    pub p: f64,
    pub t_weights: Vec<f64>,
    pub series_weights: Vec<f64>,
    pub gauge_tol: f64,
    pub fd_steps: Vec<f64>,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        let config = Self {
            dim,
            p,
            t_weights: (1..=dim).map(t_weight).collect(),
            series_weights: (1..=dim).map(series_weight).collect(),
            gauge_tol: DEFAULT_GAUGE_TOL,
            fd_steps: DEFAULT_FD_STEPS.to_vec(),
            seed: 0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_gauge_tol(mut self, tol: f64) -> Result<Self> {
        self.gauge_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 4 {
            return Err(LabError::Config(format!(
                "dim must be >= 4, got {}",
                self.dim
            )));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(LabError::Config(format!("p must be > 1, got {}", self.p)));
        }
        if !(self.gauge_tol > 0.0) {
            return Err(LabError::Config("gauge_tol must be positive".into()));
        }
        if self.t_weights.len() != self.dim
            || self
                .t_weights
                .iter()
                .enumerate()
                .any(|(i, &w)| w != t_weight(i + 1))
        {
            return Err(LabError::Config("t_weights do not match √2, 1/n²".into()));
        }
        let tail: f64 = (2..=self.dim).map(|n| 1.0 / (n * n) as f64).sum();
        if tail >= 1.0 {
            return Err(LabError::Config("Σ 1/n² must stay below 1".into()));
        }
        Ok(())
    }

    pub fn unit_vector(&self, n: usize) -> Result<TruncatedVector> {
        unit_vector(self.dim, n)
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::new(DEFAULT_DIM, DEFAULT_P).expect("default model is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn pair_is_biorthogonal() {
        let g1 = Functional::coordinate(8, 1).unwrap();
        assert_eq!(pair(&g1, &unit_vector(8, 1).unwrap()).unwrap(), 1.0);
        assert_eq!(pair(&g1, &unit_vector(8, 2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn pair_of_witness_functional() {
        let f = Functional::coordinate(8, 1)
            .unwrap()
            .plus(&Functional::coordinate(8, 3).unwrap());
        let x = &(&unit_vector(8, 1).unwrap() + &unit_vector(8, 3).unwrap()) * (1.0 / SQRT_2);
        assert!((pair(&f, &x).unwrap() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pair_rejects_mismatch() {
        let f = Functional::zeros(4);
        let x = TruncatedVector::zeros(5);
        assert!(matches!(pair(&f, &x), Err(LabError::Dimension(_))));
    }

    #[test]
    fn unit_vector_range() {
        let e3 = unit_vector(6, 3).unwrap();
        assert_eq!(e3.as_slice(), &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(unit_vector(6, 7).is_err());
        assert!(unit_vector(6, 0).is_err());
    }

    #[test]
    fn config_invariants() {
        let c = ModelConfig::default();
        assert_eq!(c.dim, 64);
        assert_eq!(c.t_weights[0], SQRT_2);
        assert_eq!(c.t_weights[2], 1.0 / 9.0);
        assert_eq!(c.series_weights[1], 0.25);
        assert!(ModelConfig::new(3, 2.0).is_err());
        assert!(ModelConfig::new(8, 1.0).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TruncatedVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Functional::new(vec![f64::INFINITY]).is_err());
    }
}
