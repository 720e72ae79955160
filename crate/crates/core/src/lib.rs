//! Numerical laboratory for renormings of truncated sequence spaces: a norm
//! built from the gauge of a convex hull plus a weighted coordinate series,
//! and probes that measure its geometry.
//!
//! The building blocks are layered:
//!
//! * [`types`]: vectors, functionals and model configuration;
//! * [`base`]: the ℓp model norm, the split norm and the ℓ₁ renorming;
//! * [`hull`]: the operator `T`, the θ-norm and the hull gauge `‖·‖`;
//! * [`final_norm`]: `|·|`, its derivative, dual bounds and the direct-sum lift;
//! * [`probes`]: executable checks of rotundity, smoothness, LUR failure,
//!   slices and the ℓ₁ counterexample;
//! * [`oracle`]: a brute-force gauge used to validate the solvers;
//! * [`report`] and [`suites`]: serializable reports and the named suites
//!   driven by the `renorm-lab` binary.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base;
pub mod error;
pub mod final_norm;
pub mod handle;
pub mod hull;
pub mod oracle;
pub mod probes;
pub mod report;
pub mod suites;
pub mod types;

pub use base::{
    base_lur_norm, dual_norm_base, q1_project, split_norm, troyanski_l1_norm, SplitNormSpec,
};
pub use error::{LabError, Result};
pub use final_norm::{DualBounds, FinalNormSpec, LiftedModel};
pub use handle::{sphere_sample, NormHandle, NormTag};
pub use hull::{
    boundary_decompose, horizontal_segment_probe, hull_gauge, hull_gauge_hilbert_dual, support_d,
    t_apply, theta_norm, GaugeResult, HullGauge,
};
pub use report::{ProbeReport, ReportRow, Status};
pub use types::{pair, unit_vector, Functional, ModelConfig, TruncatedVector};
