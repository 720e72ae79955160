//! Named probe suites: each builds the model from [`SuiteParams`], runs its
//! checks and returns a report plus an optional trace table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::base::SplitNormSpec;
use crate::error::{LabError, Result};
use crate::final_norm::{FinalNormSpec, LiftedModel};
use crate::handle::{gaussian_vectors, sphere_sample, NormHandle};
use crate::hull::{
    boundary_decompose, horizontal_segment_probe, hull_gauge, hull_gauge_hilbert_dual, t_apply,
    HullGauge,
};
use crate::oracle::{brute_force_gauge, ORACLE_ACCURACY};
use crate::probes::{
    gateaux_quotient, kadec_probe, l1_suite, lur_failure_trace, lur_witness, rotundity_scan,
    sphere_pair_defects, L1Options, CONVEXITY_SLACK,
};
use crate::report::{ModelSnapshot, ProbeReport, ReportRow, Table};
use crate::types::{unit_vector, ModelConfig, TruncatedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    LurWitness,
    L1,
    Rotundity,
    Gateaux,
    Boundary,
    Kadec,
    Lift,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::LurWitness,
        Suite::L1,
        Suite::Rotundity,
        Suite::Gateaux,
        Suite::Boundary,
        Suite::Kadec,
        Suite::Lift,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LurWitness => "lur-witness",
            Suite::L1 => "l1",
            Suite::Rotundity => "rotundity",
            Suite::Gateaux => "gateaux",
            Suite::Boundary => "boundary",
            Suite::Kadec => "kadec",
            Suite::Lift => "lift",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown suite '{s}'")))
    }
}

/// Model and sampling parameters; `None` fields take per-suite defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    pub dim: usize,
    pub p: f64,
    pub tol: f64,
    pub seed: u64,
    pub nmax: Option<usize>,
    pub nrange: Option<(usize, usize)>,
    pub samples: Option<usize>,
    pub points: Option<usize>,
    pub pairs: Option<usize>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        let c = ModelConfig::default();
        Self {
            dim: c.dim,
            p: c.p,
            tol: c.gauge_tol,
            seed: c.seed,
            nmax: None,
            nrange: None,
            samples: None,
            points: None,
            pairs: None,
        }
    }
}

impl SuiteParams {
    pub fn config(&self) -> Result<ModelConfig> {
        Ok(ModelConfig::new(self.dim, self.p)?
            .with_gauge_tol(self.tol)?
            .with_seed(self.seed))
    }

    fn snapshot(&self) -> ModelSnapshot {
        ModelSnapshot {
            dim: self.dim,
            p: self.p,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutput {
    pub report: ProbeReport,
    pub table: Option<Table>,
}

impl SuiteOutput {
    fn report(report: ProbeReport) -> Self {
        Self {
            report,
            table: None,
        }
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteOutput> {
    match suite {
        Suite::LurWitness => witness_suite(params),
        Suite::L1 => {
            let defaults = L1Options::default();
            let opts = L1Options {
                n_range: params.nrange.unwrap_or(defaults.n_range),
                samples: params.samples.unwrap_or(defaults.samples),
                pairs: params.pairs.unwrap_or(defaults.pairs),
                seed: params.seed,
                ..defaults
            };
            Ok(SuiteOutput::report(l1_suite(&opts, params.snapshot())?))
        }
        Suite::Rotundity => rotundity_suite(params),
        Suite::Gateaux => gateaux_suite(params),
        Suite::Boundary => boundary_suite(params),
        Suite::Kadec => kadec_suite(params),
        Suite::Lift => lift_suite(params),
        Suite::Oracle => oracle_suite(params),
    }
}

fn default_nmax(dim: usize) -> usize {
    20.min(dim / 3)
}

fn witness_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let config = params.config()?;
    let model = FinalNormSpec::new(&config)?;
    let nmax = params.nmax.unwrap_or_else(|| default_nmax(config.dim));
    let (report, table, _) = lur_failure_trace(&model, nmax, params.snapshot())?;
    Ok(SuiteOutput {
        report,
        table: Some(table),
    })
}

/// Strict positivity of Final defects, and convexity of every handle.
fn rotundity_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let config = params.config()?;
    let model = FinalNormSpec::new(&config)?;
    let pairs = params.pairs.unwrap_or(1000);
    let snapshot = params.snapshot();
    let split = SplitNormSpec::new(config.p, config.dim)?;
    let mut report = rotundity_scan(
        &NormHandle::final_norm(model.clone()),
        config.dim,
        pairs,
        params.seed,
        snapshot,
    )?;
    report.name = "rotundity".into();
    let others = [
        NormHandle::BaseP(config.p),
        NormHandle::Split(split),
        NormHandle::Theta,
        NormHandle::HullGauge(model.gauge.clone()),
        NormHandle::TroyanskiL1,
        NormHandle::Lifted(Box::new(LiftedModel::new(&config, config.dim / 2)?)),
    ];
    for handle in others {
        let defects = sphere_pair_defects(&handle, config.dim, pairs, params.seed)?;
        let min = defects.iter().copied().fold(f64::INFINITY, f64::min);
        report.push(ReportRow::at_least(
            format!("{:?}: min defect (convexity)", handle.tag()),
            min,
            -CONVEXITY_SLACK,
        ));
    }
    Ok(SuiteOutput::report(report))
}

/// Symmetric quotients at `x₀/|x₀|` and at random sphere points, each along
/// one random sphere direction.
pub fn gateaux_scan(
    model: &FinalNormSpec,
    points: usize,
    steps: &[f64],
    seed: u64,
    snapshot: ModelSnapshot,
) -> Result<(ProbeReport, Table)> {
    let dim = model.dim();
    let handle = NormHandle::final_norm(model.clone());
    let x0 = &unit_vector(dim, 1)? * std::f64::consts::SQRT_2;
    let mut bases = vec![&x0 * (1.0 / model.final_norm(&x0)?)];
    bases.extend(
        sphere_sample(&handle, dim, points.max(1), seed)?
            .into_iter()
            .take(points),
    );
    let directions = sphere_sample(&handle, dim, bases.len(), seed.wrapping_add(1))?;
    let mut steps = steps.to_vec();
    steps.sort_by(|a, b| b.total_cmp(a));
    let smallest = *steps
        .last()
        .ok_or_else(|| LabError::Config("empty step schedule".into()))?;

    let quotients: Vec<Vec<f64>> = bases
        .par_iter()
        .zip(&directions)
        .map(|(x, y)| {
            steps
                .iter()
                .map(|&h| gateaux_quotient(&handle, x, y, h))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut report = ProbeReport::new("gateaux", snapshot);
    let mut columns = vec!["point".to_string()];
    columns.extend(steps.iter().map(|h| format!("q({h:e})")));
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    for (i, qs) in quotients.iter().enumerate() {
        let name = if i == 0 {
            "x0".to_string()
        } else {
            format!("sample {i}")
        };
        let min = qs.iter().copied().fold(f64::INFINITY, f64::min);
        report.push(ReportRow::at_least(
            format!("{name}: min q(h) >= 0"),
            min,
            -1e-9,
        ));
        report.push(ReportRow::at_most(
            format!("{name}: q({smallest:e}) <= 1e-3"),
            qs[qs.len() - 1],
            1e-3,
        ));
        let rise = qs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        report.push(ReportRow::at_most(
            format!("{name}: q increase as h shrinks"),
            rise,
            1e-9,
        ));
        let mut row = vec![i as f64];
        row.extend(qs);
        table.push(row);
    }
    Ok((report, table))
}

fn gateaux_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let model = FinalNormSpec::new(&params.config()?)?;
    let (report, table) = gateaux_scan(
        &model,
        params.points.unwrap_or(20),
        &[1e-2, 1e-3, 1e-4],
        params.seed,
        params.snapshot(),
    )?;
    Ok(SuiteOutput {
        report,
        table: Some(table),
    })
}

/// Decomposition and segment probes at sampled points of `∂D`.
pub fn boundary_scan(
    gauge: &HullGauge,
    dim: usize,
    points: usize,
    seed: u64,
    snapshot: ModelSnapshot,
) -> Result<ProbeReport> {
    // alternate Gaussian directions with directions shaped like the θ-ellipsoid,
    // where both parts of the hull are active
    let raw = gaussian_vectors(dim, 2 * points, seed);
    let xs: Vec<TruncatedVector> = (0..points)
        .map(|i| {
            let g = &raw[2 * i];
            let x = if i % 2 == 0 {
                g.clone()
            } else {
                t_apply(g).axpy(0.01, &raw[2 * i + 1])
            };
            Ok(&x * (1.0 / gauge.value(&x)?))
        })
        .collect::<Result<_>>()?;
    let checks: Vec<(f64, f64, f64, f64)> = xs
        .par_iter()
        .map(|x| {
            let d = boundary_decompose(gauge, x, 1e-8)?;
            let probe = horizontal_segment_probe(gauge, x, 0.01, 1e-6)?;
            let excess = probe.plus_gauge.max(probe.minus_gauge) - 1.0;
            Ok((d.residual, d.lambda, d.unit_defect(gauge.spec.p), excess))
        })
        .collect::<Result<_>>()?;
    let max_residual = checks.iter().map(|c| c.0).fold(0.0, f64::max);
    let lambda_out = checks
        .iter()
        .filter(|c| !(0.0..=1.0).contains(&c.1))
        .count();
    let max_unit = checks.iter().map(|c| c.2).fold(0.0, f64::max);
    let min_excess = checks.iter().map(|c| c.3).fold(f64::INFINITY, f64::min);
    let mixed = checks.iter().filter(|c| c.1 > 0.0 && c.1 < 1.0).count();
    let mut report = ProbeReport::new("boundary", snapshot);
    report.push(ReportRow::at_most(
        "decomposition: max residual",
        max_residual,
        1e-8,
    ));
    report.push(ReportRow::at_most(
        "decomposition: lambda outside [0,1]",
        lambda_out as f64,
        0.0,
    ));
    report.push(ReportRow::at_most(
        "decomposition: max unit-sphere defect",
        max_unit,
        1e-6,
    ));
    report.push(ReportRow::at_least(
        "points with 0 < lambda < 1",
        mixed as f64,
        1.0,
    ));
    report.push(ReportRow::above(
        "segment probe (t=0.01): min gauge excess over both sides",
        min_excess,
        1e-6,
    ));
    Ok(report)
}

fn boundary_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let config = params.config()?;
    let model = FinalNormSpec::new(&config)?;
    let report = boundary_scan(
        &model.gauge,
        config.dim,
        params.points.unwrap_or(100),
        params.seed,
        params.snapshot(),
    )?;
    Ok(SuiteOutput::report(report))
}

fn kadec_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let config = params.config()?;
    let model = FinalNormSpec::new(&config)?;
    let ks: Vec<usize> = [8, 16, 32, 63]
        .into_iter()
        .filter(|&k| k <= config.dim)
        .collect();
    let (mut report, small) = kadec_probe(&model, 0.1, &ks, params.snapshot())?;
    let (_, large) = kadec_probe(&model, 0.5, &ks, params.snapshot())?;
    let mut table = Table::new(&["k", "alpha_beta_0.1", "alpha_beta_0.5"]);
    for (a, b) in small.iter().zip(&large) {
        report.push(ReportRow::above(
            format!("k={}: gap at beta=0.5 exceeds gap at beta=0.1", a.k),
            (1.0 - b.alpha) - (1.0 - a.alpha),
            0.0,
        ));
        table.push(vec![a.k as f64, a.alpha, b.alpha]);
    }
    Ok(SuiteOutput {
        report,
        table: Some(table),
    })
}

/// Direct-sum lift of the model (dimension `dim`) into dimension `2·dim`.
fn lift_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let head_config = params.config()?;
    let config = ModelConfig::new(2 * head_config.dim, head_config.p)?
        .with_gauge_tol(head_config.gauge_tol)?
        .with_seed(head_config.seed);
    let lifted = LiftedModel::new(&config, head_config.dim)?;
    let head = &lifted.head;
    let dim = head.dim();
    let mut report = ProbeReport::new("lift", params.snapshot());

    let points = params.points.unwrap_or(100);
    let mut worst = 0.0f64;
    for x in gaussian_vectors(dim, points, params.seed) {
        let diff = (lifted.lift_direct_sum(&lifted.embed(&x)?)? - head.final_norm(&x)?).abs();
        worst = worst.max(diff);
    }
    report.push(ReportRow::at_most(
        format!("first block: max |lift - final| over {points} points"),
        worst,
        1e-12,
    ));

    let lifted_norm = |x: &TruncatedVector| lifted.lift_direct_sum(&lifted.embed(x)?);
    let nmax = params.nmax.unwrap_or_else(|| default_nmax(dim));
    let (witness, table, rows) = lur_failure_trace(head, nmax, params.snapshot())?;
    let mut max_dev = 0.0f64;
    for r in &rows {
        let w = lur_witness(dim, r.n)?;
        let x0 = lifted_norm(&w.x0)?;
        let xn = lifted_norm(&w.xn)?;
        let sum = lifted_norm(&(&w.x0 + &w.xn))?;
        let defect = 2.0 * x0 * x0 + 2.0 * xn * xn - sum * sum;
        let dist = lifted_norm(&(&w.xn - &w.x0))?;
        max_dev = max_dev
            .max((xn * xn - r.xn_norm_sq).abs())
            .max((defect - r.defect).abs())
            .max((dist - r.dist).abs());
    }
    report.push(ReportRow::at_most(
        "embedded witness: max deviation from the head model",
        max_dev,
        1e-9,
    ));
    for row in witness.rows {
        report.push(ReportRow {
            label: format!("embedded {}", row.label),
            ..row
        });
    }
    Ok(SuiteOutput {
        report,
        table: Some(table),
    })
}

/// Solver against the brute-force oracle in dimension ≤ 3, and the general
/// solver against the Hilbert dual path in dimension 16.
fn oracle_suite(params: &SuiteParams) -> Result<SuiteOutput> {
    let low_dim = params.dim.clamp(2, 3);
    let points = params.points.unwrap_or(100);
    let snapshot = params.snapshot();
    let mut report = ProbeReport::new("oracle", snapshot);
    let mut table = Table::new(&["point", "solver", "brute_force", "abs_diff"]);

    let spec = SplitNormSpec::new(params.p, low_dim)?;
    let xs = gaussian_vectors(low_dim, points, params.seed);
    let pairs: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|x| {
            Ok((
                hull_gauge(x, &spec, 1e-9)?.value,
                brute_force_gauge(x, params.p)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (i, (solver, brute)) in pairs.iter().enumerate() {
        let diff = (solver - brute).abs();
        worst = worst.max(diff);
        table.push(vec![i as f64, *solver, *brute, diff]);
    }
    report.push(ReportRow::at_most(
        format!("dim {low_dim}: max |gauge - brute force| over {points} points"),
        worst,
        ORACLE_ACCURACY,
    ));

    let hilbert_points = 200;
    let spec16 = SplitNormSpec::new(2.0, 16)?;
    let ys = gaussian_vectors(16, hilbert_points, params.seed.wrapping_add(1));
    let diffs: Vec<f64> = ys
        .par_iter()
        .map(|y| {
            let general = hull_gauge(y, &spec16, 1e-9)?.value;
            let dual = hull_gauge_hilbert_dual(y, 2.0, 1e-12)?.value;
            Ok((general - dual).abs())
        })
        .collect::<Result<_>>()?;
    report.push(ReportRow::at_most(
        format!("dim 16, p=2: max |general - dual| over {hilbert_points} points"),
        diffs.iter().copied().fold(0.0, f64::max),
        1e-6,
    ));
    Ok(SuiteOutput {
        report,
        table: Some(table),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_kadec_suite_passes() {
        let params = SuiteParams {
            dim: 16,
            ..SuiteParams::default()
        };
        let out = run_suite(Suite::Kadec, &params).unwrap();
        assert!(
            out.report.passed(),
            "{:?}",
            out.report.failures().collect::<Vec<_>>()
        );
    }
}
