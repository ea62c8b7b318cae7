//! Monte Carlo study of the ML estimator under the fitted model.
//!
//! Each replicate draws `z_i ~ Bernoulli(prob)` and
//! `y_ij = b0_j + b1_j z_i + e_ij`, `e_ij ~ N(0, sigma_j^2)`, refits, and
//! records the estimates and whether each Wald interval covers the truth.
//! Replicates are keyed by `(seed, replicate)` and reduced in index order,
//! so a report depends only on its config.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regress::{fit, wald_ci, Parameter, RegressionDataset};
use crate::rng::KeyedRng;
use crate::stats::check_level;

/// Attempts at drawing a usable covariate vector before giving up.
pub const MAX_REGENERATIONS: u64 = 100;

/// Minimum observations required at each covariate level.
const MIN_PER_LEVEL: usize = 2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dgp {
    /// Normal errors added to the linear predictor on the log-ratio scale.
    #[default]
    ModelNormal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub replicates: usize,
    pub true_beta0: Vec<f64>,
    pub true_beta1: Vec<f64>,
    pub true_sigma: Vec<f64>,
    pub covariate_prob: f64,
    pub ci_level: f64,
    pub seed: u64,
    pub dgp: Dgp,
}

impl SimConfig {
    /// The reference design: four parts, unbalanced intercepts, a common
    /// slope of -0.05 and Bernoulli(0.5) covariate, 1000 replicates.
    pub fn reference_design(n: usize, seed: u64) -> Self {
        Self {
            n,
            replicates: 1000,
            true_beta0: vec![0.5, -0.62, -1.68],
            true_beta1: vec![-0.05, -0.05, -0.05],
            true_sigma: vec![0.31, 0.41, 0.75],
            covariate_prob: 0.5,
            ci_level: 0.95,
            seed,
            dgp: Dgp::ModelNormal,
        }
    }

    pub fn g(&self) -> usize {
        self.true_beta0.len()
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.g();
        if g == 0 {
            return Err(Error::InvalidConfig("beta0 is empty".into()));
        }
        if self.true_beta1.len() != g || self.true_sigma.len() != g {
            return Err(Error::InvalidConfig(format!(
                "beta0 has {g} entries but beta1 has {} and sigma has {}",
                self.true_beta1.len(),
                self.true_sigma.len()
            )));
        }
        if self.n < 4 {
            return Err(Error::InvalidConfig(format!("n = {} < 4", self.n)));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if !self.true_sigma.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(Error::InvalidConfig("sigmas must be > 0".into()));
        }
        if self
            .true_beta0
            .iter()
            .chain(&self.true_beta1)
            .any(|b| !b.is_finite())
        {
            return Err(Error::InvalidConfig("coefficients must be finite".into()));
        }
        if !(self.covariate_prob > 0.0 && self.covariate_prob < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "covariate probability {} outside (0, 1)",
                self.covariate_prob
            )));
        }
        check_level(self.ci_level)
    }

    /// True value of `param` (same naming as [`crate::regress::ModelFit::parameters`]).
    pub fn truth(&self, param: Parameter) -> f64 {
        match param {
            Parameter::Intercept { component } => self.true_beta0[component - 1],
            Parameter::Slope { component, .. } => self.true_beta1[component - 1],
            Parameter::Scale { component } => self.true_sigma[component - 1],
        }
    }

    fn parameters(&self) -> Vec<Parameter> {
        let g = self.g();
        let mut out: Vec<Parameter> = (1..=g)
            .map(|component| Parameter::Intercept { component })
            .collect();
        out.extend((1..=g).map(|component| Parameter::Slope {
            component,
            covariate: 1,
        }));
        out.extend((1..=g).map(|component| Parameter::Scale { component }));
        out
    }
}

/// Draws replicate `replicate` of the study.
///
/// Covariate draws with fewer than two observations at either level are
/// redrawn (up to [`MAX_REGENERATIONS`] times) so every replicate is fittable.
pub fn generate_dataset(config: &SimConfig, replicate: u64) -> Result<RegressionDataset> {
    config.validate()?;
    let n = config.n;
    let g = config.g();
    for attempt in 0..MAX_REGENERATIONS {
        let mut zrng = KeyedRng::new(config.seed, replicate, 2 * attempt);
        let z: Vec<f64> = (0..n)
            .map(|_| f64::from(u8::from(zrng.bernoulli(config.covariate_prob))))
            .collect();
        let ones = z.iter().filter(|v| **v == 1.0).count();
        if ones < MIN_PER_LEVEL || n - ones < MIN_PER_LEVEL {
            continue;
        }
        let mut erng = KeyedRng::new(config.seed, replicate, 2 * attempt + 1);
        let mut y = DMatrix::zeros(n, g);
        for (i, zi) in z.iter().enumerate() {
            for j in 0..g {
                y[(i, j)] = config.true_beta0[j]
                    + config.true_beta1[j] * zi
                    + config.true_sigma[j] * erng.standard_normal();
            }
        }
        let covariates = DMatrix::from_column_slice(n, 1, &z);
        return RegressionDataset::new(y, covariates);
    }
    Err(Error::ImprobableDegeneracy { replicate })
}

/// Summary statistics for one parameter across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub parameter: Parameter,
    pub name: String,
    pub truth: f64,
    pub mean: f64,
    pub bias: f64,
    pub mse: f64,
    /// Variance of the estimates (divisor = replicates).
    pub variance: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimReport {
    pub config: SimConfig,
    pub parameters: Vec<ParameterSummary>,
    #[serde(skip)]
    pub duration: Duration,
}

impl SimReport {
    pub fn summary(&self, param: Parameter) -> Option<&ParameterSummary> {
        self.parameters.iter().find(|s| s.parameter == param)
    }
}

/// Equality ignores wall-clock duration.
impl PartialEq for SimReport {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.parameters == other.parameters
    }
}

struct ReplicateOutcome {
    estimates: Vec<f64>,
    covered: Vec<bool>,
}

fn run_replicate(
    config: &SimConfig,
    params: &[Parameter],
    replicate: u64,
) -> Result<ReplicateOutcome> {
    let data = generate_dataset(config, replicate)?;
    let model = fit(&data)?;
    let ci = wald_ci(&model, config.ci_level)?;
    let estimates = params.iter().map(|p| model.estimate(*p)).collect();
    let covered = params
        .iter()
        .zip(&ci)
        .map(|(p, w)| {
            debug_assert_eq!(*p, w.parameter);
            w.contains(config.truth(*p))
        })
        .collect();
    Ok(ReplicateOutcome { estimates, covered })
}

/// Runs every replicate and summarizes mean, bias, MSE and coverage.
pub fn run_study(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let start = Instant::now();
    let params = config.parameters();
    let outcomes: Vec<ReplicateOutcome> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|r| run_replicate(config, &params, r))
        .collect::<Result<_>>()?;

    let reps = outcomes.len() as f64;
    let parameters = params
        .iter()
        .enumerate()
        .map(|(k, &parameter)| {
            let truth = config.truth(parameter);
            let estimates = outcomes.iter().map(|o| o.estimates[k]);
            let mean = estimates.clone().sum::<f64>() / reps;
            let variance = estimates.clone().map(|e| (e - mean).powi(2)).sum::<f64>() / reps;
            let mse = estimates.map(|e| (e - truth).powi(2)).sum::<f64>() / reps;
            let hits = outcomes.iter().filter(|o| o.covered[k]).count();
            ParameterSummary {
                parameter,
                name: parameter.to_string(),
                truth,
                mean,
                bias: mean - truth,
                mse,
                variance,
                coverage: hits as f64 / reps,
            }
        })
        .collect();

    Ok(SimReport {
        config: config.clone(),
        parameters,
        duration: start.elapsed(),
    })
}

/// Runs each config in order; errors carry the failing config's index.
pub fn study_sweep(configs: &[SimConfig]) -> Result<Vec<SimReport>> {
    if configs.is_empty() {
        return Err(Error::InvalidConfig("empty sweep".into()));
    }
    configs
        .iter()
        .enumerate()
        .map(|(index, c)| {
            run_study(c).map_err(|e| Error::Sweep {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Side-by-side Mean/Bias/MSE/CP table, one block per report.
pub fn format_sweep_table(reports: &[SimReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6}  {:<10} {:>10} {:>10} {:>10} {:>10} {:>7}",
        "n", "parameter", "truth", "mean", "bias", "mse", "cp"
    );
    for report in reports {
        for (i, s) in report.parameters.iter().enumerate() {
            let n = if i == 0 {
                report.config.n.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{:>6}  {:<10} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>7.3}",
                n, s.name, s.truth, s.mean, s.bias, s.mse, s.coverage
            );
        }
    }
    out
}
