//! Per-component Gaussian linear regression on log-ratio responses.
//!
//! Each response column `j` follows `y_ij = b0_j + z_i . b1_j + e_ij` with
//! `e_ij ~ N(0, sigma_j^2)` independent across components, so the joint
//! likelihood factorizes and every component is fitted on its own.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{normal_ln_pdf, two_sided_critical};

/// Singular-value ratio below which the design is treated as rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

/// Responses (`n x g` log-ratios) and covariates (`n x p`) for a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset {
    responses: DMatrix<f64>,
    covariates: DMatrix<f64>,
    part_labels: Option<Vec<String>>,
}

impl RegressionDataset {
    pub fn new(responses: DMatrix<f64>, covariates: DMatrix<f64>) -> Result<Self> {
        let n = responses.nrows();
        if covariates.nrows() != n {
            return Err(Error::DimensionMismatch {
                what: "covariate rows",
                expected: n,
                found: covariates.nrows(),
            });
        }
        if responses.ncols() == 0 {
            return Err(Error::DimensionMismatch {
                what: "response columns",
                expected: 1,
                found: 0,
            });
        }
        let p = covariates.ncols();
        if n < p + 2 {
            return Err(Error::TooFewObservations { n, required: p + 2 });
        }
        let first_bad = responses
            .iter()
            .chain(covariates.iter())
            .position(|v| !v.is_finite());
        if let Some(index) = first_bad {
            return Err(Error::NonFinite { index });
        }
        let design = design_matrix(&covariates);
        let sv = design.singular_values();
        let max = sv.max();
        if max == 0.0 || sv.min() / max < RANK_TOLERANCE {
            return Err(Error::RankDeficientDesign);
        }
        Ok(Self {
            responses,
            covariates,
            part_labels: None,
        })
    }

    /// Builds a dataset from row vectors; `covariates[i]` is `z_i`.
    pub fn from_rows(responses: &[Vec<f64>], covariates: &[Vec<f64>]) -> Result<Self> {
        let g = responses.first().map_or(0, Vec::len);
        let p = covariates.first().map_or(0, Vec::len);
        if let Some(row) = responses.iter().find(|r| r.len() != g) {
            return Err(Error::DimensionMismatch {
                what: "response row length",
                expected: g,
                found: row.len(),
            });
        }
        if let Some(row) = covariates.iter().find(|r| r.len() != p) {
            return Err(Error::DimensionMismatch {
                what: "covariate row length",
                expected: p,
                found: row.len(),
            });
        }
        let y = DMatrix::from_fn(responses.len(), g, |i, j| responses[i][j]);
        let z = DMatrix::from_fn(covariates.len(), p, |i, k| covariates[i][k]);
        Self::new(y, z)
    }

    /// Names for all `g + 1` parts; the last one is the reference.
    pub fn with_part_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.g() + 1 {
            return Err(Error::DimensionMismatch {
                what: "part labels",
                expected: self.g() + 1,
                found: labels.len(),
            });
        }
        self.part_labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.responses.nrows()
    }

    pub fn g(&self) -> usize {
        self.responses.ncols()
    }

    pub fn p(&self) -> usize {
        self.covariates.ncols()
    }

    pub fn responses(&self) -> &DMatrix<f64> {
        &self.responses
    }

    pub fn covariates(&self) -> &DMatrix<f64> {
        &self.covariates
    }

    pub fn part_labels(&self) -> Option<&[String]> {
        self.part_labels.as_deref()
    }

    /// Intercept-augmented design `[1 | Z]`.
    pub fn design(&self) -> DMatrix<f64> {
        design_matrix(&self.covariates)
    }
}

fn design_matrix(covariates: &DMatrix<f64>) -> DMatrix<f64> {
    let n = covariates.nrows();
    DMatrix::from_fn(n, covariates.ncols() + 1, |i, k| {
        if k == 0 {
            1.0
        } else {
            covariates[(i, k - 1)]
        }
    })
}

/// Divisor used for the residual variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleEstimator {
    /// `rss / n`, the maximum-likelihood estimate.
    #[default]
    MaximumLikelihood,
    /// `rss / (n - p - 1)`.
    Unbiased,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FitOptions {
    pub scale: ScaleEstimator,
}

/// Estimates for one log-ratio component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub beta0: f64,
    pub beta1: Vec<f64>,
    pub sigma: f64,
    pub se_beta0: f64,
    pub se_beta1: Vec<f64>,
    pub se_sigma: f64,
    pub rss: f64,
    /// Covariance of `(beta0, beta1...)`, row-major `(p+1) x (p+1)`.
    pub covariance: Vec<Vec<f64>>,
}

impl ComponentFit {
    /// Assembles a fit from externally supplied estimates and coefficient
    /// covariance. `rss` is taken as `n * sigma^2`.
    pub fn from_estimates(
        beta0: f64,
        beta1: Vec<f64>,
        sigma: f64,
        covariance: Vec<Vec<f64>>,
        n: usize,
    ) -> Result<Self> {
        let k = beta1.len() + 1;
        if covariance.len() != k || covariance.iter().any(|row| row.len() != k) {
            return Err(Error::DimensionMismatch {
                what: "coefficient covariance",
                expected: k,
                found: covariance.len(),
            });
        }
        let se = |i: usize| covariance[i][i].max(0.0).sqrt();
        Ok(Self {
            beta0,
            se_beta0: se(0),
            se_beta1: (1..k).map(se).collect(),
            beta1,
            sigma,
            se_sigma: sigma / (2.0 * n as f64).sqrt(),
            rss: sigma * sigma * n as f64,
            covariance,
        })
    }

    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let k = self.covariance.len();
        DMatrix::from_fn(k, k, |r, c| self.covariance[r][c])
    }

    /// `b0 + z . b1`.
    pub fn linear_predictor(&self, z: &[f64]) -> f64 {
        self.beta0 + self.beta1.iter().zip(z).map(|(b, x)| b * x).sum::<f64>()
    }

    /// Variance of the linear predictor at `z`.
    pub fn predictor_variance(&self, z: &[f64]) -> f64 {
        let x: Vec<f64> = std::iter::once(1.0).chain(z.iter().copied()).collect();
        let mut v = 0.0;
        for (r, xr) in x.iter().enumerate() {
            for (c, xc) in x.iter().enumerate() {
                v += xr * self.covariance[r][c] * xc;
            }
        }
        v.max(0.0)
    }
}

/// A parameter of the model. Component and covariate indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parameter {
    Intercept { component: usize },
    Slope { component: usize, covariate: usize },
    Scale { component: usize },
}

impl Parameter {
    pub fn component(&self) -> usize {
        match *self {
            Parameter::Intercept { component }
            | Parameter::Slope { component, .. }
            | Parameter::Scale { component } => component,
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Intercept { component } => write!(f, "beta0_{component}"),
            Parameter::Slope {
                component,
                covariate,
            } => write!(f, "beta{covariate}_{component}"),
            Parameter::Scale { component } => write!(f, "sigma_{component}"),
        }
    }
}

/// Fitted model: one [`ComponentFit`] per log-ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub components: Vec<ComponentFit>,
    pub n: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub ref_label: Option<String>,
    #[serde(default)]
    pub scale: ScaleEstimator,
}

impl ModelFit {
    pub fn g(&self) -> usize {
        self.components.len()
    }

    pub fn p(&self) -> usize {
        self.components.first().map_or(0, |c| c.beta1.len())
    }

    /// All parameters: intercepts, then slopes (covariate-major), then scales.
    pub fn parameters(&self) -> Vec<Parameter> {
        let g = self.g();
        let mut out: Vec<Parameter> = (1..=g)
            .map(|component| Parameter::Intercept { component })
            .collect();
        for covariate in 1..=self.p() {
            out.extend((1..=g).map(|component| Parameter::Slope {
                component,
                covariate,
            }));
        }
        out.extend((1..=g).map(|component| Parameter::Scale { component }));
        out
    }

    pub fn estimate(&self, param: Parameter) -> f64 {
        let c = &self.components[param.component() - 1];
        match param {
            Parameter::Intercept { .. } => c.beta0,
            Parameter::Slope { covariate, .. } => c.beta1[covariate - 1],
            Parameter::Scale { .. } => c.sigma,
        }
    }

    pub fn std_error(&self, param: Parameter) -> f64 {
        let c = &self.components[param.component() - 1];
        match param {
            Parameter::Intercept { .. } => c.se_beta0,
            Parameter::Slope { covariate, .. } => c.se_beta1[covariate - 1],
            Parameter::Scale { .. } => c.se_sigma,
        }
    }

    /// Linear predictors `eta_j(z)` for every component.
    pub fn linear_predictors(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_covariate(z)?;
        Ok(self
            .components
            .iter()
            .map(|c| c.linear_predictor(z))
            .collect())
    }

    pub(crate) fn check_covariate(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.p() {
            return Err(Error::DimensionMismatch {
                what: "covariate vector",
                expected: self.p(),
                found: z.len(),
            });
        }
        if let Some(index) = z.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    /// `n x g` residual matrix on `data`.
    pub fn residuals(&self, data: &RegressionDataset) -> Result<DMatrix<f64>> {
        self.check_dataset(data)?;
        let z = data.covariates();
        Ok(DMatrix::from_fn(data.n(), self.g(), |i, j| {
            let zi: Vec<f64> = z.row(i).iter().copied().collect();
            data.responses()[(i, j)] - self.components[j].linear_predictor(&zi)
        }))
    }

    fn check_dataset(&self, data: &RegressionDataset) -> Result<()> {
        if data.g() != self.g() {
            return Err(Error::DimensionMismatch {
                what: "response columns",
                expected: self.g(),
                found: data.g(),
            });
        }
        if data.p() != self.p() {
            return Err(Error::DimensionMismatch {
                what: "covariate columns",
                expected: self.p(),
                found: data.p(),
            });
        }
        Ok(())
    }
}

/// Maximum-likelihood fit with the default options.
pub fn fit(data: &RegressionDataset) -> Result<ModelFit> {
    fit_with(data, FitOptions::default())
}

pub fn fit_with(data: &RegressionDataset, options: FitOptions) -> Result<ModelFit> {
    let n = data.n();
    let p = data.p();
    let x = data.design();
    let qr = x.clone().qr();
    let r = qr.r();
    let q = qr.q();
    let r_inv = r.clone().try_inverse().ok_or(Error::RankDeficientDesign)?;
    // (X'X)^-1 = R^-1 R^-T
    let gram_inv = &r_inv * r_inv.transpose();
    let divisor = match options.scale {
        ScaleEstimator::MaximumLikelihood => n as f64,
        ScaleEstimator::Unbiased => (n - p - 1) as f64,
    };

    let components = (0..data.g())
        .map(|j| {
            let y: DVector<f64> = data.responses().column(j).into_owned();
            let coef = r
                .solve_upper_triangular(&(q.transpose() * &y))
                .ok_or(Error::RankDeficientDesign)?;
            let resid = &y - &x * &coef;
            let rss = resid.norm_squared();
            let sigma = (rss / divisor).sqrt();
            let cov = &gram_inv * (sigma * sigma);
            let covariance = (0..=p)
                .map(|r| (0..=p).map(|c| cov[(r, c)]).collect())
                .collect();
            Ok(ComponentFit {
                beta0: coef[0],
                beta1: coef.iter().skip(1).copied().collect(),
                sigma,
                se_beta0: cov[(0, 0)].sqrt(),
                se_beta1: (1..=p).map(|k| cov[(k, k)].sqrt()).collect(),
                se_sigma: sigma / (2.0 * n as f64).sqrt(),
                rss,
                covariance,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (labels, ref_label) = match data.part_labels() {
        Some(all) => {
            let (last, rest) = all.split_last().expect("g + 1 >= 2 labels");
            (Some(rest.to_vec()), Some(last.clone()))
        }
        None => (None, None),
    };
    Ok(ModelFit {
        components,
        n,
        labels,
        ref_label,
        scale: options.scale,
    })
}

/// `estimate +/- q * se` for one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaldInterval {
    pub parameter: Parameter,
    pub estimate: f64,
    pub se: f64,
    pub lower: f64,
    pub upper: f64,
}

impl WaldInterval {
    pub fn excludes_zero(&self) -> bool {
        self.lower > 0.0 || self.upper < 0.0
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Normal-quantile Wald intervals for every parameter, in
/// [`ModelFit::parameters`] order.
pub fn wald_ci(fit: &ModelFit, level: f64) -> Result<Vec<WaldInterval>> {
    let q = two_sided_critical(level)?;
    Ok(fit
        .parameters()
        .into_iter()
        .map(|parameter| {
            let estimate = fit.estimate(parameter);
            let se = fit.std_error(parameter);
            WaldInterval {
                parameter,
                estimate,
                se,
                lower: estimate - q * se,
                upper: estimate + q * se,
            }
        })
        .collect())
}

/// Gaussian log-likelihood of `data` under `fit`, summed over components.
pub fn log_likelihood(fit: &ModelFit, data: &RegressionDataset) -> Result<f64> {
    fit.check_dataset(data)?;
    if let Some(j) = fit.components.iter().position(|c| c.sigma <= 0.0) {
        return Err(Error::DegenerateScale { component: j + 1 });
    }
    let resid = fit.residuals(data)?;
    let mut total = 0.0;
    for (j, c) in fit.components.iter().enumerate() {
        total += resid
            .column(j)
            .iter()
            .map(|e| normal_ln_pdf(*e, 0.0, c.sigma))
            .sum::<f64>();
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceEntry {
    pub interval: WaldInterval,
    /// `Some(excludes zero)` for slopes, `None` for intercepts and scales.
    pub significant: Option<bool>,
}

/// Flags each slope whose Wald interval at `level` excludes zero.
pub fn significance_report(fit: &ModelFit, level: f64) -> Result<Vec<SignificanceEntry>> {
    Ok(wald_ci(fit, level)?
        .into_iter()
        .map(|interval| SignificanceEntry {
            significant: matches!(interval.parameter, Parameter::Slope { .. })
                .then(|| interval.excludes_zero()),
            interval,
        })
        .collect())
}
