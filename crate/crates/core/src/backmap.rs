//! Back-transforming fitted log-ratio predictors to simplex proportions,
//! with delta-method or parametric-bootstrap intervals.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composition::{inverse_from_values, Composition, OVERFLOW_GUARD};
use crate::error::{Error, Result};
use crate::regress::ModelFit;
use crate::rng::KeyedRng;
use crate::stats::{check_level, sorted_quantile, two_sided_critical};

/// Minimum bootstrap size.
pub const MIN_BOOTSTRAP_DRAWS: usize = 100;

/// Draws per independently keyed bootstrap chunk.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    Delta,
    Bootstrap,
}

/// Proportions at one covariate value with per-part intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionEstimate {
    pub alphas: Composition,
    pub covariate: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub level: f64,
    pub method: CiMethod,
    /// Set when a delta interval had to be clamped into (0, 1).
    pub clamped: bool,
}

/// `alpha_j = e^{eta_j} / (1 + sum_k e^{eta_k})`, `alpha_G = 1 / (1 + sum_k e^{eta_k})`.
pub fn estimate_proportions(fit: &ModelFit, z: &[f64]) -> Result<Composition> {
    let eta = fit.linear_predictors(z)?;
    proportions_from_predictors(&eta)
}

fn proportions_from_predictors(eta: &[f64]) -> Result<Composition> {
    if let Some(index) = eta.iter().position(|v| v.abs() > OVERFLOW_GUARD) {
        return Err(Error::OverflowGuard {
            index,
            value: eta[index],
        });
    }
    let exps: Vec<f64> = eta.iter().map(|v| v.exp()).collect();
    let denom = 1.0 + exps.iter().sum::<f64>();
    let mut parts: Vec<f64> = exps.iter().map(|e| e / denom).collect();
    parts.push(1.0 / denom);
    if parts.iter().any(|p| !p.is_finite() || *p <= 0.0) {
        // Extreme but guarded predictors: fall back to the shifted form.
        return inverse_from_values(eta);
    }
    Composition::new(parts)
}

fn labelled(fit: &ModelFit, alphas: Composition) -> Composition {
    match (&fit.labels, &fit.ref_label) {
        (Some(labels), Some(reference)) => {
            let mut all = labels.clone();
            all.push(reference.clone());
            alphas.clone().with_labels(all).unwrap_or(alphas)
        }
        _ => alphas,
    }
}

/// First-order (delta method) intervals.
///
/// Components are independent, so `Var(alpha_i) = sum_k (d alpha_i / d eta_k)^2 Var(eta_k)`
/// with `d alpha_i / d eta_k = alpha_i (1[i = k] - alpha_k)`.
pub fn proportion_ci_delta(fit: &ModelFit, z: &[f64], level: f64) -> Result<ProportionEstimate> {
    let q = two_sided_critical(level)?;
    let alphas = estimate_proportions(fit, z)?;
    let a = alphas.parts();
    let g = fit.g();
    let var_eta: Vec<f64> = fit
        .components
        .iter()
        .map(|c| c.predictor_variance(z))
        .collect();

    let mut clamped = false;
    let intervals = (0..=g)
        .map(|i| {
            let var: f64 = (0..g)
                .map(|k| {
                    let indicator = if i == k { 1.0 } else { 0.0 };
                    let d = a[i] * (indicator - a[k]);
                    d * d * var_eta[k]
                })
                .sum();
            let half = q * var.sqrt();
            let (lo, hi) = (a[i] - half, a[i] + half);
            let (clo, chi) = clamp_open_unit(lo, hi, a[i]);
            clamped |= clo != lo || chi != hi;
            (clo, chi)
        })
        .collect();

    Ok(ProportionEstimate {
        alphas: labelled(fit, alphas),
        covariate: z.to_vec(),
        intervals,
        level,
        method: CiMethod::Delta,
        clamped,
    })
}

fn clamp_open_unit(lo: f64, hi: f64, point: f64) -> (f64, f64) {
    const TOP: f64 = 1.0 - f64::EPSILON / 2.0;
    let lo = if lo <= 0.0 {
        f64::MIN_POSITIVE.min(point)
    } else {
        lo
    };
    let hi = if hi >= 1.0 { TOP.max(point) } else { hi };
    (lo, hi)
}

/// Parametric bootstrap intervals.
///
/// Each draw samples every component's coefficients from its asymptotic
/// Gaussian independently and maps the predictors to proportions; the
/// interval is the empirical central `level` range. Draws are generated in
/// fixed-size chunks keyed by `(seed, chunk)`, so the result does not depend
/// on the number of threads.
pub fn proportion_ci_bootstrap(
    fit: &ModelFit,
    z: &[f64],
    level: f64,
    draws: usize,
    seed: u64,
) -> Result<ProportionEstimate> {
    check_level(level)?;
    if draws < MIN_BOOTSTRAP_DRAWS {
        return Err(Error::BTooSmall(draws));
    }
    let alphas = estimate_proportions(fit, z)?;
    let g = fit.g();
    let x: Vec<f64> = std::iter::once(1.0).chain(z.iter().copied()).collect();
    let centers: Vec<f64> = fit.linear_predictors(z)?;
    // eta_j = x' beta_j with beta_j ~ N(b_j, C_j): x' L_j e for e ~ N(0, I).
    let loadings: Vec<Vec<f64>> = fit
        .components
        .iter()
        .map(|c| {
            let root = psd_sqrt(&c.covariance_matrix());
            (0..root.ncols())
                .map(|col| {
                    x.iter()
                        .enumerate()
                        .map(|(r, xr)| xr * root[(r, col)])
                        .sum()
                })
                .collect()
        })
        .collect();

    let chunks = draws.div_ceil(CHUNK);
    let samples: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let len = CHUNK.min(draws - chunk * CHUNK);
            let mut rng = KeyedRng::new(seed, chunk as u64, 0);
            let mut out = Vec::with_capacity(len * (g + 1));
            let mut eta = vec![0.0; g];
            for _ in 0..len {
                for j in 0..g {
                    eta[j] = centers[j]
                        + loadings[j]
                            .iter()
                            .map(|l| l * rng.standard_normal())
                            .sum::<f64>();
                }
                out.extend(draw_proportions(&eta));
            }
            out
        })
        .collect();

    let tail = (1.0 - level) / 2.0;
    let mut per_part: Vec<Vec<f64>> = vec![Vec::with_capacity(draws); g + 1];
    for chunk in &samples {
        for row in chunk.chunks_exact(g + 1) {
            for (part, v) in per_part.iter_mut().zip(row) {
                part.push(*v);
            }
        }
    }
    let intervals = per_part
        .into_iter()
        .map(|mut v| {
            v.sort_by(f64::total_cmp);
            (sorted_quantile(&v, tail), sorted_quantile(&v, 1.0 - tail))
        })
        .collect();

    Ok(ProportionEstimate {
        alphas: labelled(fit, alphas),
        covariate: z.to_vec(),
        intervals,
        level,
        method: CiMethod::Bootstrap,
        clamped: false,
    })
}

fn draw_proportions(eta: &[f64]) -> impl Iterator<Item = f64> + '_ {
    let shift = eta.iter().copied().fold(0.0_f64, f64::max);
    let denom = (-shift).exp() + eta.iter().map(|v| (v - shift).exp()).sum::<f64>();
    eta.iter()
        .map(move |v| (v - shift).exp() / denom)
        .chain(std::iter::once((-shift).exp() / denom))
}

/// Symmetric square root `L` with `L L' = C`, tolerating singular `C`.
fn psd_sqrt(c: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(c.clone());
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&roots)
}
