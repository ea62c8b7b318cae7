//! Printed results of the original analysis of the bundled table and of the
//! reference simulation design, used by `reproduce`.

use crate::error::Result;
use crate::regress::{ComponentFit, ModelFit};

/// One printed row: estimate, standard error, 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedEstimate {
    pub name: &'static str,
    pub estimate: f64,
    pub se: f64,
    pub ci: (f64, f64),
}

/// Regression results in parameter order beta0_1..3, beta1_1..3, sigma_1..3.
#[rustfmt::skip]
pub const REGRESSION: [PrintedEstimate; 9] = [
    PrintedEstimate { name: "beta0_1", estimate: 0.468, se: 0.038, ci: (0.394, 0.542) },
    PrintedEstimate { name: "beta0_2", estimate: -1.168, se: 0.066, ci: (-1.296, -1.039) },
    PrintedEstimate { name: "beta0_3", estimate: -2.072, se: 0.087, ci: (-2.244, -1.901) },
    PrintedEstimate { name: "beta1_1", estimate: 0.196, se: 0.046, ci: (0.105, 0.286) },
    PrintedEstimate { name: "beta1_2", estimate: 0.141, se: 0.080, ci: (-0.016, 0.298) },
    PrintedEstimate { name: "beta1_3", estimate: 0.262, se: 0.106, ci: (0.053, 0.470) },
    PrintedEstimate { name: "sigma_1", estimate: 0.245, se: 0.015, ci: (0.215, 0.275) },
    PrintedEstimate { name: "sigma_2", estimate: 0.426, se: 0.027, ci: (0.374, 0.478) },
    PrintedEstimate { name: "sigma_3", estimate: 0.566, se: 0.035, ci: (0.496, 0.635) },
];

/// Sample size behind [`REGRESSION`].
pub const REGRESSION_N: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedProportion {
    pub part: &'static str,
    pub z: f64,
    pub estimate: f64,
    pub ci: (f64, f64),
}

#[rustfmt::skip]
pub const PROPORTIONS: [PrintedProportion; 8] = [
    PrintedProportion { part: "attack", z: 0.0, estimate: 0.526, ci: (0.518, 0.533) },
    PrintedProportion { part: "block", z: 0.0, estimate: 0.102, ci: (0.096, 0.110) },
    PrintedProportion { part: "serve", z: 0.0, estimate: 0.041, ci: (0.037, 0.046) },
    PrintedProportion { part: "error", z: 0.0, estimate: 0.330, ci: (0.310, 0.349) },
    PrintedProportion { part: "attack", z: 1.0, estimate: 0.561, ci: (0.544, 0.571) },
    PrintedProportion { part: "block", z: 1.0, estimate: 0.103, ci: (0.089, 0.119) },
    PrintedProportion { part: "serve", z: 1.0, estimate: 0.047, ci: (0.037, 0.060) },
    PrintedProportion { part: "error", z: 1.0, estimate: 0.289, ci: (0.250, 0.330) },
];

/// Simulation summary row: mean, bias, MSE, coverage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedSimRow {
    pub n: usize,
    pub name: &'static str,
    pub mean: f64,
    pub bias: f64,
    pub mse: f64,
    pub cp: f64,
}

macro_rules! sim_rows {
    ($($n:literal $name:literal $mean:literal $bias:literal $mse:literal $cp:literal;)*) => {
        [$(PrintedSimRow { n: $n, name: $name, mean: $mean, bias: $bias, mse: $mse, cp: $cp }),*]
    };
}

pub const SIMULATION: [PrintedSimRow; 27] = sim_rows! {
    70 "beta0_1" 0.55937 0.05937 0.00484 0.999;
    70 "beta0_2" -0.66107 -0.04107 0.00482 0.996;
    70 "beta0_3" -1.71249 -0.03249 0.01519 0.845;
    70 "beta1_1" -0.00381 0.04619 0.00482 0.997;
    70 "beta1_2" -0.00499 0.04501 0.00838 0.953;
    70 "beta1_3" -0.00600 0.04400 0.02937 0.697;
    70 "sigma_1" 0.20948 -0.10052 0.01166 0.992;
    70 "sigma_2" 0.32658 -0.08342 0.00786 0.999;
    70 "sigma_3" 0.70435 -0.04565 0.00475 0.987;
    100 "beta0_1" 0.55960 0.05960 0.00439 0.988;
    100 "beta0_2" -0.66270 -0.04270 0.00385 0.990;
    100 "beta0_3" -1.70867 -0.02867 0.01055 0.847;
    100 "beta1_1" -0.00211 0.04789 0.00422 0.989;
    100 "beta1_2" -0.00185 0.04815 0.00685 0.929;
    100 "beta1_3" -0.00854 0.04146 0.02198 0.660;
    100 "sigma_1" 0.21027 -0.09973 0.01191 0.988;
    100 "sigma_2" 0.32972 -0.08027 0.00677 0.999;
    100 "sigma_3" 0.70926 -0.04074 0.00365 0.992;
    150 "beta0_1" 0.55753 0.05753 0.00392 0.984;
    150 "beta0_2" -0.66294 -0.04294 0.00324 0.985;
    150 "beta0_3" -1.71676 -0.03676 0.00785 0.828;
    150 "beta1_1" 0.00118 0.05118 0.00394 0.971;
    150 "beta1_2" -0.00009 0.04991 0.00563 0.895;
    150 "beta1_3" 0.00359 0.05359 0.01727 0.624;
    150 "sigma_1" 0.21458 -0.09542 0.00924 0.967;
    150 "sigma_2" 0.33079 -0.07920 0.00651 0.992;
    150 "sigma_3" 0.71310 -0.03690 0.00275 0.973;
};

/// A [`ModelFit`] carrying the printed coefficients and standard errors.
///
/// Only standard errors are printed, so the coefficient covariance is
/// rebuilt from them using the identity that holds for an intercept plus a
/// single binary covariate: `Cov(b0, b1) = -Var(b0)`.
pub fn printed_fit() -> Result<ModelFit> {
    let components = (0..3)
        .map(|j| {
            let b0 = &REGRESSION[j];
            let b1 = &REGRESSION[3 + j];
            let sigma = REGRESSION[6 + j].estimate;
            let v0 = b0.se * b0.se;
            let cov = vec![vec![v0, -v0], vec![-v0, b1.se * b1.se]];
            ComponentFit::from_estimates(b0.estimate, vec![b1.estimate], sigma, cov, REGRESSION_N)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelFit {
        components,
        n: REGRESSION_N,
        labels: Some(vec!["attack".into(), "block".into(), "serve".into()]),
        ref_label: Some("error".into()),
        scale: Default::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_intervals_are_estimate_plus_minus_1_96_se() {
        // Sanity check of the transcription: every printed interval is
        // estimate +/- 1.96 se up to rounding of the printed values.
        for row in REGRESSION {
            assert!(
                (row.ci.0 - (row.estimate - 1.96 * row.se)).abs() < 2.5e-3,
                "{}",
                row.name
            );
            assert!(
                (row.ci.1 - (row.estimate + 1.96 * row.se)).abs() < 2.5e-3,
                "{}",
                row.name
            );
        }
    }

    #[test]
    fn printed_sigma_se_matches_scale_information() {
        for row in &REGRESSION[6..] {
            let fisher = row.estimate / (2.0 * REGRESSION_N as f64).sqrt();
            assert!((fisher - row.se).abs() < 1e-3, "{}", row.name);
        }
    }

    #[test]
    fn printed_simulation_bias_is_mean_minus_truth() {
        let truth = |name: &str| match name {
            "beta0_1" => 0.5,
            "beta0_2" => -0.62,
            "beta0_3" => -1.68,
            "sigma_1" => 0.31,
            "sigma_2" => 0.41,
            "sigma_3" => 0.75,
            _ => -0.05,
        };
        for row in SIMULATION {
            assert!(
                (row.mean - truth(row.name) - row.bias).abs() < 2e-5,
                "{} {}",
                row.n,
                row.name
            );
        }
    }

    #[test]
    fn printed_fit_shape() {
        let fit = printed_fit().unwrap();
        assert_eq!((fit.g(), fit.p(), fit.n), (3, 1, 128));
        assert_eq!(fit.components[1].se_beta1[0], 0.080);
    }
}
