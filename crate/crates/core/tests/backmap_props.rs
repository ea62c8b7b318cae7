use alrfit_core::backmap::{estimate_proportions, proportion_ci_bootstrap};
use alrfit_core::composition::{alr_inverse, LogRatioVector};
use alrfit_core::published::printed_fit;
use alrfit_core::regress::{ComponentFit, ModelFit};
use proptest::prelude::*;

fn model(coef: &[(f64, f64)]) -> ModelFit {
    let components = coef
        .iter()
        .map(|&(b0, b1)| {
            let cov = vec![vec![0.01, -0.005], vec![-0.005, 0.02]];
            ComponentFit::from_estimates(b0, vec![b1], 0.5, cov, 50).unwrap()
        })
        .collect();
    ModelFit {
        components,
        n: 50,
        labels: None,
        ref_label: None,
        scale: Default::default(),
    }
}

fn coefficients() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-4.0f64..4.0, -2.0f64..2.0), 1..5)
}

proptest! {
    #[test]
    fn proportions_sum_to_one(coef in coefficients(), z in -3.0f64..3.0) {
        let a = estimate_proportions(&model(&coef), &[z]).unwrap();
        let sum: f64 = a.parts().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn direct_form_equals_alr_inverse(coef in coefficients(), z in -3.0f64..3.0) {
        let fit = model(&coef);
        let direct = estimate_proportions(&fit, &[z]).unwrap();
        let eta = fit.linear_predictors(&[z]).unwrap();
        let via = alr_inverse(&LogRatioVector::new(eta).unwrap()).unwrap();
        for (a, b) in direct.parts().iter().zip(via.parts()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn intercept_monotonicity(coef in coefficients(), z in -3.0f64..3.0, pick in 0usize..4, bump in 0.01f64..2.0) {
        let base = model(&coef);
        let j = pick % coef.len();
        let mut bumped = base.clone();
        bumped.components[j].beta0 += bump;
        let a = estimate_proportions(&base, &[z]).unwrap();
        let b = estimate_proportions(&bumped, &[z]).unwrap();
        for i in 0..a.len() {
            if i == j {
                prop_assert!(b.parts()[i] > a.parts()[i]);
            } else {
                prop_assert!(b.parts()[i] < a.parts()[i]);
            }
        }
    }
}

#[test]
fn bootstrap_endpoints_stabilize_with_draws() {
    // Spread of endpoints across 10 seeds at B = 10^6 stays below 0.002
    // (half-width of the range).
    let fit = printed_fit().unwrap();
    let runs: Vec<Vec<(f64, f64)>> = (0..10)
        .map(|seed| {
            proportion_ci_bootstrap(&fit, &[1.0], 0.95, 1_000_000, seed)
                .unwrap()
                .intervals
        })
        .collect();
    for part in 0..4 {
        for side in 0..2 {
            let values: Vec<f64> = runs
                .iter()
                .map(|r| if side == 0 { r[part].0 } else { r[part].1 })
                .collect();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (hi - lo) / 2.0 < 0.002,
                "part {part} side {side}: {values:?}"
            );
        }
    }
}

#[test]
fn bootstrap_spread_shrinks_with_draws() {
    let fit = printed_fit().unwrap();
    let spread = |draws: usize| {
        let uppers: Vec<f64> = (0..8)
            .map(|seed| {
                proportion_ci_bootstrap(&fit, &[1.0], 0.95, draws, 100 + seed)
                    .unwrap()
                    .intervals[3]
                    .1
            })
            .collect();
        let mean = uppers.iter().sum::<f64>() / uppers.len() as f64;
        (uppers.iter().map(|u| (u - mean).powi(2)).sum::<f64>() / (uppers.len() - 1) as f64).sqrt()
    };
    let small = spread(1_000);
    let large = spread(64_000);
    // sqrt(64) = 8x fewer fluctuations expected; demand at least 3x.
    assert!(large * 3.0 < small, "{small} vs {large}");
}
