//! Standard normal quantile and density helpers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Inverse of the standard normal CDF.
///
/// Wichura's AS 241 (PPND16) rational approximations, relative accuracy
/// about 1e-16 over the whole open interval. Returns `-inf`/`+inf` at 0/1
/// and NaN outside `[0, 1]`.
pub fn normal_quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }

    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let value = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

/// Two-sided critical value `z` with `P(|Z| <= z) = level`.
pub fn two_sided_critical(level: f64) -> Result<f64> {
    check_level(level)?;
    Ok(normal_quantile(1.0 - (1.0 - level) / 2.0))
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level.is_finite() && level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLevel(level))
    }
}

/// `ln N(x; mean, sd^2)`.
pub fn normal_ln_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * (2.0 * PI).ln() - sd.ln() - 0.5 * z * z
}

/// Linear-interpolated empirical quantile (R type 7) of sorted data.
pub fn sorted_quantile(sorted: &[f64], prob: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn poly(coef: &[f64; 8], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_5,
    1.331_416_678_917_843_8e2,
    1.971_590_950_306_551_4e3,
    1.373_169_376_550_946e4,
    4.592_195_393_154_987e4,
    6.726_577_092_700_87e4,
    3.343_057_558_358_813e4,
    2.509_080_928_730_122_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091e1,
    6.871_870_074_920_579e2,
    5.394_196_021_424_751e3,
    2.121_379_430_158_659_7e4,
    3.930_789_580_009_271e4,
    2.872_908_573_572_194_3e4,
    5.226_495_278_852_545e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_5,
    4.630_337_846_156_546,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    2.417_807_251_774_506e-1,
    2.272_384_498_926_918_4e-2,
    7.745_450_142_783_414e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    6.897_673_349_851e-1,
    1.481_039_764_274_800_8e-1,
    1.519_866_656_361_645_7e-2,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    2.965_605_718_285_048_7e-1,
    2.653_218_952_657_612_4e-2,
    1.242_660_947_388_078_4e-3,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_88e-1,
    1.369_298_809_227_358e-1,
    1.487_536_129_085_061_5e-2,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_7e-15,
];

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn quantile_matches_independent_cdf() {
        // Round-trip through an independent CDF implementation.
        let n = Normal::new(0.0, 1.0).unwrap();
        let mut p = 1e-300_f64;
        while p < 1.0 {
            let x = normal_quantile(p);
            let back = n.cdf(x);
            assert!(
                (back - p).abs() <= 1e-9 * p.min(1.0 - p).max(1e-300) + 1e-15,
                "p={p} x={x} cdf={back}"
            );
            p = if p < 0.01 { p * 3.7 } else { p + 0.0037 };
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(normal_quantile(0.5), 0.0);
        assert!((normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-14);
        assert!((normal_quantile(0.025) + 1.959_963_984_540_054).abs() < 1e-14);
        assert!((normal_quantile(0.995) - 2.575_829_303_548_901).abs() < 1e-14);
        assert!((normal_quantile(1e-10) + 6.361_340_902_404_056).abs() < 1e-12);
        assert_eq!(normal_quantile(0.0), f64::NEG_INFINITY);
        assert_eq!(normal_quantile(1.0), f64::INFINITY);
        assert!(normal_quantile(1.5).is_nan());
    }

    #[test]
    fn critical_values() {
        assert!((two_sided_critical(0.95).unwrap() - 1.959_963_984_540_054).abs() < 1e-14);
        assert!(two_sided_critical(0.90).unwrap() < two_sided_critical(0.95).unwrap());
        for bad in [0.0, 1.0, -0.1, 1.2, f64::NAN] {
            assert!(matches!(
                two_sided_critical(bad),
                Err(Error::InvalidLevel(_))
            ));
        }
    }

    #[test]
    fn ln_pdf_at_mean() {
        assert!((normal_ln_pdf(0.0, 0.0, 1.0) + 0.5 * (2.0 * PI).ln()).abs() < 1e-15);
        let n = Normal::new(1.0, 2.0).unwrap();
        use statrs::distribution::Continuous;
        assert!((normal_ln_pdf(0.3, 1.0, 2.0) - n.ln_pdf(0.3)).abs() < 1e-14);
    }

    #[test]
    fn type7_quantile() {
        let data = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(sorted_quantile(&data, 0.0), 1.0);
        assert_eq!(sorted_quantile(&data, 1.0), 5.0);
        assert_eq!(sorted_quantile(&data, 0.5), 3.0);
        assert!((sorted_quantile(&data, 0.1) - 1.4).abs() < 1e-15);
    }
}
