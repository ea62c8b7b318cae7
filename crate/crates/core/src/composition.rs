//! Points on the simplex, closure, and the additive log-ratio transform.
//!
//! The reference (denominator) part is always the last one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `sum(parts) == 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Log-ratios beyond this magnitude are rejected by [`alr_inverse`].
pub const OVERFLOW_GUARD: f64 = 700.0;

/// A vector of strictly positive parts that sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    parts: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

impl Composition {
    /// Wraps already-closed parts, checking every invariant.
    pub fn new(parts: Vec<f64>) -> Result<Self> {
        check_parts(&parts)?;
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotClosed { sum });
        }
        Ok(Self {
            parts,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.parts.len() {
            return Err(Error::DimensionMismatch {
                what: "part labels",
                expected: self.parts.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn parts(&self) -> &[f64] {
        &self.parts
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of parts, `G`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn into_parts(self) -> Vec<f64> {
        self.parts
    }
}

/// The ALR image of a composition: `G - 1` log-ratios against the last part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRatioVector {
    values: Vec<f64>,
}

impl LogRatioVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionTooSmall { len: 1 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// 1-based index of the denominator part (always `G`).
    pub fn ref_index(&self) -> usize {
        self.values.len() + 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_parts(parts: &[f64]) -> Result<()> {
    if parts.len() < 2 {
        return Err(Error::DimensionTooSmall { len: parts.len() });
    }
    for (index, &value) in parts.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value <= 0.0 {
            return Err(Error::NonPositivePart { index, value });
        }
    }
    Ok(())
}

/// Divides positive raw amounts by their total.
pub fn closure(raw: &[f64]) -> Result<Composition> {
    check_parts(raw)?;
    let total: f64 = raw.iter().sum();
    if !total.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    let parts = raw.iter().map(|v| v / total).collect();
    Ok(Composition {
        parts,
        labels: None,
    })
}

/// `y_j = ln(x_j / x_G)` for `j = 1..G-1`.
pub fn alr(c: &Composition) -> LogRatioVector {
    let (reference, rest) = c.parts.split_last().expect("composition has >= 2 parts");
    let values = rest.iter().map(|x| (x / reference).ln()).collect();
    LogRatioVector { values }
}

/// Inverse of [`alr`]: `x_j = e^{y_j} / (1 + sum e^{y_k})`, `x_G = 1 / (1 + sum e^{y_k})`.
pub fn alr_inverse(y: &LogRatioVector) -> Result<Composition> {
    inverse_from_values(&y.values)
}

pub(crate) fn inverse_from_values(values: &[f64]) -> Result<Composition> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value.abs() > OVERFLOW_GUARD {
            return Err(Error::OverflowGuard { index, value });
        }
    }
    // Shift by the largest exponent (the reference contributes 0).
    let shift = values.iter().copied().fold(0.0_f64, f64::max);
    let mut parts: Vec<f64> = values.iter().map(|v| (v - shift).exp()).collect();
    parts.push((-shift).exp());
    let total: f64 = parts.iter().sum();
    for p in &mut parts {
        *p /= total;
    }
    if let Some(index) = parts.iter().position(|&p| p <= 0.0) {
        // Underflow: a part is positive mathematically but below f64 range.
        return Err(Error::NonPositivePart {
            index,
            value: parts[index],
        });
    }
    Ok(Composition {
        parts,
        labels: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn assert_slice_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
    }

    #[test]
    fn closure_examples() {
        let c = closure(&[48.00, 12.00, 2.67, 37.33]).unwrap();
        assert_slice_close(c.parts(), &[0.48, 0.12, 0.0267, 0.3733], 1e-12);
        let c = closure(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_slice_close(c.parts(), &[0.25; 4], 0.0);
        let c = closure(&[2.0, 3.0, 5.0]).unwrap();
        assert_slice_close(c.parts(), &[0.2, 0.3, 0.5], 1e-15);
    }

    #[test]
    fn closure_errors() {
        assert_eq!(
            closure(&[1.0, 0.0, 2.0]),
            Err(Error::NonPositivePart {
                index: 1,
                value: 0.0
            })
        );
        assert!(matches!(
            closure(&[1.0, -3.0]),
            Err(Error::NonPositivePart { index: 1, .. })
        ));
        assert_eq!(closure(&[1.0]), Err(Error::DimensionTooSmall { len: 1 }));
        assert_eq!(closure(&[]), Err(Error::DimensionTooSmall { len: 0 }));
        assert!(matches!(
            closure(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn new_checks_sum() {
        assert!(Composition::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            Composition::new(vec![0.5, 0.6]),
            Err(Error::NotClosed { .. })
        ));
        assert!(Composition::new(vec![0.5, 0.5])
            .unwrap()
            .with_labels(vec!["a".into()])
            .is_err());
    }

    #[test]
    fn alr_examples() {
        let y = alr(&closure(&[1.0; 4]).unwrap());
        assert_eq!(y.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(y.ref_index(), 4);

        let y = alr(&Composition::new(vec![0.50, 0.15, 0.05, 0.30]).unwrap());
        assert_slice_close(
            y.values(),
            &[
                0.5108256237659907,
                -std::f64::consts::LN_2,
                -1.791759469228055,
            ],
            1e-12,
        );

        let y = alr(&closure(&[48.00, 12.00, 2.67, 37.33]).unwrap());
        assert_slice_close(
            y.values(),
            &[
                0.25140371798139843,
                -1.1348906431384922,
                -2.6377188205143343,
            ],
            1e-12,
        );
    }

    #[test]
    fn alr_inverse_examples() {
        let c = alr_inverse(&LogRatioVector::new(vec![0.0; 3]).unwrap()).unwrap();
        assert_slice_close(c.parts(), &[0.25; 4], 1e-15);

        let c = alr_inverse(&LogRatioVector::new(vec![0.468, -1.168, -2.072]).unwrap()).unwrap();
        assert_slice_close(c.parts(), &[0.526, 0.102, 0.041, 0.330], 1e-3);
    }

    #[test]
    fn alr_inverse_overflow_guard() {
        let y = LogRatioVector::new(vec![0.0, 700.5]).unwrap();
        assert_eq!(
            alr_inverse(&y),
            Err(Error::OverflowGuard {
                index: 1,
                value: 700.5
            })
        );
        // Inside the guard, but the smallest part underflows f64.
        let c = alr_inverse(&LogRatioVector::new(vec![700.0, -700.0]).unwrap());
        assert!(matches!(c, Err(Error::NonPositivePart { index: 1, .. })));
        let c = alr_inverse(&LogRatioVector::new(vec![700.0, 650.0]).unwrap()).unwrap();
        assert!(c.parts().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn log_ratio_vector_rejects_non_finite() {
        assert!(matches!(
            LogRatioVector::new(vec![0.0, f64::INFINITY]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    fn raw_parts() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-3f64..1e3, 2..8)
    }

    proptest! {
        #[test]
        fn round_trip(raw in raw_parts()) {
            let c = closure(&raw).unwrap();
            let back = alr_inverse(&alr(&c)).unwrap();
            for (a, b) in c.parts().iter().zip(back.parts()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn closure_scale_invariant(raw in raw_parts(), k in 1e-6f64..1e6) {
            let scaled: Vec<f64> = raw.iter().map(|v| v * k).collect();
            let a = closure(&raw).unwrap();
            let b = closure(&scaled).unwrap();
            for (x, y) in a.parts().iter().zip(b.parts()) {
                prop_assert!((x - y).abs() <= 1e-14);
            }
        }

        #[test]
        fn inverse_is_closed(values in prop::collection::vec(-50f64..50.0, 1..8)) {
            let c = alr_inverse(&LogRatioVector::new(values).unwrap()).unwrap();
            let sum: f64 = c.parts().iter().sum();
            prop_assert!((sum - 1.0).abs() <= SUM_TOLERANCE);
            prop_assert!(Composition::new(c.into_parts()).is_ok());
        }

        #[test]
        fn swapping_parts_swaps_ratios(raw in prop::collection::vec(1e-3f64..1e3, 3..8), i in 0usize..8, j in 0usize..8) {
            let g = raw.len() - 1;
            let (i, j) = (i % g, j % g);
            let mut swapped = raw.clone();
            swapped.swap(i, j);
            let a = alr(&closure(&raw).unwrap());
            let b = alr(&closure(&swapped).unwrap());
            let mut expected = a.values().to_vec();
            expected.swap(i, j);
            for (x, y) in expected.iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}
