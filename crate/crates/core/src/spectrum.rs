use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ComplexVec, C64};

pub type Rational = Ratio<i128>;

/// Largest allowed `|Σ p_k − 1|` for floating-point spectra.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Schmidt probabilities `p_k` of a resource `Σ_k √p_k |k⟩|k⟩`.
///
/// Only nonzero coefficients are stored, so `len()` is the Schmidt number.
/// When the spectrum came from exact rationals they are kept alongside the
/// floating images and drive the exact-arithmetic paths.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    probs: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl SchmidtSpectrum {
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if let Some((index, &value)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::NonPositiveProbability { index, value });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SpectrumSum { sum });
        }
        Ok(Self { probs, exact: None })
    }

    pub fn from_rationals(exact: Vec<Rational>) -> Result<Self> {
        if exact.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let probs: Vec<f64> = exact.iter().map(rational_to_f64).collect();
        if let Some(index) = exact.iter().position(|r| *r <= Rational::zero()) {
            return Err(Error::NonPositiveProbability {
                index,
                value: probs[index],
            });
        }
        let sum = exact.iter().fold(Rational::zero(), |acc, r| acc + r);
        if !sum.is_one() {
            return Err(Error::SpectrumSum {
                sum: rational_to_f64(&sum),
            });
        }
        Ok(Self {
            probs,
            exact: Some(exact),
        })
    }

    /// The maximally entangled spectrum `1/n` repeated `n` times.
    pub fn uniform(n: usize) -> Self {
        let r = Rational::new(1, n as i128);
        Self::from_rationals(alloc::vec![r; n]).expect("uniform spectrum is valid")
    }

    /// Spectrum straight out of a Schmidt decomposition; the sum is only as
    /// good as the decomposition (≈1e-10).
    pub(crate) fn from_decomposition(probs: Vec<f64>) -> Self {
        Self { probs, exact: None }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    /// Schmidt number `n`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_exact(&self) -> Option<Rational> {
        self.exact.as_ref().and_then(|e| e.iter().max().copied())
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let target = 1.0 / self.len() as f64;
        self.probs.iter().all(|p| (p - target).abs() <= tol)
    }

    /// `Σ_k √p_k |k⟩|k⟩` as an `n²`-dimensional vector.
    pub fn resource_state(&self) -> ComplexVec {
        let n = self.len();
        let mut v = ComplexVec::zeros(n * n);
        for (k, p) in self.probs.iter().enumerate() {
            v[k * n + k] = C64::new(Float::sqrt(*p), 0.0);
        }
        v
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rational_spectrum_is_exact() {
        let s = SchmidtSpectrum::from_rationals(vec![Rational::new(1, 2), Rational::new(1, 3), Rational::new(1, 6)])
            .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.max_exact(), Some(Rational::new(1, 2)));
        assert_eq!(s.probs()[0], 0.5);
    }

    #[test]
    fn rational_sum_must_be_one() {
        let err = SchmidtSpectrum::from_rationals(vec![Rational::new(1, 2), Rational::new(1, 3)]).unwrap_err();
        assert!(matches!(err, Error::SpectrumSum { .. }));
    }

    #[test]
    fn zero_entries_rejected() {
        assert!(matches!(
            SchmidtSpectrum::from_probs(vec![1.0, 0.0]),
            Err(Error::NonPositiveProbability { index: 1, .. })
        ));
        assert!(matches!(SchmidtSpectrum::from_probs(vec![]), Err(Error::EmptySpectrum)));
        assert!(matches!(
            SchmidtSpectrum::from_probs(vec![0.5, 0.49]),
            Err(Error::SpectrumSum { .. })
        ));
    }

    #[test]
    fn resource_state_is_normalized() {
        let s = SchmidtSpectrum::from_probs(vec![0.4, 0.3, 0.3]).unwrap();
        let v = s.resource_state();
        assert_eq!(v.dim(), 9);
        assert!(v.is_normalized(1e-12));
        assert!(SchmidtSpectrum::uniform(4).is_uniform(0.0));
    }
}
