use crate::error::{Error, Result};
use crate::math;

use super::basis::BasisIndex;
use super::matrix::{C64, ZERO};
use super::state::PureState4;

/// `α|0⟩ + β|1⟩` with real `α` and `α² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitAmplitudes {
    alpha: f64,
    beta: C64,
}

impl QubitAmplitudes {
    pub fn new(alpha: f64, beta: C64) -> Result<Self> {
        let norm = alpha * alpha + beta.norm_sqr();
        if !norm.is_finite() || math::abs(norm - 1.0) > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "alpha^2 + |beta|^2",
                value: norm,
                expected: "1 within 1e-12",
            });
        }
        Ok(QubitAmplitudes { alpha, beta })
    }

    /// Rescales `(α, β)` to unit norm; rounded inputs such as
    /// `0.7071, 0.7071` are accepted this way.
    pub fn normalized(alpha: f64, beta: C64) -> Result<Self> {
        let norm = math::sqrt(alpha * alpha + beta.norm_sqr());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha^2 + |beta|^2",
                value: norm * norm,
                expected: "a finite non-zero norm",
            });
        }
        Self::new(alpha / norm, beta / norm)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// Initial composite state `(α|0⟩₁ + β|1⟩₁)|0⟩₂|0⟩_c`.
    pub fn initial_state(&self) -> PureState4 {
        self.on(BasisIndex::Qubit1)
    }

    /// Target composite state `|0⟩₁(α|0⟩₂ + β|1⟩₂)|0⟩_c`.
    pub fn target_state(&self) -> PureState4 {
        self.on(BasisIndex::Qubit2)
    }

    fn on(&self, excited: BasisIndex) -> PureState4 {
        let mut a = [ZERO; 4];
        a[BasisIndex::Ground.slot()] = C64::new(self.alpha, 0.0);
        a[excited.slot()] = self.beta;
        PureState4::unchecked(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_and_normalization() {
        assert!(QubitAmplitudes::new(0.6, C64::new(0.8, 0.0)).is_ok());
        assert!(QubitAmplitudes::new(0.7, C64::new(0.7, 0.0)).is_err());
        let q = QubitAmplitudes::normalized(0.7, C64::new(0.7, 0.0)).unwrap();
        assert!((q.alpha() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(QubitAmplitudes::normalized(0.0, ZERO).is_err());
    }

    #[test]
    fn composite_states() {
        let q = QubitAmplitudes::new(0.6, C64::new(0.0, 0.8)).unwrap();
        let init = q.initial_state();
        let target = q.target_state();
        assert_eq!(init.amplitude(BasisIndex::Qubit1), C64::new(0.0, 0.8));
        assert_eq!(target.amplitude(BasisIndex::Qubit2), C64::new(0.0, 0.8));
        assert!((init.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((init.inner(&target).re - 0.36).abs() < 1e-15);
    }
}
