use crate::error::{Error, Result};
use crate::math;

/// Couplings and rates of the two-qubit/resonator system, all in one
/// inverse-time unit (ℏ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    g1: f64,
    g2: f64,
    kappa: f64,
    gamma1: f64,
    gamma2: f64,
    gamma_phi: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            expected: "a finite value > 0",
        })
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            expected: "a finite rate >= 0",
        })
    }
}

impl SystemParams {
    pub fn new(g1: f64, g2: f64, kappa: f64, gamma1: f64, gamma2: f64, gamma_phi: f64) -> Result<Self> {
        Ok(SystemParams {
            g1: check_positive("g1", g1)?,
            g2: check_positive("g2", g2)?,
            kappa: check_rate("kappa", kappa)?,
            gamma1: check_rate("gamma1", gamma1)?,
            gamma2: check_rate("gamma2", gamma2)?,
            gamma_phi: check_rate("gamma_phi", gamma_phi)?,
        })
    }

    /// `κ = Γ₁ = Γ₂ = s`, no dephasing.
    pub fn equal_decay(g1: f64, g2: f64, s: f64) -> Result<Self> {
        Self::new(g1, g2, s, s, s, 0.0)
    }

    pub fn lossless(g1: f64, g2: f64) -> Result<Self> {
        Self::equal_decay(g1, g2, 0.0)
    }

    pub fn with_dephasing(self, gamma_phi: f64) -> Result<Self> {
        Ok(SystemParams {
            gamma_phi: check_rate("gamma_phi", gamma_phi)?,
            ..self
        })
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma_phi(&self) -> f64 {
        self.gamma_phi
    }

    /// `r = √(g₁² + g₂²)`
    pub fn r(&self) -> f64 {
        math::hypot(self.g1, self.g2)
    }

    /// `max(g₁, g₂)`, the unit the integrator measures its steps in.
    pub fn g_ref(&self) -> f64 {
        self.g1.max(self.g2)
    }

    /// The common decay rate when `κ = Γ₁ = Γ₂`, regardless of dephasing.
    pub fn common_decay(&self) -> Option<f64> {
        (self.kappa == self.gamma1 && self.gamma1 == self.gamma2).then_some(self.kappa)
    }

    /// The common decay rate when the closed-form evolution applies.
    pub fn analytic_decay(&self) -> Option<f64> {
        self.common_decay().filter(|_| self.gamma_phi == 0.0)
    }

    /// First time at which the whole excitation sits on qubit 2, `π/r`,
    /// available only for `g₁ = g₂`.
    pub fn transfer_time(&self) -> Option<f64> {
        (self.g1 == self.g2).then(|| core::f64::consts::PI / self.r())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_couplings() {
        assert!(SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, -0.1, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = SystemParams::new(3.0, 4.0, 0.1, 0.1, 0.1, 0.0).unwrap();
        assert_eq!(p.r(), 5.0);
        assert_eq!(p.g_ref(), 4.0);
        assert_eq!(p.analytic_decay(), Some(0.1));
        assert_eq!(p.transfer_time(), None);
        let p = p.with_dephasing(0.2).unwrap();
        assert_eq!(p.analytic_decay(), None);
        assert_eq!(p.common_decay(), Some(0.1));
    }

    #[test]
    fn equal_coupling_transfer_time() {
        let p = SystemParams::lossless(1.0, 1.0).unwrap();
        let t = p.transfer_time().unwrap();
        assert!((t - core::f64::consts::PI / 2f64.sqrt()).abs() < 1e-15);
    }
}
