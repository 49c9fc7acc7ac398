//! Numerical integration of the master equation
//! `dρ/dt = −i[H, ρ] + Σ D[L](ρ)` with resonator loss, qubit emission and
//! optional pure dephasing.
//!
//! Stepping is classical fourth-order Runge–Kutta with a step-doubling error
//! estimate. The step never exceeds the configured size, shrinks when the
//! estimate is above tolerance, and is truncated so that every requested
//! sample time is hit exactly.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::system::{collapse_operators, hamiltonian, CollapseOperator, DensityMatrix, Matrix4, SystemParams, I};

/// Step controls, with times in units of `1/g_ref`, `g_ref = max(g₁, g₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Largest step taken.
    pub step_size: f64,
    /// Target local error per step (max-abs entry of the step-doubling
    /// difference).
    pub tolerance: f64,
    /// End of the integration window.
    pub max_time: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step_size: 0.005,
            tolerance: 1e-10,
            max_time: 20.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("step_size", self.step_size),
            ("tolerance", self.tolerance),
            ("max_time", self.max_time),
        ];
        for (name, value) in checks {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    expected: "a finite value > 0",
                });
            }
        }
        Ok(())
    }
}

/// States sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(&self.states)
    }
}

/// Master-equation generator with the Hamiltonian and jump operators
/// assembled once.
#[derive(Debug, Clone)]
pub struct Generator {
    hamiltonian: Matrix4,
    channels: Vec<CollapseOperator>,
}

impl Generator {
    pub fn new(params: &SystemParams) -> Self {
        Generator {
            hamiltonian: hamiltonian(params),
            channels: collapse_operators(params),
        }
    }

    pub fn rhs(&self, rho: &Matrix4) -> Matrix4 {
        let coherent = self.hamiltonian.commutator(rho).scale(-I);
        self.channels
            .iter()
            .fold(coherent, |acc, op| acc + op.dissipator(rho))
    }

    fn rk4(&self, rho: &Matrix4, h: f64) -> Matrix4 {
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(*rho + k1.scale_real(0.5 * h)));
        let k3 = self.rhs(&(*rho + k2.scale_real(0.5 * h)));
        let k4 = self.rhs(&(*rho + k3.scale_real(h)));
        let incr = k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4;
        *rho + incr.scale_real(h / 6.0)
    }
}

/// `dρ/dt` for the given parameters.
pub fn lindblad_rhs(params: &SystemParams, rho: &DensityMatrix) -> Matrix4 {
    Generator::new(params).rhs(rho.matrix())
}

/// Integrates from `rho0` at `t = 0` and records the state at each of
/// `sample_times` (absolute time units, sorted, strictly increasing, inside
/// `[0, max_time/g_ref]`).
pub fn integrate(
    params: &SystemParams,
    rho0: &DensityMatrix,
    config: &IntegratorConfig,
    sample_times: &[f64],
) -> Result<Trajectory> {
    config.validate()?;
    let unit = 1.0 / params.g_ref();
    let t_end = config.max_time * unit;
    let mut prev = f64::NEG_INFINITY;
    for &t in sample_times {
        if !(t >= 0.0 && t <= t_end * (1.0 + 1e-12)) {
            return Err(Error::InvalidGrid("sample time outside [0, max_time]"));
        }
        if t <= prev {
            return Err(Error::InvalidGrid("sample times must be strictly increasing"));
        }
        prev = t;
    }

    let generator = Generator::new(params);
    let h_max = config.step_size * unit;
    let h_min = 1e-12 * unit;
    let tol = config.tolerance;

    let mut rho = *rho0.matrix();
    let mut t = 0.0;
    let mut h = h_max;
    let mut states = Vec::with_capacity(sample_times.len());

    for &target in sample_times {
        while t < target {
            let remaining = target - t;
            // Land exactly on the sample when the remainder is within a hair
            // of the trial step.
            let step = if remaining <= h * (1.0 + 1e-9) { remaining } else { h };
            let full = generator.rk4(&rho, step);
            let half = generator.rk4(&rho, 0.5 * step);
            let double = generator.rk4(&half, 0.5 * step);
            let err = double.max_abs_diff(&full) / 15.0;
            if err <= tol || step <= h_min {
                if err > tol {
                    return Err(Error::StepSizeUnderflow { time: t, step });
                }
                rho = double.hermitian_part();
                t = if step == remaining { target } else { t + step };
                let grow = if err == 0.0 { 2.0 } else { 0.9 * math::pow(tol / err, 0.2) };
                // Only grow from a full step; truncated landing steps say
                // nothing about the sustainable size.
                if step == h {
                    h = (h * grow.min(2.0)).min(h_max);
                }
            } else {
                let shrink = 0.9 * math::pow(tol / err, 0.2);
                h = step * shrink.clamp(0.1, 0.9);
                if h < h_min {
                    return Err(Error::StepSizeUnderflow { time: t, step: h });
                }
            }
        }
        states.push(DensityMatrix::unchecked(rho));
    }

    Ok(Trajectory {
        times: sample_times.to_vec(),
        states,
    })
}
