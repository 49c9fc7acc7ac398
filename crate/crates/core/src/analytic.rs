//! Closed-form evolution of the post-measurement state for equal decay rates
//! `κ = Γ₁ = Γ₂ = s` and no dephasing.
//!
//! With equal rates the non-Hermitian no-jump generator is `H − i(s/2)P`,
//! where `P` projects on the excited manifold and commutes with `H`, so the
//! excited amplitudes follow the lossless exchange dynamics damped by
//! `e^{−st/2}`. Every jump ends in `|1⟩`, which makes the density matrix the
//! no-jump outer product plus the lost weight on `ρ₁₁`.

use crate::error::{Error, Result};
use crate::math;
use crate::measurement::MeasurementStrength;
use crate::system::{DensityMatrix, Matrix4, PureState4, QubitAmplitudes, SystemParams, C64, I};

/// Inputs of the closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticInputs {
    pub qubit: QubitAmplitudes,
    pub p: MeasurementStrength,
    pub s: f64,
    pub g1: f64,
    pub g2: f64,
}

/// Coefficients of the post-measurement state: `a = α²/N₁²`,
/// `b = |β|²(1−p)/N₁²`, `c = αβ*√(1−p)/N₁²` with `N₁² = α² + |β|²(1−p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: C64,
    pub n1_sqr: f64,
}

/// Lossless exchange amplitudes of `e^{−iHt}|2⟩` on `|2⟩, |3⟩, |4⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Exchange {
    c2: f64,
    c3: C64,
    c4: f64,
}

impl AnalyticInputs {
    pub fn new(qubit: QubitAmplitudes, p: MeasurementStrength, s: f64, g1: f64, g2: f64) -> Result<Self> {
        if !p.is_reversible() {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p.value(),
                expected: "a strength in [0, 1)",
            });
        }
        let params = SystemParams::equal_decay(g1, g2, s)?;
        Ok(AnalyticInputs {
            qubit,
            p,
            s: params.kappa(),
            g1: params.g1(),
            g2: params.g2(),
        })
    }

    /// Uses `params` when they admit the closed form.
    pub fn from_params(qubit: QubitAmplitudes, p: MeasurementStrength, params: &SystemParams) -> Result<Self> {
        let s = params.analytic_decay().ok_or(Error::AnalyticUnavailable)?;
        Self::new(qubit, p, s, params.g1(), params.g2())
    }

    pub fn coefficients(&self) -> StateCoefficients {
        let alpha = self.qubit.alpha();
        let beta = self.qubit.beta();
        let pbar = self.p.complement();
        let n1_sqr = alpha * alpha + beta.norm_sqr() * pbar;
        StateCoefficients {
            a: alpha * alpha / n1_sqr,
            b: beta.norm_sqr() * pbar / n1_sqr,
            c: beta.conj() * (alpha * math::sqrt(pbar) / n1_sqr),
            n1_sqr,
        }
    }

    pub fn r(&self) -> f64 {
        math::hypot(self.g1, self.g2)
    }

    fn exchange(&self, t: f64) -> Exchange {
        let (g1, g2, r) = (self.g1, self.g2, self.r());
        let (sin, cos) = math::sin_cos(r * t);
        Exchange {
            c2: (g1 * g1 * cos + g2 * g2) / (r * r),
            c3: I * (-g1 / r * sin),
            c4: g1 * g2 * (cos - 1.0) / (r * r),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            value: t,
            expected: "a finite time >= 0",
        })
    }
}

/// Density matrix at time `t` from the closed-form entries.
pub fn analytic_rho(inputs: &AnalyticInputs, t: f64) -> Result<DensityMatrix> {
    check_time(t)?;
    let StateCoefficients { a, b, c, .. } = inputs.coefficients();
    let (g1, g2, r) = (inputs.g1, inputs.g2, inputs.r());
    let (g1s, g2s) = (g1 * g1, g2 * g2);
    let (r2, r3, r4) = (r * r, r * r * r, r * r * r * r);
    let (sin1, cos1) = math::sin_cos(r * t);
    let (sin2, cos2) = math::sin_cos(2.0 * r * t);
    let decay = math::exp(-inputs.s * t);
    let half_decay = math::exp(-0.5 * inputs.s * t);
    let c2 = inputs.exchange(t).c2;

    let rho11 = 1.0 + (a - 1.0) * decay;
    let rho12 = c * ((g1s * cos1 + g2s) / r2 * half_decay);
    let rho13 = c * I * (g1 / r * sin1 * half_decay);
    let rho14 = c * (g1 * g2 / r2 * (cos1 - 1.0) * half_decay);
    let rho22 = b * c2 * c2 * decay;
    let rho23 = I * (b * g1 / (2.0 * r3) * (g1s * sin2 + 2.0 * g2s * sin1) * decay);
    let rho24 = b * g1 * g2 / (2.0 * r4)
        * (g1s - 2.0 * g2s + 2.0 * (g2s - g1s) * cos1 + g1s * cos2)
        * decay;
    let rho33 = b * g1s / (2.0 * r2) * (1.0 - cos2) * decay;
    let rho34 = I * (b * g1s * g2 / (2.0 * r3) * (2.0 * sin1 - sin2) * decay);
    let rho44 = b * g1s * g2s / (2.0 * r4) * (cos2 - 4.0 * cos1 + 3.0) * decay;

    let upper = [
        (0, 1, rho12),
        (0, 2, rho13),
        (0, 3, rho14),
        (1, 2, rho23),
        (1, 3, C64::new(rho24, 0.0)),
        (2, 3, rho34),
    ];
    let mut m = Matrix4::from_diagonal([rho11, rho22, rho33, rho44]);
    for (i, j, z) in upper {
        m[(i, j)] = z;
        m[(j, i)] = z.conj();
    }
    Ok(DensityMatrix::unchecked(m))
}

/// Sub-normalized no-jump trajectory: `α/N₁` on `|1⟩` and
/// `(β√(1−p)/N₁)·c_k(t)·e^{−st/2}` on the excited states.
pub fn nojump_amplitudes(inputs: &AnalyticInputs, t: f64) -> Result<PureState4> {
    check_time(t)?;
    let n1 = math::sqrt(inputs.coefficients().n1_sqr);
    let excited = inputs.qubit.beta() * (math::sqrt(inputs.p.complement()) / n1 * math::exp(-0.5 * inputs.s * t));
    let ex = inputs.exchange(t);
    Ok(PureState4::unchecked([
        C64::new(inputs.qubit.alpha() / n1, 0.0),
        excited * ex.c2,
        excited * ex.c3,
        excited * ex.c4,
    ]))
}

/// Outer product of the no-jump state with the missing weight put on
/// `ρ₁₁`; equals the full master-equation solution for equal rates.
pub fn nojump_density(inputs: &AnalyticInputs, t: f64) -> Result<Matrix4> {
    let psi = nojump_amplitudes(inputs, t)?;
    let mut m = psi.outer();
    m[(0, 0)] += 1.0 - psi.norm_sqr();
    Ok(m)
}
