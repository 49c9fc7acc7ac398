//! The end-to-end transfer protocol: prepare `(α|0⟩₁ + β|1⟩₁)|0⟩₂|0⟩_c`,
//! partially measure qubit 1, let the system evolve, then reverse on qubit 2
//! and apply `σ₂ᶻ`. Fidelity is taken against `|0⟩₁(α|0⟩₂ + β|1⟩₂)|0⟩_c`.

use alloc::vec::Vec;

use crate::analytic::{analytic_rho, nojump_amplitudes, AnalyticInputs};
use crate::error::{Error, Result};
use crate::lindblad::{integrate, IntegratorConfig};
use crate::math;
use crate::measurement::{
    apply_measurement_qubit1, apply_reversal_qubit2_with, MeasurementStrength, PartialMeasurement,
    PostSelectedState,
};
use crate::search::{grid_then_golden, select_max, Maximum};
use crate::system::{
    embed_qubit2_op, sigma_z_qubit2, DensityMatrix, PureState4, QubitAmplitudes, SystemParams,
};

/// How the reversal strength is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QRule {
    /// `q = 1 − (1−p)e^{−st}`
    Formula,
    Fixed(MeasurementStrength),
    /// Maximize the fidelity over `q` at the transfer time.
    NumericOptimal(QSearch),
}

/// Which solver evolves the state between the two measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    Analytic,
    Numeric(IntegratorConfig),
}

impl Engine {
    /// Closed form when the parameters allow it, integrator otherwise.
    pub fn auto(params: &SystemParams) -> Engine {
        if params.analytic_decay().is_some() {
            Engine::Analytic
        } else {
            Engine::Numeric(IntegratorConfig::default())
        }
    }
}

/// Grid-plus-golden-section settings for [`optimize_q`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSearch {
    pub grid_points: usize,
    pub q_tolerance: f64,
}

impl Default for QSearch {
    fn default() -> Self {
        QSearch {
            grid_points: 1000,
            q_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub qubit: QubitAmplitudes,
    pub params: SystemParams,
    pub p: MeasurementStrength,
    pub q_rule: QRule,
    pub transfer_time: f64,
    pub engine: Engine,
    /// Apply the `σ₂ᶻ` phase fix after the reversal.
    pub sigma_z: bool,
}

impl ProtocolSpec {
    pub fn new(
        qubit: QubitAmplitudes,
        params: SystemParams,
        p: MeasurementStrength,
        q_rule: QRule,
        transfer_time: f64,
        engine: Engine,
    ) -> Result<Self> {
        let spec = ProtocolSpec {
            qubit,
            params,
            p,
            q_rule,
            transfer_time,
            engine,
            sigma_z: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_reversible() {
            return Err(Error::InvalidParameter {
                name: "p",
                value: self.p.value(),
                expected: "a strength in [0, 1)",
            });
        }
        if !(self.transfer_time.is_finite() && self.transfer_time >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "transfer time",
                value: self.transfer_time,
                expected: "a finite time >= 0",
            });
        }
        if self.engine == Engine::Analytic && self.params.analytic_decay().is_none() {
            return Err(Error::AnalyticUnavailable);
        }
        if let QRule::Fixed(q) = self.q_rule {
            if !q.is_reversible() {
                return Err(Error::DegenerateReversal);
            }
        }
        if self.q_rule == QRule::Formula && self.params.common_decay().is_none() {
            return Err(Error::FormulaUnavailable);
        }
        Ok(())
    }

    pub fn at_time(self, transfer_time: f64) -> Self {
        ProtocolSpec { transfer_time, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOutcome {
    pub fidelity: f64,
    /// Probability of the whole post-selected record: pre-measurement branch
    /// times reversal branch.
    pub success_probability: f64,
    /// `P = 1 − q + q·ρ₄₄`, the reversal branch alone.
    pub reversal_success: f64,
    /// `N₁² = α² + |β|²(1−p)`, the pre-measurement branch alone.
    pub premeasure_success: f64,
    pub q_used: MeasurementStrength,
    pub final_state: DensityMatrix,
}

/// `q = 1 − (1−p)e^{−st}`, computed through its complement.
pub fn q_formula(p: MeasurementStrength, s: f64, t: f64) -> Result<MeasurementStrength> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "s*t",
            value: s * t,
            expected: "s >= 0 and t >= 0",
        });
    }
    MeasurementStrength::from_complement(p.complement() * math::exp(-s * t))
}

/// State right after the no-tunnel pre-measurement on qubit 1.
pub fn prepare(qubit: &QubitAmplitudes, p: MeasurementStrength) -> Result<PostSelectedState> {
    let rho0 = DensityMatrix::from_pure(&qubit.initial_state())?;
    apply_measurement_qubit1(&rho0, p)
}

/// Evolved (pre-reversal) states at each of `times` (sorted, strictly
/// increasing) for the selected engine.
pub fn evolve_at(spec: &ProtocolSpec, premeasured: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
    match spec.engine {
        Engine::Analytic => {
            let inputs = AnalyticInputs::from_params(spec.qubit, spec.p, &spec.params)?;
            times.iter().map(|&t| analytic_rho(&inputs, t)).collect()
        }
        Engine::Numeric(config) => {
            let last = times.last().copied().unwrap_or(0.0) * spec.params.g_ref();
            let config = IntegratorConfig {
                max_time: config.max_time.max(last),
                ..config
            };
            Ok(integrate(&spec.params, premeasured, &config, times)?.states)
        }
    }
}

/// Reversal strength `spec.q_rule` yields for an evolved state.
fn resolve_q(spec: &ProtocolSpec, evolved: &DensityMatrix) -> Result<MeasurementStrength> {
    match spec.q_rule {
        QRule::Formula => {
            let s = spec.params.common_decay().ok_or(Error::FormulaUnavailable)?;
            q_formula(spec.p, s, spec.transfer_time)
        }
        QRule::Fixed(q) => Ok(q),
        QRule::NumericOptimal(search) => {
            let formula = formula_candidate(spec);
            Ok(maximize_q(spec, evolved, &search, formula)?.0)
        }
    }
}

fn formula_candidate(spec: &ProtocolSpec) -> Option<MeasurementStrength> {
    let s = spec.params.common_decay()?;
    q_formula(spec.p, s, spec.transfer_time).ok()
}

/// Reversal, phase fix and scoring of one evolved state.
pub fn finish(
    spec: &ProtocolSpec,
    evolved: &DensityMatrix,
    premeasure_success: f64,
    q: MeasurementStrength,
) -> Result<ProtocolOutcome> {
    let reversed = apply_reversal_qubit2_with(evolved, q, spec.sigma_z)?;
    let target = spec.qubit.target_state();
    Ok(ProtocolOutcome {
        fidelity: reversed.state.expectation(&target),
        success_probability: premeasure_success * reversed.success_probability,
        reversal_success: reversed.success_probability,
        premeasure_success,
        q_used: q,
        final_state: reversed.state,
    })
}

/// Completes the spec for an already evolved state, resolving `q` by its rule.
pub fn finish_with_rule(spec: &ProtocolSpec, evolved: &DensityMatrix, premeasure_success: f64) -> Result<ProtocolOutcome> {
    let q = resolve_q(spec, evolved)?;
    finish(spec, evolved, premeasure_success, q)
}

pub fn run_protocol(spec: &ProtocolSpec) -> Result<ProtocolOutcome> {
    spec.validate()?;
    let pre = prepare(&spec.qubit, spec.p)?;
    let evolved = evolve_at(spec, &pre.state, &[spec.transfer_time])?
        .pop()
        .ok_or(Error::InvalidGrid("no transfer time"))?;
    finish_with_rule(spec, &evolved, pre.success_probability)
}

fn maximize_q(
    spec: &ProtocolSpec,
    evolved: &DensityMatrix,
    search: &QSearch,
    formula: Option<MeasurementStrength>,
) -> Result<(MeasurementStrength, f64)> {
    if search.grid_points < 2 || !(search.q_tolerance > 0.0) {
        return Err(Error::InvalidGrid("q search needs >= 2 points and a positive tolerance"));
    }
    let target = spec.qubit.target_state();
    let fidelity = |q: MeasurementStrength| -> f64 {
        apply_reversal_qubit2_with(evolved, q, spec.sigma_z)
            .map(|r| r.state.expectation(&target))
            .unwrap_or(f64::NAN)
    };
    let n = search.grid_points;
    let mut grid: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    grid.push(1.0 - 1e-12);
    let eval = |q: f64| MeasurementStrength::new(q).map(fidelity).unwrap_or(f64::NAN);
    let refined = grid_then_golden(eval, &grid, search.q_tolerance).ok_or(Error::InvalidGrid("empty q grid"))?;

    // Candidates keyed by q; the formula candidate keeps its exact complement.
    let mut best = (MeasurementStrength::new(refined.x)?, refined.value);
    if let Some(qf) = formula {
        let ff = fidelity(qf);
        let pick = select_max([
            Maximum { x: refined.x, value: refined.value },
            Maximum { x: qf.value(), value: ff },
        ]);
        if let Some(m) = pick {
            if m.x == qf.value() && m.value == ff {
                best = (qf, ff);
            }
        }
    }
    Ok(best)
}

/// Best reversal strength at `spec.transfer_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QOptimum {
    pub q: MeasurementStrength,
    pub fidelity: f64,
    pub outcome: ProtocolOutcome,
}

/// Maximizes the fidelity over `q ∈ [0, 1)`; `spec.q_rule` is ignored.
/// Ties within 1e-12 go to the smallest `q`.
pub fn optimize_q(spec: &ProtocolSpec, search: &QSearch) -> Result<QOptimum> {
    let spec = ProtocolSpec {
        q_rule: QRule::NumericOptimal(*search),
        ..*spec
    };
    spec.validate()?;
    let pre = prepare(&spec.qubit, spec.p)?;
    let evolved = evolve_at(&spec, &pre.state, &[spec.transfer_time])?
        .pop()
        .ok_or(Error::InvalidGrid("no transfer time"))?;
    let (q, fidelity) = maximize_q(&spec, &evolved, search, formula_candidate(&spec))?;
    let outcome = finish(&spec, &evolved, pre.success_probability, q)?;
    Ok(QOptimum { q, fidelity, outcome })
}

/// Three-step no-jump state (pre-measurement, no-jump evolution to
/// `t = π/(√2 g)`, reversal plus `σ₂ᶻ`), left unnormalized.
///
/// The global sign is fixed so the ground amplitude carries the sign of `α`:
/// `α√(1−q)|1⟩ + β√(1−p)e^{−st/2}|4⟩`.
pub fn nojump_protocol_oracle(
    qubit: &QubitAmplitudes,
    p: MeasurementStrength,
    q: MeasurementStrength,
    s: f64,
    g: f64,
    t: f64,
) -> Result<PureState4> {
    let expected = core::f64::consts::PI / (core::f64::consts::SQRT_2 * g);
    if !(math::abs(t - expected) <= 1e-9 * expected.max(1.0)) {
        return Err(Error::NotTransferTime { time: t, expected });
    }
    if !q.is_reversible() {
        return Err(Error::DegenerateReversal);
    }
    let inputs = AnalyticInputs::new(*qubit, p, s, g, g)?;
    // undo the 1/N₁ of the normalized no-jump branch
    let n1 = math::sqrt(inputs.coefficients().n1_sqr);
    let evolved = nojump_amplitudes(&inputs, t)?.amplitudes().map(|z| z * n1);
    let reversal = sigma_z_qubit2() * embed_qubit2_op(&PartialMeasurement::new(q).flipped_no_tunnel());
    let out = reversal.apply(&evolved).map(|z| -z);
    Ok(PureState4::unchecked(out))
}
