//! Parameter sweeps over time, decay rate and dephasing rate.
//!
//! Axis values are dimensionless: `g_ref·t` for time sweeps and `s/g_ref`
//! for decay sweeps. Points are evaluated sequentially in axis order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lindblad::IntegratorConfig;
use crate::math;
use crate::measurement::MeasurementStrength;
use crate::protocol::{evolve_at, finish_with_rule, prepare, Engine, ProtocolOutcome, ProtocolSpec, QRule};
use crate::search::refine_best;
use crate::system::{QubitAmplitudes, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Axis definition, `points` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let grid = Grid { start, stop, points, spacing };
        grid.validate()?;
        Ok(grid)
    }

    pub fn linear(start: f64, stop: f64, points: usize) -> Result<Self> {
        Grid::new(start, stop, points, Spacing::Linear)
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Result<Self> {
        Grid::new(start, stop, points, Spacing::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidGrid("need at least 2 points"));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidGrid("need finite start < stop"));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0) {
            return Err(Error::InvalidGrid("log spacing needs start > 0"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    return self.stop;
                }
                let u = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + u * (self.stop - self.start),
                    Spacing::Log => self.start * math::pow(self.stop / self.start, u),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Time,
    Decay,
    Dephasing,
}

impl SweepKind {
    pub fn axis_name(&self) -> &'static str {
        match self {
            SweepKind::Time | SweepKind::Dephasing => "gt",
            SweepKind::Decay => "s/g",
        }
    }
}

/// The unmeasured reference curve: `p = q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Baseline {
    pub sigma_z: bool,
}

/// Coarse-then-golden search over the reversal time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSearch {
    /// Window end in units of `1/g_ref`; `None` means `4π/(r/g_ref)`.
    pub t_max: Option<f64>,
    pub coarse_points: usize,
}

impl Default for TimeSearch {
    fn default() -> Self {
        TimeSearch {
            t_max: None,
            coarse_points: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub grid: Grid,
    pub qubit: QubitAmplitudes,
    /// Fixed parameters. A decay sweep overwrites `κ = Γ₁ = Γ₂` with the axis
    /// value; a dephasing sweep overwrites `Γ_φ` per series.
    pub params: SystemParams,
    pub p_list: Vec<MeasurementStrength>,
    /// Ignored by dephasing sweeps.
    pub baseline: Option<Baseline>,
    /// `Γ_φ/g_ref` per series, dephasing sweeps only.
    pub dephasing_rates: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub time_search: TimeSearch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub fidelity: f64,
    /// Reversal branch `P = 1 − q + qρ₄₄`.
    pub success: f64,
    /// Pre-measurement times reversal branch.
    pub overall_success: f64,
    /// Reversal time, `g_ref·t`.
    pub time: f64,
}

impl SweepPoint {
    fn from_outcome(outcome: &ProtocolOutcome, g_ref_t: f64) -> Self {
        SweepPoint {
            fidelity: outcome.fidelity,
            success: outcome.reversal_success,
            overall_success: outcome.success_probability,
            time: g_ref_t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: &'static str,
    pub axis_values: Vec<f64>,
    pub series: Vec<Series>,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.label == label)
    }
}

pub fn p_label(p: MeasurementStrength) -> String {
    format!("p={}", p.value())
}

pub fn dephasing_label(rate: f64) -> String {
    format!("gamma_phi={rate}")
}

pub const BASELINE_LABEL: &str = "baseline";

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    match spec.kind {
        SweepKind::Time => time_sweep(spec),
        SweepKind::Decay => decay_sweep(spec),
        SweepKind::Dephasing => dephasing_sweep(spec),
    }
}

fn curve_specs(spec: &SweepSpec, params: SystemParams, engine: Engine) -> Result<Vec<(String, ProtocolSpec)>> {
    let mut out = Vec::new();
    if let Some(b) = spec.baseline {
        let mut base = ProtocolSpec::new(
            spec.qubit,
            params,
            MeasurementStrength::ZERO,
            QRule::Fixed(MeasurementStrength::ZERO),
            0.0,
            engine,
        )?;
        base.sigma_z = b.sigma_z;
        out.push((String::from(BASELINE_LABEL), base));
    }
    for &p in &spec.p_list {
        out.push((p_label(p), ProtocolSpec::new(spec.qubit, params, p, QRule::Formula, 0.0, engine)?));
    }
    Ok(out)
}

/// Protocol outcome at every time of `times` (units of `1/g_ref`, strictly
/// increasing, ≥ 0), evolving once and applying its q rule per time.
pub fn protocol_over_time(spec: &ProtocolSpec, times: &[f64]) -> Result<Vec<ProtocolOutcome>> {
    let g = spec.params.g_ref();
    let abs: Vec<f64> = times.iter().map(|&x| x / g).collect();
    let pre = prepare(&spec.qubit, spec.p)?;
    let states = evolve_at(spec, &pre.state, &abs)?;
    abs.iter()
        .zip(&states)
        .map(|(&t, rho)| finish_with_rule(&spec.at_time(t), rho, pre.success_probability))
        .collect()
}

fn time_axis(spec: &SweepSpec) -> Result<Vec<f64>> {
    spec.grid.validate()?;
    if spec.grid.start < 0.0 {
        return Err(Error::InvalidGrid("time axis must start at gt >= 0"));
    }
    Ok(spec.grid.values())
}

/// Fidelity and reversal success against `g_ref·t`, one curve per `p` with
/// `q = 1 − (1−p)e^{−st}` at each time, plus the optional baseline.
pub fn time_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let axis = time_axis(spec)?;
    let engine = match Engine::auto(&spec.params) {
        Engine::Numeric(_) => Engine::Numeric(spec.integrator),
        e => e,
    };
    let mut series = Vec::new();
    for (label, curve) in curve_specs(spec, spec.params, engine)? {
        let outcomes = protocol_over_time(&curve, &axis)?;
        let points = outcomes.iter().zip(&axis).map(|(o, &x)| SweepPoint::from_outcome(o, x)).collect();
        series.push(Series { label, points });
    }
    Ok(SweepResult {
        axis_name: SweepKind::Time.axis_name(),
        axis_values: axis,
        series,
    })
}

/// Fidelity against `g_ref·t` with the integrator, one curve per dephasing
/// rate (and per `p` when several are given).
pub fn dephasing_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let axis = time_axis(spec)?;
    if spec.dephasing_rates.is_empty() || spec.p_list.is_empty() {
        return Err(Error::InvalidGrid("dephasing sweep needs rates and at least one p"));
    }
    let g = spec.params.g_ref();
    let mut series = Vec::new();
    for &p in &spec.p_list {
        for &rate in &spec.dephasing_rates {
            let params = spec.params.with_dephasing(rate * g)?;
            let curve = ProtocolSpec::new(spec.qubit, params, p, QRule::Formula, 0.0, Engine::Numeric(spec.integrator))?;
            let outcomes = protocol_over_time(&curve, &axis)?;
            let label = if spec.p_list.len() == 1 {
                dephasing_label(rate)
            } else {
                format!("{};{}", p_label(p), dephasing_label(rate))
            };
            let points = outcomes.iter().zip(&axis).map(|(o, &x)| SweepPoint::from_outcome(o, x)).collect();
            series.push(Series { label, points });
        }
    }
    Ok(SweepResult {
        axis_name: SweepKind::Dephasing.axis_name(),
        axis_values: axis,
        series,
    })
}

/// `F_max` against `s/g_ref`, with `κ = Γ₁ = Γ₂ = s`.
pub fn decay_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.grid.validate()?;
    if spec.grid.start < 0.0 {
        return Err(Error::InvalidGrid("decay axis must start at s/g >= 0"));
    }
    let axis = spec.grid.values();
    let (g1, g2) = (spec.params.g1(), spec.params.g2());
    let g = spec.params.g_ref();
    let mut per_curve: Vec<Series> = Vec::new();
    for &x in &axis {
        let params = SystemParams::equal_decay(g1, g2, x * g)?.with_dephasing(spec.params.gamma_phi())?;
        let engine = match Engine::auto(&params) {
            Engine::Numeric(_) => Engine::Numeric(spec.integrator),
            e => e,
        };
        for (i, (label, curve)) in curve_specs(spec, params, engine)?.into_iter().enumerate() {
            let best = max_fidelity_over_time(&curve, &spec.time_search)?;
            let point = SweepPoint::from_outcome(&best.outcome, best.time * g);
            match per_curve.get_mut(i) {
                Some(s) => s.points.push(point),
                None => per_curve.push(Series { label, points: alloc::vec![point] }),
            }
        }
    }
    Ok(SweepResult {
        axis_name: SweepKind::Decay.axis_name(),
        axis_values: axis,
        series: per_curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOptimum {
    /// Physical time, not scaled.
    pub time: f64,
    pub fidelity: f64,
    pub outcome: ProtocolOutcome,
}

/// Maximizes the protocol fidelity over the reversal time `t ∈ (0, t_max]`:
/// a coarse scan, then golden-section refinement to `|Δt| < 1e-6/g_ref`.
/// `spec.transfer_time` is ignored.
pub fn max_fidelity_over_time(spec: &ProtocolSpec, search: &TimeSearch) -> Result<TimeOptimum> {
    if search.coarse_points < 100 {
        return Err(Error::InvalidGrid("coarse_points must be >= 100"));
    }
    let g = spec.params.g_ref();
    let window = match search.t_max {
        Some(t) => t,
        None => 4.0 * core::f64::consts::PI / (spec.params.r() / g),
    };
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidGrid("t_max must be positive"));
    }
    let n = search.coarse_points;
    let scaled: Vec<f64> = (1..=n).map(|k| window * k as f64 / n as f64).collect();
    let times: Vec<f64> = scaled.iter().map(|&x| x / g).collect();

    let pre = prepare(&spec.qubit, spec.p)?;
    let states = evolve_at(spec, &pre.state, &times)?;
    let values: Vec<f64> = times
        .iter()
        .zip(&states)
        .map(|(&t, rho)| {
            finish_with_rule(&spec.at_time(t), rho, pre.success_probability)
                .map(|o| o.fidelity)
                .unwrap_or(f64::NAN)
        })
        .collect();

    let at = |t: f64| -> Result<ProtocolOutcome> {
        let s = spec.at_time(t);
        let rho = evolve_at(&s, &pre.state, &[t])?.pop().ok_or(Error::InvalidGrid("no time"))?;
        finish_with_rule(&s, &rho, pre.success_probability)
    };
    let best = refine_best(
        |t| at(t).map(|o| o.fidelity).unwrap_or(f64::NAN),
        &times,
        &values,
        1e-6 / g,
    )
    .ok_or(Error::InvalidGrid("no finite fidelity in window"))?;
    let idx = times.iter().position(|&t| t == best.x);
    let outcome = match idx {
        Some(i) => finish_with_rule(&spec.at_time(best.x), &states[i], pre.success_probability)?,
        None => at(best.x)?,
    };
    Ok(TimeOptimum {
        time: best.x,
        fidelity: outcome.fidelity,
        outcome,
    })
}
