//! Typed view of a [`RunConfig`], validated before anything is computed.

use std::path::PathBuf;

use qst_core::lindblad::IntegratorConfig;
use qst_core::measurement::MeasurementStrength;
use qst_core::protocol::{Engine, QRule, QSearch};
use qst_core::sweeps::{Baseline, Grid, Spacing, SweepKind, TimeSearch};
use qst_core::{QubitAmplitudes, SystemParams, C64};

use crate::config::{CommandKind, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Auto,
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: CommandKind,
    pub qubit: QubitAmplitudes,
    /// Dephasing is the single configured rate; list-valued runs keep the
    /// rates in `dephasing_rates` and start from `Γφ = 0` here.
    pub params: SystemParams,
    pub p_list: Vec<MeasurementStrength>,
    pub q_rule: QRule,
    pub engine: EngineChoice,
    pub integrator: IntegratorConfig,
    /// `g_ref·t`; `None` is the transfer time `π/(r/g_ref)`.
    pub gt: Option<f64>,
    pub grid: Option<Grid>,
    pub time_search: TimeSearch,
    pub q_search: QSearch,
    pub baseline: Option<Baseline>,
    pub dephasing_rates: Vec<f64>,
    pub sweep_kind: SweepKind,
    pub formats: Formats,
    pub output_dir: PathBuf,
}

impl Settings {
    pub fn engine(&self, params: &SystemParams) -> Engine {
        match self.engine {
            EngineChoice::Analytic => Engine::Analytic,
            EngineChoice::Numeric => Engine::Numeric(self.integrator),
            EngineChoice::Auto => match Engine::auto(params) {
                Engine::Numeric(_) => Engine::Numeric(self.integrator),
                e => e,
            },
        }
    }

    /// Physical reversal time.
    pub fn transfer_time(&self) -> Result<f64, CliError> {
        let g = self.params.g_ref();
        match self.gt {
            Some(x) => Ok(x / g),
            None => self.params.transfer_time().ok_or_else(|| {
                CliError::Validation(vec!["gt: 'transfer' needs g2-over-g1 = 1; give an explicit gt".into()])
            }),
        }
    }

    /// Kind of sweep a figure or sweep command runs.
    pub fn kind(&self) -> SweepKind {
        match self.command {
            CommandKind::Fig2 => SweepKind::Time,
            CommandKind::Fig3 => SweepKind::Decay,
            CommandKind::Fig4 => SweepKind::Dephasing,
            _ => self.sweep_kind,
        }
    }
}

struct Reader<'a> {
    cfg: &'a RunConfig,
    errors: Vec<String>,
}

impl<'a> Reader<'a> {
    fn raw(&self, key: &str) -> Option<&'a str> {
        self.cfg.values.get(key).map(String::as_str)
    }

    fn fail(&mut self, key: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{key}: {msg}"));
    }

    fn parse_f64(&mut self, key: &str, text: &str) -> Option<f64> {
        match text.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.fail(key, format!("expected a finite number, got '{text}'"));
                None
            }
        }
    }

    fn num(&mut self, key: &str) -> Option<f64> {
        let text = self.raw(key)?;
        self.parse_f64(key, text)
    }

    fn required(&mut self, key: &str) -> Option<f64> {
        if self.raw(key).is_none() {
            self.fail(key, "missing");
            return None;
        }
        self.num(key)
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let text = self.raw(key)?;
        let mut out = Vec::new();
        for item in text.split(',') {
            out.push(self.parse_f64(key, item)?);
        }
        Some(out)
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        let text = self.raw(key)?;
        match text.trim().parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(key, format!("expected a non-negative integer, got '{text}'"));
                None
            }
        }
    }

    fn flag(&mut self, key: &str) -> Option<bool> {
        match self.raw(key)? {
            "true" => Some(true),
            "false" => Some(false),
            other => {
                self.fail(key, format!("expected true or false, got '{other}'"));
                None
            }
        }
    }

    fn choice(&mut self, key: &str, options: &[&str]) -> Option<&'a str> {
        let v = self.raw(key)?;
        if options.contains(&v) {
            Some(v)
        } else {
            self.fail(key, format!("expected one of {}, got '{v}'", options.join(" | ")));
            None
        }
    }

    fn check<T>(&mut self, key: &str, r: qst_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(key, e);
                None
            }
        }
    }
}

fn is_list_dephasing(command: CommandKind, kind: SweepKind) -> bool {
    command == CommandKind::Fig4 || (command == CommandKind::Sweep && kind == SweepKind::Dephasing)
}

/// Every invalid field is reported at once.
pub fn resolve(cfg: &RunConfig) -> Result<Settings, CliError> {
    let mut r = Reader { cfg, errors: Vec::new() };
    let command = cfg.command;

    let sweep_kind = match r.choice("kind", &["time", "decay", "dephasing"]) {
        Some("decay") => SweepKind::Decay,
        Some("dephasing") => SweepKind::Dephasing,
        _ => SweepKind::Time,
    };

    let alpha = r.required("alpha");
    let beta = r.required("beta");
    let phase = r.num("beta-phase").unwrap_or(0.0);
    let qubit = match (alpha, beta) {
        (Some(a), Some(b)) => {
            if a < 0.0 {
                r.fail("alpha", "must be >= 0 (a global phase makes it real and non-negative)");
                None
            } else if b < 0.0 {
                r.fail("beta", "is a magnitude and must be >= 0; use beta-phase for the sign");
                None
            } else {
                r.check("alpha", QubitAmplitudes::normalized(a, C64::new(b * phase.cos(), b * phase.sin())))
            }
        }
        _ => None,
    };

    let g1 = r.required("g");
    let ratio = r.required("g2-over-g1");
    let s_over_g = match (r.raw("s-over-g"), r.raw("g-over-s")) {
        (Some(_), _) => r.num("s-over-g"),
        (None, Some(_)) => match r.num("g-over-s") {
            Some(v) if v > 0.0 => Some(1.0 / v),
            Some(_) => {
                r.fail("g-over-s", "must be > 0");
                None
            }
            None => None,
        },
        (None, None) => {
            r.fail("s-over-g", "missing");
            None
        }
    };
    let list_dephasing = is_list_dephasing(command, sweep_kind);
    let dephasing_rates = r.list("gamma-phi-over-g").unwrap_or_default();
    if !list_dephasing && dephasing_rates.len() > 1 {
        r.fail("gamma-phi-over-g", "takes a single value for this command");
    }
    if dephasing_rates.iter().any(|&x| x < 0.0) {
        r.fail("gamma-phi-over-g", "rates must be >= 0");
    }
    let kappa = r.num("kappa-over-g");
    let gamma1 = r.num("gamma1-over-g");
    let gamma2 = r.num("gamma2-over-g");
    let params = match (g1, ratio, s_over_g) {
        (Some(g1), Some(ratio), Some(s)) => {
            let g2 = g1 * ratio;
            let g_ref = g1.max(g2);
            let phi = if list_dephasing { 0.0 } else { dephasing_rates.first().copied().unwrap_or(0.0) };
            let rate = |x: Option<f64>| x.unwrap_or(s) * g_ref;
            r.check(
                "g",
                SystemParams::new(g1, g2, rate(kappa), rate(gamma1), rate(gamma2), phi * g_ref),
            )
        }
        _ => None,
    };

    let mut p_list = Vec::new();
    for p in r.list("p").unwrap_or_default() {
        if let Some(m) = r.check("p", MeasurementStrength::reversible(p)) {
            p_list.push(m);
        }
    }
    let single_p = matches!(command, CommandKind::Evolve | CommandKind::Protocol | CommandKind::OptimizeQ);
    if single_p && p_list.len() > 1 {
        r.fail("p", "takes a single value for this command");
    }
    if p_list.is_empty() && r.raw("p").is_some() && r.errors.iter().all(|e| !e.starts_with("p:")) {
        r.fail("p", "empty list");
    }

    let q_rule = match r.choice("q-rule", &["formula", "fixed", "optimal"]) {
        Some("fixed") => match r.required("q") {
            Some(q) => r
                .check("q", MeasurementStrength::reversible(q))
                .map(QRule::Fixed)
                .unwrap_or(QRule::Formula),
            None => QRule::Formula,
        },
        Some("optimal") => QRule::NumericOptimal(QSearch::default()),
        _ => QRule::Formula,
    };
    let q_search = QSearch {
        grid_points: r.count("q-points").unwrap_or(1000),
        q_tolerance: r.num("q-tolerance").unwrap_or(1e-8),
    };
    if q_search.grid_points < 2 {
        r.fail("q-points", "must be >= 2");
    }
    if !(q_search.q_tolerance > 0.0) {
        r.fail("q-tolerance", "must be > 0");
    }
    let q_rule = match q_rule {
        QRule::NumericOptimal(_) => QRule::NumericOptimal(q_search),
        other => other,
    };

    let engine = match r.choice("engine", &["auto", "analytic", "numeric"]) {
        Some("analytic") => EngineChoice::Analytic,
        Some("numeric") => EngineChoice::Numeric,
        _ => EngineChoice::Auto,
    };
    let integrator = IntegratorConfig {
        step_size: r.num("step-size").unwrap_or(0.005),
        tolerance: r.num("tolerance").unwrap_or(1e-10),
        max_time: r.num("max-time").unwrap_or(20.0),
    };
    let _ = r.check("step-size", integrator.validate());

    let gt = match r.raw("gt") {
        Some("transfer") | None => None,
        Some(_) => match r.num("gt") {
            Some(v) if v >= 0.0 => Some(v),
            Some(_) => {
                r.fail("gt", "must be >= 0");
                None
            }
            None => None,
        },
    };
    if gt.is_none() && r.raw("gt").is_some() {
        if let Some(p) = &params {
            if p.transfer_time().is_none() {
                r.fail("gt", "'transfer' needs g2-over-g1 = 1; give an explicit gt");
            }
        }
    }

    let grid = if r.raw("grid-points").is_some() {
        let spacing = match r.choice("grid-spacing", &["linear", "log"]) {
            Some("log") => Spacing::Log,
            _ => Spacing::Linear,
        };
        match (r.required("grid-start"), r.required("grid-stop"), r.count("grid-points")) {
            (Some(a), Some(b), Some(n)) => r.check("grid-points", Grid::new(a, b, n, spacing)),
            _ => None,
        }
    } else {
        None
    };

    let t_max = match r.raw("gt-max") {
        Some("auto") | None => None,
        Some(_) => match r.num("gt-max") {
            Some(v) if v > 0.0 => Some(v),
            _ => {
                r.fail("gt-max", "must be > 0 or 'auto'");
                None
            }
        },
    };
    let time_search = TimeSearch {
        t_max,
        coarse_points: r.count("coarse-points").unwrap_or(400),
    };
    if time_search.coarse_points < 100 {
        r.fail("coarse-points", "must be >= 100");
    }

    let baseline = match r.flag("baseline") {
        Some(true) => Some(Baseline {
            sigma_z: r.flag("baseline-sigma-z").unwrap_or(true),
        }),
        _ => None,
    };

    let mut formats = Formats::default();
    for f in r.raw("formats").unwrap_or("").split(',').map(str::trim).filter(|f| !f.is_empty()) {
        match f {
            "csv" => formats.csv = true,
            "json" => formats.json = true,
            "svg" => formats.svg = true,
            other => r.fail("formats", format!("unknown format '{other}'")),
        }
    }
    let output_dir = cfg.output_dir();

    if !r.errors.is_empty() {
        return Err(CliError::Validation(r.errors));
    }
    let settings = Settings {
        command,
        qubit: qubit.expect("validated"),
        params: params.expect("validated"),
        p_list,
        q_rule,
        engine,
        integrator,
        gt,
        grid,
        time_search,
        q_search,
        baseline,
        dephasing_rates,
        sweep_kind,
        formats,
        output_dir,
    };
    if settings.engine == EngineChoice::Analytic && settings.params.analytic_decay().is_none() && !list_dephasing {
        return Err(CliError::Validation(vec![
            "engine: analytic needs kappa = gamma1 = gamma2 and no dephasing".into(),
        ]));
    }
    Ok(settings)
}
