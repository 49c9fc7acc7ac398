//! Command dispatch: settings in, artifacts out.

use std::path::PathBuf;

use serde_json::{json, Value};

use qst_core::protocol::{
    evolve_at, optimize_q, prepare, q_formula, run_protocol, ProtocolOutcome, ProtocolSpec, QRule,
};
use qst_core::measurement::MeasurementStrength;
use qst_core::sweeps::{run_sweep, Spacing, SweepKind, SweepResult, SweepSpec};
use qst_core::{BasisIndex, DensityMatrix};

use crate::config::{parse_config, CommandKind, RunConfig};
use crate::error::CliError;
use crate::output::{emit, Artifacts, Plot, Table};
use crate::settings::{resolve, Settings};

pub fn protocol_spec(s: &Settings) -> Result<ProtocolSpec, CliError> {
    let p = *s.p_list.first().ok_or_else(|| CliError::Validation(vec!["p: missing".into()]))?;
    Ok(ProtocolSpec::new(
        s.qubit,
        s.params,
        p,
        s.q_rule,
        s.transfer_time()?,
        s.engine(&s.params),
    )?)
}

pub fn sweep_spec(s: &Settings) -> Result<SweepSpec, CliError> {
    let grid = s.grid.ok_or_else(|| CliError::Validation(vec!["grid-points: missing".into()]))?;
    Ok(SweepSpec {
        kind: s.kind(),
        grid,
        qubit: s.qubit,
        params: s.params,
        p_list: s.p_list.clone(),
        baseline: s.baseline,
        dephasing_rates: s.dephasing_rates.clone(),
        integrator: s.integrator,
        time_search: s.time_search,
    })
}

fn outcome_json(o: &ProtocolOutcome) -> Value {
    json!({
        "fidelity": o.fidelity,
        "success_probability": o.success_probability,
        "reversal_success": o.reversal_success,
        "premeasure_success": o.premeasure_success,
        "q": o.q_used.value(),
        "q_complement": o.q_used.complement(),
        "final_state": matrix_json(&o.final_state),
    })
}

fn matrix_json(rho: &DensityMatrix) -> Value {
    let m = rho.matrix();
    let rows: Vec<Value> = (0..4)
        .map(|i| Value::Array((0..4).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
        .collect();
    Value::Array(rows)
}

fn protocol_artifacts(s: &Settings) -> Result<Artifacts, CliError> {
    let spec = protocol_spec(s)?;
    let out = run_protocol(&spec)?;
    let gt = spec.transfer_time * s.params.g_ref();
    Ok(Artifacts {
        stem: "protocol".into(),
        tables: vec![Table {
            file: "protocol.csv".into(),
            header: ["gt", "fidelity", "success", "overall_success", "premeasure_success", "q"]
                .map(String::from)
                .to_vec(),
            rows: vec![vec![
                gt,
                out.fidelity,
                out.reversal_success,
                out.success_probability,
                out.premeasure_success,
                out.q_used.value(),
            ]],
        }],
        plots: Vec::new(),
        data: json!({ "gt": gt, "outcome": outcome_json(&out) }),
    })
}

fn optimize_artifacts(s: &Settings) -> Result<Artifacts, CliError> {
    let spec = protocol_spec(s)?;
    let best = optimize_q(&spec, &s.q_search)?;
    let gt = spec.transfer_time * s.params.g_ref();
    let formula = match s.params.common_decay() {
        Some(rate) => {
            let q = q_formula(spec.p, rate, spec.transfer_time)?;
            Some(run_protocol(&ProtocolSpec {
                q_rule: QRule::Fixed(q),
                ..spec
            })?)
        }
        None => None,
    };
    let nan = f64::NAN;
    Ok(Artifacts {
        stem: "optimize_q".into(),
        tables: vec![Table {
            file: "optimize_q.csv".into(),
            header: ["gt", "q_opt", "fidelity_opt", "success_opt", "q_formula", "fidelity_formula", "success_formula"]
                .map(String::from)
                .to_vec(),
            rows: vec![vec![
                gt,
                best.q.value(),
                best.fidelity,
                best.outcome.reversal_success,
                formula.map_or(nan, |f| f.q_used.value()),
                formula.map_or(nan, |f| f.fidelity),
                formula.map_or(nan, |f| f.reversal_success),
            ]],
        }],
        plots: Vec::new(),
        data: json!({
            "gt": gt,
            "optimum": outcome_json(&best.outcome),
            "formula": formula.as_ref().map(outcome_json),
        }),
    })
}

fn evolve_artifacts(s: &Settings) -> Result<Artifacts, CliError> {
    let p = *s.p_list.first().ok_or_else(|| CliError::Validation(vec!["p: missing".into()]))?;
    let spec = ProtocolSpec::new(s.qubit, s.params, p, QRule::Fixed(MeasurementStrength::ZERO), 0.0, s.engine(&s.params))?;
    let grid = s.grid.ok_or_else(|| CliError::Validation(vec!["grid-points: missing".into()]))?;
    if grid.start < 0.0 {
        return Err(CliError::Validation(vec!["grid-start: must be >= 0 for evolve".into()]));
    }
    let axis = grid.values();
    let g = s.params.g_ref();
    let times: Vec<f64> = axis.iter().map(|&x| x / g).collect();
    let pre = prepare(&spec.qubit, spec.p)?;
    let states = evolve_at(&spec, &pre.state, &times)?;

    let labels = ["rho11", "rho22", "rho33", "rho44"];
    let mut header: Vec<String> = vec!["gt".into()];
    header.extend(labels.iter().map(|l| l.to_string()));
    header.extend(["re_rho14", "im_rho14", "purity"].map(String::from));
    let rows: Vec<Vec<f64>> = axis
        .iter()
        .zip(&states)
        .map(|(&x, rho)| {
            let mut row = vec![x];
            row.extend(BasisIndex::ALL.iter().map(|&b| rho.population(b)));
            let c = rho.entry(BasisIndex::Ground, BasisIndex::Qubit2);
            row.extend([c.re, c.im, rho.purity()]);
            row
        })
        .collect();
    let plot = Plot {
        file: "evolve_populations.svg".into(),
        title: "Populations".into(),
        x_label: "gt".into(),
        y_label: "population".into(),
        log_x: false,
        series: (0..4)
            .map(|k| (labels[k].to_string(), rows.iter().map(|r| (r[0], r[1 + k])).collect()))
            .collect(),
    };
    let data = json!({
        "axis": { "name": "gt", "values": axis },
        "premeasure_success": pre.success_probability,
        "states": states.iter().map(matrix_json).collect::<Vec<_>>(),
    });
    Ok(Artifacts {
        stem: "evolve".into(),
        tables: vec![Table {
            file: "evolve.csv".into(),
            header,
            rows,
        }],
        plots: vec![plot],
        data,
    })
}

fn metric_table(file: String, metric: &str, r: &SweepResult, pick: impl Fn(&qst_core::sweeps::SweepPoint) -> f64) -> Table {
    let mut header = vec![r.axis_name.to_string()];
    header.extend(r.series.iter().map(|s| format!("{metric}[{}]", s.label)));
    let rows = r
        .axis_values
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let mut row = vec![x];
            row.extend(r.series.iter().map(|s| pick(&s.points[k])));
            row
        })
        .collect();
    Table { file, header, rows }
}

fn metric_plot(
    file: String,
    title: &str,
    y_label: &str,
    r: &SweepResult,
    log_x: bool,
    pick: impl Fn(&qst_core::sweeps::SweepPoint) -> f64,
) -> Plot {
    Plot {
        file,
        title: title.into(),
        x_label: r.axis_name.into(),
        y_label: y_label.into(),
        log_x,
        series: r
            .series
            .iter()
            .map(|s| {
                let pts = r.axis_values.iter().zip(&s.points).map(|(&x, p)| (x, pick(p))).collect();
                (s.label.clone(), pts)
            })
            .collect(),
    }
}

pub fn sweep_json(r: &SweepResult) -> Value {
    json!({
        "axis": { "name": r.axis_name, "values": r.axis_values },
        "series": r.series.iter().map(|s| json!({
            "label": s.label,
            "fidelity": s.points.iter().map(|p| p.fidelity).collect::<Vec<_>>(),
            "success": s.points.iter().map(|p| p.success).collect::<Vec<_>>(),
            "overall_success": s.points.iter().map(|p| p.overall_success).collect::<Vec<_>>(),
            "gt": s.points.iter().map(|p| p.time).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn sweep_artifacts(s: &Settings) -> Result<Artifacts, CliError> {
    let spec = sweep_spec(s)?;
    let result = run_sweep(&spec)?;
    let stem = match s.command {
        CommandKind::Fig2 => "fig2",
        CommandKind::Fig3 => "fig3",
        CommandKind::Fig4 => "fig4",
        _ => "sweep",
    };
    let log_x = spec.grid.spacing == Spacing::Log;
    let fidelity_title = match spec.kind {
        SweepKind::Decay => "Maximal fidelity",
        _ => "Fidelity",
    };
    let fid = |p: &qst_core::sweeps::SweepPoint| p.fidelity;
    let suc = |p: &qst_core::sweeps::SweepPoint| p.success;
    Ok(Artifacts {
        stem: stem.into(),
        tables: vec![
            metric_table(format!("{stem}_fidelity.csv"), "fidelity", &result, fid),
            metric_table(format!("{stem}_success.csv"), "success", &result, suc),
        ],
        plots: vec![
            metric_plot(format!("{stem}_fidelity.svg"), fidelity_title, "F", &result, log_x, fid),
            metric_plot(format!("{stem}_success.svg"), "Reversal success probability", "P", &result, log_x, suc),
        ],
        data: sweep_json(&result),
    })
}

pub fn artifacts(s: &Settings) -> Result<Artifacts, CliError> {
    match s.command {
        CommandKind::Evolve => evolve_artifacts(s),
        CommandKind::Protocol => protocol_artifacts(s),
        CommandKind::OptimizeQ => optimize_artifacts(s),
        CommandKind::Fig2 | CommandKind::Fig3 | CommandKind::Fig4 | CommandKind::Sweep => sweep_artifacts(s),
    }
}

/// Validates, computes and writes; returns the files written.
pub fn execute(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let settings = resolve(cfg)?;
    let a = artifacts(&settings)?;
    let f = settings.formats;
    emit(&a, cfg, &settings.output_dir, f.csv, f.json, f.svg)
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let result = parse_config(argv).and_then(|cfg| execute(&cfg));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(CliError::Info(text)) => {
            println!("{text}");
            0
        }
        Err(e) => {
            eprintln!("qst: {e}");
            e.exit_code()
        }
    }
}
