//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.

use std::cell::RefCell;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fs;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qst_core::analytic::{analytic_rho, AnalyticInputs};
use qst_core::lindblad::{integrate, IntegratorConfig};
use qst_core::measurement::{m0_operator, m1_operator, reversal_operator, MeasurementStrength};
use qst_core::protocol::{
    evolve_at, nojump_protocol_oracle, prepare, q_formula, run_protocol, Engine, ProtocolSpec, QRule,
};
use qst_core::sweeps::{
    decay_sweep, dephasing_sweep, protocol_over_time, time_sweep, Baseline, Grid, SweepResult, SweepSpec, TimeSearch,
};
use qst_core::{DensityMatrix, Matrix2, Physicality, QubitAmplitudes, SystemParams, C64};

type Outcome = Result<String, String>;

thread_local! {
    static AUDIT: RefCell<Vec<(&'static str, Physicality)>> = const { RefCell::new(Vec::new()) };
}

/// Records a state for the physicality criterion.
fn audit(origin: &'static str, rho: &DensityMatrix) {
    AUDIT.with(|a| a.borrow_mut().push((origin, rho.physicality())));
}

fn strength(p: f64) -> MeasurementStrength {
    MeasurementStrength::new(p).unwrap()
}

fn equal() -> QubitAmplitudes {
    QubitAmplitudes::new(FRAC_1_SQRT_2, C64::new(FRAC_1_SQRT_2, 0.0)).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_analytic_numeric() -> Outcome {
    let g = 1.0;
    let params = SystemParams::equal_decay(g, g, 0.5 * g).map_err(|e| e.to_string())?;
    let qubit = QubitAmplitudes::new(0.6, C64::new(0.8, 0.0)).unwrap();
    let p = strength(0.5);
    let inputs = AnalyticInputs::from_params(qubit, p, &params).unwrap();
    let times: Vec<f64> = (0..50).map(|k| 10.0 * k as f64 / 49.0 / g).collect();
    let rho0 = prepare(&qubit, p).unwrap().state;

    let start = Instant::now();
    let traj = integrate(&params, &rho0, &IntegratorConfig::default(), &times).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut worst: f64 = 0.0;
    for (&t, num) in times.iter().zip(&traj.states) {
        let exact = analytic_rho(&inputs, t).unwrap();
        audit("c1 analytic", &exact);
        audit("c1 numeric", num);
        worst = worst.max(exact.matrix().max_abs_diff(num.matrix()));
    }
    ensure(worst <= 1e-7, || format!("max entrywise difference {worst:.3e} > 1e-7"))?;
    ensure(elapsed < 1.0, || format!("integration took {elapsed:.3} s"))?;
    Ok(format!("max |Δρ| = {worst:.2e} over 50 samples, integration {:.1} ms", elapsed * 1e3))
}

fn c2_ideal_transfer() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in [0.3, 1.0, 2.5] {
        let spec = ProtocolSpec::new(
            equal(),
            SystemParams::lossless(g, g).unwrap(),
            MeasurementStrength::ZERO,
            QRule::Fixed(MeasurementStrength::ZERO),
            PI / (SQRT_2 * g),
            Engine::Analytic,
        )
        .unwrap();
        let out = run_protocol(&spec).map_err(|e| e.to_string())?;
        audit("c2 final", &out.final_state);
        worst = worst.max((out.fidelity - 1.0).abs());
    }
    ensure(worst <= 1e-10, || format!("|F − 1| = {worst:.3e}"))?;
    Ok(format!("|F − 1| = {worst:.2e}"))
}

fn c3_appendix_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let theta: f64 = rng.gen_range(0.0..PI / 2.0);
        let phase: f64 = rng.gen_range(-PI..PI);
        let qubit = QubitAmplitudes::new(theta.cos(), C64::new(theta.sin() * phase.cos(), theta.sin() * phase.sin())).unwrap();
        let p = strength(rng.gen_range(0.0..0.999));
        let st: f64 = rng.gen_range(0.0..10.0);
        let g: f64 = rng.gen_range(0.1..5.0);
        let t = PI / (SQRT_2 * g);
        let s = st / t;
        let q = q_formula(p, s, t).unwrap();
        let out = nojump_protocol_oracle(&qubit, p, q, s, g, t).map_err(|e| e.to_string())?;
        let normalized = out.normalized().map_err(|e| e.to_string())?;
        let overlap = qubit.target_state().inner(&normalized).norm_sqr();
        worst = worst.max((overlap - 1.0).abs());
    }
    ensure(worst <= 1e-12, || format!("|overlap − 1| = {worst:.3e}"))?;
    Ok(format!("50 tuples, max |overlap − 1| = {worst:.2e}"))
}

fn fig2_point(p: f64) -> Result<(qst_core::protocol::ProtocolOutcome, DensityMatrix, f64), String> {
    let g = 0.5;
    let s = g / 0.5;
    let params = SystemParams::equal_decay(g, g, s).unwrap();
    let t = PI / (SQRT_2 * g);
    let spec = ProtocolSpec::new(equal(), params, strength(p), QRule::Formula, t, Engine::Analytic).map_err(|e| e.to_string())?;
    let out = run_protocol(&spec).map_err(|e| e.to_string())?;
    let pre = prepare(&spec.qubit, spec.p).unwrap();
    let evolved = evolve_at(&spec, &pre.state, &[t]).unwrap().remove(0);
    audit("c4/c5 evolved", &evolved);
    audit("c4/c5 final", &out.final_state);
    Ok((out, evolved, s * t))
}

const C4_PS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 0.99];

fn c4_recovery() -> Outcome {
    let mut fids = Vec::new();
    for p in C4_PS {
        fids.push(fig2_point(p)?.0.fidelity);
    }
    ensure(fids.windows(2).all(|w| w[1] >= w[0]), || format!("not monotone: {fids:?}"))?;
    let last = *fids.last().unwrap();
    ensure(last >= 0.99, || format!("F(p=0.99) = {last:.6}"))?;
    Ok(format!(
        "F = [{}]",
        fids.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>().join(", ")
    ))
}

fn c5_tradeoff() -> Outcome {
    let alpha2 = 0.5;
    let mut probs = Vec::new();
    let mut bound_detail = String::new();
    for p in C4_PS {
        let (out, evolved, st) = fig2_point(p)?;
        // trace of the un-normalized reversal branch, written out entrywise
        let q = q_formula(strength(p), st, 1.0).unwrap();
        let m = evolved.matrix();
        let trace = q.complement() * (m[(0, 0)].re + m[(1, 1)].re + m[(2, 2)].re) + m[(3, 3)].re;
        ensure((trace - out.reversal_success).abs() < 1e-14, || {
            format!("p={p}: P = {} but trace = {trace}", out.reversal_success)
        })?;
        probs.push(out.reversal_success);
        if p == 0.99 {
            let bound = (1.0 - p) * (-st).exp() / alpha2 + 0.01;
            ensure(out.reversal_success <= bound, || {
                format!("P(p=0.99) = {:.3e} > bound {bound:.3e}", out.reversal_success)
            })?;
            bound_detail = format!("P(0.99) = {:.3e} <= {bound:.3e}", out.reversal_success);
        }
    }
    ensure(probs.windows(2).all(|w| w[1] <= w[0]), || format!("not monotone: {probs:?}"))?;
    Ok(format!("P non-increasing over p, {bound_detail}"))
}

fn fig3_spec() -> SweepSpec {
    SweepSpec {
        kind: qst_core::sweeps::SweepKind::Decay,
        grid: Grid::log(0.1, 20.0, 60).unwrap(),
        qubit: QubitAmplitudes::new(0.6, C64::new(0.8, 0.0)).unwrap(),
        params: SystemParams::lossless(1.0, 1.0).unwrap(),
        p_list: vec![strength(0.0), strength(0.4), strength(0.8)],
        baseline: Some(Baseline { sigma_z: true }),
        dephasing_rates: Vec::new(),
        integrator: IntegratorConfig::default(),
        time_search: TimeSearch::default(),
    }
}

fn audit_fig3(spec: &SweepSpec, res: &SweepResult) {
    for (k, &x) in res.axis_values.iter().enumerate() {
        let params = SystemParams::equal_decay(1.0, 1.0, x).unwrap();
        for series in &res.series {
            let (p, rule) = if series.label == "baseline" {
                (MeasurementStrength::ZERO, QRule::Fixed(MeasurementStrength::ZERO))
            } else {
                (strength(series.label.trim_start_matches("p=").parse().unwrap()), QRule::Formula)
            };
            let t = series.points[k].time;
            let ps = ProtocolSpec::new(spec.qubit, params, p, rule, t, Engine::Analytic).unwrap();
            let out = run_protocol(&ps).unwrap();
            audit("c6/c7 final", &out.final_state);
            let pre = prepare(&ps.qubit, p).unwrap();
            audit("c6/c7 evolved", &evolve_at(&ps, &pre.state, &[t]).unwrap()[0]);
        }
    }
}

fn c6_plateau(res: &SweepResult, elapsed: f64) -> Outcome {
    let k = res.axis_values.iter().position(|&x| x == 20.0).ok_or("s/g = 20 not on grid")?;
    let f = res.series("baseline").ok_or("no baseline series")?.points[k].fidelity;
    ensure((0.34..=0.38).contains(&f), || format!("baseline F_max(s/g=20) = {f:.5}"))?;
    ensure(elapsed < 10.0, || format!("fig3 grid took {elapsed:.2} s"))?;
    Ok(format!("baseline F_max(s/g=20) = {f:.5}, full grid {:.0} ms", elapsed * 1e3))
}

fn c7_ordering(res: &SweepResult) -> Outcome {
    let get = |l: &str| res.series(l).ok_or_else(|| format!("missing series {l}"));
    let (b, p0, p4, p8) = (get("baseline")?, get("p=0")?, get("p=0.4")?, get("p=0.8")?);
    let mut checked = 0;
    let mut min_gap = f64::INFINITY;
    for (k, &x) in res.axis_values.iter().enumerate() {
        if !(1.0..=20.0).contains(&x) {
            continue;
        }
        let f = [p8.points[k].fidelity, p4.points[k].fidelity, p0.points[k].fidelity, b.points[k].fidelity];
        ensure(f[0] >= f[1] && f[1] >= f[2] && f[2] >= f[3] - 1e-9, || {
            format!("s/g = {x}: F_max(0.8, 0.4, 0, baseline) = {f:?}")
        })?;
        min_gap = min_gap.min(f[2] - f[3]);
        checked += 1;
    }
    Ok(format!("{checked} grid points in [1, 20], min F(p=0) − F(baseline) = {min_gap:.3e}"))
}

fn c8_dephasing() -> Outcome {
    let g = 1.0;
    let qubit = equal();
    let base = SystemParams::equal_decay(g, g, 2.0 * g).unwrap();
    let t = PI / (SQRT_2 * g);
    let mut fids = Vec::new();
    for rate in [0.0, 0.01, 0.1, 1.0] {
        let params = base.with_dephasing(rate * g).unwrap();
        let spec = ProtocolSpec::new(qubit, params, strength(0.8), QRule::Formula, t, Engine::Numeric(IntegratorConfig::default()))
            .map_err(|e| e.to_string())?;
        let out = run_protocol(&spec).map_err(|e| e.to_string())?;
        audit("c8 final", &out.final_state);
        fids.push(out.fidelity);
    }
    ensure(fids.windows(2).all(|w| w[1] < w[0]), || format!("not strictly decreasing: {fids:?}"))?;

    let spec = SweepSpec {
        kind: qst_core::sweeps::SweepKind::Dephasing,
        grid: Grid::linear(0.0, 6.0, 241).unwrap(),
        qubit,
        params: base,
        p_list: vec![strength(0.8)],
        baseline: None,
        dephasing_rates: vec![0.0, 0.01, 0.1, 1.0],
        integrator: IntegratorConfig::default(),
        time_search: TimeSearch::default(),
    };
    let numeric = dephasing_sweep(&spec).map_err(|e| e.to_string())?;
    let analytic = time_sweep(&spec).map_err(|e| e.to_string())?;
    let clean = numeric.series("gamma_phi=0").ok_or("missing Γφ = 0 series")?;
    let worst = clean
        .points
        .iter()
        .zip(&analytic.series("p=0.8").ok_or("missing analytic series")?.points)
        .map(|(a, b)| (a.fidelity - b.fidelity).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-6, || format!("Γφ = 0 numeric vs analytic: {worst:.3e}"))?;

    for rate in [0.0, 0.01, 0.1, 1.0] {
        let params = base.with_dephasing(rate * g).unwrap();
        let ps = ProtocolSpec::new(qubit, params, strength(0.8), QRule::Formula, 0.0, Engine::Numeric(IntegratorConfig::default())).unwrap();
        for out in protocol_over_time(&ps, &spec.grid.values()).unwrap() {
            audit("c8 curve final", &out.final_state);
        }
        let pre = prepare(&qubit, ps.p).unwrap();
        let times: Vec<f64> = spec.grid.values().iter().map(|x| x / g).collect();
        for rho in evolve_at(&ps, &pre.state, &times).unwrap() {
            audit("c8 curve evolved", &rho);
        }
    }
    Ok(format!(
        "F(gt=π/√2) = [{}], Γφ = 0 curve vs analytic {worst:.2e}",
        fids.iter().map(|f| format!("{f:.5}")).collect::<Vec<_>>().join(", ")
    ))
}

fn c9_channels() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let id = Matrix2::identity();
    let mut kraus_worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = strength(rng.gen_range(0.0..=1.0));
        let (m0, m1) = (m0_operator(p), m1_operator(p));
        let sum = m0.adjoint() * m0 + m1.adjoint() * m1;
        kraus_worst = kraus_worst.max(sum.max_abs_diff(&id));
    }
    ensure(kraus_worst <= 1e-15, || format!("Kraus completeness error {kraus_worst:.3e}"))?;

    let mut undo_worst: f64 = 0.0;
    for _ in 0..1000 {
        let theta: f64 = rng.gen_range(0.0..PI);
        let phase: f64 = rng.gen_range(-PI..PI);
        let psi = [C64::new((theta / 2.0).cos(), 0.0), C64::new((theta / 2.0).sin() * phase.cos(), (theta / 2.0).sin() * phase.sin())];
        let p = strength(rng.gen_range(0.0..=0.95));
        let after = reversal_operator(p).unwrap().apply(m0_operator(p).apply(psi));
        let norm = (after[0].norm_sqr() + after[1].norm_sqr()).sqrt();
        let overlap = (psi[0].conj() * after[0] + psi[1].conj() * after[1]).norm_sqr() / (norm * norm);
        undo_worst = undo_worst.max((overlap - 1.0).abs());
    }
    ensure(undo_worst <= 1e-12, || format!("reversal fidelity error {undo_worst:.3e}"))?;
    Ok(format!("completeness {kraus_worst:.1e}, reversal |F − 1| {undo_worst:.1e}"))
}

fn c10_physicality() -> Outcome {
    let records = AUDIT.with(|a| a.take());
    ensure(!records.is_empty(), || "no states recorded".into())?;
    let mut worst = (0.0f64, 0.0f64, f64::INFINITY);
    for (origin, ph) in &records {
        worst = (
            worst.0.max(ph.hermiticity_error),
            worst.1.max(ph.trace_error),
            worst.2.min(ph.min_eigenvalue),
        );
        ensure(ph.within(1e-12, 1e-9, 1e-8), || format!("{origin}: {ph:?}"))?;
    }
    Ok(format!(
        "{} states, max hermiticity {:.1e}, max trace error {:.1e}, min eigenvalue {:.1e}",
        records.len(),
        worst.0,
        worst.1,
        worst.2
    ))
}

fn run(args: &[&str]) -> Result<(), String> {
    let cfg = qst::parse_config(args.iter().copied()).map_err(|e| e.to_string())?;
    qst::execute(&cfg).map(|_| ()).map_err(|e| format!("{}: {e}", args[0]))
}

fn c11_replay() -> Outcome {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for fig in ["fig2", "fig3", "fig4"] {
        let a = first.path().to_str().unwrap();
        run(&[fig, "--output-dir", a, "--formats", "csv,json"])?;
        let json = first.path().join(format!("{fig}.json"));
        let b = second.path().to_str().unwrap();
        run(&["--replay", json.to_str().unwrap(), "--output-dir", b])?;
        for metric in ["fidelity", "success"] {
            let name = format!("{fig}_{metric}.csv");
            let x = fs::read(first.path().join(&name)).map_err(|e| format!("{name}: {e}"))?;
            let y = fs::read(second.path().join(&name)).map_err(|e| format!("{name} (replay): {e}"))?;
            ensure(x == y, || format!("{name} differs after replay"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} CSV files byte-identical after replay"))
}

fn report(n: usize, name: &str, outcome: &Outcome) -> bool {
    match outcome {
        Ok(detail) => {
            println!("criterion {n:>2} PASS  {name}: {detail}");
            true
        }
        Err(why) => {
            println!("criterion {n:>2} FAIL  {name}: {why}");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= report(1, "analytic-numeric equivalence", &c1_analytic_numeric());
    ok &= report(2, "ideal transfer", &c2_ideal_transfer());
    ok &= report(3, "no-jump identity", &c3_appendix_identity());
    ok &= report(4, "p -> 1 recovery", &c4_recovery());
    ok &= report(5, "fidelity / success trade-off", &c5_tradeoff());

    let spec = fig3_spec();
    let start = Instant::now();
    let fig3 = decay_sweep(&spec);
    let elapsed = start.elapsed().as_secs_f64();
    let (c6, c7) = match &fig3 {
        Ok(res) => {
            audit_fig3(&spec, res);
            (c6_plateau(res, elapsed), c7_ordering(res))
        }
        Err(e) => (Err(e.to_string()), Err(e.to_string())),
    };
    ok &= report(6, "complete-decoherence plateau", &c6);
    ok &= report(7, "robustness ordering", &c7);
    ok &= report(8, "dephasing degradation", &c8_dephasing());
    ok &= report(9, "channel algebra", &c9_channels());
    ok &= report(10, "physicality", &c10_physicality());
    ok &= report(11, "replay reproducibility", &c11_replay());
    if !ok {
        std::process::exit(1);
    }
}
