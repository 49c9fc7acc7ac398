use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qst")).args(args).output().expect("spawn qst")
}

fn dir_arg(d: &Path) -> &str {
    d.to_str().unwrap()
}

#[test]
fn empty_argv_lists_commands() {
    let out = qst(&[]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stderr);
    for c in ["evolve", "protocol", "optimize-q", "fig2", "fig3", "fig4", "sweep"] {
        assert!(text.contains(c), "usage is missing {c}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(qst(&["fig2", "--nope", "1"]).status.code(), Some(2));
    assert_eq!(qst(&["protocol", "--p", "1.0"]).status.code(), Some(3));
    assert_eq!(qst(&["protocol", "--alpha", "x"]).status.code(), Some(3));

    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("blocker");
    fs::write(&file, "").unwrap();
    let out = qst(&["protocol", "--output-dir", file.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blocker"));

    let stiff = qst(&["protocol", "--engine", "numeric", "--s-over-g", "1e14", "--output-dir", dir_arg(tmp.path())]);
    assert_eq!(stiff.status.code(), Some(4));
}

#[test]
fn fig2_files_and_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qst(&["fig2", "--p", "0,0.4,0.8", "--alpha", "0.7071", "--beta", "0.7071", "--g-over-s", "0.5", "--output-dir", dir_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["fig2_fidelity.csv", "fig2_success.csv", "fig2.json", "fig2_fidelity.svg", "fig2_success.svg"] {
        assert!(tmp.path().join(f).is_file(), "{f} missing");
    }

    let csv = fs::read_to_string(tmp.path().join("fig2_fidelity.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "gt,fidelity[baseline],fidelity[p=0],fidelity[p=0.4],fidelity[p=0.8]"
    );
    assert_eq!(lines.count(), 241);
    assert!(!csv.contains("\r\n"));
    assert!(csv.lines().all(|l| !l.ends_with(',')));

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("fig2.json")).unwrap()).unwrap();
    let meta = &json["meta"];
    assert_eq!(meta["command"], "fig2");
    assert_eq!(meta["config"]["g-over-s"], "0.5");
    assert!(meta["version"].is_string());
    let stamp = meta["generated_at"].as_str().unwrap();
    assert!(chrono::DateTime::parse_from_rfc3339(stamp).is_ok(), "{stamp}");
    assert_eq!(json["data"]["series"].as_array().unwrap().len(), 4);

    let svg = fs::read_to_string(tmp.path().join("fig2_fidelity.svg")).unwrap();
    assert!(svg.contains(r#"viewBox="0 0 800 600""#));
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(svg.contains(">p=0.8</text>"));
}

#[test]
fn csv_values_round_trip_against_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qst(&["fig4", "--grid-points", "21", "--output-dir", dir_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("fig4.json")).unwrap()).unwrap();
    let series = json["data"]["series"].as_array().unwrap();
    let mut reader = csv::Reader::from_path(tmp.path().join("fig4_fidelity.csv")).unwrap();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.unwrap();
        for (j, s) in series.iter().enumerate() {
            let exact = s["fidelity"][k].as_f64().unwrap();
            let printed: f64 = rec[j + 1].parse().unwrap();
            assert!((printed - exact).abs() <= 5e-12 * exact.abs(), "{printed} vs {exact}");
        }
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "# protocol settings\np = 0.4\ns-over-g = 1\nformats = json\n").unwrap();
    let out = qst(&["protocol", "--config", cfg.to_str().unwrap(), "--p", "0.6", "--output-dir", dir_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("protocol.json")).unwrap()).unwrap();
    assert_eq!(json["meta"]["config"]["p"], "0.6");
    assert_eq!(json["meta"]["config"]["s-over-g"], "1");
    assert!(!tmp.path().join("protocol.csv").exists());

    fs::write(&cfg, "speed = 3\n").unwrap();
    let out = qst(&["protocol", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("speed"));
}

#[test]
fn replay_reproduces_protocol_and_optimum() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["protocol", "optimize-q"] {
        let out = qst(&[cmd, "--alpha", "0.3", "--beta", "0.9539392014169456", "--output-dir", dir_arg(a.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    for stem in ["protocol", "optimize_q"] {
        let json = a.path().join(format!("{stem}.json"));
        let out = qst(&["--replay", json.to_str().unwrap(), "--output-dir", dir_arg(b.path())]);
        assert_eq!(out.status.code(), Some(0));
        let x = fs::read(a.path().join(format!("{stem}.csv"))).unwrap();
        let y = fs::read(b.path().join(format!("{stem}.csv"))).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn evolve_and_generic_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let d = dir_arg(tmp.path());
    assert_eq!(qst(&["evolve", "--p", "0.5", "--grid-points", "11", "--output-dir", d]).status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("evolve.csv")).unwrap();
    assert!(csv.starts_with("gt,rho11,rho22,rho33,rho44,re_rho14,im_rho14,purity\n"));

    let out = qst(&["sweep", "--kind", "decay", "--grid-start", "0.5", "--grid-stop", "2", "--grid-points", "3", "--output-dir", d]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("sweep_fidelity.csv")).unwrap();
    assert!(csv.starts_with("s/g,fidelity[baseline]"));
}

#[test]
fn unequal_rates_run_numerically() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qst(&[
        "protocol", "--q-rule", "fixed", "--q", "0.9", "--kappa-over-g", "0.5", "--gamma1-over-g", "0.05", "--gamma2-over-g", "0.05",
        "--output-dir", dir_arg(tmp.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qst(&["protocol", "--kappa-over-g", "0.5", "--output-dir", dir_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(3), "the q formula needs equal rates");
}
