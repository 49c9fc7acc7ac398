//! Run configuration: command-line flags, flat `key=value` files and replay
//! of a previous run's JSON `meta` block, merged into one resolved key map.
//!
//! Precedence, lowest first: command defaults, replayed config, config file,
//! flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Evolve,
    Protocol,
    OptimizeQ,
    Fig2,
    Fig3,
    Fig4,
    Sweep,
}

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        CommandKind::Evolve,
        CommandKind::Protocol,
        CommandKind::OptimizeQ,
        CommandKind::Fig2,
        CommandKind::Fig3,
        CommandKind::Fig4,
        CommandKind::Sweep,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Evolve => "evolve",
            CommandKind::Protocol => "protocol",
            CommandKind::OptimizeQ => "optimize-q",
            CommandKind::Fig2 => "fig2",
            CommandKind::Fig3 => "fig3",
            CommandKind::Fig4 => "fig4",
            CommandKind::Sweep => "sweep",
        }
    }

    pub fn about(&self) -> &'static str {
        match self {
            CommandKind::Evolve => "density-matrix trajectory after the pre-measurement",
            CommandKind::Protocol => "one protocol run at a reversal time",
            CommandKind::OptimizeQ => "best reversal strength at a reversal time",
            CommandKind::Fig2 => "fidelity and success probability against gt",
            CommandKind::Fig3 => "maximal fidelity against s/g",
            CommandKind::Fig4 => "fidelity against gt for several dephasing rates",
            CommandKind::Sweep => "generic sweep selected by --kind",
        }
    }

    pub fn from_name(name: &str) -> Option<CommandKind> {
        CommandKind::ALL.into_iter().find(|c| c.name() == name)
    }
}

pub struct Key {
    pub name: &'static str,
    pub help: &'static str,
}

macro_rules! keys {
    ($($name:literal => $help:literal,)*) => {
        pub const KEYS: &[Key] = &[$(Key { name: $name, help: $help },)*];
    };
}

keys! {
    "alpha" => "ground amplitude α of qubit 1 (pair is normalized)",
    "beta" => "magnitude of the excited amplitude β",
    "beta-phase" => "phase of β in radians",
    "g" => "coupling g1, the reference scale",
    "g2-over-g1" => "coupling ratio g2/g1",
    "s-over-g" => "common decay κ = Γ1 = Γ2 in units of g_ref",
    "g-over-s" => "inverse form of s-over-g",
    "kappa-over-g" => "resonator decay κ/g_ref (overrides s)",
    "gamma1-over-g" => "qubit 1 decay Γ1/g_ref (overrides s)",
    "gamma2-over-g" => "qubit 2 decay Γ2/g_ref (overrides s)",
    "gamma-phi-over-g" => "dephasing Γφ/g_ref; a list for fig4 and dephasing sweeps",
    "p" => "pre-measurement strength; a list for sweeps",
    "q-rule" => "formula | fixed | optimal",
    "q" => "reversal strength for q-rule=fixed",
    "engine" => "auto | analytic | numeric",
    "gt" => "reversal time g_ref·t, or 'transfer' for π/(r/g_ref)",
    "grid-start" => "first axis value",
    "grid-stop" => "last axis value",
    "grid-points" => "number of axis values",
    "grid-spacing" => "linear | log",
    "gt-max" => "end of the F_max time window in g_ref·t, or 'auto'",
    "coarse-points" => "coarse samples in the F_max time window",
    "q-points" => "grid points of the q search",
    "q-tolerance" => "golden-section tolerance of the q search",
    "baseline" => "include the unmeasured p = q = 0 curve (true | false)",
    "baseline-sigma-z" => "apply the σz phase fix to the baseline (true | false)",
    "step-size" => "largest integrator step in units of 1/g_ref",
    "tolerance" => "integrator local error tolerance",
    "max-time" => "integrator window in units of 1/g_ref",
    "kind" => "sweep kind: time | decay | dephasing",
    "formats" => "subset of csv,json,svg",
    "output-dir" => "directory for output files",
}

pub fn is_key(name: &str) -> bool {
    KEYS.iter().any(|k| k.name == name)
}

/// Resolved command plus every key it uses.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn output_dir(&self) -> PathBuf {
        PathBuf::from(self.get("output-dir").unwrap_or("."))
    }
}

/// Defaults that depend on the command; alternatives such as `g-over-s`
/// are filled in only when the preferred key is absent.
pub fn defaults(command: CommandKind) -> BTreeMap<String, String> {
    let fig3 = command == CommandKind::Fig3;
    let mut d: Vec<(&str, &str)> = vec![
        ("alpha", if fig3 { "0.6" } else { "0.7071067811865476" }),
        ("beta", if fig3 { "0.8" } else { "0.7071067811865476" }),
        ("beta-phase", "0"),
        ("g", "1"),
        ("g2-over-g1", "1"),
        ("gamma-phi-over-g", "0"),
        ("engine", "auto"),
        ("step-size", "0.005"),
        ("tolerance", "1e-10"),
        ("max-time", "20"),
        ("formats", "csv,json,svg"),
        ("output-dir", "."),
    ];
    match command {
        CommandKind::Evolve => d.extend([
            ("p", "0"),
            ("grid-start", "0"),
            ("grid-stop", "10"),
            ("grid-points", "201"),
            ("grid-spacing", "linear"),
        ]),
        CommandKind::Protocol | CommandKind::OptimizeQ => {
            d.extend([("p", "0.8"), ("q-rule", "formula"), ("gt", "transfer"), ("q-points", "1000"), ("q-tolerance", "1e-8")]);
        }
        CommandKind::Fig2 => d.extend([
            ("p", "0,0.4,0.8"),
            ("grid-start", "0"),
            ("grid-stop", "6"),
            ("grid-points", "241"),
            ("grid-spacing", "linear"),
            ("baseline", "true"),
            ("baseline-sigma-z", "true"),
        ]),
        CommandKind::Fig3 => d.extend([
            ("p", "0,0.4,0.8"),
            ("grid-start", "0.1"),
            ("grid-stop", "20"),
            ("grid-points", "60"),
            ("grid-spacing", "log"),
            ("gt-max", "auto"),
            ("coarse-points", "400"),
            ("baseline", "true"),
            ("baseline-sigma-z", "true"),
        ]),
        CommandKind::Fig4 => {
            d.retain(|(k, _)| *k != "gamma-phi-over-g");
            d.extend([
                ("p", "0.8"),
                ("gamma-phi-over-g", "0,0.01,0.1,1"),
                ("grid-start", "0"),
                ("grid-stop", "6"),
                ("grid-points", "241"),
                ("grid-spacing", "linear"),
            ]);
        }
        CommandKind::Sweep => d.extend([
            ("kind", "time"),
            ("p", "0,0.4,0.8"),
            ("grid-start", "0"),
            ("grid-stop", "6"),
            ("grid-points", "241"),
            ("grid-spacing", "linear"),
            ("gt-max", "auto"),
            ("coarse-points", "400"),
            ("baseline", "true"),
            ("baseline-sigma-z", "true"),
        ]),
    }
    d.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn cli() -> clap::Command {
    let commands: Vec<&'static str> = CommandKind::ALL.iter().map(|c| c.name()).collect();
    let mut after = String::from("Commands:\n");
    for c in CommandKind::ALL {
        after.push_str(&format!("  {:<11} {}\n", c.name(), c.about()));
    }
    let mut cmd = clap::Command::new("qst")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Quantum state transfer through a lossy resonator with partial measurement and reversal")
        .override_usage("qst <COMMAND> [--key value ...] [--config FILE] [--replay JSON]")
        .after_help(after)
        .arg(
            Arg::new("command")
                .value_name("COMMAND")
                .value_parser(clap::builder::PossibleValuesParser::new(commands)),
        )
        .arg(Arg::new("config").long("config").value_name("FILE").help("flat key=value file"))
        .arg(Arg::new("replay").long("replay").value_name("JSON").help("re-run the config recorded in a JSON output"));
    for key in KEYS {
        cmd = cmd.arg(
            Arg::new(key.name)
                .long(key.name)
                .value_name("VALUE")
                .help(key.help)
                .allow_hyphen_values(true)
                .action(ArgAction::Set),
        );
    }
    cmd
}

pub fn usage() -> String {
    cli().render_help().to_string()
}

/// Reads a flat `key=value` file, one pair per line, `#` comments.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_text(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
        let k = k.trim();
        if !is_key(k) {
            return Err(format!("line {}: unknown key '{k}'", n + 1));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Loads `meta.command` and `meta.config` from a JSON output.
pub fn read_replay(path: &Path) -> Result<(CommandKind, BTreeMap<String, String>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: &str| CliError::Usage(format!("{}: {msg}", path.display()));
    let json: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let meta = json.get("meta").ok_or_else(|| bad("missing 'meta'"))?;
    let command = meta
        .get("command")
        .and_then(|c| c.as_str())
        .and_then(CommandKind::from_name)
        .ok_or_else(|| bad("missing or unknown 'meta.command'"))?;
    let config = meta
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| bad("missing 'meta.config'"))?;
    let mut out = BTreeMap::new();
    for (k, v) in config {
        if !is_key(k) {
            return Err(bad(&format!("unknown key '{k}' in meta.config")));
        }
        let v = v.as_str().ok_or_else(|| bad(&format!("meta.config.{k} is not a string")))?;
        out.insert(k.clone(), v.to_string());
    }
    Ok((command, out))
}

/// Parses `argv` (without the program name) into a merged configuration.
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    if argv.is_empty() {
        return Err(CliError::Usage(usage()));
    }
    let matches = cli()
        .try_get_matches_from(std::iter::once("qst".to_string()).chain(argv))
        .map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        })?;

    let replay = match matches.get_one::<String>("replay") {
        Some(p) => Some(read_replay(Path::new(p))?),
        None => None,
    };
    let named = matches.get_one::<String>("command").and_then(|c| CommandKind::from_name(c));
    let command = match (named, &replay) {
        (Some(c), Some((r, _))) if c != *r => {
            return Err(CliError::Usage(format!(
                "command '{}' does not match replayed command '{}'",
                c.name(),
                r.name()
            )))
        }
        (Some(c), _) => c,
        (None, Some((r, _))) => *r,
        (None, None) => return Err(CliError::Usage(usage())),
    };

    let mut values = defaults(command);
    let layer = |map: BTreeMap<String, String>, values: &mut BTreeMap<String, String>| {
        for (k, v) in map {
            // an explicit g-over-s replaces the default s-over-g and vice versa
            match k.as_str() {
                "g-over-s" => {
                    values.remove("s-over-g");
                }
                "s-over-g" => {
                    values.remove("g-over-s");
                }
                _ => {}
            }
            values.insert(k, v);
        }
    };
    if let Some((_, cfg)) = replay {
        layer(cfg, &mut values);
    }
    if let Some(p) = matches.get_one::<String>("config") {
        layer(read_config_file(Path::new(p))?, &mut values);
    }
    let mut flags = BTreeMap::new();
    for key in KEYS {
        if let Some(v) = matches.get_one::<String>(key.name) {
            flags.insert(key.name.to_string(), v.clone());
        }
    }
    if flags.contains_key("s-over-g") && flags.contains_key("g-over-s") {
        return Err(CliError::Usage("give only one of --s-over-g and --g-over-s".into()));
    }
    layer(flags, &mut values);
    if !values.contains_key("s-over-g") && !values.contains_key("g-over-s") {
        values.insert("s-over-g".into(), default_s_over_g(command).into());
    }
    Ok(RunConfig { command, values })
}

fn default_s_over_g(command: CommandKind) -> &'static str {
    match command {
        CommandKind::Fig3 => "1",
        _ => "2",
    }
}
