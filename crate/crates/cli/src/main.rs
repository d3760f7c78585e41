mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rispaces::equivharness::{k_table, k_table_csv, members_csv, DEFAULT_SEED};
use rispaces::interpolation::{identify_target, interp_norm, Identification, InterpParams, TargetParams};
use rispaces::kfunctional::{k_curve, CoupleSpec, KMethod};
use rispaces::logcalc::UGrid;
use rispaces::norms::{norm, SpaceSpec};
use rispaces::rearrangement::{discretize_model, FunctionSpec, StepRearrangement};
use rispaces::{Error, NumConfig};
use serde::de::DeserializeOwned;
use serde_json::json;

/// Norms, K-functionals and interpolation norms of rearrangement-invariant
/// spaces on (0,1).
#[derive(Parser, Debug)]
#[command(name = "rispaces", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed of the random members of test families.
    #[arg(long, global = true, env = "RISPACES_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Upper end of the grid in u = 1 - Log t.
    #[arg(long, global = true)]
    u_max: Option<f64>,

    /// Panels of a discretized function.
    #[arg(long, global = true)]
    panels: Option<usize>,

    /// Nodes of a K-curve.
    #[arg(long, global = true)]
    k_nodes: Option<usize>,

    /// Grid size of supremum searches.
    #[arg(long, global = true)]
    sup_count: Option<usize>,

    /// Largest admissible ratio bracket.
    #[arg(long, global = true)]
    ceiling: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm of a function in one space; prints `{space, value}`.
    Norm {
        /// Space as JSON, e.g. '{"space":"grand","p":2,"alpha":1}', or a path to a JSON file.
        #[arg(long)]
        space: String,
        /// Function as JSON, e.g. '{"kind":"char","a":0.25}', or a path to a JSON file.
        #[arg(long = "fn")]
        function: String,
    },
    /// CSV table `t,K_oracle,K_explicit,ratio` of a couple's K-functional.
    Kfunc {
        /// Couple as JSON, e.g. '{"couple":"lp_lq","p":1,"q":"inf"}', or a path.
        #[arg(long)]
        couple: String,
        #[arg(long = "fn")]
        function: String,
    },
    /// Interpolation norm built from the K-curve of a couple.
    Interp {
        #[arg(long)]
        couple: String,
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        theta: f64,
        /// Outer exponent; `inf` allowed.
        #[arg(long, value_parser = parse_exponent)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Use the explicit K formula instead of the decomposition oracle.
        #[arg(long)]
        explicit: bool,
    },
    /// Both sides of a named identification for one function.
    Identify {
        /// Identification code, see `list-experiments`.
        id: String,
        #[arg(long = "fn")]
        function: String,
        /// Target exponents as JSON `{p, q, theta, r, alpha}`, or a path.
        #[arg(long)]
        params: String,
    },
    /// Runs a harness experiment and writes its JSON report; exits 3 when
    /// the report fails.
    Experiment {
        name: String,
        /// Parameters as key=value.
        params: Vec<String>,
        /// Also write the per-member ratios as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lists experiment names.
    ListExperiments,
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|_| format!("'{s}' is not a number")),
    }
}

enum Failure {
    Config(String),
    Numeric(String),
    Report(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numeric(_) => 1,
            Failure::Config(_) => 2,
            Failure::Report(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::Divergent(_)
            | Error::NonFiniteValue { .. }
            | Error::InfiniteNorm
            | Error::OutOfRange { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

/// Inline JSON, or the path of a JSON file. Returns the file's directory for
/// resolving relative paths inside it.
fn load_json<T: DeserializeOwned>(what: &str, arg: &str) -> Result<(T, Option<PathBuf>), Failure> {
    let trimmed = arg.trim_start();
    let (text, base) = if trimmed.starts_with('{') {
        (arg.to_string(), None)
    } else {
        let path = Path::new(arg);
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{what}: {}: {e}", path.display())))?;
        (text, path.parent().map(Path::to_path_buf))
    };
    let value = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{what}: {e}")))?;
    Ok((value, base))
}

fn load_function(arg: &str, cfg: &NumConfig) -> Result<StepRearrangement, Failure> {
    let (spec, base): (FunctionSpec, _) = load_json("--fn", arg)?;
    let model = spec.to_model(base.as_deref())?;
    Ok(discretize_model(&model, cfg.u_max, cfg.panels)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Config(e.to_string()))
}

fn config(cli: &Cli) -> Result<NumConfig, Failure> {
    let mut cfg = NumConfig::default();
    if let Some(v) = cli.u_max {
        cfg.u_max = v;
    }
    if let Some(v) = cli.panels {
        cfg.panels = v;
    }
    if let Some(v) = cli.k_nodes {
        cfg.k_nodes = v;
    }
    if let Some(v) = cli.sup_count {
        cfg.sup_count = v;
    }
    if let Some(v) = cli.ceiling {
        cfg.ceiling = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Norm { space, function } => {
            let (space, _): (SpaceSpec, _) = load_json("--space", space)?;
            space.validate()?;
            let f = load_function(function, &cfg)?;
            let value = norm(&f, &space, &cfg)?;
            emit(out, &to_json(&json!({ "space": space.label(), "value": value }))?)
        }
        Command::Kfunc { couple, function } => {
            let (couple, _): (CoupleSpec, _) = load_json("--couple", couple)?;
            couple.validate()?;
            let f = load_function(function, &cfg)?;
            emit(out, &k_table_csv(&k_table(&f, &couple, &cfg)?)?)
        }
        Command::Interp { couple, function, theta, r, alpha, explicit } => {
            let (couple, _): (CoupleSpec, _) = load_json("--couple", couple)?;
            couple.validate()?;
            let params = InterpParams::new(*theta, *r, *alpha)?;
            let f = load_function(function, &cfg)?;
            let method = if *explicit { KMethod::Explicit } else { KMethod::Oracle };
            let curve = k_curve(&f, &couple, &UGrid::new(cfg.u_max, cfg.k_nodes)?, method, &cfg)?;
            let value = interp_norm(&curve, &params, &cfg)?;
            emit(out, &to_json(&json!({ "couple": couple.label(), "params": params, "value": value }))?)
        }
        Command::Identify { id, function, params } => {
            let id: Identification = id.parse()?;
            let (tp, _): (TargetParams, _) = load_json("--params", params)?;
            rispaces::interpolation::target_couple(id, &tp)?;
            let f = load_function(function, &cfg)?;
            let (lhs, rhs) = identify_target(id, &f, &tp, &cfg)?;
            let ratio = if rhs > 0.0 { Some(lhs / rhs) } else { None };
            emit(out, &to_json(&json!({ "identification": id.code(), "lhs": lhs, "rhs": rhs, "ratio": ratio }))?)
        }
        Command::Experiment { name, params, csv } => {
            let params = experiments::Params::parse(params)?;
            let report = experiments::run(name, &params, cli.seed, &cfg)?;
            emit(out, &to_json(&report)?)?;
            if let Some(path) = csv {
                emit(Some(path), &members_csv(&report)?)?;
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Report(report.summary()))
            }
        }
        Command::ListExperiments => {
            let text: String = experiments::list().into_iter().map(|(n, d)| format!("{n:<34} {d}\n")).collect();
            emit(out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Config(m) => ("configuration error", m),
                Failure::Numeric(m) => ("numerical failure", m),
                Failure::Report(m) => ("report failed", m),
            };
            eprintln!("rispaces: {kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
