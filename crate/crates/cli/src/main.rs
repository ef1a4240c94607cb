//! `qht`: command-line front end for the one-vs-two source discrimination
//! toolkit.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Number, Value};

use qht_core::helstrom::{bound_report, eigenvalues_sym2, useless_boundary};
use qht_core::montecarlo::{run_simulation, TrialConfig};
use qht_core::oracle::{verify_grid, DEFAULT_GRID_POINTS};
use qht_core::state::{lambda_matrix, normalization};
use qht_core::sweep::{format_number, to_csv, Range, SweepRow, SweepSpec};
use qht_core::{Error, ScenarioParams};

const EXIT_FLAGS: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_CHECK: u8 = 5;

/// Largest oracle discrepancy accepted by `verify`.
const VERIFY_TOL: f64 = 1e-6;
/// Largest |z| accepted by `simulate`.
const Z_LIMIT: f64 = 3.0;

#[derive(Parser, Debug)]
#[command(
    name = "qht",
    version,
    about = "One-vs-two partially coherent source discrimination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Helstrom bound and detection-useless boundary at one scenario.
    Bound {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Optimal advantage over a (k, p) grid.
    AdvantageMap {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long = "p-range", default_value = "0:1:101")]
        p_range: Range,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Mode-sorter error and advantage against the optimum, versus k.
    Spade {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Fixed prior; overrides --p-range.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "p-range", default_value = "0.5:0.5:1")]
        p_range: Range,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo run of the mode sorter; exits 5 when |z| > 3.
    Simulate {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 1_000_000)]
        photons: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Mean photon number per emission attempt (enables vacuum modeling).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Grid-oracle cross-check of the closed forms; exits 5 on any
    /// discrepancy above 1e-6.
    Verify {
        #[arg(long = "grid-points", default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct ThetaArgs {
    /// Coherence phase in radians.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Read --theta as a multiple of pi.
    #[arg(long = "theta-pi")]
    theta_pi: bool,
}

impl ThetaArgs {
    fn radians(&self) -> f64 {
        if self.theta_pi {
            self.theta * PI
        } else {
            self.theta
        }
    }
}

#[derive(Args, Debug)]
struct SceneArgs {
    /// Separation in PSF widths.
    #[arg(long)]
    k: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[command(flatten)]
    theta: ThetaArgs,
    /// Prior probability of two sources.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
}

impl SceneArgs {
    fn params(&self) -> qht_core::Result<ScenarioParams> {
        ScenarioParams::new(self.k, self.gamma, self.theta.radians(), self.p)
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "k-range", default_value = "0:5:101")]
    k_range: Range,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[command(flatten)]
    theta: ThetaArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate { .. } => EXIT_DEGENERATE,
            Error::Accuracy(_) => EXIT_CHECK,
            Error::Domain(_) | Error::InvalidEvent(_) => EXIT_FLAGS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Bound { scene, out } => cmd_bound(&scene, &out),
        Command::AdvantageMap {
            sweep,
            p_range,
            out,
        } => {
            let spec = sweep_spec(&sweep, p_range)?;
            cmd_sweep(&spec, &out)
        }
        Command::Spade {
            sweep,
            p,
            p_range,
            out,
        } => {
            let p_range = match p {
                Some(p) => Range::single(p),
                None => p_range,
            };
            let spec = sweep_spec(&sweep, p_range)?;
            cmd_sweep(&spec, &out)
        }
        Command::Simulate {
            scene,
            photons,
            seed,
            epsilon,
            output,
        } => {
            let mut config = TrialConfig::new(scene.params()?, photons, seed);
            config.epsilon = epsilon;
            cmd_simulate(&config, output)
        }
        Command::Verify { grid_points, out } => cmd_verify(grid_points, &out),
    }
}

fn sweep_spec(args: &SweepArgs, p: Range) -> Result<SweepSpec, Failure> {
    let spec = SweepSpec {
        k: args.k_range,
        p,
        gamma: args.gamma,
        theta: args.theta.radians(),
    };
    spec.validate()?;
    Ok(spec)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let written = match output {
        Some(path) => fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| ("stdout".into(), e)),
    };
    written.map_err(|(target, e)| Failure {
        code: EXIT_IO,
        message: format!("{target}: {e}"),
    })
}

/// JSON number carrying the fixed-format decimal text verbatim.
fn num(v: f64) -> Value {
    let text = format_number(v);
    match serde_json::from_str::<Number>(&text) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

fn cmd_bound(scene: &SceneArgs, out: &OutputArgs) -> CmdResult {
    let params = scene.params()?;
    let (delta, c) = (params.delta(), params.coherence());
    let lambda = lambda_matrix(&params)?;
    let (lo, hi) = eigenvalues_sym2(&lambda)?;
    let report = bound_report(&params)?;
    let fields: Vec<(&str, Value)> = vec![
        ("k", num(params.k())),
        ("gamma", num(params.gamma())),
        ("theta", num(params.theta())),
        ("p", num(params.p())),
        ("delta", num(delta)),
        ("c", num(c)),
        ("n", num(normalization(delta, c)?)),
        ("lambda_11", num(lambda.a11)),
        ("lambda_12", num(lambda.a12)),
        ("lambda_22", num(lambda.a22)),
        ("eig_min", num(lo)),
        ("eig_max", num(hi)),
        ("o_err", num(report.o_err)),
        ("d_err", num(report.d_err)),
        ("a_qod", num(report.a_qod)),
        ("p_star", num(useless_boundary(delta, c)?)),
        ("useless", Value::Bool(report.useless)),
    ];
    let text = match out.format {
        Some(Format::Json) => {
            let map: Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            format!("{}\n", Value::Object(map))
        }
        _ => fields
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k} = {s}\n"),
                other => format!("{k} = {other}\n"),
            })
            .collect(),
    };
    emit(out.output.as_ref(), &text)?;
    Ok(0)
}

fn row_json(row: &SweepRow) -> Value {
    let mut obj = Map::new();
    obj.insert("k".into(), num(row.k));
    obj.insert("p".into(), num(row.p));
    obj.insert("gamma".into(), num(row.gamma));
    obj.insert("theta".into(), num(row.theta));
    match &row.metrics {
        Some(m) => {
            obj.insert("delta".into(), num(m.delta));
            obj.insert("o_err".into(), num(m.o_err));
            obj.insert("d_err".into(), num(m.d_err));
            obj.insert("a_qod".into(), num(m.a_qod));
            obj.insert("p_err_spade".into(), num(m.p_err_spade));
            obj.insert("a_d".into(), num(m.a_d));
            obj.insert("useless".into(), Value::Bool(m.useless));
        }
        None => {
            obj.insert("useless".into(), Value::String("degenerate".into()));
        }
    }
    Value::Object(obj)
}

fn cmd_sweep(spec: &SweepSpec, out: &OutputArgs) -> CmdResult {
    let rows = spec.run()?;
    let text = match out.format {
        Some(Format::Json) => {
            let rows: Vec<Value> = rows.iter().map(row_json).collect();
            format!("{}\n", Value::Array(rows))
        }
        _ => to_csv(&rows),
    };
    emit(out.output.as_ref(), &text)?;
    Ok(0)
}

fn cmd_simulate(config: &TrialConfig, output: Option<PathBuf>) -> CmdResult {
    let r = run_simulation(config)?;
    let value = json!({
        "n_trials": r.n_trials,
        "n_errors": r.n_errors,
        "n_emissions": r.n_emissions,
        "error_rate": num(r.error_rate),
        "std_err": num(r.std_err),
        "analytic_p_err": num(r.analytic_p_err),
        "z_score": num(r.z_score),
        "seed": config.seed,
    });
    emit(output.as_ref(), &format!("{value}\n"))?;
    Ok(if r.z_score.abs() <= Z_LIMIT {
        0
    } else {
        EXIT_CHECK
    })
}

fn cmd_verify(grid_points: usize, out: &OutputArgs) -> CmdResult {
    let report = verify_grid(grid_points)?;
    let pass = report.passes(VERIFY_TOL);
    let text = match out.format {
        Some(Format::Json) => format!(
            "{}\n",
            json!({
                "grid_points": report.grid_points,
                "n_scenarios": report.n_scenarios,
                "max_overlap_diff": num(report.max_overlap_diff),
                "max_rho2_diff": num(report.max_rho2_diff),
                "max_helstrom_diff": num(report.max_helstrom_diff),
                "tolerance": num(VERIFY_TOL),
                "pass": pass,
            })
        ),
        _ => format!(
            "grid_points = {}\nscenarios = {}\nmax_overlap_diff = {}\nmax_rho2_diff = {}\nmax_helstrom_diff = {}\ntolerance = {}\nresult = {}\n",
            report.grid_points,
            report.n_scenarios,
            format_number(report.max_overlap_diff),
            format_number(report.max_rho2_diff),
            format_number(report.max_helstrom_diff),
            format_number(VERIFY_TOL),
            if pass { "PASS" } else { "FAIL" },
        ),
    };
    emit(out.output.as_ref(), &text)?;
    Ok(if pass { 0 } else { EXIT_CHECK })
}
