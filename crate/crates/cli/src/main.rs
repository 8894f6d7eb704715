//! `bellscope` — singlet predictions, locality checks, and local-hidden-variable
//! analysis from the command line.
//!
//! Exit codes: 0 = the command ran (verdicts such as "inconsistent" or
//! "infeasible" are results, not errors), 2 = malformed input, 3 = the strategy
//! enumeration guard tripped.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bellscope_core::lhv::{chsh_value, local_polytope_membership, LpResult};
use bellscope_core::locality::{epr_bell_derivation, factorization_check, LambdaModel};
use bellscope_core::quantum::{
    fmt_g17, sample_pairs, singlet_behavior, singlet_joint, write_sweep_csv,
};
use bellscope_core::scenario::{angle_between, Behavior, MeasurementDirection, Scenario};
use bellscope_core::{Error, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "bellscope", version)]
#[command(about = "Singlet predictions, Bell-locality checks, and local polytope analysis")]
struct Cli {
    /// Numerical tolerance for validation and verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

/// Either a scenario file or a synthesized single-pair scenario at a given
/// relative angle.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScenarioInput {
    /// Scenario JSON file ({"settings_a": [[x,y,z],...], "settings_b": [...]}).
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,

    /// Synthesize a 1x1 scenario with this relative angle in degrees.
    #[arg(long, value_name = "DEG")]
    theta_deg: Option<f64>,
}

/// Either a behavior file or the singlet behavior over a scenario file.
#[derive(Args)]
struct BehaviorInput {
    /// Behavior JSON file (scenario fields plus "table").
    #[arg(long, value_name = "FILE", conflicts_with_all = ["scenario", "singlet"])]
    behavior: Option<PathBuf>,

    /// Scenario JSON file (with --singlet).
    #[arg(long, value_name = "FILE", requires = "singlet")]
    scenario: Option<PathBuf>,

    /// Use the singlet behavior over --scenario.
    #[arg(long, requires = "scenario")]
    singlet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the singlet joint probabilities, marginals, and E per setting pair.
    Predict {
        #[command(flatten)]
        input: ScenarioInput,
    },
    /// Write the singlet sweep CSV over a theta grid.
    Sweep {
        /// Grid start in radians.
        #[arg(long, default_value_t = 0.0)]
        start_rad: f64,
        /// Grid stop in radians.
        #[arg(long, default_value_t = std::f64::consts::PI)]
        stop_rad: f64,
        /// Number of grid points (>= 1).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        /// Output file; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run the derivation: factorization + completeness vs the singlet table.
    Epr {
        #[command(flatten)]
        input: ScenarioInput,
    },
    /// Check a hidden-state model file for PI, OI, and factorization deviations.
    Check {
        /// Model JSON file.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Scenario JSON file.
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
    },
    /// Test a behavior for local-polytope membership.
    Lhv {
        #[command(flatten)]
        input: BehaviorInput,
    },
    /// Evaluate the CHSH combination S on a behavior.
    Chsh {
        #[command(flatten)]
        input: BehaviorInput,
        #[arg(long, default_value_t = 0)]
        i1: usize,
        #[arg(long, default_value_t = 1)]
        i2: usize,
        #[arg(long, default_value_t = 0)]
        j1: usize,
        #[arg(long, default_value_t = 1)]
        j2: usize,
    },
    /// Draw seeded outcome pairs from the singlet distribution of one setting pair.
    Sample {
        #[command(flatten)]
        input: ScenarioInput,
        /// A-side setting index.
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// B-side setting index.
        #[arg(long, default_value_t = 0)]
        j: usize,
        /// Number of draws.
        #[arg(short = 'n', long, default_value_t = 10_000)]
        count: u64,
    },
}

enum CliError {
    /// Malformed or unreadable input (exit 2).
    Input(String),
    /// Internal size guard (exit 3).
    Guard(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Guard(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_scenario(input: &ScenarioInput) -> Result<Scenario, CliError> {
    if let Some(path) = &input.scenario {
        return Ok(Scenario::from_json_str(&read_file(path)?)?);
    }
    let theta = input
        .theta_deg
        .expect("clap group guarantees one input")
        .to_radians();
    let a = MeasurementDirection::new(0.0, 0.0, 1.0).expect("unit vector");
    let b = MeasurementDirection::new(theta.sin(), 0.0, theta.cos())
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Scenario::new(vec![a], vec![b])?)
}

fn load_behavior(input: &BehaviorInput, tol: f64) -> Result<Behavior, CliError> {
    if let Some(path) = &input.behavior {
        return Ok(Behavior::from_json_str(&read_file(path)?, tol)?);
    }
    if let Some(path) = &input.scenario {
        let scenario = Scenario::from_json_str(&read_file(path)?)?;
        return Ok(singlet_behavior(&scenario));
    }
    Err(CliError::Input(
        "provide --behavior FILE, or --scenario FILE with --singlet".into(),
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Predict { input } => cmd_predict(&cli, input),
        Command::Sweep {
            start_rad,
            stop_rad,
            steps,
            out,
        } => cmd_sweep(*start_rad, *stop_rad, *steps as usize, out.as_deref()),
        Command::Epr { input } => cmd_epr(&cli, input),
        Command::Check { model, scenario } => cmd_check(&cli, model, scenario),
        Command::Lhv { input } => cmd_lhv(&cli, input),
        Command::Chsh {
            input,
            i1,
            i2,
            j1,
            j2,
        } => cmd_chsh(&cli, input, *i1, *i2, *j1, *j2),
        Command::Sample { input, i, j, count } => cmd_sample(&cli, input, *i, *j, *count),
    }
}

fn cmd_predict(cli: &Cli, input: &ScenarioInput) -> Result<(), CliError> {
    let scenario = load_scenario(input)?;
    let mut pairs = Vec::new();
    for i in 0..scenario.na() {
        for j in 0..scenario.nb() {
            let a = scenario.setting_a(i);
            let b = scenario.setting_b(j);
            let theta = angle_between(a, b);
            let p = singlet_joint(a, b);
            pairs.push((i, j, theta, p));
        }
    }

    if cli.json {
        let entries: Vec<_> = pairs
            .iter()
            .map(|(i, j, theta, p)| {
                json!({
                    "i": i,
                    "j": j,
                    "theta_rad": theta,
                    "p_pp": p.p_pp,
                    "p_pm": p.p_pm,
                    "p_mp": p.p_mp,
                    "p_mm": p.p_mm,
                    "marginal_a_plus": 0.5,
                    "marginal_a_minus": 0.5,
                    "marginal_b_plus": 0.5,
                    "marginal_b_minus": 0.5,
                    "E": p.correlation(),
                })
            })
            .collect();
        println!("{}", json!({ "pairs": entries }));
    } else {
        for (i, j, theta, p) in pairs {
            println!(
                "(i={i}, j={j}) theta = {theta:.9} rad ({:.4} deg)",
                theta.to_degrees()
            );
            println!(
                "  P(+,+) = {}  P(+,-) = {}",
                fmt_g17(p.p_pp),
                fmt_g17(p.p_pm)
            );
            println!(
                "  P(-,+) = {}  P(-,-) = {}",
                fmt_g17(p.p_mp),
                fmt_g17(p.p_mm)
            );
            println!("  P(A=+) = 0.5  P(A=-) = 0.5  P(B=+) = 0.5  P(B=-) = 0.5");
            println!("  E = {}", fmt_g17(p.correlation()));
        }
    }
    Ok(())
}

fn cmd_sweep(start: f64, stop: f64, steps: usize, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, start, stop, steps)
                .map_err(|e| CliError::Input(e.to_string()))?;
            fs::write(path, buf)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_sweep_csv(&mut lock, start, stop, steps)
                .map_err(|e| CliError::Input(e.to_string()))?;
            lock.flush().map_err(|e| CliError::Input(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_epr(cli: &Cli, input: &ScenarioInput) -> Result<(), CliError> {
    let scenario = load_scenario(input)?;
    let report = epr_bell_derivation(&scenario, cli.tol);
    if cli.json {
        println!("{}", report.to_json_value());
    } else {
        println!("{}", report.render_text());
    }
    Ok(())
}

fn cmd_check(cli: &Cli, model_path: &Path, scenario_path: &Path) -> Result<(), CliError> {
    let model = LambdaModel::from_json_str(&read_file(model_path)?, cli.tol)?;
    let scenario = Scenario::from_json_str(&read_file(scenario_path)?)?;
    model.check_shape(&scenario)?;
    let report = factorization_check(&model, &scenario, cli.tol);
    if cli.json {
        println!("{}", report.to_json_value());
    } else {
        println!("{}", report.render_text(cli.tol));
    }
    Ok(())
}

fn cmd_lhv(cli: &Cli, input: &BehaviorInput) -> Result<(), CliError> {
    let behavior = load_behavior(input, cli.tol)?;
    let result = local_polytope_membership(&behavior, cli.tol)?;
    print_lp_result(cli, &behavior, &result);
    Ok(())
}

fn print_lp_result(cli: &Cli, behavior: &Behavior, result: &LpResult) {
    if cli.json {
        println!("{}", result.to_json_value());
        return;
    }
    let s = behavior.scenario();
    let strategies = 1usize << (s.na() + s.nb());
    println!("local polytope membership over {strategies} deterministic strategies");
    println!("  feasible: {}", result.feasible);
    println!("  l1_distance: {}", fmt_g17(result.l1_distance));
    println!("  iterations: {}", result.iterations);
    if let Some(w) = &result.weights {
        let shown: Vec<String> = w
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 1e-12)
            .map(|(k, &v)| format!("w[{k}]={v:.9}"))
            .collect();
        println!("  weights (nonzero): {}", shown.join(" "));
    }
}

fn cmd_chsh(
    cli: &Cli,
    input: &BehaviorInput,
    i1: usize,
    i2: usize,
    j1: usize,
    j2: usize,
) -> Result<(), CliError> {
    let behavior = load_behavior(input, cli.tol)?;
    let s = behavior.scenario();
    for (name, idx, bound) in [
        ("i1", i1, s.na()),
        ("i2", i2, s.na()),
        ("j1", j1, s.nb()),
        ("j2", j2, s.nb()),
    ] {
        if idx >= bound {
            return Err(CliError::Input(format!(
                "{name}={idx} is out of range (side has {bound} settings)"
            )));
        }
    }
    if i1 == i2 || j1 == j2 {
        return Err(CliError::Input(
            "CHSH needs two distinct settings per side".into(),
        ));
    }
    let s_value = chsh_value(&behavior, i1, i2, j1, j2);
    if cli.json {
        println!(
            "{}",
            json!({
                "i1": i1, "i2": i2, "j1": j1, "j2": j2,
                "S": s_value,
                "abs_S": s_value.abs(),
                "local_bound": 2.0,
            })
        );
    } else {
        println!("S = {}", fmt_g17(s_value));
        println!("|S| = {}  (local bound 2)", fmt_g17(s_value.abs()));
    }
    Ok(())
}

fn cmd_sample(cli: &Cli, input: &ScenarioInput, i: usize, j: usize, n: u64) -> Result<(), CliError> {
    let scenario = load_scenario(input)?;
    if i >= scenario.na() || j >= scenario.nb() {
        return Err(CliError::Input(format!(
            "setting pair (i={i}, j={j}) is out of range for a {} x {} scenario",
            scenario.na(),
            scenario.nb()
        )));
    }
    let counts = sample_pairs(&scenario, i, j, n, cli.seed);
    if cli.json {
        println!(
            "{}",
            json!({
                "i": i, "j": j, "n": counts.n, "seed": counts.seed,
                "counts": {"pp": counts.pp, "pm": counts.pm, "mp": counts.mp, "mm": counts.mm},
            })
        );
    } else {
        println!(
            "n = {} draws at (i={i}, j={j}), seed = {}",
            counts.n, counts.seed
        );
        println!(
            "  (+,+): {}  (+,-): {}  (-,+): {}  (-,-): {}",
            counts.pp, counts.pm, counts.mp, counts.mm
        );
    }
    Ok(())
}
