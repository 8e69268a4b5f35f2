//! Command-line front end: scenario runs, the depth-scaling report, potential
//! decomposition tables, circuit text dumps, and backend cross-checks.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, unknown keys, unreadable
//! config), 2 numerical-validation failure (the engine rejected the inputs or
//! a cross-check exceeded its bound).

use clap::{Args, Parser, Subcommand};
use qwave::pauli::decompose_diagonal;
use qwave::propagator::compare_backends;
use qwave::report::depth_report;
use qwave::scenario::{
    build_potential, default_config, run_scenario, ScenarioConfig, ScenarioKind,
};
use qwave::transpile::{transpile, TranspileTarget};
use std::path::PathBuf;
use std::process::ExitCode;

/// Register sizes the stock scenarios are validated on; larger runs are
/// allowed but flagged on stderr.
const VALIDATED_MAX_QUBITS: usize = 5;
const DEFAULT_QUBITS: usize = 5;
/// Backend agreement bound for `compare`, matching the acceptance suite.
const COMPARE_BOUND: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qwave",
    version,
    about = "Grid-based 1D wave-packet dynamics: split-operator steps compiled to circuits, \
             simulated, and cross-checked against classical oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and emit the per-step observable table (CSV)
    Run(RunArgs),
    /// Compile one split step along both routes and tabulate transpiled depths
    DepthReport(DepthReportArgs),
    /// Print the Pauli-Z string decomposition of a scenario's potential
    Decompose(SelectArgs),
    /// Print one split-operator step as circuit text
    EmitCircuit(EmitCircuitArgs),
    /// Propagate on all three backends and report their per-step deviations
    Compare(CompareArgs),
}

#[derive(Args)]
struct SelectArgs {
    /// free_particle | tunneling | harmonic
    #[arg(long)]
    scenario: Option<String>,
    /// Register size n (grid has 2^n points)
    #[arg(long)]
    qubits: Option<usize>,
    /// Flat config file: one `key = value` per line, `#` comments
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    select: SelectArgs,
    /// circuit | dense | fft
    #[arg(long)]
    backend: Option<String>,
    /// Number of propagation steps
    #[arg(long)]
    steps: Option<usize>,
    /// Time step in atomic units
    #[arg(long)]
    dt: Option<f64>,
    /// Sample post-step densities from this many measurement shots
    #[arg(long)]
    shots: Option<u64>,
    /// Depolarizing probability after every 1-qubit gate
    #[arg(long)]
    noise_p1: Option<f64>,
    /// Depolarizing probability after every 2-qubit gate
    #[arg(long)]
    noise_p2: Option<f64>,
    /// Seed for shot sampling and noise
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the 32-point common-grid density table here
    #[arg(long)]
    common_grid: Option<PathBuf>,
}

#[derive(Args)]
struct DepthReportArgs {
    /// Hamiltonian to compile (defaults to harmonic)
    #[arg(long, default_value = "harmonic")]
    scenario: String,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmitCircuitArgs {
    #[command(flatten)]
    select: SelectArgs,
    /// Time step in atomic units
    #[arg(long)]
    dt: Option<f64>,
    /// Lower to the CZ/RZ/SX/X linear-chain target first
    #[arg(long)]
    transpiled: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    select: SelectArgs,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
}

enum Failure {
    Usage(String),
    Run(anyhow::Error),
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn run_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Run(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else from
            // the parser is a usage problem.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::DepthReport(args) => cmd_depth_report(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::EmitCircuit(args) => cmd_emit_circuit(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Defaults for (scenario, qubits) come from the command line first, the
/// config file second. The fully populated defaults then absorb the file's
/// settings, and finally the explicit flags, so the command line always wins.
fn resolve_config(
    select: &SelectArgs,
    overrides: &[(&'static str, Option<String>)],
) -> Result<ScenarioConfig, Failure> {
    let file_text = match &select.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?),
        None => None,
    };
    let mut kind_name = select.scenario.clone();
    let mut qubits = select.qubits;
    if let Some(text) = &file_text {
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                match key.trim() {
                    "scenario" if kind_name.is_none() => {
                        kind_name = Some(value.trim().to_string());
                    }
                    "qubits" if qubits.is_none() => {
                        qubits = value.trim().parse().ok();
                    }
                    _ => {}
                }
            }
        }
    }
    let kind: ScenarioKind = kind_name
        .ok_or_else(|| {
            Failure::Usage("missing --scenario (free_particle, tunneling, or harmonic)".into())
        })?
        .parse()
        .map_err(usage)?;
    let n_qubits = qubits.unwrap_or(DEFAULT_QUBITS);

    let mut config = default_config(kind, n_qubits).map_err(usage)?;
    if let Some(text) = &file_text {
        config.apply_config_text(text).map_err(usage)?;
    }
    config.kind = kind;
    config.n_qubits = n_qubits;
    for (key, value) in overrides {
        if let Some(value) = value {
            config.apply_key(key, value).map_err(usage)?;
        }
    }
    if let Some(out) = &select.out {
        config.out = Some(out.clone());
    }
    if config.n_qubits > VALIDATED_MAX_QUBITS {
        eprintln!(
            "note: {} qubits is beyond the validated 2..={VALIDATED_MAX_QUBITS} range; \
             expect slower runs and untested physics parameters",
            config.n_qubits
        );
    }
    Ok(config)
}

fn write_or_print(out: &Option<PathBuf>, text: &str, what: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(run_err)?;
            eprintln!("wrote {what} to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<u8, Failure> {
    let overrides = [
        ("backend", args.backend.clone()),
        ("steps", args.steps.map(|v| v.to_string())),
        ("dt", args.dt.map(|v| v.to_string())),
        ("shots", args.shots.map(|v| v.to_string())),
        ("noise_p1", args.noise_p1.map(|v| v.to_string())),
        ("noise_p2", args.noise_p2.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        (
            "common_grid",
            args.common_grid
                .as_ref()
                .map(|p| p.display().to_string()),
        ),
    ];
    let config = resolve_config(&args.select, &overrides)?;
    let outcome = run_scenario(&config).map_err(run_err)?;
    match &config.out {
        Some(path) => eprintln!("wrote observables to {}", path.display()),
        None => print!("{}", outcome.csv),
    }
    if let Some(path) = &config.common_grid {
        eprintln!("wrote common-grid densities to {}", path.display());
    }
    Ok(0)
}

fn cmd_depth_report(args: DepthReportArgs) -> Result<u8, Failure> {
    let kind: ScenarioKind = args.scenario.parse().map_err(usage)?;
    if args.n_min < 2 || args.n_max > 7 || args.n_min > args.n_max {
        return Err(Failure::Usage(format!(
            "depth report range must satisfy 2 <= n-min <= n-max <= 7, got {}..={}",
            args.n_min, args.n_max
        )));
    }
    let target = TranspileTarget::linear(args.n_max);
    let report = depth_report(args.n_min, args.n_max, &target, kind).map_err(run_err)?;
    write_or_print(&args.out, &report.to_csv(), "depth report")?;
    Ok(0)
}

fn cmd_decompose(args: SelectArgs) -> Result<u8, Failure> {
    let config = resolve_config(&args, &[])?;
    let grid = config.grid().map_err(run_err)?;
    let potential = build_potential(&config, &grid);
    let decomposition = decompose_diagonal(&potential).map_err(run_err)?;
    write_or_print(&args.out, &decomposition.to_table(), "decomposition table")?;
    Ok(0)
}

fn cmd_emit_circuit(args: EmitCircuitArgs) -> Result<u8, Failure> {
    let overrides = [("dt", args.dt.map(|v| v.to_string()))];
    let config = resolve_config(&args.select, &overrides)?;
    let (plan, _) = config.to_plan().map_err(run_err)?;
    let decomposition = decompose_diagonal(&plan.potential).map_err(run_err)?;
    let mut circuit = qwave::circuit::trotter_step_circuit(
        &plan.grid,
        &decomposition,
        plan.mu_au(),
        plan.dt_au,
    );
    if args.transpiled {
        let target = TranspileTarget::linear(config.n_qubits);
        circuit = transpile(&circuit, &target).map_err(run_err)?;
    }
    write_or_print(&args.select.out, &circuit.to_text(), "circuit")?;
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<u8, Failure> {
    let overrides = [
        ("steps", args.steps.map(|v| v.to_string())),
        ("dt", args.dt.map(|v| v.to_string())),
    ];
    let config = resolve_config(&args.select, &overrides)?;
    let (plan, initial) = config.to_plan().map_err(run_err)?;
    let comparison = compare_backends(&plan, &initial).map_err(run_err)?;
    let mut text = String::from("step,circuit_vs_dense,dense_vs_fft\n");
    for (step, (cd, df)) in comparison
        .circuit_vs_dense
        .iter()
        .zip(&comparison.dense_vs_fft)
        .enumerate()
    {
        text.push_str(&format!("{step},{cd:.3e},{df:.3e}\n"));
    }
    let max = comparison.max_deviation();
    text.push_str(&format!("# max deviation {max:.3e} (bound {COMPARE_BOUND:.0e})\n"));
    write_or_print(&args.select.out, &text, "backend comparison")?;
    if max > COMPARE_BOUND {
        eprintln!("backends disagree: max per-step deviation {max:.3e} exceeds {COMPARE_BOUND:.0e}");
        return Ok(2);
    }
    Ok(0)
}
