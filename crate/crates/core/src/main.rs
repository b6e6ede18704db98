use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cpb_sim::cli::{run_custom, run_figure, FigureId, Format, OutputKind, SweepSpec};
use cpb_sim::entanglement::Selection;
use cpb_sim::evolution::{EvolutionMode, MuMode};
use cpb_sim::validate::run_validation;
use cpb_sim::{Result, SimError};

/// Charge-qubit/cavity simulator: entanglement dynamics and teleportation
/// over the generated channel.
#[derive(Parser)]
#[command(name = "cpb-sim", version, about)]
struct Cli {
    /// Worker threads for the sweep (default: all cores). Results are
    /// independent of this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the data series of one figure preset.
    Figure {
        /// Figure id: 1a..1f, 2a, 2b, 3a, 3b, 4a, 4b or 5.
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
        /// csv or json
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run a custom sweep.
    Sweep(SweepArgs),
    /// Run the self-validation suite.
    Validate {
        /// text or json
        #[arg(long, default_value = "text")]
        format: String,
        /// Target the hard mode-agreement check at this analytic mode
        /// (literal_frequency deliberately fails it).
        #[arg(long, value_parser = parse_mu_mode)]
        mu_mode: Option<MuMode>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config mirroring the sweep fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    /// Capacitance ratio C_j/C_g.
    #[arg(long)]
    cjg: Option<f64>,
    #[arg(long)]
    n_photon: Option<usize>,
    /// Superposition weight for the a|g,n> + (1-a)|e,n> initial state.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// closed_form or oracle
    #[arg(long, value_parser = parse_mode)]
    mode: Option<EvolutionMode>,
    /// standard or literal_frequency
    #[arg(long, value_parser = parse_mu_mode)]
    mu_mode: Option<MuMode>,
    /// adjacent_pair or top_two_fock
    #[arg(long, value_parser = parse_selection)]
    selection: Option<Selection>,
    #[arg(long)]
    fock_cutoff: Option<usize>,
    /// Emit the teleportation schema instead of the entanglement one.
    #[arg(long)]
    fidelity: bool,
    #[arg(long)]
    out: PathBuf,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

fn parse_mode(s: &str) -> Result<EvolutionMode> {
    match s {
        "closed_form" => Ok(EvolutionMode::ClosedForm),
        "oracle" => Ok(EvolutionMode::Oracle),
        other => Err(SimError::Usage(format!(
            "unknown mode '{other}' (expected closed_form or oracle)"
        ))),
    }
}

fn parse_mu_mode(s: &str) -> Result<MuMode> {
    match s {
        "standard" => Ok(MuMode::Standard),
        "literal_frequency" => Ok(MuMode::LiteralFrequency),
        other => Err(SimError::Usage(format!(
            "unknown mu_mode '{other}' (expected standard or literal_frequency)"
        ))),
    }
}

fn parse_selection(s: &str) -> Result<Selection> {
    match s {
        "adjacent_pair" => Ok(Selection::AdjacentPair),
        "top_two_fock" => Ok(Selection::TopTwoFock),
        other => Err(SimError::Usage(format!(
            "unknown selection '{other}' (expected adjacent_pair or top_two_fock)"
        ))),
    }
}

fn spec_from_args(args: &SweepArgs) -> Result<SweepSpec> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| SimError::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => SweepSpec::default(),
    };
    if let Some(v) = args.delta {
        spec.delta = v;
    }
    if let Some(v) = args.cjg {
        spec.cjg = v;
    }
    if let Some(v) = args.n_photon {
        spec.n_photon = v;
    }
    if args.a.is_some() {
        spec.a = args.a;
    }
    if let Some(v) = args.tau_max {
        spec.tau_max = v;
    }
    if let Some(v) = args.steps {
        spec.steps = v;
    }
    if let Some(v) = args.mode {
        spec.mode = v;
    }
    if let Some(v) = args.mu_mode {
        spec.mu_mode = v;
    }
    if let Some(v) = args.selection {
        spec.selection = v;
    }
    if args.fock_cutoff.is_some() {
        spec.fock_cutoff = args.fock_cutoff;
    }
    if args.fidelity {
        spec.outputs = vec![OutputKind::Fidelity];
    }
    Ok(spec)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Figure {
            figure,
            out,
            format,
        } => {
            let id = FigureId::from_str(&figure)?;
            run_figure(id, &out, Format::from_str(&format)?)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let format = Format::from_str(&args.format)?;
            let spec = spec_from_args(&args)?;
            run_custom(&spec, &args.out, format)?;
            Ok(0)
        }
        Command::Validate { format, mu_mode } => {
            let report = run_validation(mu_mode.unwrap_or(MuMode::Standard))?;
            match format.as_str() {
                "text" => print!("{}", report.render_text()),
                "json" => println!(
                    "{}",
                    serde_json::to_string_pretty(&report)
                        .map_err(|e| SimError::Invariant(format!("json failed: {e}")))?
                ),
                other => {
                    return Err(SimError::Usage(format!(
                        "unknown format '{other}' (expected text or json)"
                    )))
                }
            }
            Ok(if report.all_hard_passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("error: thread pool already initialized");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
