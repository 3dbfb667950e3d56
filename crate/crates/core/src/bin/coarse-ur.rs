use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coarse_ur::coarse::{BinGrid, DiscreteDist};
use coarse_ur::experiments::{self, ConvergencePoint, Format, SweepSpec};
use coarse_ur::relations::{self, full_report, report_from_dists};
use coarse_ur::sampling;
use coarse_ur::state::{Axis, StateModel, StateSpec};
use coarse_ur::Error;

/// Uncertainty relations for coarse-grained position/momentum measurements.
#[derive(Parser)]
#[command(name = "coarse-ur", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every relation for a state (or a pair of measured histograms) as JSON.
    Report(ReportArgs),
    /// Histogram densities of the position marginal for several bin widths.
    Fig1(Fig1Args),
    /// Sweep Δ = aσₓ, δ = aσₚ and report the coarse and trivial products.
    Fig2(Fig2Args),
    /// Search for bin widths at which the naive discrete product breaks ħ²/4.
    FalseViolation(StateArg),
    /// Simulate one finite-statistics measurement run.
    Simulate(SimulateArgs),
    /// Total-variation distance against shot count.
    Converge(ConvergeArgs),
}

#[derive(Args)]
struct StateArg {
    /// State JSON file.
    #[arg(long)]
    state: PathBuf,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, required_unless_present_all = ["hist_x", "hist_p"], conflicts_with_all = ["hist_x", "hist_p"])]
    state: Option<PathBuf>,
    /// Position bin width Δ.
    #[arg(long, value_parser = positive, required_unless_present = "hist_x")]
    dx: Option<f64>,
    /// Momentum bin width δ.
    #[arg(long, value_parser = positive, required_unless_present = "hist_p")]
    dp: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    offset_x: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    offset_p: f64,
    /// Shift both grids so each mean sits on a bin center (overrides offsets).
    #[arg(long)]
    recenter: bool,
    /// Measured position histogram (bin-distribution JSON).
    #[arg(long, requires = "hist_p")]
    hist_x: Option<PathBuf>,
    /// Measured momentum histogram (bin-distribution JSON).
    #[arg(long, requires = "hist_x")]
    hist_p: Option<PathBuf>,
    /// ħ for histogram input.
    #[arg(long, value_parser = positive, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long)]
    state: PathBuf,
    /// Comma-separated bin widths.
    #[arg(long, value_delimiter = ',', value_parser = positive, default_value = "1.5,1,0.5")]
    widths: Vec<f64>,
    /// Plotting grid size.
    #[arg(long, default_value_t = 601)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct Fig2Args {
    /// State JSON file; defaults to the ground state at --hbar.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_parser = positive, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, value_parser = positive, default_value_t = 0.01)]
    a_min: f64,
    #[arg(long, value_parser = positive, default_value_t = 10.0)]
    a_max: f64,
    #[arg(long, default_value_t = 41)]
    a_steps: usize,
    /// Bin-counting window, in standard deviations.
    #[arg(long, value_parser = positive, default_value_t = 6.0)]
    interval_sigmas: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "position")]
    axis: AxisArg,
    /// Bin width.
    #[arg(long, value_parser = positive)]
    width: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    offset: f64,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "position")]
    axis: AxisArg,
    #[arg(long, value_parser = positive)]
    width: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    offset: f64,
    /// Comma-separated, strictly increasing shot counts.
    #[arg(long, value_delimiter = ',', default_value = "100,10000,1000000")]
    shots: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AxisArg {
    Position,
    Momentum,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Position => Axis::Position,
            AxisArg::Momentum => Axis::Momentum,
        }
    }
}

fn load_state(path: &PathBuf) -> Result<StateModel, Error> {
    StateSpec::load(path)?.build()
}

fn run(cli: Cli) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Report(args) => {
            let report = match (&args.state, &args.hist_x, &args.hist_p) {
                (Some(path), _, _) => {
                    let state = load_state(path)?;
                    let (dx, dp) = (args.dx.unwrap_or(1.0), args.dp.unwrap_or(1.0));
                    let (gx, gp) = if args.recenter {
                        let mp = state.momentum()?.mean();
                        (
                            BinGrid::recentered(dx, state.position().mean())?,
                            BinGrid::recentered(dp, mp)?,
                        )
                    } else {
                        (BinGrid::new(dx, args.offset_x)?, BinGrid::new(dp, args.offset_p)?)
                    };
                    full_report(&state, gx, gp)?
                }
                (None, Some(hx), Some(hp)) => {
                    let dist_x = DiscreteDist::from_json(&std::fs::read_to_string(hx)?)?;
                    let dist_p = DiscreteDist::from_json(&std::fs::read_to_string(hp)?)?;
                    report_from_dists(&dist_x, &dist_p, args.hbar, None)?
                }
                _ => unreachable!("clap enforces --state or both histograms"),
            };
            writeln!(out, "{}", report.to_json()?)?;
        }
        Command::Fig1(args) => {
            let state = load_state(&args.state)?;
            let rows = experiments::histogram_curves(&state, &args.widths, args.points)?;
            experiments::emit(&rows, args.format, &mut out)?;
        }
        Command::Fig2(args) => {
            let state = match &args.state {
                Some(path) => load_state(path)?,
                None => StateModel::ground_state(args.hbar)?,
            };
            let spec = SweepSpec::geometric(state, args.a_min, args.a_max, args.a_steps, args.interval_sigmas)?;
            experiments::emit(&experiments::sweep(&spec)?, args.format, &mut out)?;
        }
        Command::FalseViolation(args) => {
            let state = load_state(&args.state)?;
            let witness = relations::find_false_violation(&state)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&witness)?)?;
        }
        Command::Simulate(args) => {
            let state = load_state(&args.state)?;
            let marginal = state.marginal(args.axis.into())?;
            let run = sampling::simulate_run(&marginal, BinGrid::new(args.width, args.offset)?, args.shots, args.seed)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&run)?)?;
        }
        Command::Converge(args) => {
            let state = load_state(&args.state)?;
            let marginal = state.marginal(args.axis.into())?;
            let grid = BinGrid::new(args.width, args.offset)?;
            let rows: Vec<ConvergencePoint> = sampling::convergence_study(&marginal, grid, &args.shots, args.seed)?
                .into_iter()
                .map(|(n, tv_distance)| ConvergencePoint { n, tv_distance })
                .collect();
            experiments::emit(&rows, args.format, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::InternalInconsistency(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
