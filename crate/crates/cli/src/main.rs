//! `polariscope` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polariscope::Error;

#[derive(Parser)]
#[command(name = "polariscope", version, about = "Off-resonant polarimetry of multilevel alkali atoms")]
struct Cli {
    /// Experiment configuration file. Defaults to the built-in cesium reference setup.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for the CSV table and JSON manifest.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polarizability coefficients for every excited level, with the dyad cross-check.
    Decompose(DecomposeArgs),
    /// Stokes response along a path of spin orientations.
    Trajectory(TrajectoryArgs),
    /// Peak vector and tensor signals across a range of probe detunings.
    Scan(ScanArgs),
    /// Simulated photocurrent record and its filtered estimate of F_z.
    Photocurrent(PhotocurrentArgs),
    /// Squeezing parameter over a grid of probe times.
    Squeeze(SqueezeArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// Ground-state spin (e.g. `4` or `1/2`) on a synthetic D2 line with
    /// nuclear spin f − 1/2, replacing the configured species.
    #[arg(long)]
    spin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Xz,
    Xy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Channel {
    Sy,
    Sz,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long, value_enum, default_value = "xz")]
    path: PathArg,
    /// Channel summarised in the manifest. Defaults to the dominant one for the path.
    #[arg(long, value_enum)]
    measure: Option<Channel>,
    /// Number of orientations along the path. Defaults to the configured value.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    /// First detuning, e.g. `150MHz`.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// Last detuning.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Space the points geometrically instead of linearly.
    #[arg(long)]
    log: bool,
    /// Orientations sampled per path when locating peaks.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct PhotocurrentArgs {
    /// True F_z. Defaults to the configured value.
    #[arg(long, allow_hyphen_values = true)]
    fz: Option<f64>,
    /// Noise seed. Defaults to the configured value.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SqueezeArgs {
    /// Probe times as `START:STOP:N` or a comma-separated list, e.g. `0s:10ms:11`.
    #[arg(long)]
    tau_grid: Option<String>,
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, configuration or environment: exit 2.
    Usage(String),
    /// Independent computation routes disagree: exit 3.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("POLARISCOPE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("POLARISCOPE_THREADS must be a non-negative integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let ctx = commands::Context::load(cli.config, cli.out_dir)?;
    match cli.command {
        Command::Decompose(a) => commands::decompose(&ctx, a.spin.as_deref()),
        Command::Trajectory(a) => {
            let channel = a.measure.map(|c| match c {
                Channel::Sy => commands::Measured::Sy,
                Channel::Sz => commands::Measured::Sz,
            });
            commands::trajectory(&ctx, matches!(a.path, PathArg::Xy), channel, a.samples)
        }
        Command::Scan(a) => commands::scan(&ctx, &a.from, &a.to, a.points, a.log, a.samples),
        Command::Photocurrent(a) => commands::photocurrent(&ctx, a.fz, a.seed),
        Command::Squeeze(a) => commands::squeeze(&ctx, a.tau_grid.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
