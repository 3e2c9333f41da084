//! `confdyn`: file-based front end to the confdyn library.
//!
//! Exit codes: 0 success, 1 rejected input, 2 numerical failure, 64 usage.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "confdyn", version, about = "Conformal dynamics laboratory")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RasterArgs {
    /// xmin,xmax,ymin,ymax
    #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
    viewport: String,
    /// WxH
    #[arg(long, default_value = "256x256")]
    size: String,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Output image; `.png` selects PNG, anything else binary PPM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Built-in conjugacy: rho2 or anti_blaschke3.
    #[arg(long, conflicts_with = "config")]
    pair: Option<String>,
    /// Conjugacy config JSON.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a Julia set or a Schwarz reflection system.
    Render {
        /// Catalog name or rational-map JSON.
        #[arg(long, conflicts_with = "system")]
        map: Option<String>,
        /// Catalog name or system JSON.
        #[arg(long)]
        system: Option<String>,
        #[command(flatten)]
        raster: RasterArgs,
    },
    /// Render the limit set of a kissing reflection group.
    LimitSet {
        /// Packing JSON.
        #[arg(long, conflicts_with = "ideal_polygon")]
        packing: Option<PathBuf>,
        /// Regular ideal polygon with this many sides.
        #[arg(long)]
        ideal_polygon: Option<usize>,
        #[command(flatten)]
        raster: RasterArgs,
    },
    /// Matched Markov arcs of a conjugacy as CSV.
    Conjugacy {
        #[command(flatten)]
        pair: PairArgs,
        /// Deepest refinement level.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scalewise distortion at t = 2^-k as CSV.
    Distortion {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 4)]
        kmin: usize,
        #[arg(long, default_value_t = 14)]
        kmax: usize,
        /// Base points per scale.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Beurling–Ahlfors extension samples as CSV and the David tail as JSON.
    BaExtend {
        #[command(flatten)]
        pair: PairArgs,
        /// Grid resolution over [-1, 1]^2.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Samples of the circle homeomorphism.
        #[arg(long, default_value_t = 16384)]
        lift_samples: usize,
        #[arg(long, default_value_t = 30.0)]
        max_level: f64,
        #[arg(long, default_value_t = 0.25)]
        level_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tail: Option<PathBuf>,
    },
    /// Closed-form constants against computed values.
    VerifyConstants,
    /// Cusps, double points, tiles and bi-angled tree of a map in Σ_d*.
    Suffridge {
        #[arg(long)]
        degree: usize,
        /// a_1..a_{d-1} as "re,im;re,im;..."
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(confdyn::Error),
    Io(String),
}

impl From<confdyn::Error> for CliError {
    fn from(e: confdyn::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e.kind() {
                confdyn::ErrorKind::Validation => 1,
                confdyn::ErrorKind::Numeric => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

fn configure_workers(n: Option<usize>) -> Result<(), CliError> {
    if n == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_workers(cli.workers)?;
    match cli.command {
        Command::Render {
            map,
            system,
            raster,
        } => commands::render(map, system, &raster),
        Command::LimitSet {
            packing,
            ideal_polygon,
            raster,
        } => commands::limit_set(packing, ideal_polygon, &raster),
        Command::Conjugacy { pair, levels, out } => commands::conjugacy(&pair, levels, out),
        Command::Distortion {
            pair,
            kmin,
            kmax,
            samples,
            out,
        } => commands::distortion(&pair, kmin, kmax, samples, out),
        Command::BaExtend {
            pair,
            grid,
            lift_samples,
            max_level,
            level_step,
            out,
            tail,
        } => commands::ba_extend(&pair, grid, lift_samples, max_level, level_step, out, tail),
        Command::VerifyConstants => commands::verify_constants(),
        Command::Suffridge {
            degree,
            coeffs,
            out,
        } => commands::suffridge(degree, &coeffs, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("confdyn: {e}");
            ExitCode::from(e.code())
        }
    }
}
