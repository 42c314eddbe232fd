//! `firerisk`: NDWI fire-risk workflow over a scene manifest.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "firerisk", version, about = "NDWI-based vegetation fire-risk mapping")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Log progress notices (skipped scenes, cloud warnings).
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Thresholds {
    /// NDWI at or below this value is at risk.
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub ndwi_threshold: f64,

    /// NDVI strictly above this value counts as vegetation.
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub ndvi_threshold: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute NDWI and NDVI grids for one scene.
    Index {
        #[arg(long)]
        manifest: PathBuf,
        /// Scene date (YYYY-MM-DD).
        #[arg(long)]
        date: NaiveDate,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Mean NDWI per AOI across all manifest scenes, written as CSV.
    Series {
        #[arg(long)]
        manifest: PathBuf,
        /// AOI file; repeat for several AOIs.
        #[arg(long = "aoi", required = true)]
        aois: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Classify one scene and render the risk maps.
    Riskmap {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        date: NaiveDate,
        /// Receives risk_<date>.ppm, risk_<date>.pgm and risk_<date>.asc.
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Score a risk map (1 at risk, 0 not, nodata unclassified) against ground truth.
    Validate {
        #[arg(long)]
        prediction: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        /// Also write the CSV report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the synthetic fourteen-date fixture: bands, manifest, AOIs, ground truth.
    Synth {
        #[arg(long)]
        out_dir: PathBuf,
        /// Grid side in 20 m cells; a multiple of 8.
        #[arg(long, default_value_t = 64)]
        size: usize,
        #[arg(long, default_value_t = 0.01)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 2017)]
        seed: u64,
    },
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

    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .parse_default_env()
        .init();

    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is configured once");
    }

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(commands::CliError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
