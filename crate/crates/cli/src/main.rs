//! Command-line driver: dataset generation, training, dispersion reports,
//! benchmark runs, convergence studies and weight-distribution probes.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numeric
//! failures (inadmissible states, blow-ups, non-finite losses).

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "weno-nn",
    version,
    about = "WENO5-JS/Z schemes with a learned weight compensation: train, analyze, run benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train a compensation network from a TOML configuration file.
    Train {
        /// TOML file; see the repository README for the key set.
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Emit the numerical spectrum and spectral-error bound of a scheme.
    Adr {
        /// linear|weno5-js|weno5-z|weno5-js-nn|weno5-z-nn
        #[arg(long)]
        scheme: String,
        /// Checkpoint JSON, required for the NN schemes.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Grid size of the wavenumber sweep (even).
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Run a built-in benchmark problem and write snapshots.
    Run {
        /// composite|sine|lax|blast|shu-osher|titarev-toro|riemann2d|rt|dmr
        problem: String,
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long)]
        tfinal: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        /// Intermediate snapshot times (repeatable).
        #[arg(long = "snapshot")]
        snapshots: Vec<f64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Grid-refinement study on smooth periodic advection.
    Convergence {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Strictly increasing cell counts.
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        resolutions: Vec<usize>,
        #[arg(long, default_value_t = 0.4)]
        cfl: f64,
        /// Replace the scheme by first-order upwind (sanity anchor).
        #[arg(long)]
        first_order: bool,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Per-interface weight triples of one or more schemes on a probe
    /// function.
    Weights {
        /// probe (two-sine profile with a jump at x = 0.5) or constant.
        #[arg(long, default_value = "probe")]
        function: String,
        /// Scheme label, repeatable.
        #[arg(long = "scheme", required = true)]
        schemes: Vec<String>,
        /// Checkpoints consumed in order by the NN schemes.
        #[arg(long = "checkpoint")]
        checkpoints: Vec<PathBuf>,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Generate the training dataset and write a summary (optionally all
    /// node and interface values).
    Dataset {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        tanh: usize,
        #[arg(long, default_value_t = 1000)]
        sine: usize,
        #[arg(long, default_value_t = 1000)]
        poly: usize,
        /// Also write every node value and reference interface flux.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Train {
            config,
            seed,
            out_dir,
        } => commands::cmd_train(&config, seed, &out_dir),
        Cmd::Adr {
            scheme,
            checkpoint,
            n,
            out_dir,
        } => commands::cmd_adr(&scheme, checkpoint.as_deref(), n, &out_dir),
        Cmd::Run {
            problem,
            scheme,
            checkpoint,
            nx,
            ny,
            tfinal,
            cfl,
            snapshots,
            out_dir,
        } => commands::cmd_run(
            &problem,
            &scheme,
            checkpoint.as_deref(),
            commands::RunOverrides {
                nx,
                ny,
                tfinal,
                cfl,
                snapshots,
            },
            &out_dir,
        ),
        Cmd::Convergence {
            scheme,
            checkpoint,
            resolutions,
            cfl,
            first_order,
            out_dir,
        } => commands::cmd_convergence(
            &scheme,
            checkpoint.as_deref(),
            &resolutions,
            cfl,
            first_order,
            &out_dir,
        ),
        Cmd::Weights {
            function,
            schemes,
            checkpoints,
            nx,
            out_dir,
        } => commands::cmd_weights(&function, &schemes, &checkpoints, nx, &out_dir),
        Cmd::Dataset {
            seed,
            tanh,
            sine,
            poly,
            full,
            out_dir,
        } => commands::cmd_dataset(seed, tanh, sine, poly, full, &out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
