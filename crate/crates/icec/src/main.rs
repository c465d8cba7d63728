//! Command-line driver: `total` sweeps the incoming electron energy,
//! `spectrum` writes outgoing-electron spectra, `validate` runs the internal
//! consistency suite, `preset` dumps a shipped configuration.
//!
//! Exit codes: 0 ok, 1 physics-check failure, 2 input error.

use clap::{Parser, Subcommand};
use icec::config::RunConfig;
use icec::presets;
use icec::runner;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "icec", version, about = "Vibrationally resolved ICEC cross sections and electron spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to a run configuration, or the name of a shipped preset
    /// (`h_plus_lih`).
    #[arg(long)]
    config: String,
    /// Output directory; defaults to the configuration's `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all available).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the incoming electron energy and write the cross-section table.
    Total(CommonArgs),
    /// Write the outgoing-electron spectrum at the configured fixed energy
    /// (one file per configured temperature).
    Spectrum(CommonArgs),
    /// Run the internal consistency suite and report pass/fail per check.
    Validate(CommonArgs),
    /// Print a shipped configuration as TOML.
    Preset {
        /// Preset name (`h_plus_lih`).
        name: String,
    },
}

fn load_config(name_or_path: &str) -> Result<RunConfig, String> {
    if name_or_path == "h_plus_lih" {
        return Ok(presets::h_plus_lih_run_config());
    }
    RunConfig::from_path(Path::new(name_or_path)).map_err(|e| e.to_string())
}

fn resolve_threads(threads: usize) -> usize {
    if threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        threads
    }
}

fn run() -> Result<ExitCode, (String, u8)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Preset { name } => {
            if name != "h_plus_lih" {
                return Err((format!("unknown preset '{name}' (available: h_plus_lih)"), 2));
            }
            print!("{}", presets::h_plus_lih_run_config().to_toml());
            Ok(ExitCode::SUCCESS)
        }
        Command::Total(args) => {
            let config = load_config(&args.config).map_err(|e| (e, 2))?;
            let out_dir = args.out.unwrap_or_else(|| config.output.directory.clone());
            let threads = resolve_threads(args.threads);
            let path = runner::cmd_total(&config, &out_dir, threads)
                .map_err(|e| (e.to_string(), 2))?;
            eprintln!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum(args) => {
            let config = load_config(&args.config).map_err(|e| (e, 2))?;
            let out_dir = args.out.unwrap_or_else(|| config.output.directory.clone());
            let threads = resolve_threads(args.threads);
            let paths = runner::cmd_spectrum(&config, &out_dir, threads)
                .map_err(|e| (e.to_string(), 2))?;
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let config = load_config(&args.config).map_err(|e| (e, 2))?;
            let report = runner::cmd_validate(&config, args.out.as_deref())
                .map_err(|e| (e.to_string(), 2))?;
            report.print();
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
