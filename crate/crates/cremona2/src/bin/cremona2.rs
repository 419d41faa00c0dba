//! Command-line driver: classify orbits, run the verification suite, and
//! emit the generator inventory.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cremona2::classify::Surface;
use cremona2::cli::{cmd_classify, cmd_emit_generators, cmd_verify, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "cremona2", version, about = "Exact Galois-orbit classification and generator verification for the plane Cremona group over GF(2)")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify Galois orbits in general position on the minimal surfaces
    Classify {
        /// Surface to classify: P2, Q, D5, D6 or all
        #[arg(long, default_value = "all")]
        surface: String,
        /// Orbit size, or "all"
        #[arg(long, default_value = "all")]
        size: String,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        /// Directory for results/*.json artifacts
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the verification suite and write certificates
    Verify {
        /// Restrict to one suite prefix (groups, involutions, frobenius,
        /// fibration, families, onelink, model, tangent, counting,
        /// doublesection) or a full claim id
        #[arg(long)]
        only: Option<String>,
        /// Directory for certificates/*.json
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run the claim recorded in a certificate file
        #[arg(long)]
        replay: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Emit the inventory of the 111 sporadic generators
    EmitGenerators {
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn parse_surfaces(s: &str) -> Result<Vec<Surface>, String> {
    if s == "all" {
        return Ok(vec![Surface::P2, Surface::Q, Surface::D5, Surface::D6]);
    }
    Ok(vec![s.parse()?])
}

fn parse_size(s: &str) -> Result<Option<u32>, String> {
    if s == "all" {
        return Ok(None);
    }
    s.parse::<u32>().map(Some).map_err(|e| e.to_string())
}

fn main() {
    let args = Args::parse();
    // the modulus registry is embedded at build time; when a moduli.json
    // is present in the working directory, check it agrees so artifacts
    // and the data file cannot drift apart
    if let Err(msg) = cremona2::cli::validate_moduli_file(std::path::Path::new("moduli.json")) {
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
    let code = match args.command {
        Command::Classify { surface, size, format, out, workers } => {
            let config = RunConfig {
                surfaces: parse_surfaces(&surface).unwrap_or_else(|e| fail(&e)),
                size: parse_size(&size).unwrap_or_else(|e| fail(&e)),
                format,
                out_dir: out,
                workers,
                only: None,
                replay: None,
            };
            cmd_classify(&config)
        }
        Command::Verify { only, out, replay, workers } => {
            let config = RunConfig { only, out_dir: out, replay, workers, ..RunConfig::default() };
            cmd_verify(&config)
        }
        Command::EmitGenerators { format, out, workers } => {
            let config = RunConfig { format, out_dir: out, workers, ..RunConfig::default() };
            cmd_emit_generators(&config)
        }
    };
    match code {
        Ok(c) => std::process::exit(c),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn fail(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(1);
}
