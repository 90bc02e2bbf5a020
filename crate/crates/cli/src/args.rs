use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saddlespec_core::{Method, Variant};

#[derive(Debug, Parser)]
#[command(name = "saddlespec", version, about = "Spectral analysis of saddle-point matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

/// Options shared by every command. Each can also be set through the
/// environment; a flag on the command line wins.
#[derive(Debug, Args)]
pub struct Common {
    /// Residual tolerance of the eigensolver, relative to the Gershgorin scale.
    #[arg(long, global = true, env = "SADDLESPEC_TOL", default_value_t = 1e-10)]
    pub tol: f64,

    /// Operator applications allowed per eigenvalue.
    #[arg(long, global = true, env = "SADDLESPEC_MAX_ITER", default_value_t = 5000)]
    pub max_iter: usize,

    /// Formula set for the enclosure with a nonzero C block.
    #[arg(long, global = true, env = "SADDLESPEC_VARIANT", default_value = "corrected", value_parser = parse_variant)]
    pub variant: Variant,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, env = "SADDLESPEC_OUT")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, env = "SADDLESPEC_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Accept systems with fewer velocity than pressure unknowns.
    #[arg(long, global = true, env = "SADDLESPEC_ALLOW_M_LT_N")]
    pub allow_m_lt_n: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

/// Grid and viscosity selection.
#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, env = "SADDLESPEC_METHOD", value_parser = parse_method)]
    pub method: Option<Method>,

    /// Elements per side of the unit square.
    #[arg(long, env = "SADDLESPEC_NE", value_delimiter = ',')]
    pub ne: Vec<usize>,

    /// Viscosity; repeat the flag or separate values by commas.
    #[arg(long, env = "SADDLESPEC_TAU", value_delimiter = ',')]
    pub tau: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble a Stokes saddle-point system and write it as a bundle.
    Gen {
        #[command(flatten)]
        grid: GridArgs,

        /// Write one concatenated file instead of a directory.
        #[arg(long)]
        single_file: bool,
    },
    /// Full spectral report of a bundle.
    Analyze {
        /// Bundle directory or concatenated bundle file.
        bundle: PathBuf,
    },
    /// Both interval enclosures of a bundle, audited against its spectrum.
    Bounds { bundle: PathBuf },
    /// Extremal spectra of the P1-P0 sweep next to the reference values.
    Table1 {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Extremal spectra of the stabilized Q1-P0 sweep next to the reference values.
    Table2 {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, env = "SADDLESPEC_SEED", default_value_t = 20_240_601)]
        seed: u64,

        /// Add this amount to the largest eigenvalue the dense oracle reports.
        #[arg(long, default_value_t = 0.0)]
        mutate_oracle: f64,

        /// Run a few instances per property instead of the full counts.
        #[arg(long)]
        quick: bool,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: saddlespec_core::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: saddlespec_core::Error| e.to_string())
}
