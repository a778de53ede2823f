use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jacobi_mimo::commands::{parse_methods, parse_pairs};
use jacobi_mimo::{
    cmd_bench, cmd_density, cmd_sweep, cmd_validate, BenchSpec, DensitySpec, Output, Result,
    SnrGrid, SweepSpec, ValidateSpec,
};
use jacobi_mimo_core::haar::DEFAULT_SAMPLES;
use jacobi_mimo_core::{CapacityMethod, DEFAULT_NODES};

/// Ergodic capacity of MIMO channels built from truncated Haar unitaries.
#[derive(Debug, Parser)]
#[command(name = "jacobi-mimo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity curves as CSV, one row per (pair, SNR).
    Sweep(SweepArgs),
    /// Time the summed kernel against the closed-form kernel.
    Bench(BenchArgs),
    /// Compare analytic capacity with a Monte Carlo estimate.
    Validate(ValidateArgs),
    /// Histogram sampled eigenvalues against the analytic density.
    Density(DensityArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Number of modes of the unitary.
    #[arg(long)]
    m: u32,
    /// Transmit:receive pairs, e.g. `4:4,8:8`.
    #[arg(long, value_parser = parse_pairs)]
    // full path so clap parses one list instead of repeated flags
    pairs: ::std::vec::Vec<(u32, u32)>,
    /// Quadrature nodes per integral.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    /// Output file, or `-` for standard output.
    #[arg(long, default_value = "-")]
    out: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// `start:stop:step` in dB, or a single value.
    #[arg(long = "snr-db", default_value = "0:30:1", value_parser = parse_grid)]
    snr_db: SnrGrid,
    /// Any of sum, cd, lb, lowsnr, mc.
    #[arg(long, default_value = "cd", value_parser = parse_methods)]
    methods: ::std::vec::Vec<CapacityMethod>,
    /// Monte Carlo draws per pair.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "snr-db", default_value = "0:30:1", value_parser = parse_grid)]
    snr_db: SnrGrid,
    /// Timed passes over the SNR grid per form.
    #[arg(long, default_value_t = 20)]
    reps: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "snr-db", default_value = "0:30:15", value_parser = parse_grid)]
    snr_db: SnrGrid,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Equal-width bins on [0, 1].
    #[arg(long, default_value_t = 20)]
    bins: usize,
}

fn parse_grid(s: &str) -> Result<SnrGrid> {
    s.parse()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => {
            let spec = SweepSpec {
                m: a.common.m,
                pairs: a.common.pairs,
                snr_db: a.snr_db,
                methods: a.methods,
                mc_samples: a.samples,
                seed: a.seed,
                nodes: a.common.nodes,
            };
            cmd_sweep(&spec, &a.common.out)?;
        }
        Command::Bench(a) => {
            let spec = BenchSpec {
                m: a.common.m,
                pairs: a.common.pairs,
                snr_db: a.snr_db,
                reps: a.reps,
                nodes: a.common.nodes,
            };
            for cmp in cmd_bench(&spec, &a.common.out)? {
                eprintln!("{}: cd form {:.2}x faster", cmp.sum.config, cmp.speedup());
            }
        }
        Command::Validate(a) => {
            let spec = ValidateSpec {
                m: a.common.m,
                pairs: a.common.pairs,
                snr_db: a.snr_db,
                samples: a.samples,
                seed: a.seed,
                nodes: a.common.nodes,
            };
            let report = cmd_validate(&spec, &a.common.out)?;
            eprintln!("max |z| = {:.3}", report.max_abs_z());
        }
        Command::Density(a) => {
            let spec = DensitySpec {
                m: a.common.m,
                pairs: a.common.pairs,
                samples: a.samples,
                seed: a.seed,
                bins: a.bins,
                nodes: a.common.nodes,
            };
            for (config, check) in cmd_density(&spec, &a.common.out)? {
                eprintln!(
                    "{config}: max |deviation| {:.3e}, max |z| {:.3}, {} sparse bins",
                    check.max_abs_deviation,
                    check.max_z,
                    check.sparse_bins.len()
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
