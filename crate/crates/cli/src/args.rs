use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "alrfit",
    version,
    about = "ALR regression for compositional data"
)]
pub struct Cli {
    /// Worker threads for simulation and bootstrap (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the per-component regression and report estimates with Wald intervals.
    Fit(FitArgs),
    /// Back-map the fit to part proportions at covariate values.
    Proportions(ProportionsArgs),
    /// Run a seeded Monte Carlo study for one or more sample sizes.
    Simulate(SimulateArgs),
    /// ALR transform of a composition, or its inverse.
    Alr(AlrArgs),
    /// Compare computed results with the published tables.
    Reproduce(ReproduceArgs),
    /// Print the bundled match table as CSV.
    Data,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Match table CSV; the bundled table when omitted.
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Downgrade percentage-sum violations to warnings.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    Delta,
    Bootstrap,
}

#[derive(Debug, Args)]
pub struct ProportionsArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Covariate value; repeat for several. Comma-separate entries when p > 1.
    #[arg(long = "z", required = true, allow_negative_numbers = true)]
    pub z: Vec<String>,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    #[arg(long, value_enum, default_value_t)]
    pub method: Method,

    #[arg(long = "boot-b", default_value_t = 10_000)]
    pub boot_b: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sample size; repeat for a sweep.
    #[arg(long = "n", required = true)]
    pub n: Vec<usize>,

    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,

    /// True intercepts (defaults to the reference design when all of
    /// --beta0/--beta1/--sigma are omitted).
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Vec<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Vec<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Vec<f64>,

    /// Bernoulli probability of z = 1.
    #[arg(long = "p-bern", default_value_t = 0.5)]
    pub p_bern: f64,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AlrArgs {
    /// Composition parts (closed automatically); repeat per part.
    #[arg(
        long,
        conflicts_with = "values",
        required_unless_present = "values",
        allow_negative_numbers = true
    )]
    pub parts: Vec<f64>,

    /// Log-ratio values for --inverse; repeat per value.
    #[arg(long, allow_negative_numbers = true)]
    pub values: Vec<f64>,

    #[arg(long)]
    pub inverse: bool,

    /// Decimals printed in table mode.
    #[arg(long, default_value_t = 3)]
    pub precision: usize,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub table: u8,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Replicates per sample size for table 1.
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}
