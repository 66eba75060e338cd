use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tricorr::EngineConfig;

mod commands;
mod failure;
mod selftest;

use failure::Failure;

/// Triple correlation of Riemann zeros: theory grids from the ratios
/// conjecture, empirical histograms from zero tables, and checks.
#[derive(Parser, Debug)]
#[command(name = "tricorr", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TRICORR_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Height T.
    #[arg(long = "t", visible_alias = "height", global = true, default_value_t = EngineConfig::default().t)]
    t: f64,
    #[arg(long, global = true, default_value_t = EngineConfig::default().prime_limit)]
    prime_limit: u64,
    /// Bernoulli terms in the Euler–Maclaurin tail.
    #[arg(long, global = true, default_value_t = EngineConfig::default().em_depth)]
    em_depth: usize,
    /// Half-width of the excluded band around v1 = 0, v2 = 0, v1 = v2.
    #[arg(long, global = true, default_value_t = EngineConfig::default().mask_band)]
    mask_band: f64,
    #[arg(long, global = true, default_value_t = EngineConfig::default().window)]
    window: f64,
    /// Theory grid spacing.
    #[arg(long, global = true, default_value_t = EngineConfig::default().step)]
    step: f64,
    /// Histogram bin width.
    #[arg(long, global = true, default_value_t = EngineConfig::default().bin)]
    bin: f64,
    /// Radius around s = 1 for the Laurent branch of zeta'/zeta.
    #[arg(long, global = true, default_value_t = EngineConfig::default().switch_radius)]
    switch_radius: f64,
}

impl ConfigArgs {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            t: self.t,
            prime_limit: self.prime_limit,
            em_depth: self.em_depth,
            mask_band: self.mask_band,
            window: self.window,
            step: self.step,
            bin: self.bin,
            switch_radius: self.switch_radius,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized theory grid over [0, window]^2 as CSV.
    Theory {
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Empirical triple histogram of a zero table as a CSV grid.
    Empirical {
        zeros: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Empirical pair histogram of a zero table as CSV.
    TwoPoint {
        zeros: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Statistics of grid_a - grid_b over unmasked cells.
    Diff { grid_a: PathBuf, grid_b: PathBuf },
    /// Checks the U(N) T3 integrand against the Gaudin determinant on random triples.
    RmtVerify {
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest accepted relative deviation.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Scaled bracket against the sine-kernel determinant for increasing T.
    Limit {
        #[arg(allow_hyphen_values = true)]
        v1: f64,
        #[arg(allow_hyphen_values = true)]
        v2: f64,
        /// Comma-separated ascending heights.
        #[arg(value_delimiter = ',', default_value = "1e4,1e6,1e9,1e12")]
        t_list: Vec<f64>,
    },
    /// Runs the built-in oracle checks.
    Selftest,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = cli.config.config();
    config.validate().map_err(Failure::config)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Theory { out } => commands::theory(&config, out.as_deref()),
        Command::Empirical { zeros, out } => commands::empirical(&config, &zeros, out.as_deref()),
        Command::TwoPoint { zeros, out } => commands::two_point(&config, &zeros, out.as_deref()),
        Command::Diff { grid_a, grid_b } => commands::diff(&grid_a, &grid_b),
        Command::RmtVerify { n, samples, seed, tol } => commands::rmt_verify(n, samples, seed, tol),
        Command::Limit { v1, v2, t_list } => commands::limit(&config, v1, v2, &t_list),
        Command::Selftest => selftest::run(&config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tricorr: {f}");
            ExitCode::from(f.code())
        }
    }
}
