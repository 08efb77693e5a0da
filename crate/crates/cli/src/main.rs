//! `loccg` — values, certificates, and reproduction tables for grouped
//! threshold XOR games.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loccg::SolverConfig;

#[derive(Parser)]
#[command(
    name = "loccg",
    version,
    about = "Classical and quantum values of grouped threshold XOR games",
    after_help = "Exit codes: 0 ok, 2 parameter/domain error, 3 uncertified \
                  under --require-certificate, 4 internal consistency failure."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// PRNG seed for all solver restarts
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of solver restarts
    #[arg(long, global = true, default_value_t = 32)]
    restarts: u32,
    /// Allowed negativity of the smallest eigenvalue of K
    #[arg(long, global = true, default_value_t = 1e-8)]
    psd_tol: f64,
    /// Allowed duality gap for certification
    #[arg(long, global = true, default_value_t = 1e-7)]
    gap_tol: f64,
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    /// Fail (exit 3) when a quantum value cannot be certified
    #[arg(long, global = true)]
    require_certificate: bool,
    /// Include wall-clock timings in reports (off by default so identical
    /// invocations produce byte-identical output)
    #[arg(long, global = true)]
    timings: bool,
}

impl GlobalOpts {
    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            restarts: self.restarts,
            seed: self.seed,
            psd_tol: self.psd_tol,
            gap_tol: self.gap_tol,
            ..Default::default()
        }
    }
}

/// Game parameters shared by the single-game commands.
#[derive(Args, Clone)]
struct GameArgs {
    /// Number of players
    #[arg(short)]
    n: u32,
    /// Size of the smaller group (1 <= k <= n/2)
    #[arg(short)]
    k: u32,
    /// Threshold as a fraction of n, e.g. 1/2 for MAJORITY, 1 for AND;
    /// values above 1 are read as absolute thresholds
    #[arg(long = "t", value_name = "R/S", conflicts_with = "t_abs")]
    t: Option<String>,
    /// Absolute threshold, integer or fraction, e.g. 8 or 5/2
    #[arg(long = "t-abs", value_name = "T")]
    t_abs: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Bruteforce,
    Protocol,
    Sdp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DualKind {
    Kkt,
    AndClosed,
    MajorityConjecture,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a grouped game to its biased bipartite form (JSON)
    Reduce {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Compute classical and/or quantum values
    Value {
        #[command(flatten)]
        game: GameArgs,
        /// Classical value only
        #[arg(long, conflicts_with_all = ["quantum", "both"])]
        classical: bool,
        /// Quantum value only
        #[arg(long, conflicts_with = "both")]
        quantum: bool,
        /// Both values plus their ratio (default)
        #[arg(long)]
        both: bool,
        /// Computation route; may repeat, results are cross-checked
        #[arg(long, value_enum)]
        method: Vec<Method>,
    },
    /// Emit a dual certificate for a game
    Certify {
        #[command(flatten)]
        game: GameArgs,
        /// Which dual vector to build
        #[arg(long, value_enum, default_value = "kkt")]
        dual: DualKind,
    },
    /// Scan even n upward for the MAJORITY quantum-classical crossover (CSV)
    SweepNk {
        /// Group size(s) to scan; even
        #[arg(long = "k", required = true)]
        k: Vec<u32>,
        /// Largest n to scan
        #[arg(long, default_value_t = 50)]
        n_max: u32,
    },
    /// Reproduce the pair-grouping table: n = 4..10, k = 2 (CSV)
    Table3,
    /// Closed-form value grid over n and integer thresholds for k = 1 (CSV)
    Grid {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Balanced-grouping scaling: classical bound vs certified SDP (CSV)
    MajorityScaling {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
    },
    /// Value attained by the no-signalling box on the reduced game
    NsBox {
        #[command(flatten)]
        game: GameArgs,
    },
}

/// Error carrying the process exit code.
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<loccg::Error> for CliError {
    fn from(e: loccg::Error) -> Self {
        use loccg::Error::*;
        let code = match &e {
            Domain(_) | Parse(_) | Capacity(_) => 2,
            ShapeMismatch { .. }
            | EigenNonConvergence { .. }
            | ExtractionUnsupported { .. }
            | Inconsistent(_) => 4,
        };
        Self::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("LOCCG_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }

    let result = match &cli.command {
        Command::Reduce { game } => commands::cmd_reduce(&cli.global, game),
        Command::Value {
            game,
            classical,
            quantum,
            both,
            method,
        } => commands::cmd_value(&cli.global, game, *classical, *quantum, *both, method),
        Command::Certify { game, dual } => commands::cmd_certify(&cli.global, game, *dual),
        Command::SweepNk { k, n_max } => commands::cmd_sweep_nk(&cli.global, k, *n_max),
        Command::Table3 => commands::cmd_table3(&cli.global),
        Command::Grid { n_max, k } => commands::cmd_grid(&cli.global, *n_max, *k),
        Command::MajorityScaling { n_max } => commands::cmd_majority_scaling(&cli.global, *n_max),
        Command::NsBox { game } => commands::cmd_ns_box(&cli.global, game),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
