//! `kummer`: field construction, measures, discriminants, minimal
//! representations and the verification suites from the command line.

mod commands;
mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliConfig, Format};

/// Bad flags, bad input, or a setting the subcommand cannot use.
#[derive(Debug)]
pub struct UsageError(pub String);

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "kummer", version, about = "Exact arithmetic and bound verification in Kummer fields Q(zeta_N, a^(1/N))")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Line-oriented key=value file; flags take precedence over it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Radicand.
    #[arg(long, global = true)]
    a: Option<String>,
    /// Order of the roots of unity.
    #[arg(long = "N", global = true)]
    n: Option<String>,
    /// Working precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    prec: Option<String>,
    /// Enclosure width target, as 2^-B, p/q or a decimal.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Term budget of minimal-representation searches.
    #[arg(long, global = true)]
    bound: Option<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    delta: Option<String>,
    #[arg(long, global = true)]
    c1: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, phi(N), factorization and field status of Q_a(N).
    Field,
    /// Values of an element under every embedding.
    Eval {
        #[arg(long)]
        expr: String,
    },
    /// House and mean-square enclosures of an element.
    Measure {
        #[arg(long)]
        expr: String,
    },
    /// The exact tower discriminant Delta_a(N).
    Delta,
    /// Minimal number of roots-of-unity terms, with a witness.
    Minrep {
        #[arg(long)]
        expr: String,
    },
    /// Coefficients of an element over the relative basis of one tower step.
    Decompose {
        #[arg(long)]
        expr: String,
        /// Prime of the step from N/p to N.
        #[arg(long)]
        p: u64,
    },
    /// Runs a randomized verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Suite parameter override, key=value; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Also write the JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Also write the per-trial CSV here.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Derives c1..c4 for k and delta.
    Constants {
        /// Upper end of the threshold searches.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
}

fn merged_config(common: &Common) -> Result<CliConfig, UsageError> {
    let mut cfg = CliConfig::default();
    if let Some(path) = &common.config {
        for (k, v) in config::read_config_file(path)? {
            cfg.set(&k, &v)?;
        }
    }
    let flags = [
        ("a", &common.a),
        ("N", &common.n),
        ("precision_bits", &common.prec),
        ("tol", &common.tol),
        ("search_bound", &common.bound),
        ("k", &common.k),
        ("delta", &common.delta),
        ("c1", &common.c1),
        ("seed", &common.seed),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(f) = common.format {
        cfg.output_format = f;
    }
    if let Some(p) = &common.output {
        cfg.output_path = Some(p.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    let cfg = merged_config(&cli.common)?;
    let out = match cli.command {
        Command::Field => commands::field(&cfg)?,
        Command::Eval { expr } => commands::eval(&cfg, &expr)?,
        Command::Measure { expr } => commands::measure(&cfg, &expr)?,
        Command::Delta => commands::delta(&cfg)?,
        Command::Minrep { expr } => commands::minrep(&cfg, &expr)?,
        Command::Decompose { expr, p } => commands::decompose(&cfg, &expr, p)?,
        Command::Verify { suite, trials, set, json, csv } => {
            commands::verify(&cfg, &suite, trials, &set, json.as_deref(), csv.as_deref())?
        }
        Command::Constants { cap } => commands::constants(&cfg, cap)?,
    };
    out.emit(&cfg)?;
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
