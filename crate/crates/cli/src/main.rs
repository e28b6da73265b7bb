//! `prym`: expected dimensions, classes, degrees, tableau counts and
//! exponents for pointed Prym-Brill-Noether loci.
//!
//! Exit codes: 0 success, 1 verification or agreement failure, 2 usage error.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prym_core::cache::default_cache_path;
use prym_core::{StrictPartition, VanishingSequence, DEFAULT_ENUMERATION_BOUND};

use commands::{ClassMethod, CliError, CountMethod, TableauAction};
use config::{CliConfig, FileConfig};
use output::Format;

#[derive(Parser)]
#[command(name = "prym")]
#[command(about = "Exact invariants of pointed Prym-Brill-Noether loci")]
#[command(version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Largest tableau weight enumerated by brute force [default: 16]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,

    /// TOML config file (format, enumeration_bound, [cache] enabled/path)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Count cache file [default: $PRYM_CACHE_DIR/sst-counts.json or a per-user data dir]
    #[arg(long, global = true)]
    cache_path: Option<PathBuf>,

    /// Do not read or write the count cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Use cached tableau counts in `verify` instead of re-enumerating
    #[arg(long, global = true)]
    trust_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected dimension beta(g, a) and the general-triple emptiness verdict
    Beta {
        #[arg(short = 'g', value_parser = genus)]
        g: usize,
        /// Vanishing orders, comma-separated ascending
        #[arg(short = 'a')]
        a: VanishingSequence,
    },
    /// Class of the locus as coeff * xi^|a|
    Class {
        #[arg(short = 'g', value_parser = genus)]
        g: usize,
        #[arg(short = 'a')]
        a: VanishingSequence,
        #[arg(long, value_enum, default_value = "closed")]
        method: ClassMethod,
    },
    /// |a|! times the class coefficient; a point count when beta = 0
    Degree {
        #[arg(short = 'g', value_parser = genus)]
        g: usize,
        #[arg(short = 'a')]
        a: VanishingSequence,
    },
    /// Prym-Tyurin exponent (requires beta = 1)
    Exponent {
        #[arg(short = 'g', value_parser = genus)]
        g: usize,
        #[arg(short = 'a')]
        a: VanishingSequence,
    },
    /// 2^(|a| - l(a)) times the number of standard shifted tableaux of shape a
    Na {
        #[arg(short = 'a')]
        a: VanishingSequence,
        #[arg(long, value_enum, default_value = "bruteforce")]
        method: CountMethod,
    },
    /// Standard shifted tableaux of a shape
    Tableaux {
        /// Strict partition, comma-separated descending
        #[arg(short = 's', allow_hyphen_values = true)]
        shape: StrictPartition,
        #[arg(value_enum)]
        action: TableauAction,
    },
    /// Check deg B = n_a, closed = Pfaffian and tableau counts for all |a| <= W
    Verify {
        #[arg(long)]
        max_weight: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Batch table over genus and weight ranges (inclusive, LO..HI)
    Table {
        #[arg(long = "g", value_parser = commands::parse_range)]
        g_range: (usize, usize),
        #[arg(long = "weight", value_parser = commands::parse_range)]
        weight_range: (usize, usize),
        /// Subset of g,a,beta,ell,weight,coeff,degree,n_a,agree
        #[arg(long, value_parser = commands::parse_columns)]
        columns: Option<commands::Columns>,
    },
}

fn genus(s: &str) -> Result<usize, String> {
    let g: usize = s.parse().map_err(|_| format!("invalid genus {s:?}"))?;
    if g < 2 {
        return Err(format!("genus must be at least 2, got {g}"));
    }
    Ok(g)
}

fn resolve(cli: &Cli) -> Result<CliConfig, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };
    let bound = cli
        .bound
        .map(|b| b as usize)
        .or(file.enumeration_bound)
        .unwrap_or(DEFAULT_ENUMERATION_BOUND);
    if bound == 0 {
        return Err(CliError::Usage("enumeration_bound must be at least 1".into()));
    }
    let enabled = !cli.no_cache && file.cache.enabled.unwrap_or(true);
    let cache_path = enabled
        .then(|| cli.cache_path.clone().or(file.cache.path).or_else(default_cache_path))
        .flatten();
    Ok(CliConfig {
        format: cli.format.or(file.format).unwrap_or(Format::Text),
        enumeration_bound: bound,
        cache_path,
        trust_cache: cli.trust_cache,
    })
}

fn run(cli: &Cli, cfg: &CliConfig) -> commands::CmdResult {
    match &cli.command {
        Command::Beta { g, a } => commands::cmd_beta(*g, a),
        Command::Class { g, a, method } => commands::cmd_class(*g, a, *method),
        Command::Degree { g, a } => commands::cmd_degree(*g, a),
        Command::Exponent { g, a } => commands::cmd_exponent(*g, a),
        Command::Na { a, method } => commands::cmd_na(cfg, a, *method),
        Command::Tableaux { shape, action } => commands::cmd_tableaux(cfg, shape, *action),
        Command::Verify {
            max_weight,
            inject_fault,
        } => commands::cmd_verify(cfg, *max_weight, *inject_fault),
        Command::Table {
            g_range,
            weight_range,
            columns,
        } => {
            let cols = columns
                .clone()
                .map(|c| c.0)
                .unwrap_or_else(|| commands::TABLE_COLUMNS.iter().map(|c| c.to_string()).collect());
            commands::cmd_table(cfg, *g_range, *weight_range, &cols)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &cfg) {
        Ok(r) => {
            let _ = stdout.write_all(r.emit(cfg.format).as_bytes());
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure { message, rendered }) => {
            let _ = stdout.write_all(rendered.emit(cfg.format).as_bytes());
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
