mod cache;
mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{Command, UsageError};
use config::{parse_caps, Format, RunConfig};
use fano_mms::mms::FalsificationGrid;

#[derive(Debug, Parser)]
#[command(name = "fano-mms", version, about = "Classification, certificates and bounds for double-cover Fano fibrations")]
struct Cli {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Enumeration caps, e.g. "max_a_x=3,max_a_q=2,max_a_w=1".
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Falsification grid, e.g. "int_max=6,step=1/4,e_max=6".
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for the content-addressed artifact cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Seed for ledger fuzzing.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

fn resolve(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &cli.caps {
        cfg.caps = parse_caps(c, cfg.caps)?;
    }
    if let Some(g) = &cli.grid {
        // keys not mentioned keep the configured values
        let mut spec = format!("int_max={},step={},e_max={}", cfg.grid.int_max, cfg.grid.step, cfg.grid.e_max);
        spec.push(',');
        spec.push_str(g);
        cfg.grid = FalsificationGrid::parse(&spec).map_err(|e| e.to_string())?;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(c) = &cli.cache {
        cfg.cache = Some(c.clone());
    }
    if let Some(s) = cli.seed {
        cfg.fuzz.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let key = cache::key(&cli.command, &cfg);
    let cached = cfg.cache.as_deref().and_then(|dir| cache::load(dir, &key));
    let art = match cached {
        Some(a) => a,
        None => match commands::run(&cli.command, &cfg) {
            Ok(a) => {
                if let Some(dir) = &cfg.cache {
                    if let Err(e) = cache::store(dir, &key, &a) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
                a
            }
            Err(UsageError(msg)) => {
                eprintln!("error: {}: {msg}", cli.command.name());
                return ExitCode::from(1);
            }
        },
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(art.output.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(art.status as u8)
}
