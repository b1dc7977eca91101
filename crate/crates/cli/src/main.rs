//! `glc`: run the pinned verification battery, build single scenarios from
//! JSON configuration files, and tabulate sweeps over torsion orders.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use glc_core::families::{self, BuildOptions, Family, ScenarioConfig};
use glc_core::report::{Format, ReportDocument};
use glc_core::Error;

#[derive(Parser)]
#[command(name = "glc", version, about = "Exact intersection-theory checks for generalised lc surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every family at its pinned parameters and check each claim.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Json)]
        format: VerifyFormat,
        /// Perturb the base intersection form before building.
        #[arg(long, hide = true)]
        corrupt_gram: bool,
    },
    /// Build one scenario from a configuration document.
    Scenario {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = ScenarioFormat::Json)]
        format: ScenarioFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a family over torsion orders, e.g. `--param 5,7,11` or `--param 1..30`.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        param: String,
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioFormat {
    Json,
    Markdown,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

const MISMATCH: u8 = 1;
const INVALID: u8 = 2;

fn emit(doc: &ReportDocument, format: Format, out: Option<&PathBuf>) -> Result<(), u8> {
    let text = doc.render(format);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            INVALID
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write report: {e}");
                    Err(INVALID)
                }
                _ => Ok(()),
            }
        }
    }
}

fn finish(doc: &ReportDocument) -> ExitCode {
    match doc.first_mismatch() {
        Some(row) => {
            eprintln!(
                "claim mismatch: {} (expected {}, computed {})",
                row.claim_id,
                row.expected.display(),
                row.computed.display()
            );
            ExitCode::from(MISMATCH)
        }
        None => ExitCode::SUCCESS,
    }
}

fn parse_range(text: &str) -> Result<Vec<u64>, String> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    };
    let values = if let Some((a, b)) = text.split_once("..") {
        // both `a..b` and `a..=b` include `b`
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        (a..=b).collect()
    } else if text.is_empty() {
        Vec::new()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty parameter range".into());
    }
    Ok(values)
}

fn run(cli: Cli) -> ExitCode {
    let start = Instant::now();
    let elapsed = || start.elapsed().as_micros() as u64;
    match cli.command {
        Command::Verify {
            out,
            format,
            corrupt_gram,
        } => {
            let opts = BuildOptions {
                corrupt_gram,
                ..BuildOptions::default()
            };
            let runs = families::run_battery(&opts);
            let doc = ReportDocument::from_battery(&runs).with_elapsed(elapsed());
            let format = match format {
                VerifyFormat::Json => Format::Json,
                VerifyFormat::Markdown => Format::Markdown,
            };
            if let Err(code) = emit(&doc, format, out.as_ref()) {
                return ExitCode::from(code);
            }
            finish(&doc)
        }
        Command::Scenario { config, format, out } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(INVALID);
                }
            };
            let report = ScenarioConfig::from_json(&text).and_then(|cfg| families::build(&cfg, &BuildOptions::default()));
            let report = match report {
                Ok(r) => r,
                Err(e) => {
                    match &e {
                        Error::InvalidConfig { field, reason } => eprintln!("invalid config: {field}: {reason}"),
                        other => eprintln!("error: {other}"),
                    }
                    return ExitCode::from(INVALID);
                }
            };
            let doc = ReportDocument::from_scenario(&report).with_elapsed(elapsed());
            let format = match format {
                ScenarioFormat::Json => Format::Json,
                ScenarioFormat::Markdown => Format::Markdown,
                ScenarioFormat::Csv => Format::Csv,
            };
            if let Err(code) = emit(&doc, format, out.as_ref()) {
                return ExitCode::from(code);
            }
            finish(&doc)
        }
        Command::Sweep {
            family,
            param,
            format,
            out,
        } => {
            let Some(fam) = Family::parse(&family) else {
                eprintln!("invalid config: family: unknown family `{family}`");
                return ExitCode::from(INVALID);
            };
            let params = match parse_range(&param) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("invalid config: param: {e}");
                    return ExitCode::from(INVALID);
                }
            };
            let rows = match families::sweep(fam, &params, &BuildOptions::default()) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(INVALID);
                }
            };
            let doc = ReportDocument::from_sweep(fam, &rows).with_elapsed(elapsed());
            let format = match format {
                SweepFormat::Csv => Format::Csv,
                SweepFormat::Json => Format::Json,
            };
            match emit(&doc, format, out.as_ref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => ExitCode::from(code),
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
