//! Command line interface of the `gsfock` binary.
//!
//! Exit codes: 0 when every error-severity check passes, 1 when the
//! statistics fails a mathematical check, 2 for invalid input (bad flags,
//! unreadable or malformed configuration, out-of-range sizes).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{load_config, RunConfig};
use crate::error::{Error, Result};
use crate::report::{human_summary, to_json, Report};
use crate::runner::{run_check, run_fock, run_gram, run_report, RunOptions};

#[derive(Debug, Parser)]
#[command(
    name = "gsfock",
    version,
    about = "Deformed Fock spaces: construction and verification of generalized statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    config: PathBuf,
    /// Overrides the configured tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Writes the full report as canonical JSON to this path.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LevelArgs {
    /// Highest Fock level to analyze (default: nmax).
    #[arg(long)]
    level: Option<usize>,
    /// Includes the top analyzed level's Gram matrix in the report.
    #[arg(long)]
    emit_matrix: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural checks: Yang-Baxter, braid relation, consistency.
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Gram matrix spectra and positivity per level.
    Gram {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        levels: LevelArgs,
    },
    /// Full analysis: Gram, quotients, operators, relations.
    Fock {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        levels: LevelArgs,
        /// Runs operator sections even when structural checks fail.
        #[arg(long)]
        allow_inconsistent: bool,
    },
    /// Everything fock computes, never gated on consistency.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        levels: LevelArgs,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Check { common }
            | Command::Gram { common, .. }
            | Command::Fock { common, .. }
            | Command::Report { common, .. } => common,
        }
    }

    fn options(&self) -> RunOptions {
        match self {
            Command::Check { .. } => RunOptions::default(),
            Command::Gram { levels, .. } | Command::Report { levels, .. } => RunOptions {
                level: levels.level,
                emit_matrix: levels.emit_matrix,
                allow_inconsistent: false,
            },
            Command::Fock { levels, allow_inconsistent, .. } => RunOptions {
                level: levels.level,
                emit_matrix: levels.emit_matrix,
                allow_inconsistent: *allow_inconsistent,
            },
        }
    }
}

fn load(common: &CommonArgs) -> Result<RunConfig> {
    let mut config = load_config(&common.config)?;
    if let Some(tol) = common.tolerance {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "--tolerance must be a positive finite number, got {tol}"
            )));
        }
        config.tolerance = tol;
    }
    Ok(config)
}

fn execute(command: &Command) -> Result<Report> {
    let common = command.common();
    let config = load(common)?;
    let opts = command.options();
    let report = match command {
        Command::Check { .. } => run_check(&config)?,
        Command::Gram { .. } => run_gram(&config, &opts)?,
        Command::Fock { .. } => run_fock(&config, &opts)?,
        Command::Report { .. } => run_report(&config, &opts)?,
    };
    print!("{}", human_summary(&report));
    if let Some(path) = &common.output {
        std::fs::write(path, to_json(&report)?)?;
    }
    Ok(report)
}

/// Runs the CLI and returns the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(Error::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    fn write_config(dir: &tempfile::TempDir, text: &str) -> PathBuf {
        let path = dir.path().join("config.json");
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(text.as_bytes()).unwrap();
        path
    }

    #[test]
    fn subcommands_parse_their_flags() {
        let cli = parse(&["gsfock", "gram", "cfg.json", "--level", "3", "--emit-matrix"]);
        match cli.command {
            Command::Gram { levels, .. } => {
                assert_eq!(levels.level, Some(3));
                assert!(levels.emit_matrix);
            }
            other => panic!("parsed {other:?}"),
        }
        let cli = parse(&["gsfock", "fock", "cfg.json", "--allow-inconsistent"]);
        assert!(cli.command.options().allow_inconsistent);
        let cli = parse(&["gsfock", "check", "cfg.json", "--tolerance", "1e-8"]);
        assert_eq!(cli.command.common().tolerance, Some(1e-8));
    }

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["gsfock", "check", "cfg.json", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["gsfock", "explode", "cfg.json"]).is_err());
    }

    #[test]
    fn tolerance_override_must_be_positive() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(&dir, r#"{"dimension": 2, "statistics": {"family": "boson"}}"#);
        let cli = Cli::try_parse_from([
            "gsfock",
            "check",
            path.to_str().unwrap(),
            "--tolerance=-1e-8",
        ])
        .unwrap();
        let err = execute(&cli.command).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn check_writes_report_and_passes_for_boson() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            &dir,
            r#"{"dimension": 2, "nmax": 3, "statistics": {"family": "boson"}}"#,
        );
        let out = dir.path().join("report.json");
        let cli = Cli::try_parse_from([
            "gsfock",
            "check",
            path.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ])
        .unwrap();
        let report = execute(&cli.command).unwrap();
        assert!(report.passed());
        let text = std::fs::read_to_string(&out).unwrap();
        let parsed = crate::report::from_json(&text).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(parsed.mode, "check");
    }

    #[test]
    fn missing_config_file_is_an_io_error() {
        let cli = parse(&["gsfock", "check", "/nonexistent/nowhere.json"]);
        let err = execute(&cli.command).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
