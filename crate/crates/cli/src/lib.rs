//! Command-line sweeps over finite Weyl groups.
//!
//! Exit codes: 0 success, 2 a checked identity failed, 3 budget or size
//! limit hit, 4 invalid input, 5 no usable spectral point.

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;

use clap::Parser;
use serde_json::Value;
use wwl_core::Error;

use config::{Cli, CommandKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_UNLUCKY: i32 = 5;
pub const EXIT_INTERNAL: i32 = 1;

/// Output of one command before formatting.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub csv: String,
    pub code: i32,
}

impl Report {
    pub fn new(json: Value, csv: String, code: i32) -> Self {
        Report { json, csv, code }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Budget(String),
    Io(String),
}

impl CliError {
    pub fn input(msg: String) -> Self {
        CliError::Input(msg)
    }

    pub fn budget(msg: String) -> Self {
        CliError::Budget(msg)
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::InvalidType { .. }
                | Error::LetterOutOfRange { .. }
                | Error::NotARoot(_)
                | Error::NotPositive(_)
                | Error::NotDominant(_)
                | Error::NotReduced(_)
                | Error::NotBelow { .. }
                | Error::UnknownElement => EXIT_INPUT,
                Error::GroupTooLarge { .. } => EXIT_BUDGET,
                Error::UnluckyPoint(_) | Error::PointExhausted(_) => EXIT_UNLUCKY,
                Error::ConditionFails { .. } => EXIT_VIOLATION,
                Error::Invariant(_) => EXIT_INTERNAL,
            },
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Io(_) => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) | CliError::Budget(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (kind, cfg) = cli.command.split();
    let mut stderr = String::new();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.thread_count())
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                code: EXIT_INTERNAL,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            };
        }
    };
    let result = pool.install(|| -> Result<Report, CliError> {
        let g = commands::group_for(&cfg)?;
        if let Some(dir) = &cfg.cache {
            let status = cache::sync(dir, &g).map_err(CliError::io)?;
            stderr.push_str(&format!("cache: {status:?}\n"));
        }
        match kind {
            CommandKind::VerifyConjecture => commands::verify_conjecture(&cfg, &g),
            CommandKind::Stats => commands::stats(&cfg, &g),
            CommandKind::Coeff => commands::coeff(&cfg, &g),
            CommandKind::Mtx => commands::mtx(&cfg, &g),
            CommandKind::CsCheck => commands::cs_check(&cfg, &g),
            CommandKind::GoodWords => commands::good_words(&cfg, &g),
        }
    });
    match result {
        Ok(report) => Outcome {
            code: report.code,
            stdout: commands::format_report(&report, cfg.format),
            stderr,
        },
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            Outcome {
                code: e.code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}
