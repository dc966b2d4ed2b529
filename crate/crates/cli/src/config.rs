use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wwl_core::TypeLetter;

#[derive(Debug, Parser)]
#[command(
    name = "wwl",
    version,
    about = "Whittaker functions, Demazure atoms and shellability over Weyl groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    VerifyConjecture,
    Stats,
    Coeff,
    Mtx,
    CsCheck,
    GoodWords,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the three per-word conditions agree on every triple.
    VerifyConjecture(SweepConfig),
    /// Percentage of x <= w satisfying the condition, for every w.
    Stats(SweepConfig),
    /// Dump c_{w,x} with the closed formula where it applies.
    Coeff(SweepConfig),
    /// Transition matrix m(x, w) at random points mod 2^61 - 1.
    Mtx(SweepConfig),
    /// Compare both sides of the Casselman-Shalika formula.
    CsCheck(SweepConfig),
    /// Which pairs with #S(x, w) = l(w) - l(x) admit a good word.
    GoodWords(SweepConfig),
}

impl Command {
    pub fn split(self) -> (CommandKind, SweepConfig) {
        match self {
            Command::VerifyConjecture(c) => (CommandKind::VerifyConjecture, c),
            Command::Stats(c) => (CommandKind::Stats, c),
            Command::Coeff(c) => (CommandKind::Coeff, c),
            Command::Mtx(c) => (CommandKind::Mtx, c),
            Command::CsCheck(c) => (CommandKind::CsCheck, c),
            Command::GoodWords(c) => (CommandKind::GoodWords, c),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct SweepConfig {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_letter: TypeLetter,

    #[arg(long)]
    pub rank: usize,

    /// Word for w, e.g. 1,2,1
    #[arg(long, value_parser = parse_word)]
    pub w: Option<Word>,

    /// Word for x; "" or "e" for the identity
    #[arg(long, value_parser = parse_word)]
    pub x: Option<Word>,

    /// Dominant weight in fundamental-weight coordinates
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<i32>>,

    #[arg(long, default_value_t = 20)]
    pub points: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; WWL_THREADS takes precedence
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Allow large groups, with checkpointed progress
    #[arg(long)]
    pub large: bool,

    /// Stop after this many (x, word) triples
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,

    /// Stats through independent existential searches instead of the shortcut
    #[arg(long)]
    pub exhaustive: bool,

    /// Include C_{w,x} in coefficient dumps
    #[arg(long)]
    pub chars: bool,
}

/// Comma-separated letters; `""` or `e` is the empty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(pub Vec<usize>);

pub fn parse_word(s: &str) -> Result<Word, String> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Word(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad letter {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()
        .map(Word)
}

fn parse_type(s: &str) -> Result<TypeLetter, String> {
    s.parse::<TypeLetter>().map_err(|e| e.to_string())
}

impl SweepConfig {
    pub fn new(type_letter: TypeLetter, rank: usize) -> Self {
        SweepConfig {
            type_letter,
            rank,
            w: None,
            x: None,
            lambda: None,
            points: 20,
            seed: 0,
            threads: None,
            format: Format::Json,
            cache: None,
            large: false,
            budget: 50_000_000,
            exhaustive: false,
            chars: false,
        }
    }

    /// `WWL_THREADS`, then `--threads`, then the available parallelism.
    pub fn thread_count(&self) -> usize {
        std::env::var("WWL_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .or(self.threads.filter(|&n| n > 0))
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}
