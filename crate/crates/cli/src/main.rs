mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Expansions of reals in a non-integer base between 1 and 2.
///
/// Exit status: 0 success, 1 usage or I/O failure, 2 domain error,
/// 3 undecided or horizon reached, 4 budget exhausted.
#[derive(Parser, Debug)]
#[command(name = "betaexp", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Base: `poly:<polynomial>[@lo,hi]`, `golden` or a decimal such as `1.9`.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Working precision in bits for decimal bases.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Escalation cap in bits for decimal bases (default from BETAEXP_PRECISION_CAP).
    #[arg(long, global = true)]
    pub precision_cap: Option<u32>,
    /// Point: rational (`3/7`, `0.25`), `val:<word>`, `expr:<expression in beta>` or `random:<seed>`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Job file of `key = value` lines using the long flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Greedy,
    Lazy,
    QuasiGreedyOne,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Greedy or lazy digits of x, or the quasi-greedy expansion of one.
    Expand {
        #[arg(long, value_enum, default_value = "greedy")]
        mode: Mode,
        #[arg(short = 'n', long = "digits", default_value_t = 20)]
        n: usize,
    },
    /// Greedy normal form of a finite word.
    Normalize {
        #[arg(long)]
        word: String,
        /// Output length (default: the input length).
        #[arg(short = 'n', long = "length")]
        n: Option<usize>,
    },
    /// Builds an expansion of x containing every word up to a length.
    Universalize {
        #[arg(short = 'L', long = "max-word-len", default_value_t = 3)]
        max_word_len: usize,
        #[arg(short = 'N', long = "max-digits", default_value_t = 10_000)]
        max_digits: usize,
        /// Times the full target list is queued.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Greedy digits scanned per target.
        #[arg(long, default_value_t = betaexp::normalize::DEFAULT_SCAN_HORIZON)]
        horizon: usize,
        /// In-place substitution of finite normal forms (algebraic bases).
        #[arg(long)]
        finitary: bool,
    },
    /// All words of the same length and value.
    EquivClass {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = betaexp::normalize::DEFAULT_EQUIVALENCE_CAP)]
        cap: usize,
    },
    /// Every expansion prefix of x up to a depth.
    Tree {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Merge nodes with equal exact remainders.
        #[arg(long)]
        merge: bool,
        #[arg(long, default_value_t = betaexp::branching::DEFAULT_NODE_BUDGET)]
        node_budget: usize,
    },
    /// Whether x has a single expansion.
    Unique {
        #[arg(long, default_value_t = betaexp::branching::DEFAULT_GAMMA_HORIZON)]
        horizon: usize,
    },
    /// Choice codings of the expansions of x.
    Gamma {
        /// Number of choices.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Forced digits followed before a tail is declared unresolved.
        #[arg(long, default_value_t = betaexp::branching::DEFAULT_GAMMA_HORIZON)]
        horizon: usize,
    },
    /// The smallest base with a unique expansion of one.
    KlConstant {
        #[arg(long, default_value_t = 10)]
        digits: usize,
    },
    /// Thue–Morse block of length 2^n.
    TmWord {
        #[arg(short = 'n', default_value_t = 3)]
        n: u32,
    },
    /// Growth-rate estimate for the set of unique expansions.
    DimEstimate {
        #[arg(short = 'n', default_value_t = 24)]
        n: usize,
    },
    /// Factor statistics of a word given with --word or on standard input.
    Stats {
        #[arg(long)]
        word: Option<String>,
        /// Frequency table of blocks of this length.
        #[arg(long, group = "stat")]
        blocks: Option<usize>,
        /// Factor counts p(1)..p(n).
        #[arg(long, group = "stat")]
        complexity: Option<usize>,
        /// Largest frequency deviation over block lengths 1..=k.
        #[arg(long, group = "stat")]
        normality: Option<usize>,
        /// Missing factors up to this length.
        #[arg(long, group = "stat")]
        universal: Option<usize>,
    },
    /// Fair-coin digits, or a random path through the expansions of --x.
    Sample {
        #[arg(short = 'n', default_value_t = 1000)]
        n: usize,
    },
}

/// Exit status for a library error.
pub fn exit_status(e: &betaexp::Error) -> u8 {
    use betaexp::Error as E;
    match e {
        E::Undecided
        | E::UndeterminedWithinHorizon(_)
        | E::HorizonExhausted(_)
        | E::OccurrenceNotFound { .. }
        | E::QuasiGreedyUnavailable => 3,
        E::BudgetExhausted { .. }
        | E::LengthCapExceeded { .. }
        | E::NodeBudgetExceeded(_)
        | E::PrecisionCapExceeded(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let args = match config::merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = Cli::parse_from(args);
    let result = commands::run(&cli);
    let (out, status) = match result {
        Ok(o) => (Some(o.text), o.status),
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            (e.partial, e.status)
        }
    };
    if let Some(text) = out {
        let written = match &cli.global.output {
            Some(path) => std::fs::write(path, &text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(status)
}
