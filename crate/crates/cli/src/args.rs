use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bigstep", version, about = "Run big-step semantics and check specifications against them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate one configuration and print its first result.
    Run,
    /// Print every derivable result of one configuration.
    Derive,
    /// Check that all derivable results satisfy the specification.
    CheckValid,
    /// Check that all results inferred with the specification satisfy it.
    CheckVerif,
    /// Verify, then check validity and that inference reaches every derivable result.
    Crosscheck,
    /// Verify the most informative specification over a loop-free corpus.
    StarCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Derive => "derive",
            Command::CheckValid => "check-valid",
            Command::CheckVerif => "check-verif",
            Command::Crosscheck => "crosscheck",
            Command::StarCheck => "star-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lang {
    While,
    Extwhile,
    Fun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// A single JSON document.
    Structured,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Object language; inferred from --spec or the program file extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub lang: Option<Lang>,

    /// fac, msort, mglist, their `-mutant` variants, star, or none.
    #[arg(long, global = true)]
    pub spec: Option<String>,

    /// Program file. Defaults to the bundled example of the language.
    #[arg(long, global = true)]
    pub program: Option<PathBuf>,

    /// Initial state (while, extwhile) or `x = value` bindings (fun). Repeatable.
    #[arg(long, global = true)]
    pub input: Vec<String>,

    /// `VAR=LO..HI`: one configuration per value, for each input. Repeatable.
    #[arg(long, global = true)]
    pub range: Vec<String>,

    /// Shorthand for `--range m=LO..HI`.
    #[arg(long, global = true, value_name = "LO..HI")]
    pub m: Option<String>,

    /// File with one configuration per line; `#` starts a comment line.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,

    /// Add N generated configurations (the spec's instance generator, or loop-free programs).
    #[arg(long, global = true, value_name = "N")]
    pub random: Option<usize>,

    /// Maximum derivation height.
    #[arg(long, global = true, env = "BIGSTEP_DEPTH")]
    pub depth: Option<usize>,

    /// Samples drawn from each constrained result set.
    #[arg(long, global = true, env = "BIGSTEP_SAMPLES", default_value_t = 16)]
    pub samples: usize,

    #[arg(long, global = true, env = "BIGSTEP_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Value of the specification's global parameter. Repeatable.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub param: Vec<i64>,
}
