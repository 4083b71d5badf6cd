mod cmd;
mod doc;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qproj_core::{SearchOptions, Targets};

use crate::cmd::{Mode, Output, ProjectFlags};
use crate::doc::SeedDocument;
use crate::error::{CliError, CliResult};

/// Mutation, completion and projection of exchange matrices.
#[derive(Parser, Debug)]
#[command(name = "qproj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Input seed document (JSON).
    input: PathBuf,
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Maximum number of mutations in a witness.
    #[arg(long, default_value_t = 24)]
    depth: usize,
    /// Which signed unit vectors end the search: +, - or both.
    #[arg(long, default_value = "both", value_parser = parse_target, allow_hyphen_values = true)]
    target: Targets,
    /// Cap on distinct states visited.
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
    /// Worker threads for the search; the result does not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions { max_depth: self.depth, targets: self.target, max_states: self.max_states, jobs: self.jobs.max(1) }
    }
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Master seed of the oracle's random coefficients.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value_t = 7)]
    trials: usize,
    /// Prime of the coefficient field.
    #[arg(long, default_value_t = 32003)]
    prime: u64,
    /// Sample rational coefficients in [-BOUND, BOUND] instead of a prime field.
    #[arg(long, value_name = "BOUND")]
    rational: Option<i64>,
}

impl OracleArgs {
    fn options(&self) -> qproj_core::oracle::OracleOptions {
        cmd::oracle_options(self.trials, self.rng_seed, self.prime, self.rational)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Simple,
    Full,
    Multi,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutate the seed, its weights and its frame along a sequence.
    Mutate {
        #[command(flatten)]
        io: Io,
        /// Comma-separated 1-based vertices; overrides the document's sequence.
        #[arg(long, allow_hyphen_values = true)]
        sequence: Option<String>,
        /// Include every intermediate (B, Delta, C).
        #[arg(long)]
        trace: bool,
    },
    /// Track a frame (the negative cluster by default) along a sequence.
    Track {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        sequence: Option<String>,
    },
    /// Completion of a weight, as a document with the completion frame.
    Complement {
        #[command(flatten)]
        io: Io,
        /// Weight name, or an inline comma-separated vector.
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        trace: bool,
    },
    /// Project the seed by one or more weights.
    Project {
        #[command(flatten)]
        io: Io,
        /// Weight name or inline vector; repeat for multi mode.
        #[arg(long, allow_hyphen_values = true, required = true)]
        eps: Vec<String>,
        #[arg(long, value_enum, default_value = "simple")]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
        /// Cross-check each stage with the representation oracle (acyclic seeds).
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Shortest mutation sequence taking a weight to a signed unit vector.
    Search {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check frame invariants, along the document's sequence if present.
    Verify {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Sample hom and e between weights with the representation oracle.
    OracleCheck {
        #[command(flatten)]
        io: Io,
        /// Weights to compare; all named weights when omitted.
        #[arg(long, allow_hyphen_values = true)]
        eps: Vec<String>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

fn parse_target(s: &str) -> Result<Targets, String> {
    match s {
        "both" | "±" => Ok(Targets::Both),
        other => match doc::parse_sign(other) {
            Some(qproj_core::Sign::Plus) => Ok(Targets::Plus),
            Some(qproj_core::Sign::Minus) => Ok(Targets::Minus),
            None => Err(format!("'{s}' is not one of +, -, both")),
        },
    }
}

fn read_doc(path: &PathBuf) -> CliResult<SeedDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    SeedDocument::parse(&text)
}

fn run(cli: Cli) -> CliResult<(Output, Option<PathBuf>)> {
    let (out, io) = match cli.command {
        Command::Mutate { io, sequence, trace } => (cmd::mutate(&read_doc(&io.input)?, sequence.as_deref(), trace, false)?, io),
        Command::Track { io, sequence } => (cmd::mutate(&read_doc(&io.input)?, sequence.as_deref(), true, true)?, io),
        Command::Complement { io, eps, search, trace } => {
            (cmd::complement(&read_doc(&io.input)?, &eps, &search.options(), trace)?, io)
        }
        Command::Project { io, eps, mode, search, verify, trace, oracle } => {
            let flags = ProjectFlags {
                mode: match mode {
                    ModeArg::Simple => Mode::Simple,
                    ModeArg::Full => Mode::Full,
                    ModeArg::Multi => Mode::Multi,
                },
                verify,
                trace,
                oracle: oracle.options(),
            };
            (cmd::project(&read_doc(&io.input)?, &eps, &flags, &search.options())?, io)
        }
        Command::Search { io, eps, search } => (cmd::search(&read_doc(&io.input)?, &eps, &search.options())?, io),
        Command::Verify { io, oracle } => (cmd::verify(&read_doc(&io.input)?, &oracle.options())?, io),
        Command::OracleCheck { io, eps, oracle } => (cmd::oracle_check(&read_doc(&io.input)?, &eps, &oracle.options())?, io),
    };
    Ok((out, io.output))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(cli).and_then(|(out, path)| {
        match path {
            Some(p) => std::fs::write(&p, &out.text)
                .map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
            None => print!("{}", out.text),
        }
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qproj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
