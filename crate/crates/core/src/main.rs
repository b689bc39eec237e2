use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pwbandit::cli::{self, CliError, ExperimentConfig, Overrides};
use pwbandit::{GuessPolicy, InitPolicy};

#[derive(Parser)]
#[command(
    name = "pwbandit",
    version,
    about = "Multi-armed bandit password guessing experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic password set from the configured mixture.
    Compose(Common),
    /// Run the bandit attack and write per-guess traces and a summary.
    Attack(Common),
    /// Estimate the mixture from a fixed list of guesses.
    Estimate(Common),
    /// Write the optimal-order success curve.
    Baseline(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides every seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    runs: Option<usize>,
    /// Guess budget.
    #[arg(long)]
    guesses: Option<usize>,
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    #[arg(long, value_enum)]
    guess: Option<GuessArg>,
    /// Guess for `estimate`; repeat for several.
    #[arg(long = "word")]
    words: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Random,
    Average,
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuessArg {
    RandomDict,
    BestDict,
    ByQ,
}

impl From<InitArg> for InitPolicy {
    fn from(value: InitArg) -> Self {
        match value {
            InitArg::Random => InitPolicy::Random,
            InitArg::Average => InitPolicy::Average,
            InitArg::Best => InitPolicy::Best,
        }
    }
}

impl From<GuessArg> for GuessPolicy {
    fn from(value: GuessArg) -> Self {
        match value {
            GuessArg::RandomDict => GuessPolicy::RandomDictionary,
            GuessArg::BestDict => GuessPolicy::BestDictionary,
            GuessArg::ByQ => GuessPolicy::ByQ,
        }
    }
}

fn load(common: Common) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(&common.config)?;
    config.apply(&Overrides {
        seed: common.seed,
        out: common.out,
        runs: common.runs,
        guesses: common.guesses,
        init: common.init.map(Into::into),
        guess: common.guess.map(Into::into),
        words: common.words,
    })?;
    Ok(config)
}

fn run(command: Command) -> Result<Vec<PathBuf>, CliError> {
    match command {
        Command::Compose(c) => cli::cmd_compose(&load(c)?),
        Command::Attack(c) => cli::cmd_attack(&load(c)?),
        Command::Estimate(c) => cli::cmd_estimate(&load(c)?),
        Command::Baseline(c) => cli::cmd_baseline(&load(c)?),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
