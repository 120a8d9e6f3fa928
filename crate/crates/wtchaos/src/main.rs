use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wtchaos::runner::{self, ArithmeticMode, RunOptions};

/// Distributional-chaos diagnostics for weighted translation operators.
#[derive(Parser)]
#[command(name = "wtchaos", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cocycle values phi_n at the configured vector's support points.
    Phi(CommonArgs),
    /// Orbit norm series of the configured vector.
    Orbit(CommonArgs),
    /// Running-density estimate of the configured index set.
    Density(CommonArgs),
    /// Both halves of the criterion, with the split verdict.
    DccwCheck(CommonArgs),
    /// Build the synthesis plan and the candidate vector.
    Synthesize(CommonArgs),
    /// Re-verify the synthesized vector's lower bounds.
    Verify(CommonArgs),
    /// Scrambled-pair test between the configured vector pair.
    PairTest(CommonArgs),
    /// Two-component mirror construction diagnostics.
    MirrorCheck(CommonArgs),
    /// Everything above into one report with a manifest.
    Report(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rational,
    Log,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Arithmetic mode for exactness-sensitive outputs.
    #[arg(long, value_enum, default_value_t = Mode::Rational)]
    mode: Mode,
    /// Override the config horizon.
    #[arg(long)]
    horizon: Option<u64>,
}

fn dispatch(command: &Command) -> (&CommonArgs, runner::Subcommand) {
    match command {
        Command::Phi(args) => (args, runner::Subcommand::Phi),
        Command::Orbit(args) => (args, runner::Subcommand::Orbit),
        Command::Density(args) => (args, runner::Subcommand::Density),
        Command::DccwCheck(args) => (args, runner::Subcommand::DccwCheck),
        Command::Synthesize(args) => (args, runner::Subcommand::Synthesize),
        Command::Verify(args) => (args, runner::Subcommand::Verify),
        Command::PairTest(args) => (args, runner::Subcommand::PairTest),
        Command::MirrorCheck(args) => (args, runner::Subcommand::MirrorCheck),
        Command::Report(args) => (args, runner::Subcommand::Report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, subcommand) = dispatch(&cli.command);

    let result = runner::load_config(&args.config).and_then(|mut config| {
        if let Some(horizon) = args.horizon {
            if horizon < 2 {
                return Err(wtchaos::Error::Config("horizon must be at least 2".into()));
            }
            config.horizon = horizon;
            config.pair_horizon = horizon;
            config.decay_horizon = horizon * 10;
        }
        let options = RunOptions {
            out_dir: args.out.clone(),
            mode: match args.mode {
                Mode::Rational => ArithmeticMode::Rational,
                Mode::Log => ArithmeticMode::Log,
            },
        };
        runner::run_subcommand(subcommand, &config, &options)
    });

    match result {
        Ok(files) => {
            for file in files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
