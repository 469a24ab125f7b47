use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rankdrop::sampling::Regime;
use rankdrop_cli::commands::{self, Format, Outcome, SynthMode};

#[derive(Parser)]
#[command(
    name = "rankdrop",
    version,
    about = "Rank deficiency of face-splitting matrices of point pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a configuration. Exits 0 on full rank, 10 on rank deficiency.
    Check {
        /// Configuration file, or `-` for standard input.
        input: String,
        /// Points are in P^1 (two coordinates each).
        #[arg(long)]
        p1: bool,
        /// Report every deficient subset, not only the minimal ones.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Complete a configuration to a rank-deficient one.
    Synth {
        #[arg(long, value_enum)]
        mode: ModeArg,
        input: String,
        /// Classify the result and fail unless it is rank deficient.
        #[arg(long)]
        verify: bool,
    },
    /// Pencil, cubic form and double six of a deficient configuration.
    Surface { input: String },
    /// Coble and Joubert invariants of six pairs.
    Invariants { input: String },
    /// Compare the classifier with the rank on seeded random configurations.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Regimes to run; all of them if omitted.
        #[arg(long, value_enum)]
        regime: Vec<RegimeArg>,
        /// Numbers of pairs to run; 2 to 6 if omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=6))]
        k: Vec<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    SixthPair,
    Completion,
    Sturm,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Generic,
    CollinearSide,
    PlantedCoincidence,
    PlantedHomography,
    PlantedDegenerate,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Generic => Regime::Generic,
            RegimeArg::CollinearSide => Regime::CollinearSide,
            RegimeArg::PlantedCoincidence => Regime::PlantedCoincidence,
            RegimeArg::PlantedHomography => Regime::PlantedHomography,
            RegimeArg::PlantedDegenerate => Regime::PlantedDegenerate,
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check {
            input,
            p1,
            verbose,
            format,
        } => {
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            commands::check(&input, p1, verbose, format)
        }
        Command::Synth {
            mode,
            input,
            verify,
        } => {
            let mode = match mode {
                ModeArg::SixthPair => SynthMode::SixthPair,
                ModeArg::Completion => SynthMode::Completion,
                ModeArg::Sturm => SynthMode::Sturm,
            };
            commands::synth(mode, &input, verify)
        }
        Command::Surface { input } => commands::surface(&input),
        Command::Invariants { input } => commands::invariants(&input),
        Command::Fuzz {
            seed,
            count,
            regime,
            k,
        } => {
            let regimes: Vec<Regime> = if regime.is_empty() {
                Regime::ALL.to_vec()
            } else {
                regime.into_iter().map(Regime::from).collect()
            };
            let ks: Vec<usize> = if k.is_empty() {
                (2..=6).collect()
            } else {
                k.into_iter().map(usize::from).collect()
            };
            commands::fuzz(seed, count, &regimes, &ks)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::exit::INPUT as u8
            } else {
                0
            });
        }
    };
    let out = run(cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
