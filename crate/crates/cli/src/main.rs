use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quditsep_cli::commands::{self, Family, Suite, VerifyOptions};
use quditsep_cli::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "quditsep", version, about = "Qudit operator bases, Haar superoperators and separability verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the orthonormal generator basis as a matrix bundle.
    Basis {
        #[arg(long)]
        dim: usize,
        /// Write the bundle here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a noisy maximally entangled or cat state.
    Classify {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        dim: usize,
        /// Number of qudits (cat family only; defaults to 2).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Run a numerical self-check suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Matrix file to test (ppt suite).
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mixture,
    Cat,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Ensemble,
    Haar,
    Ppt,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Basis { dim, out } => commands::basis(dim, out.as_deref()),
        Command::Classify {
            family,
            dim,
            n,
            eps,
            cert_out,
        } => {
            let family = match family {
                FamilyArg::Mixture => Family::Mixture,
                FamilyArg::Cat => Family::Cat,
            };
            commands::classify(family, dim, n, eps, cert_out.as_deref())
        }
        Command::Verify {
            suite,
            dim,
            n,
            samples,
            seed,
            input,
        } => {
            let suite = match suite {
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Ensemble => Suite::Ensemble,
                SuiteArg::Haar => Suite::Haar,
                SuiteArg::Ppt => Suite::Ppt,
            };
            let opts = VerifyOptions {
                dim,
                n,
                samples,
                seed,
                input: input.as_deref(),
            };
            commands::verify(suite, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
