use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecoc::harness::commands::{
    cmd_codegen, cmd_compare, cmd_eval, cmd_train, CodegenArgs, CompareArgs, EvalArgs, TrainArgs,
};
use ecoc::harness::CodeMethod;
use ecoc::{Error, ErrorKind};

#[derive(Parser)]
#[command(name = "ecoc", version, about = "ECOC-coded MLP training and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code matrix and print its minimum distance and correcting capability.
    Codegen {
        #[arg(long, value_parser = parse_method)]
        method: CodeMethod,
        #[arg(long)]
        classes: usize,
        /// Code length (dense, sparse) or block length (bch: 15, 31, 63).
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidate matrices drawn by the random generators.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Hill-climbing iterations applied to the generated matrix.
        #[arg(long, default_value_t = 0)]
        hill_climb: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train on the configured dataset and write a model bundle plus a cost trace.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Trace CSV path; defaults to `<out>.trace.csv`.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate a bundle on a CSV file, PGM image directory or JSON config dataset.
    Eval {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 25.0)]
        threshold: f64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Standard vs weighted back-propagation over the configured Gm/Pn columns.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

fn parse_method(name: &str) -> Result<CodeMethod, String> {
    CodeMethod::parse(name).map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<String, Error> {
    match command {
        Command::Codegen { method, classes, length, seed, trials, hill_climb, out } => {
            cmd_codegen(&CodegenArgs { method, classes, length, seed, trials, hill_climb, out })
        }
        Command::Train { config, out, trace } => cmd_train(&TrainArgs { config, out, trace }),
        Command::Eval { bundle, data, threshold, report } => {
            cmd_eval(&EvalArgs { bundle, data, threshold, report })
        }
        Command::Compare { config, report } => cmd_compare(&CompareArgs { config, report }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            // --help and --version
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(summary) => {
            println!("{}", summary.trim_end());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}: {err}", err.category());
            ExitCode::from(match err.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numerical => 3,
            })
        }
    }
}
