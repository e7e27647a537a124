use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infmat::dsl::parse_dsl;
use infmat::error::Error;
use infmat::report::{self, WitnessKind};

/// Exact checks for products of infinite matrices given in a workspace file.
#[derive(Parser)]
#[command(name = "infmat", version)]
struct Cli {
    /// Workspace file with `matrix NAME { ... }` definitions.
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a block of entries.
    Eval {
        name: String,
        #[arg(long, default_value = "1..4")]
        rows: String,
        #[arg(long, default_value = "1..4")]
        cols: String,
    },
    /// Decide whether the product AB is defined.
    Defined { a: String, b: String },
    /// Decide condition (D) for a triple.
    CondD { a: String, b: String, c: String },
    /// Place B in the link hierarchy between A and C.
    Classify { a: String, b: String, c: String },
    /// Construct factors showing B is not a link or not a strong link.
    Witness {
        #[command(subcommand)]
        kind: WitnessCommand,
    },
    /// Validate left-multiplying a transformed system by V.
    SolveCheck {
        #[arg(long)]
        v: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        a: String,
    },
    /// Compare the decisions with brute-force windows. Without names, checks a random triple.
    CrossCheck {
        names: Vec<String>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    NotLink { b: String },
    NotStrong { b: String },
}

fn usage(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<serde_json::Value, Error> {
    let ws = match &cli.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                line: 0,
                column: 0,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            parse_dsl(&text)?
        }
        None => Default::default(),
    };
    match cli.command {
        Command::Eval { name, rows, cols } => {
            report::eval(&ws, &name, report::parse_range(&rows)?, report::parse_range(&cols)?)
        }
        Command::Defined { a, b } => report::defined(&ws, &a, &b),
        Command::CondD { a, b, c } => report::cond_d(&ws, &a, &b, &c),
        Command::Classify { a, b, c } => report::classify(&ws, &a, &b, &c),
        Command::Witness { kind: WitnessCommand::NotLink { b } } => report::witness(&ws, WitnessKind::NotLink, &b),
        Command::Witness { kind: WitnessCommand::NotStrong { b } } => report::witness(&ws, WitnessKind::NotStrong, &b),
        Command::SolveCheck { v, u, a } => report::solve_check(&ws, &v, &u, &a),
        Command::CrossCheck { names, n, seed } => match names.as_slice() {
            [] => report::cross_check_report(&ws, None, n, seed),
            [a, b, c] => report::cross_check_report(&ws, Some([a, b, c]), n, seed),
            _ => Err(Error::Parse { line: 0, column: 0, message: "cross-check takes three names or none".into() }),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(v) => {
            println!("{}", report::render(&v));
            ExitCode::SUCCESS
        }
        Err(e) if e.is_internal() => {
            eprintln!("internal error: {e}");
            ExitCode::from(2)
        }
        Err(e) => usage(e.to_string()),
    }
}
