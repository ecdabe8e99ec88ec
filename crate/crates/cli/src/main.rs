use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curvemoduli_cli::{cutoff_policy, parse_job, render_table, run, CliError, Job, CUTOFF_ENV};

#[derive(Parser, Debug)]
#[command(name = "curvemoduli", version, about = "Finite-level invariants of curve singularities in N-space")]
struct Cli {
    /// Render Hilbert functions and fiber comparisons as aligned tables.
    #[arg(long, global = true)]
    table: bool,
    /// Cutoff policy n_default:n_max:window used when a level is not given.
    #[arg(long, global = true, env = CUTOFF_ENV)]
    cutoff: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    #[command(flatten)]
    Job(Job),
    /// Run a JSON job file (`-` for stdin).
    Run {
        #[arg(long)]
        job: String,
    },
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let policy = cutoff_policy(cli.cutoff.as_deref())?;
    let job = match cli.command {
        Command::Job(j) => j,
        Command::Run { job } => {
            let text = if job == "-" { std::io::read_to_string(std::io::stdin())? } else { std::fs::read_to_string(&job)? };
            parse_job(&text)?
        }
    };
    let report = run(&job, policy)?;
    let text = if cli.table { render_table(&report) } else { format!("{}\n", report.to_json()) };
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(report.exit_code()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
