use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use regquot_cli::{parse_job, run_job, JobError, Overrides};

/// Runs one regquot job.
#[derive(Parser)]
#[command(name = "regquot", version)]
struct Args {
    /// Job file (JSON).
    job: PathBuf,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Override the window's degree bound.
    #[arg(long, value_name = "D")]
    window: Option<i64>,
    /// Override the window's Laurent bound.
    #[arg(long, value_name = "L")]
    laurent: Option<i64>,
}

fn fail(e: &JobError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.job) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.job.display());
            return ExitCode::from(2);
        }
    };
    let job = match parse_job(&text) {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    let report = match run_job(&job, Overrides { degree: args.window, laurent: args.laurent }) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    print!("{}", report.to_text());
    if let Some(path) = args.json.or_else(|| job.output.as_ref().map(PathBuf::from)) {
        if let Err(e) = std::fs::write(&path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
