use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use affchab::cli::{solve, verify, Outcome, ProblemFile, Report, VerifyReport};

#[derive(Parser)]
#[command(name = "affchab", version, about = "S-integral points by affine Chabauty with log differentials")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write a JSON report.
    Solve {
        problem: PathBuf,
        /// Override the working prime.
        #[arg(long)]
        p: Option<u32>,
        /// Override the working precision.
        #[arg(long)]
        prec: Option<i64>,
        /// Only this reduction type (index into the enumeration).
        #[arg(long)]
        sigma: Option<usize>,
        /// Where to write the report; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the known points against the annihilators and the determinant
    /// criterion.
    Verify {
        problem: PathBuf,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn summarize_solve(r: &Report) {
    eprintln!("{}: p = {}, N = {}, {} reduction type(s)", r.name, r.p, r.precision, r.types.len());
    for t in &r.types {
        match &t.error {
            Some(e) => eprintln!("  [{}] {}: {} ({})", t.index, t.label, e.kind, e.message),
            None => {
                let found = t.candidates.iter().filter(|c| c.point.is_some()).count();
                eprintln!("  [{}] {}: {} point(s) in the locus, {} unresolved disc(s)", t.index, t.label, found, t.unresolved());
            }
        }
    }
    if !r.unmatched_known.is_empty() {
        eprintln!("  known points not recovered: {}", r.unmatched_known.join(", "));
    }
    if let Some(e) = &r.error {
        eprintln!("  error {}: {}", e.kind, e.message);
    }
    eprintln!("  status: {}", r.status);
}

fn summarize_verify(r: &VerifyReport) {
    if let Some(e) = &r.error {
        eprintln!("error {}: {}", e.kind, e.message);
        return;
    }
    eprintln!("threshold: valuation >= {} (N = {})", r.threshold, r.precision);
    for c in &r.points {
        eprintln!("  {} {} [{}]: v = {} {}", c.id, c.point, c.sigma, c.valuation, if c.pass { "ok" } else { "FAIL" });
    }
    let bad = r.determinants.iter().filter(|d| !d.pass).count();
    eprintln!("  {} determinant(s), {} failing", r.determinants.len(), bad);
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (outcome, written) = match args.command {
        Command::Solve { problem, p, prec, sigma, out } => {
            let file = match ProblemFile::read(&problem) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{}: {e}", e.kind());
                    return ExitCode::from(Outcome::Error as u8);
                }
            };
            let (report, outcome) = solve(&file, p, prec, sigma);
            summarize_solve(&report);
            (outcome, emit(&report, out.as_ref()))
        }
        Command::Verify { problem, p, prec, out } => {
            let file = match ProblemFile::read(&problem) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{}: {e}", e.kind());
                    return ExitCode::from(Outcome::Error as u8);
                }
            };
            let (report, outcome) = verify(&file, p, prec);
            summarize_verify(&report);
            (outcome, emit(&report, out.as_ref()))
        }
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return ExitCode::from(Outcome::Error as u8);
    }
    ExitCode::from(outcome as u8)
}
