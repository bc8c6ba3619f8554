use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hfsc::bench::{run_benchmark, summarize, summary_csv, write_report};
use hfsc::generator::{generate_suite, parse_groups, DEFAULT_SEED};
use hfsc::io::{read_instance, read_plan, write_instances, write_plan};
use hfsc::model::{validate_instance, validate_plan};
use hfsc::render::render_plan_svg;
use hfsc::{solve, Error, SolveConfig};

/// Plan fabric lays that cut an SKU demand exactly with few lays.
#[derive(Debug, Parser)]
#[command(name = "hfsc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write benchmark instance files.
    Generate {
        /// Group name (G1..G10) or `all`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and print `k=.. mean_ur=.. tc=..`.
    Solve {
        instance: PathBuf,
        /// Seconds for the improvement loop; 0 means unlimited.
        #[arg(long, default_value_t = 1200.0)]
        time_limit: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a plan against an instance; exit 0 iff valid.
    Validate { instance: PathBuf, plan: PathBuf },
    /// Solve generated groups and write the case and summary CSVs.
    Bench {
        /// Comma-separated group names or `all`.
        #[arg(long, default_value = "all")]
        groups: String,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1200.0)]
        time_limit: f64,
        #[arg(long)]
        out: PathBuf,
        /// Cases solved concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draw a plan as an SVG lay diagram.
    Render {
        plan: PathBuf,
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_STALL: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InvalidInstance(_)
            | Error::InvalidPlan { .. }
            | Error::DimensionMismatch(_)
            | Error::Json(_) => EXIT_INVALID,
            Error::Stall { .. } => EXIT_STALL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Error::from(err).into()
    }
}

fn invalid(message: String) -> Failure {
    Failure { code: EXIT_INVALID, message }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { group, cases, seed, out } => {
            let specs = parse_groups(&group)?;
            for (_, instances) in generate_suite(&specs, cases, seed)? {
                for path in write_instances(&out, &instances)? {
                    println!("{}", path.display());
                }
            }
        }
        Command::Solve { instance, time_limit, out } => {
            let inst = read_instance(&instance)?;
            let res = solve(&inst, &SolveConfig::with_seconds(time_limit))?;
            if let Some(out) = out {
                write_plan(&out, &res.plan)?;
            }
            println!(
                "k={} mean_ur={:.2} tc={:.3}",
                res.plan.k,
                res.plan.mean_ur * 100.0,
                res.elapsed.as_secs_f64()
            );
        }
        Command::Validate { instance, plan } => {
            let inst = read_instance(&instance)?;
            let report = validate_instance(&inst);
            if !report.is_valid() {
                for v in &report.violations {
                    println!("instance {v}");
                }
                return Err(invalid(format!("{} is not a valid instance", instance.display())));
            }
            let plan = read_plan(&plan)?;
            let report = validate_plan(&plan, &inst);
            if !report.is_valid() {
                for v in &report.violations {
                    println!("{v}");
                }
                return Err(invalid(format!("{} violation(s)", report.violations.len())));
            }
            println!("valid k={}", plan.k);
        }
        Command::Bench { groups, cases, seed, time_limit, out, jobs } => {
            let specs = parse_groups(&groups)?;
            let cfg = SolveConfig::with_seconds(time_limit);
            let results = run_benchmark(&specs, cases, seed, &cfg, jobs.max(1))?;
            let summaries = summarize(&results)?;
            write_report(&summaries, &results, &out.join("results.csv"))?;
            print!("{}", summary_csv(&summaries));
        }
        Command::Render { plan, instance, out } => {
            let inst = read_instance(&instance)?;
            let plan = read_plan(&plan)?;
            fs::write(&out, render_plan_svg(&plan, &inst)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
