use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use essum::scenario::{self, Overrides, ReportOptions, Resolved};
use essum::selftest;

#[derive(Parser)]
#[command(name = "essum", version, about = "Essential spectrum and range-closedness checks for scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario file and emit a report.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Global seed; overrides `set seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Default truncation size; overrides `set trunc`.
        #[arg(long = "trunc-size")]
        trunc_size: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall-clock timings (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Print the canonical form of the scenario instead of running it.
        #[arg(long)]
        canonical: bool,
    },
    /// Run the `converge` checks of a scenario file and emit truncation-lab CSV rows.
    Report {
        file: PathBuf,
        /// Default truncation size; overrides `set trunc`.
        #[arg(long = "trunc-size")]
        trunc_size: Option<usize>,
        /// Write the rows here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze {
            file,
            format,
            seed,
            trunc_size,
            out,
            jobs,
            timing,
            canonical,
        } => {
            let spec = match load(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            if canonical {
                return emit(&spec.to_string(), out.as_ref(), 0);
            }
            if trunc_size == Some(0) {
                eprintln!("error: --trunc-size must be positive");
                return ExitCode::from(1);
            }
            let settings = Resolved::new(&spec, &Overrides { seed, trunc: trunc_size });
            let results = scenario::run(&spec, &settings, worker_count(jobs));
            let opts = ReportOptions { timing };
            let body = match format {
                Format::Json => scenario::render_json(&results, &settings, opts),
                Format::Csv => scenario::render_csv(&results, opts),
            };
            emit(&body, out.as_ref(), scenario::exit_code(&results) as u8)
        }
        Command::Report {
            file,
            trunc_size,
            out,
            jobs,
        } => {
            let mut spec = match load(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            if trunc_size == Some(0) {
                eprintln!("error: --trunc-size must be positive");
                return ExitCode::from(1);
            }
            spec.directives.retain(|d| d.check == scenario::CheckKind::Converge);
            let settings = Resolved::new(&spec, &Overrides { seed: None, trunc: trunc_size });
            let results = scenario::run(&spec, &settings, worker_count(jobs));
            emit(&scenario::render_lab_csv(&results), out.as_ref(), scenario::exit_code(&results) as u8)
        }
        Command::Selftest { seed } => {
            let mut failed = false;
            for r in selftest::run_all(seed) {
                let mark = if r.passed() { "PASS" } else { "FAIL" };
                println!("{mark} {:<28} {:>4} cases  {:>3} failures  {}", r.name, r.cases, r.failures, r.detail);
                failed |= !r.passed();
            }
            ExitCode::from(if failed { 2 } else { 0 })
        }
    }
}

fn load(file: &Path) -> Result<scenario::ScenarioSpec, ExitCode> {
    let text = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", file.display());
        ExitCode::from(1)
    })?;
    scenario::parse(&text).map_err(|e| {
        eprintln!("{}: {e}", file.display());
        ExitCode::from(1)
    })
}

fn worker_count(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn emit(body: &str, out: Option<&PathBuf>, code: u8) -> ExitCode {
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(code)
}
