use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use regulab::verify::{emit, run_all, run_scenario, sweep, Format, Report, Scenario, SCENARIOS};
use regulab::{Error, TolerancePolicy};

#[derive(Parser)]
#[command(name = "verify", about = "Run named numerical verifications and print a report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Md,
}

#[derive(clap::Args)]
struct Output {
    /// Absolute tolerance overriding the scenario default.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        scenario: String,
        /// JSON file `{"params": {..}, "tolerance": x, "windows": [..]}`.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run one scenario at each window size and add a convergence table.
    Sweep {
        scenario: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Run every registered scenario; `<dir>/<name>.json` is used as config when present.
    All {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// List the registered scenarios.
    List,
}

fn load(name: &str, config: Option<&Path>, tolerance: Option<f64>) -> Result<Scenario, String> {
    let mut s = Scenario::new(name).map_err(|e| e.to_string())?;
    if let Some(path) = config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        s = s.with_config(&value).map_err(|e| e.to_string())?;
    }
    if let Some(t) = tolerance {
        s = s.with_tolerance(TolerancePolicy::abs(t).map_err(|e| e.to_string())?);
    }
    Ok(s)
}

fn execute(cmd: Command) -> Result<(Vec<Report>, Output), String> {
    let err = |e: Error| e.to_string();
    match cmd {
        Command::Run { scenario, config, output } => {
            let s = load(&scenario, config.as_deref(), output.tolerance)?;
            Ok((vec![run_scenario(&s).map_err(err)?], output))
        }
        Command::Sweep { scenario, config, windows, output } => {
            let mut s = load(&scenario, config.as_deref(), output.tolerance)?;
            if !windows.is_empty() {
                s = s.with_windows(windows);
            }
            Ok((vec![sweep(&s).map_err(err)?], output))
        }
        Command::All { config, output } => {
            let scenarios = SCENARIOS
                .iter()
                .map(|name| {
                    let path = config.as_ref().map(|d| d.join(format!("{name}.json"))).filter(|p| p.exists());
                    load(name, path.as_deref(), output.tolerance)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((run_all(&scenarios).map_err(err)?, output))
        }
        Command::List => unreachable!("handled before execution"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Command::List) {
        for name in SCENARIOS {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    if let Some(n) = std::env::var("VERIFY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool that is already set up is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (reports, output) = match execute(cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let fmt = match output.report {
        ReportFormat::Json => Format::Json,
        ReportFormat::Md => Format::Markdown,
    };
    let text = emit(&reports, fmt);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for r in &reports {
        eprintln!("{}: {}", r.scenario, if r.pass { "pass" } else { "FAIL" });
    }
    if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) }
}
