use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cqed_feedback::scenario::{self, OutputFormat, Scenario, ScenarioConfig};
use cqed_feedback::Error;

/// Reproduce figure data for the single-photon feedback entanglement protocol.
#[derive(Parser)]
#[command(version)]
struct Args {
    scenario: Scenario,

    /// JSON scenario configuration; omitted fields take their defaults
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (falls back to `output.dir` in the config)
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Absolute quadrature tolerance
    #[arg(long)]
    tolerance: Option<f64>,
}

fn execute(args: &Args) -> Result<Vec<PathBuf>, Error> {
    let mut config = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(tol) = args.tolerance {
        config.tolerance = Some(tol);
    }
    if let Some(format) = args.format {
        config.output.get_or_insert_with(Default::default).format = Some(format);
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output.as_ref().and_then(|o| o.dir.clone()))
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output.dir".into()))?;
    let resolved = config.resolve(args.scenario)?;
    let series = scenario::run(&resolved)?;
    scenario::write_all(&series, &out, resolved.format)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::InvalidParams { .. } | Error::Domain(_) => ExitCode::from(2),
                e if e.is_numerical() => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
