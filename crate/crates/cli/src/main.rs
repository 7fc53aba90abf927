use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use formlab_cli::{run_suite, ExperimentConfig, Suite};

/// Run a verification suite and write a JSON report.
#[derive(Parser, Debug)]
#[command(name = "formlab", version)]
struct Args {
    suite: Suite,
    /// field literal p^r[:modulus[:s]], repeatable
    #[arg(long = "field")]
    fields: Vec<String>,
    /// symplectic, unitary, orthogonal or custom:<eps>:<l1>,<l2>; repeatable
    #[arg(long = "preset")]
    presets: Vec<String>,
    #[arg(long)]
    min_dim: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// largest number of hyperbolic summands in isotropic buildings
    #[arg(long)]
    max_genus: Option<usize>,
    /// bound on enumerations and element lists
    #[arg(long, default_value_t = 2_000_000)]
    cap: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random instances per parameter set
    #[arg(long)]
    samples: Option<usize>,
    /// include the slow checks
    #[arg(long)]
    slow: bool,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// print a CSV summary on stdout
    #[arg(long)]
    csv: bool,
}

fn main() -> anyhow::Result<ExitCode> {
    let a = Args::parse();
    let cfg = ExperimentConfig {
        suite: a.suite,
        fields: a.fields,
        presets: a.presets,
        min_dim: a.min_dim,
        max_dim: a.max_dim,
        max_genus: a.max_genus,
        cap: a.cap,
        seed: a.seed,
        samples: a.samples,
        slow: a.slow,
    };
    let report = run_suite(&cfg).context("invalid configuration")?;
    let json = report.to_json();
    match &a.out {
        Some(path) => std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None if !a.csv => println!("{json}"),
        None => {}
    }
    if a.csv {
        report.write_csv(std::io::stdout().lock())?;
    }
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.detail());
    }
    if let Some(e) = &report.error {
        eprintln!("suite aborted: {e}");
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
