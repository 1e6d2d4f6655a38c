use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use grassmann_verify::{emit_report, run_suite, FileConfig, Format, Report, Suite, SuiteConfig};

/// Run the seeded property suites and report one line per check.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// atlas, bundles, restricted or all.
    #[arg(long)]
    suite: Option<Suite>,
    /// Ambient dimensions; repeat the flag or give a comma-separated list.
    #[arg(long = "dim", value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override `name=value`, by check name or tolerance key.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Ladder sizes for the restricted experiments.
    #[arg(long, value_delimiter = ',')]
    ladder: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with defaults; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> anyhow::Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &cli.config {
        FileConfig::load(path)?.apply(&mut cfg)?;
    }
    if let Some(suite) = cli.suite {
        cfg.suite = suite;
    }
    if !cli.dims.is_empty() {
        cfg.dims = cli.dims.clone();
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if !cli.ladder.is_empty() {
        cfg.ladder = cli.ladder.clone();
    }
    for entry in &cli.tol {
        let (name, value) = SuiteConfig::parse_override(entry)?;
        cfg.tolerances.insert(name, value);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = build_config(cli)?;
    let report = Report::new(&cfg, run_suite(&cfg)?);
    let text = emit_report(&report, cli.format);
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("verify: {e:#}");
            ExitCode::from(2)
        }
    }
}
