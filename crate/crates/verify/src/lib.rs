//! Seeded property suites for the `grassmann-core` library.
//!
//! [`run_suite`] executes the named checks of a suite and returns one
//! [`CheckResult`] per check; [`emit_report`] renders them as JSON or text.

pub mod checks;
pub mod config;
pub mod instances;
pub mod oracles;
pub mod report;

pub use config::{ConfigError, FileConfig, Suite, SuiteConfig};
pub use report::{emit_report, parse_report, CheckResult, Format, Report};

/// Runs every check scheduled for `cfg.suite`, in registry order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, ConfigError> {
    cfg.validate()?;
    Ok(checks::scheduled(cfg.suite)
        .iter()
        .map(|spec| {
            let outcome = spec.run(cfg);
            let tolerance = cfg.tolerance(spec);
            CheckResult {
                name: spec.name.to_string(),
                trials: outcome.trials,
                max_abs_error: outcome.max_abs_error,
                tolerance,
                pass: outcome.max_abs_error <= tolerance,
                worst_seed: outcome.worst_seed,
            }
        })
        .collect())
}
