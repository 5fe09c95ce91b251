//! Batch verification runner for `curvlab-core`.
//!
//! [`run`] executes the selected check suites over a grid of dimensions and
//! seeded trials and collects one [`Record`] per (suite, check, dimension).
//! A failing identity is recorded, never raised: the report is the result.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

mod report;
mod suites;

pub use report::{emit, Provenance, Record, Report, Summary};
pub use suites::default_thresholds;

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lie,
    Curvature,
    Decomposition,
    Identities,
    Extremal,
    Models,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lie,
        Suite::Curvature,
        Suite::Decomposition,
        Suite::Identities,
        Suite::Extremal,
        Suite::Models,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lie => "lie",
            Suite::Curvature => "curvature",
            Suite::Decomposition => "decomposition",
            Suite::Identities => "identities",
            Suite::Extremal => "extremal",
            Suite::Models => "models",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

/// Invalid run configuration; the binary maps this to exit code 2.
#[derive(Debug, Error, PartialEq)]
pub enum UsageError {
    #[error("dimension {0} is outside [{MIN_DIM}, {MAX_DIM}]")]
    Dimension(usize),
    #[error("trials must be at least 1")]
    Trials,
    #[error("malformed tolerance `{0}`, expected <suite>.<check>=<value>")]
    MalformedTolerance(String),
    #[error("unknown tolerance name `{0}` (see `verify --list-checks`)")]
    UnknownTolerance(String),
    #[error("tolerance `{name}` must be finite and nonnegative, got {value}")]
    BadTolerance { name: String, value: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Threshold overrides keyed by `<suite>.<check>`.
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<Suite>,
    pub output_format: Format,
    /// Where the report goes; not echoed into the report itself.
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dims: vec![3, 4, 5, 6],
            trials: 100,
            seed: 42,
            tolerances: BTreeMap::new(),
            suites: Suite::ALL.to_vec(),
            output_format: Format::Json,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), UsageError> {
        if let Some(&d) = self
            .dims
            .iter()
            .find(|&&d| !(MIN_DIM..=MAX_DIM).contains(&d))
        {
            return Err(UsageError::Dimension(d));
        }
        if self.trials == 0 {
            return Err(UsageError::Trials);
        }
        let known = default_thresholds();
        for (name, &value) in &self.tolerances {
            if !known.contains_key(name.as_str()) {
                return Err(UsageError::UnknownTolerance(name.clone()));
            }
            if !(value.is_finite() && value >= 0.0) {
                return Err(UsageError::BadTolerance {
                    name: name.clone(),
                    value,
                });
            }
        }
        Ok(())
    }

    /// Effective thresholds: defaults overridden by `tolerances`.
    pub fn thresholds(&self) -> BTreeMap<&'static str, f64> {
        let mut t = default_thresholds();
        for (k, v) in t.iter_mut() {
            if let Some(&o) = self.tolerances.get(*k) {
                *v = o;
            }
        }
        t
    }
}

/// Parses `name=value` as given to `--tol`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), UsageError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| UsageError::MalformedTolerance(s.to_string()))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| UsageError::MalformedTolerance(s.to_string()))?;
    Ok((name.trim().to_string(), value))
}

/// Executes the configured suites. Suites run in the order given (duplicates
/// dropped), dimensions in the order given; trials run in parallel and are
/// merged in index order, so the report is a function of the config alone.
pub fn run(config: &RunConfig) -> Result<Report, UsageError> {
    config.validate()?;
    let start = Instant::now();
    let thresholds = config.thresholds();
    let mut seen = Vec::new();
    let mut records = Vec::new();
    for &suite in &config.suites {
        if seen.contains(&suite) {
            continue;
        }
        seen.push(suite);
        for &dim in &config.dims {
            records.extend(suites::run_suite(
                suite,
                dim,
                config.trials,
                config.seed,
                &thresholds,
            ));
        }
    }
    let failures = records.iter().filter(|r| !r.pass).count();
    Ok(Report {
        summary: Summary {
            pass: failures == 0,
            checks: records.len(),
            failures,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        records,
        provenance: Provenance {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configs() {
        let mut c = RunConfig {
            trials: 0,
            ..RunConfig::default()
        };
        assert_eq!(run(&c).unwrap_err(), UsageError::Trials);
        c.trials = 1;
        c.dims = vec![3, 13];
        assert_eq!(run(&c).unwrap_err(), UsageError::Dimension(13));
        c.dims = vec![2];
        assert_eq!(run(&c).unwrap_err(), UsageError::Dimension(2));
        c.dims = vec![3];
        c.tolerances.insert("lie.nope".into(), 1.0);
        assert!(matches!(run(&c), Err(UsageError::UnknownTolerance(_))));
        c.tolerances.clear();
        c.tolerances.insert("lie.jacobi".into(), -1.0);
        assert!(matches!(run(&c), Err(UsageError::BadTolerance { .. })));
    }

    #[test]
    fn tolerance_parsing() {
        assert_eq!(
            parse_tolerance("identities.q_trace=1e-8").unwrap(),
            ("identities.q_trace".to_string(), 1e-8)
        );
        assert!(parse_tolerance("identities.q_trace").is_err());
        assert!(parse_tolerance("x=abc").is_err());
    }

    #[test]
    fn empty_suite_list_passes() {
        let c = RunConfig {
            suites: vec![],
            ..RunConfig::default()
        };
        let r = run(&c).unwrap();
        assert!(r.records.is_empty());
        assert!(r.summary.pass);
    }

    #[test]
    fn overrides_reach_records() {
        let mut c = RunConfig {
            dims: vec![3],
            trials: 2,
            suites: vec![Suite::Lie],
            ..RunConfig::default()
        };
        c.tolerances.insert("lie.jacobi".into(), 0.5);
        let r = run(&c).unwrap();
        let rec = r.records.iter().find(|r| r.check == "jacobi").unwrap();
        assert_eq!(rec.threshold, 0.5);
    }

    #[test]
    fn all_suites_pass_in_dimension_three() {
        let c = RunConfig {
            dims: vec![3],
            trials: 10,
            ..RunConfig::default()
        };
        let r = run(&c).unwrap();
        for rec in &r.records {
            assert!(rec.pass, "{rec:?}");
        }
        assert!(r.summary.pass);
    }
}
