use std::fmt::Write;

use serde::Serialize;

use crate::{Format, RunConfig, Suite};

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub check: &'static str,
    pub dim: usize,
    pub trials: usize,
    /// Worst relative residual over the trials; non-finite values (a check
    /// that errored or produced NaN) serialize as `null` and never pass.
    pub max_rel_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    /// First error message, when a trial could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: bool,
    pub checks: usize,
    pub failures: usize,
    /// The only field that differs between identical runs.
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: &'static str,
    pub config: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub summary: Summary,
    pub records: Vec<Record>,
    pub provenance: Provenance,
}

/// Renders the report; JSON is pretty-printed with the wall time on a line
/// of its own.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(report),
    }
}

fn markdown(report: &Report) -> String {
    let mut out = String::new();
    let s = &report.summary;
    let p = &report.provenance;
    let _ = writeln!(out, "# curvlab verification report\n");
    let _ = writeln!(
        out,
        "- result: **{}** ({} checks, {} failures)",
        if s.pass { "PASS" } else { "FAIL" },
        s.checks,
        s.failures
    );
    let _ = writeln!(
        out,
        "- seed {}, trials {}, dims {:?}, version {}",
        p.seed, p.config.trials, p.config.dims, p.version
    );
    let _ = writeln!(out, "- wall time: {:.3} s", s.wall_time_s);

    let mut suites: Vec<Suite> = Vec::new();
    for r in &report.records {
        if !suites.contains(&r.suite) {
            suites.push(r.suite);
        }
    }
    for suite in suites {
        let _ = writeln!(out, "\n## {suite}\n");
        let _ = writeln!(
            out,
            "| check | dim | trials | max rel residual | threshold | pass |"
        );
        let _ = writeln!(out, "|---|---:|---:|---:|---:|:---:|");
        for r in report.records.iter().filter(|r| r.suite == suite) {
            let _ = write!(
                out,
                "| {} | {} | {} | {:.3e} | {:.1e} | {} |",
                r.check,
                r.dim,
                r.trials,
                r.max_rel_residual,
                r.threshold,
                if r.pass { "yes" } else { "**no**" }
            );
            if let Some(note) = &r.note {
                let _ = write!(out, " {note}");
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(pass: bool) -> Report {
        let rec = Record {
            suite: Suite::Lie,
            check: "jacobi",
            dim: 3,
            trials: 4,
            max_rel_residual: if pass { 1e-16 } else { f64::INFINITY },
            threshold: 1e-12,
            pass,
            note: (!pass).then(|| "boom".to_string()),
        };
        Report {
            summary: Summary {
                pass,
                checks: 1,
                failures: usize::from(!pass),
                wall_time_s: 0.25,
            },
            records: vec![rec],
            provenance: Provenance {
                seed: 7,
                version: "0.0.0",
                config: RunConfig::default(),
            },
        }
    }

    #[test]
    fn json_schema_fields() {
        let v: serde_json::Value =
            serde_json::from_str(&emit(&sample(true), Format::Json)).unwrap();
        assert_eq!(v["summary"]["pass"], true);
        assert_eq!(v["summary"]["checks"], 1);
        let r = &v["records"][0];
        assert_eq!(r["suite"], "lie");
        assert_eq!(r["check"], "jacobi");
        assert_eq!(r["dim"], 3);
        assert!(r.get("note").is_none());
        assert_eq!(v["provenance"]["seed"], 7);
        assert_eq!(v["provenance"]["config"]["suites"][0], "lie");
        assert!(v["provenance"]["config"].get("output_path").is_none());
    }

    #[test]
    fn failing_record_serializes_null_residual() {
        let v: serde_json::Value =
            serde_json::from_str(&emit(&sample(false), Format::Json)).unwrap();
        assert_eq!(v["summary"]["pass"], false);
        assert!(v["records"][0]["max_rel_residual"].is_null());
        assert_eq!(v["records"][0]["note"], "boom");
    }

    #[test]
    fn markdown_has_one_table_per_suite() {
        let md = emit(&sample(true), Format::Markdown);
        assert!(md.contains("## lie"));
        assert_eq!(md.matches("| check |").count(), 1);
        assert!(md.contains("| jacobi | 3 | 4 |"));
    }
}
