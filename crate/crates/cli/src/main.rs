use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvlab::{
    default_thresholds, emit, parse_tolerance, run, Format, RunConfig, Suite, UsageError,
};
use curvlab_core::decompose;
use curvlab_core::extremal::{
    enumerate_critical, optimize_g_with, sharp_bound, Direction, OptimizerConfig, CLASSIFY_TOL,
};
use curvlab_core::models::{
    classify_model, gaussian, round_cylinder, round_sphere, soliton_residual,
};
use serde_json::json;

const USAGE_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "curvlab",
    version,
    about = "Numerical verification of curvature-operator identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and emit a report.
    Verify(VerifyArgs),
    /// Print the sharp cubic bound and the critical configurations for one dimension.
    Extremal(ExtremalArgs),
    /// Print the model shrinking solitons and their residuals.
    Models(ModelsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated dimensions in [3, 12].
    #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
    dims: Vec<usize>,
    /// Random trials per dimension.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Threshold override, e.g. `--tol identities.q_trace=1e-8`; repeatable.
    #[arg(long = "tol", value_name = "SUITE.CHECK=VALUE")]
    tol: Vec<String>,
    /// Comma-separated subset of suites.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = Suite::ALL)]
    suites: Vec<Suite>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// List check names with their default thresholds and exit.
    #[arg(long)]
    list_checks: bool,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Optimizer starts per direction.
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
}

#[derive(Args)]
struct ModelsArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6, 7, 8])]
    dims: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE_EXIT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Extremal(args) => extremal(args),
        Command::Models(args) => models(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    if args.list_checks {
        for (name, t) in default_thresholds() {
            println!("{name}\t{t:e}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mut tolerances = BTreeMap::new();
    for t in &args.tol {
        let (name, value) = parse_tolerance(t).map_err(|e| e.to_string())?;
        tolerances.insert(name, value);
    }
    let config = RunConfig {
        dims: args.dims,
        trials: args.trials,
        seed: args.seed,
        tolerances,
        suites: args.suites,
        output_format: args.format,
        output_path: args.out,
    };
    let report = run(&config).map_err(|e: UsageError| e.to_string())?;
    let text = emit(&report, config.output_format);
    match &config.output_path {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!(
                "{}: {} checks, {} failures -> {}",
                if report.summary.pass { "PASS" } else { "FAIL" },
                report.summary.checks,
                report.summary.failures,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(if report.summary.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn extremal(args: ExtremalArgs) -> Result<ExitCode, String> {
    let n = args.dim;
    let bound = sharp_bound(n).map_err(|e| e.to_string())?;
    let critical = enumerate_critical(n).map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig {
        starts: args.starts,
        ..OptimizerConfig::default()
    };
    let lo = optimize_g_with(n, args.seed, Direction::Min, &cfg).map_err(|e| e.to_string())?;
    let hi = optimize_g_with(n, args.seed, Direction::Max, &cfg).map_err(|e| e.to_string())?;

    match args.format {
        Format::Json => {
            let rows: Vec<_> = critical
                .iter()
                .map(|c| {
                    json!({
                        "negatives": c.negatives,
                        "lambda": c.lam.lam(),
                        "g": c.g,
                        "mu": c.mu,
                        "lagrange_residual": c.lagrange_residual(),
                    })
                })
                .collect();
            let v = json!({
                "dim": n,
                "bound": bound,
                "optimizer": {"starts": args.starts, "seed": args.seed, "min": lo.value, "max": hi.value},
                "critical": rows,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
        Format::Markdown => {
            let mut s = String::new();
            let _ = writeln!(s, "# Σλ³ on {{Σλ = 0, Σλ² = 1}}, n = {n}\n");
            let _ = writeln!(s, "- sharp bound (n-2)/√(n(n-1)) = {bound:.9}");
            let _ = writeln!(
                s,
                "- optimizer ({} starts, seed {}): min {:.9}, max {:.9}\n",
                args.starts, args.seed, lo.value, hi.value
            );
            let _ = writeln!(
                s,
                "| negatives | positive entry | negative entry | g | μ | Lagrange residual |"
            );
            let _ = writeln!(s, "|---:|---:|---:|---:|---:|---:|");
            for c in &critical {
                let lam = c.lam.lam();
                let _ = writeln!(
                    s,
                    "| {} | {:.9} | {:.9} | {:.9} | {:.9} | {:.1e} |",
                    c.negatives,
                    lam[0],
                    lam[n - 1],
                    c.g,
                    c.mu,
                    c.lagrange_residual()
                );
            }
            print!("{s}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn models(args: ModelsArgs) -> Result<ExitCode, String> {
    let err = |e: curvlab_core::Error| e.to_string();
    let mut rows = Vec::new();
    for &n in &args.dims {
        if !(curvlab::MIN_DIM..=curvlab::MAX_DIM).contains(&n) {
            return Err(UsageError::Dimension(n).to_string());
        }
        for m in [gaussian(n), round_sphere(n), round_cylinder(n)] {
            let m = m.map_err(err)?;
            let d = decompose(&m.curvature).map_err(err)?;
            rows.push(json!({
                "model": m.kind.to_string(),
                "dim": n,
                "scalar": m.scalar,
                "ricci_eigenvalues": m.ric.eigenvalues(),
                "hess_f_eigenvalues": m.hess_f.eigenvalues(),
                "min_curvature_eigenvalue": m.curvature.min_eigenvalue(),
                "weyl_norm": d.weyl.norm(),
                "soliton_residual": soliton_residual(&m),
                "class": format!("{:?}", classify_model(&m, CLASSIFY_TOL).map_err(err)?),
                "potential": m.potential_note,
            }));
        }
    }
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&rows).expect("serializable")
        ),
        Format::Markdown => {
            println!("| model | n | S | Ric eigenvalues | Hess f eigenvalues | min eig R | abs W | residual | class | potential |");
            println!("|---|---:|---:|---|---|---:|---:|---:|---|---|");
            for r in &rows {
                let list = |v: &serde_json::Value| {
                    v.as_array()
                        .map(|a| {
                            a.iter()
                                .map(|x| format!("{:.4}", x.as_f64().unwrap_or(f64::NAN)))
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .unwrap_or_default()
                };
                println!(
                    "| {} | {} | {:.6} | {} | {} | {:.4} | {:.1e} | {:.1e} | {} | {} |",
                    r["model"].as_str().unwrap_or(""),
                    r["dim"],
                    r["scalar"].as_f64().unwrap_or(f64::NAN),
                    list(&r["ricci_eigenvalues"]),
                    list(&r["hess_f_eigenvalues"]),
                    r["min_curvature_eigenvalue"].as_f64().unwrap_or(f64::NAN),
                    r["weyl_norm"].as_f64().unwrap_or(f64::NAN),
                    r["soliton_residual"].as_f64().unwrap_or(f64::NAN),
                    r["class"].as_str().unwrap_or(""),
                    r["potential"].as_str().unwrap_or(""),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
