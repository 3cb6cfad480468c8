use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use soot_core::Termination;

use soot_bench::config::ExperimentConfig;
use soot_bench::runner::{
    build_instance, grid_search, run_innerloop_study, run_table, solve_single, Instance,
};
use soot_bench::BenchError;

#[derive(Parser, Debug)]
#[command(
    name = "soot-bench",
    version,
    about = "Sparse blind deconvolution benchmark on synthetic seismic data"
)]
struct Cli {
    /// TOML experiment configuration; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InstanceOpts {
    /// Noise level σ; defaults to the first configured σ.
    #[arg(long)]
    sigma: Option<f64>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Realization index, mixed into the seed.
    #[arg(long, default_value_t = 0)]
    realization: usize,
}

#[derive(Args, Debug)]
struct PenaltyOpts {
    /// Absolute penalty weight λ, replacing the ‖y‖²-relative default.
    #[arg(long)]
    lambda: Option<f64>,
    /// Smoothing of the ℓ1 surrogate.
    #[arg(long)]
    alpha: Option<f64>,
    /// Offset inside the numerator logarithm.
    #[arg(long)]
    beta: Option<f64>,
    /// Smoothing of the ℓ2 denominator.
    #[arg(long)]
    eta: Option<f64>,
    /// Inner signal iterations per outer step.
    #[arg(long)]
    inner_x: Option<usize>,
    /// Inner kernel iterations per outer step.
    #[arg(long)]
    inner_h: Option<usize>,
    /// Also print errors after optimal scalar alignment (diagnostic only;
    /// never enters the CSV tables).
    #[arg(long)]
    aligned: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize one reflectivity/wavelet/observation triple as CSV files.
    Generate {
        #[command(flatten)]
        inst: InstanceOpts,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve one synthetic instance with a chosen strategy.
    Solve {
        /// Registered strategy name.
        #[arg(long, default_value = "soot")]
        method: String,
        #[command(flatten)]
        inst: InstanceOpts,
        #[command(flatten)]
        penalty: PenaltyOpts,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve one instance with every comparison strategy and print the errors.
    Compare {
        #[command(flatten)]
        inst: InstanceOpts,
        #[command(flatten)]
        penalty: PenaltyOpts,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the full σ × method comparison study.
    Bench {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sweep the inner signal-iteration count and record time/quality.
    Innerloops {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Exhaustive penalty-parameter grid search.
    Gridsearch {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), BenchError> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    match cli.command {
        Command::Generate { inst, out } => cmd_generate(cfg, inst, &out),
        Command::Solve { method, inst, penalty, out } => {
            cmd_solve(cfg, &method, inst, penalty, &out)
        }
        Command::Compare { inst, penalty, out } => cmd_compare(cfg, inst, penalty, &out),
        Command::Bench { out } => {
            ensure_dir(&out)?;
            let rows = run_table(&cfg, &out)?;
            println!("sigma  method  l2_signal    l1_signal    l2_obs       failures");
            for r in &rows {
                println!(
                    "{:<6} {:<7} {:<12.6} {:<12.6} {:<12.6} {}",
                    r.sigma, r.method, r.mean.l2_signal, r.mean.l1_signal, r.mean.l2_obs,
                    r.failures
                );
            }
            println!("wrote {}", out.join("metrics.csv").display());
            Ok(())
        }
        Command::Innerloops { out } => {
            ensure_dir(&out)?;
            let rows = run_innerloop_study(&cfg, &out)?;
            println!("J      mean_time_s  mean_l1_err");
            for r in &rows {
                println!("{:<6} {:<12.4} {:.8}", r.j, r.mean_time_s, r.mean_l1_err);
            }
            println!("wrote {}", out.join("innerloops.csv").display());
            Ok(())
        }
        Command::Gridsearch { out } => {
            ensure_dir(&out)?;
            let (best, cells) = grid_search(&cfg, &out)?;
            println!(
                "best of {} cells: lambda_rel={} alpha={} beta={} eta={} (mean l1 err {:.8})",
                cells.len(),
                best.lambda_rel,
                best.alpha,
                best.beta,
                best.eta,
                best.mean_l1_err
            );
            println!("wrote {}", out.join("grid.csv").display());
            Ok(())
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), BenchError> {
    std::fs::create_dir_all(dir).map_err(|source| BenchError::Io {
        context: format!("creating {}", dir.display()),
        source,
    })
}

fn write_core_csv(path: &Path, values: &[f64]) -> Result<(), BenchError> {
    soot_core::io::write_values_csv(path, values).map_err(|e| BenchError::Io {
        context: format!("writing {}", path.display()),
        source: std::io::Error::other(e.to_string()),
    })
}

/// Resolve σ/seed overrides and build the instance they describe.
fn instance_from_opts(
    cfg: &mut ExperimentConfig,
    opts: &InstanceOpts,
) -> Result<Instance, BenchError> {
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let sigma = match opts.sigma {
        Some(s) if s >= 0.0 => s,
        Some(s) => return Err(BenchError::Config(format!("sigma must be >= 0, got {s}"))),
        None => cfg.sigma_list[0],
    };
    build_instance(cfg, sigma, opts.realization)
}

/// Fold the penalty flags into the configuration. The absolute `--lambda`
/// is converted to its ‖y‖²-relative form so every downstream path sees one
/// representation.
fn apply_penalty_opts(
    cfg: &mut ExperimentConfig,
    penalty: &PenaltyOpts,
    y: &[f64],
) -> Result<(), BenchError> {
    if let Some(a) = penalty.alpha {
        cfg.soot.alpha = a;
    }
    if let Some(b) = penalty.beta {
        cfg.soot.beta = b;
    }
    if let Some(e) = penalty.eta {
        cfg.soot.eta = e;
    }
    if let Some(j) = penalty.inner_x {
        cfg.soot.inner_x = j;
    }
    if let Some(i) = penalty.inner_h {
        cfg.soot.inner_h = i;
    }
    if let Some(lambda) = penalty.lambda {
        let obs_energy: f64 = y.iter().map(|v| v * v).sum();
        if obs_energy <= 0.0 {
            return Err(BenchError::Config(
                "cannot scale lambda: observation is identically zero".into(),
            ));
        }
        cfg.soot.lambda_rel = lambda / obs_energy;
    }
    cfg.validate()
}

fn cmd_generate(
    mut cfg: ExperimentConfig,
    opts: InstanceOpts,
    out: &Path,
) -> Result<(), BenchError> {
    ensure_dir(out)?;
    let inst = instance_from_opts(&mut cfg, &opts)?;
    write_core_csv(&out.join("x_true.csv"), &inst.x_true)?;
    write_core_csv(&out.join("h_true.csv"), &inst.h_true)?;
    write_core_csv(&out.join("y.csv"), &inst.y)?;
    let manifest = serde_json::json!([{
        "sigma": inst.sigma,
        "seed": inst.seed,
        "noise_seed": inst.noise_seed,
        "n": cfg.n,
        "s": cfg.s,
    }]);
    write_run_manifest(out, "generate", &cfg, manifest)?;
    println!(
        "generated n={} s={} sigma={} -> {}",
        cfg.n,
        cfg.s,
        inst.sigma,
        out.display()
    );
    Ok(())
}

fn write_run_manifest(
    out: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    runs: serde_json::Value,
) -> Result<(), BenchError> {
    let path = out.join("manifest.json");
    let manifest = serde_json::json!({
        "command": command,
        "master_seed": cfg.seed,
        "config": cfg,
        "runs": runs,
    });
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| BenchError::Config(format!("serializing manifest: {e}")))?;
    std::fs::write(&path, text + "\n").map_err(|source| BenchError::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

struct MethodReport {
    method: String,
    termination: Termination,
    outer: usize,
    final_f: f64,
    l2_signal: f64,
    l1_signal: f64,
    aligned: Option<(f64, f64)>,
    time_s: f64,
}

fn solve_and_report(
    cfg: &ExperimentConfig,
    inst: &Instance,
    method: &str,
    out: &Path,
    suffix: &str,
    aligned: bool,
) -> Result<MethodReport, BenchError> {
    let (res, time_s) = solve_single(cfg, inst, method)?;
    if matches!(res.termination, Termination::DescentViolation) {
        return Err(BenchError::Solver(format!(
            "{method} terminated on a descent violation"
        )));
    }
    write_core_csv(&out.join(format!("x_hat{suffix}.csv")), &res.x_hat)?;
    write_core_csv(&out.join(format!("h_hat{suffix}.csv")), &res.h_hat)?;
    let trace_path = out.join(format!("trace{suffix}.csv"));
    let mut w = std::fs::File::create(&trace_path).map_err(|source| BenchError::Io {
        context: format!("creating {}", trace_path.display()),
        source,
    })?;
    res.trace.write_csv(&mut w).map_err(|source| BenchError::Io {
        context: format!("writing {}", trace_path.display()),
        source,
    })?;
    let (l2_signal, l1_signal) = soot_bench::metrics::error_metrics(&inst.x_true, &res.x_hat);
    let aligned = aligned
        .then(|| soot_bench::metrics::aligned_error_metrics(&inst.x_true, &res.x_hat));
    Ok(MethodReport {
        method: method.to_string(),
        termination: res.termination,
        outer: res.trace.rows.len().saturating_sub(1),
        final_f: res.trace.rows.last().map_or(f64::NAN, |r| r.f),
        l2_signal,
        l1_signal,
        aligned,
        time_s,
    })
}

fn print_report(r: &MethodReport) {
    println!(
        "{:<6} {:?} after {} outer iterations: F={:.6e}, l2_err={:.6}, l1_err={:.6}, {:.3}s",
        r.method, r.termination, r.outer, r.final_f, r.l2_signal, r.l1_signal, r.time_s
    );
    if let Some((l2a, l1a)) = r.aligned {
        println!(
            "       scalar-aligned diagnostic: l2_err={l2a:.6}, l1_err={l1a:.6}"
        );
    }
}

fn cmd_solve(
    mut cfg: ExperimentConfig,
    method: &str,
    inst_opts: InstanceOpts,
    penalty: PenaltyOpts,
    out: &Path,
) -> Result<(), BenchError> {
    ensure_dir(out)?;
    let inst = instance_from_opts(&mut cfg, &inst_opts)?;
    apply_penalty_opts(&mut cfg, &penalty, &inst.y)?;
    let report = solve_and_report(&cfg, &inst, method, out, "", penalty.aligned)?;
    print_report(&report);
    let manifest = serde_json::json!([{
        "method": method,
        "sigma": inst.sigma,
        "seed": inst.seed,
        "termination": format!("{:?}", report.termination),
        "outer_iterations": report.outer,
        "time_s": report.time_s,
    }]);
    write_run_manifest(out, "solve", &cfg, manifest)?;
    Ok(())
}

fn cmd_compare(
    mut cfg: ExperimentConfig,
    inst_opts: InstanceOpts,
    penalty: PenaltyOpts,
    out: &Path,
) -> Result<(), BenchError> {
    ensure_dir(out)?;
    let inst = instance_from_opts(&mut cfg, &inst_opts)?;
    apply_penalty_opts(&mut cfg, &penalty, &inst.y)?;
    let mut log = Vec::new();
    for method in ["soot", "l1l2"] {
        let report =
            solve_and_report(&cfg, &inst, method, out, &format!("_{method}"), penalty.aligned)?;
        print_report(&report);
        log.push(serde_json::json!({
            "method": method,
            "sigma": inst.sigma,
            "seed": inst.seed,
            "termination": format!("{:?}", report.termination),
            "outer_iterations": report.outer,
            "time_s": report.time_s,
        }));
    }
    write_run_manifest(out, "compare", &cfg, serde_json::Value::Array(log))?;
    Ok(())
}
