//! Experiment orchestration: the comparison table, the inner-loop study, and
//! the hyperparameter grid search, all seeded deterministically and emitting
//! CSV + JSON-manifest artifacts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde_json::json;
use soot_core::{
    BaselineConfig, KernelConstraint, Problem, SolveResult, SolverConfig, SolverRegistry,
    SolverSettings, SootParams, Termination,
};

use crate::config::ExperimentConfig;
use crate::metrics::{
    aggregate_mean_std, error_metrics, raw_errors, write_innerloop_csv, write_metrics_csv,
    write_metrics_detail_csv, InnerloopRow, MetricsRow, RunRecord,
};
use crate::synth::{
    constraint_from_truth, gen_observation, gen_reflectivity, init_strategy, ricker_wavelet,
    signal_box, NOISE_SALT,
};
use crate::BenchError;

/// One fully materialized realization: truths, observation, constraint sets,
/// and starting points.
pub struct Instance {
    pub x_true: Vec<f64>,
    pub h_true: Vec<f64>,
    pub y: Vec<f64>,
    pub set_h: KernelConstraint,
    pub sigma: f64,
    pub seed: u64,
    pub noise_seed: u64,
    pub x0: Vec<f64>,
    pub h0: Vec<f64>,
}

pub fn build_instance(
    cfg: &ExperimentConfig,
    sigma: f64,
    realization: usize,
) -> Result<Instance, BenchError> {
    let seed = cfg.seed ^ realization as u64;
    let noise_seed = seed ^ NOISE_SALT;
    let x_true = gen_reflectivity(cfg.n, cfg.spike_prob, cfg.amp_range, seed);
    let h_true = ricker_wavelet(cfg.s, cfg.ricker_peak_hz, cfg.sample_interval_s);
    let y = gen_observation(&x_true, &h_true, sigma, noise_seed);
    let set_h = constraint_from_truth(&h_true);
    let (x0, h0) = init_strategy(cfg.n, cfg.s, cfg.amp_range, &set_h)?;
    Ok(Instance { x_true, h_true, y, set_h, sigma, seed, noise_seed, x0, h0 })
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

/// Penalty parameters for one instance; λ scales with ‖y‖².
pub fn params_for(cfg: &ExperimentConfig, y: &[f64]) -> Result<SootParams, BenchError> {
    SootParams::new(
        cfg.soot.lambda_rel * sum_sq(y),
        cfg.soot.alpha,
        cfg.soot.beta,
        cfg.soot.eta,
    )
    .map_err(|e| BenchError::Config(format!("penalty parameters: {e}")))
}

/// Runtime solver settings for one instance; λ_b scales with ‖y‖².
pub fn settings_for(cfg: &ExperimentConfig, y: &[f64]) -> SolverSettings {
    SolverSettings {
        soot: SolverConfig {
            inner_x: cfg.soot.inner_x,
            inner_h: cfg.soot.inner_h,
            step_x: cfg.soot.step_x,
            step_h: cfg.soot.step_h,
            stop_tol: cfg.soot.stop_tol,
            max_outer: cfg.soot.max_outer,
            ..SolverConfig::default()
        },
        baseline: BaselineConfig {
            lambda_b: cfg.baseline.lambda_b_rel * sum_sq(y),
            ista_iters: cfg.baseline.ista_iters,
            outer_iters: cfg.baseline.outer_iters,
            stop_tol: cfg.baseline.stop_tol,
            step_scale: cfg.baseline.step_scale,
        },
    }
}

pub fn problem_for(cfg: &ExperimentConfig, inst: &Instance) -> Result<Problem, BenchError> {
    Problem::new(
        inst.y.clone(),
        inst.x0.clone(),
        inst.h0.clone(),
        params_for(cfg, &inst.y)?,
        signal_box(cfg.amp_range),
        inst.set_h,
    )
    .map_err(|e| BenchError::Config(format!("assembling the problem: {e}")))
}

/// Solve one instance with the named strategy, timing the call.
pub fn solve_single(
    cfg: &ExperimentConfig,
    inst: &Instance,
    method: &str,
) -> Result<(SolveResult, f64), BenchError> {
    let prob = problem_for(cfg, inst)?;
    let settings = settings_for(cfg, &inst.y);
    let solver = SolverRegistry::default()
        .create(method, &settings)
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let clock = Instant::now();
    let out = solver
        .solve(&prob)
        .map_err(|e| BenchError::Solver(format!("{method}: {e}")))?;
    Ok((out, clock.elapsed().as_secs_f64()))
}

fn record_for(inst: &Instance, out: &SolveResult, time_s: f64) -> RunRecord {
    let (l2_signal, l1_signal) = error_metrics(&inst.x_true, &out.x_hat);
    let (l2_kernel, l1_kernel) = error_metrics(&inst.h_true, &out.h_hat);
    let (l2_obs, l1_obs) = error_metrics(&inst.x_true, &inst.y);
    let (raw_l2_signal, raw_l1_signal) = raw_errors(&inst.x_true, &out.x_hat);
    RunRecord {
        l2_signal,
        l1_signal,
        l2_kernel,
        l1_kernel,
        l2_obs,
        l1_obs,
        raw_l2_signal,
        raw_l1_signal,
        time_s,
    }
}

fn create_file(path: &Path) -> Result<BufWriter<File>, BenchError> {
    let f = File::create(path).map_err(|source| BenchError::Io {
        context: format!("creating {}", path.display()),
        source,
    })?;
    Ok(BufWriter::new(f))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io { context: format!("writing {}", path.display()), source }
}

fn write_manifest(
    out_dir: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    runs: serde_json::Value,
) -> Result<(), BenchError> {
    let path = out_dir.join("manifest.json");
    let manifest = json!({
        "command": command,
        "master_seed": cfg.seed,
        "config": cfg,
        "runs": runs,
    });
    let mut w = create_file(&path)?;
    serde_json::to_writer_pretty(&mut w, &manifest)
        .map_err(|e| BenchError::Config(format!("serializing manifest: {e}")))?;
    w.write_all(b"\n").map_err(io_err(&path))?;
    Ok(())
}

fn termination_name(t: &Termination) -> &'static str {
    match t {
        Termination::Converged => "converged",
        Termination::MaxOuter => "max_outer",
        Termination::DescentViolation => "descent_violation",
    }
}

/// The σ × method comparison study. Writes `metrics.csv` (pinned header),
/// `metrics_detail.csv`, `manifest.json`, and per-run traces when configured.
pub fn run_table(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<MetricsRow>, BenchError> {
    let methods = ["soot", "l1l2"];
    let mut sigmas = cfg.sigma_list.clone();
    sigmas.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut rows = Vec::new();
    let mut run_log = Vec::new();
    for (si, &sigma) in sigmas.iter().enumerate() {
        let mut per_method: Vec<Vec<RunRecord>> = vec![Vec::new(); methods.len()];
        let mut failures = vec![0usize; methods.len()];
        for r in 0..cfg.realizations {
            let inst = build_instance(cfg, sigma, r)?;
            for (mi, method) in methods.iter().enumerate() {
                let solved = solve_single(cfg, &inst, method);
                let outcome = match solved {
                    Ok((out, time_s)) => {
                        if matches!(out.termination, Termination::DescentViolation) {
                            failures[mi] += 1;
                            "descent_violation".to_string()
                        } else {
                            per_method[mi].push(record_for(&inst, &out, time_s));
                            if cfg.verbose_traces {
                                let tp = out_dir.join(format!("trace_sig{si}_real{r}_{method}.csv"));
                                let mut w = create_file(&tp)?;
                                out.trace.write_csv(&mut w).map_err(io_err(&tp))?;
                            }
                            format!("{} ({} outer)", termination_name(&out.termination),
                                out.trace.rows.len().saturating_sub(1))
                        }
                    }
                    Err(e) => {
                        failures[mi] += 1;
                        format!("error: {e}")
                    }
                };
                run_log.push(json!({
                    "sigma": sigma,
                    "realization": r,
                    "seed": cfg.seed ^ r as u64,
                    "noise_seed": (cfg.seed ^ r as u64) ^ NOISE_SALT,
                    "method": method,
                    "outcome": outcome,
                }));
            }
        }
        for (mi, method) in methods.iter().enumerate() {
            rows.push(MetricsRow::aggregate(sigma, method, &per_method[mi], failures[mi]));
        }
    }
    rows.sort_by(|a, b| {
        a.sigma
            .partial_cmp(&b.sigma)
            .unwrap()
            .then_with(|| a.method.cmp(&b.method))
    });

    let mpath = out_dir.join("metrics.csv");
    write_metrics_csv(create_file(&mpath)?, &rows).map_err(io_err(&mpath))?;
    let dpath = out_dir.join("metrics_detail.csv");
    write_metrics_detail_csv(create_file(&dpath)?, &rows).map_err(io_err(&dpath))?;
    write_manifest(out_dir, "bench", cfg, serde_json::Value::Array(run_log))?;
    Ok(rows)
}

/// Reconstruction time and quality as a function of the inner x-step count J.
/// Writes `innerloops.csv` and `manifest.json`.
pub fn run_innerloop_study(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<InnerloopRow>, BenchError> {
    let sigma = cfg.innerloop.sigma;
    let mut rows = Vec::new();
    let mut run_log = Vec::new();
    for &j in &cfg.innerloop.j_values {
        let mut study_cfg = cfg.clone();
        study_cfg.soot.inner_x = j;
        study_cfg.soot.max_outer = cfg.innerloop.max_outer;
        let mut times = Vec::new();
        let mut l1_errs = Vec::new();
        for r in 0..cfg.realizations {
            let inst = build_instance(cfg, sigma, r)?;
            let outcome = match solve_single(&study_cfg, &inst, "soot") {
                Ok((out, time_s))
                    if !matches!(out.termination, Termination::DescentViolation) =>
                {
                    let (_, l1) = error_metrics(&inst.x_true, &out.x_hat);
                    times.push(time_s);
                    l1_errs.push(l1);
                    format!(
                        "{} ({} outer, {time_s:.3}s)",
                        termination_name(&out.termination),
                        out.trace.rows.len().saturating_sub(1)
                    )
                }
                Ok(_) => "descent_violation".to_string(),
                Err(e) => format!("error: {e}"),
            };
            run_log.push(json!({
                "J": j,
                "realization": r,
                "seed": cfg.seed ^ r as u64,
                "outcome": outcome,
            }));
        }
        if times.is_empty() {
            return Err(BenchError::Solver(format!(
                "every realization failed at J={j}"
            )));
        }
        let (mean_time_s, std_time_s) = aggregate_mean_std(&times);
        let (mean_l1_err, _) = aggregate_mean_std(&l1_errs);
        rows.push(InnerloopRow { j, mean_time_s, std_time_s, mean_l1_err });
    }
    let path = out_dir.join("innerloops.csv");
    write_innerloop_csv(create_file(&path)?, &rows).map_err(io_err(&path))?;
    write_manifest(out_dir, "innerloops", cfg, serde_json::Value::Array(run_log))?;
    Ok(rows)
}

/// One evaluated grid cell; means are over its successful realizations.
#[derive(Debug, Clone, Copy)]
pub struct GridCell {
    pub lambda_rel: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub mean_l1_err: f64,
    pub mean_l2_err: f64,
    pub successes: usize,
    pub failures: usize,
}

/// Exhaustive search over the configured penalty-parameter grid, minimizing
/// mean ℓ1 signal error (ties: ℓ2, then the lexicographic cell order).
/// Writes `grid.csv` and `manifest.json`; returns (best, all cells).
pub fn grid_search(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<(GridCell, Vec<GridCell>), BenchError> {
    let sigma = cfg.grid.sigma;
    let instances: Vec<Instance> = (0..cfg.grid.realizations)
        .map(|r| build_instance(cfg, sigma, r))
        .collect::<Result<_, _>>()?;

    let mut cells = Vec::new();
    let mut cell_log = Vec::new();
    let mut best: Option<GridCell> = None;
    for &lambda_rel in &cfg.grid.lambda_rel {
        for &alpha in &cfg.grid.alpha {
            for &beta in &cfg.grid.beta {
                for &eta in &cfg.grid.eta {
                    let mut cell_cfg = cfg.clone();
                    cell_cfg.soot.lambda_rel = lambda_rel;
                    cell_cfg.soot.alpha = alpha;
                    cell_cfg.soot.beta = beta;
                    cell_cfg.soot.eta = eta;
                    let mut l1s = Vec::new();
                    let mut l2s = Vec::new();
                    let mut failures = 0usize;
                    for (r, inst) in instances.iter().enumerate() {
                        match solve_single(&cell_cfg, inst, "soot") {
                            Ok((out, _))
                                if !matches!(out.termination, Termination::DescentViolation) =>
                            {
                                let (l2, l1) = error_metrics(&inst.x_true, &out.x_hat);
                                l1s.push(l1);
                                l2s.push(l2);
                            }
                            Ok(_) => {
                                failures += 1;
                                cell_log.push(json!({
                                    "lambda_rel": lambda_rel, "alpha": alpha,
                                    "beta": beta, "eta": eta, "realization": r,
                                    "outcome": "descent_violation",
                                }));
                            }
                            Err(e) => {
                                failures += 1;
                                cell_log.push(json!({
                                    "lambda_rel": lambda_rel, "alpha": alpha,
                                    "beta": beta, "eta": eta, "realization": r,
                                    "outcome": format!("error: {e}"),
                                }));
                            }
                        }
                    }
                    let cell = GridCell {
                        lambda_rel,
                        alpha,
                        beta,
                        eta,
                        mean_l1_err: aggregate_mean_std(&l1s).0,
                        mean_l2_err: aggregate_mean_std(&l2s).0,
                        successes: l1s.len(),
                        failures,
                    };
                    cells.push(cell);
                    if cell.successes == 0 {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            cell.mean_l1_err < b.mean_l1_err
                                || (cell.mean_l1_err == b.mean_l1_err
                                    && cell.mean_l2_err < b.mean_l2_err)
                        }
                    };
                    if better {
                        best = Some(cell);
                    }
                }
            }
        }
    }
    let best = best.ok_or_else(|| {
        BenchError::Solver("every grid cell failed on every realization".into())
    })?;

    let path = out_dir.join("grid.csv");
    let mut w = create_file(&path)?;
    writeln!(w, "lambda_rel,alpha,beta,eta,mean_l1_err,mean_l2_err,failures")
        .map_err(io_err(&path))?;
    for c in cells.iter().filter(|c| c.successes > 0) {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            c.lambda_rel, c.alpha, c.beta, c.eta, c.mean_l1_err, c.mean_l2_err, c.failures
        )
        .map_err(io_err(&path))?;
    }
    let summary = json!([{
        "best": {
            "lambda_rel": best.lambda_rel,
            "alpha": best.alpha,
            "beta": best.beta,
            "eta": best.eta,
            "mean_l1_err": best.mean_l1_err,
            "mean_l2_err": best.mean_l2_err,
        },
        "cells_evaluated": cells.len(),
        "grid_sigma": sigma,
        "grid_realizations": cfg.grid.realizations,
        "failed_runs": cell_log,
    }]);
    write_manifest(out_dir, "gridsearch", cfg, summary)?;
    Ok((best, cells))
}
