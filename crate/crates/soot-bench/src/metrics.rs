//! Error metrics and the CSV shapes produced by the benchmark commands.

use std::io::Write;

/// Per-sample-normalized error pair: root-mean-square and mean-absolute
/// differences between truth and estimate.
pub fn error_metrics(truth: &[f64], estimate: &[f64]) -> (f64, f64) {
    assert_eq!(truth.len(), estimate.len(), "metric length mismatch");
    let n = truth.len() as f64;
    let mut sq = 0.0;
    let mut ab = 0.0;
    for (t, e) in truth.iter().zip(estimate) {
        let d = t - e;
        sq += d * d;
        ab += d.abs();
    }
    ((sq / n).sqrt(), ab / n)
}

/// Raw (unnormalized) ℓ2 and ℓ1 norms of the difference, for the detail CSV.
pub fn raw_errors(truth: &[f64], estimate: &[f64]) -> (f64, f64) {
    let (rms, mae) = error_metrics(truth, estimate);
    let n = truth.len() as f64;
    (rms * n.sqrt(), mae * n)
}

/// One realization's worth of measurements for one method.
/// Error after the best scalar rescaling of the estimate — a diagnostic that
/// separates shape error from the blind-deconvolution scale ambiguity. Never
/// used in the benchmark tables.
pub fn aligned_error_metrics(truth: &[f64], estimate: &[f64]) -> (f64, f64) {
    let num: f64 = truth.iter().zip(estimate).map(|(t, e)| t * e).sum();
    let den: f64 = estimate.iter().map(|e| e * e).sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    let scaled: Vec<f64> = estimate.iter().map(|e| c * e).collect();
    error_metrics(truth, &scaled)
}

#[derive(Debug, Clone, Copy)]
pub struct RunRecord {
    pub l2_signal: f64,
    pub l1_signal: f64,
    pub l2_kernel: f64,
    pub l1_kernel: f64,
    pub l2_obs: f64,
    pub l1_obs: f64,
    pub raw_l2_signal: f64,
    pub raw_l1_signal: f64,
    pub time_s: f64,
}

/// Aggregated row of the comparison table: means over the successful
/// realizations with their standard deviations, plus the failure count.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub sigma: f64,
    pub method: String,
    pub mean: RunRecord,
    pub std: RunRecord,
    pub successes: usize,
    pub failures: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl MetricsRow {
    pub fn aggregate(sigma: f64, method: &str, runs: &[RunRecord], failures: usize) -> MetricsRow {
        let pick = |f: fn(&RunRecord) -> f64| -> (f64, f64) {
            let vals: Vec<f64> = runs.iter().map(f).collect();
            mean_std(&vals)
        };
        let fields: [(fn(&RunRecord) -> f64, usize); 9] = [
            (|r| r.l2_signal, 0),
            (|r| r.l1_signal, 1),
            (|r| r.l2_kernel, 2),
            (|r| r.l1_kernel, 3),
            (|r| r.l2_obs, 4),
            (|r| r.l1_obs, 5),
            (|r| r.raw_l2_signal, 6),
            (|r| r.raw_l1_signal, 7),
            (|r| r.time_s, 8),
        ];
        let mut m = [0.0; 9];
        let mut s = [0.0; 9];
        for (f, i) in fields {
            let (a, b) = pick(f);
            m[i] = a;
            s[i] = b;
        }
        let pack = |v: [f64; 9]| RunRecord {
            l2_signal: v[0],
            l1_signal: v[1],
            l2_kernel: v[2],
            l1_kernel: v[3],
            l2_obs: v[4],
            l1_obs: v[5],
            raw_l2_signal: v[6],
            raw_l1_signal: v[7],
            time_s: v[8],
        };
        MetricsRow {
            sigma,
            method: method.to_string(),
            mean: pack(m),
            std: pack(s),
            successes: runs.len(),
            failures,
        }
    }
}

pub const METRICS_HEADER: &str =
    "sigma,method,l2_signal,l1_signal,l2_kernel,l1_kernel,l2_obs,l1_obs,time_s,failures";

/// The comparison table with the pinned header; means only.
pub fn write_metrics_csv<W: Write>(mut w: W, rows: &[MetricsRow]) -> std::io::Result<()> {
    writeln!(w, "{METRICS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.sigma,
            r.method,
            r.mean.l2_signal,
            r.mean.l1_signal,
            r.mean.l2_kernel,
            r.mean.l1_kernel,
            r.mean.l2_obs,
            r.mean.l1_obs,
            r.mean.time_s,
            r.failures
        )?;
    }
    Ok(())
}

/// Companion file: standard deviations, raw signal-error norms, and counts.
pub fn write_metrics_detail_csv<W: Write>(mut w: W, rows: &[MetricsRow]) -> std::io::Result<()> {
    writeln!(
        w,
        "sigma,method,l2_signal_mean,l2_signal_std,l1_signal_mean,l1_signal_std,\
         l2_kernel_mean,l2_kernel_std,l1_kernel_mean,l1_kernel_std,\
         l2_obs_mean,l2_obs_std,l1_obs_mean,l1_obs_std,\
         raw_l2_signal_mean,raw_l1_signal_mean,time_s_mean,time_s_std,successes,failures"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sigma,
            r.method,
            r.mean.l2_signal,
            r.std.l2_signal,
            r.mean.l1_signal,
            r.std.l1_signal,
            r.mean.l2_kernel,
            r.std.l2_kernel,
            r.mean.l1_kernel,
            r.std.l1_kernel,
            r.mean.l2_obs,
            r.std.l2_obs,
            r.mean.l1_obs,
            r.std.l1_obs,
            r.mean.raw_l2_signal,
            r.mean.raw_l1_signal,
            r.mean.time_s,
            r.std.time_s,
            r.successes,
            r.failures
        )?;
    }
    Ok(())
}

/// One row of the inner-loop study.
#[derive(Debug, Clone, Copy)]
pub struct InnerloopRow {
    pub j: usize,
    pub mean_time_s: f64,
    pub std_time_s: f64,
    pub mean_l1_err: f64,
}

pub const INNERLOOP_HEADER: &str = "J,mean_time_s,std_time_s,mean_l1_err";

pub fn write_innerloop_csv<W: Write>(mut w: W, rows: &[InnerloopRow]) -> std::io::Result<()> {
    writeln!(w, "{INNERLOOP_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.j, r.mean_time_s, r.std_time_s, r.mean_l1_err)?;
    }
    Ok(())
}

pub fn aggregate_mean_std(values: &[f64]) -> (f64, f64) {
    mean_std(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_metric_values() {
        assert_eq!(error_metrics(&[1.0, 0.0], &[1.0, 0.0]), (0.0, 0.0));
        let (rms, mae) = error_metrics(&[1.0, 0.0], &[0.0, 0.0]);
        assert!((rms - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((mae - 0.5).abs() < 1e-15);
    }

    #[test]
    fn raw_norms_undo_the_normalization() {
        let t = [3.0, -1.0, 2.0, 0.5];
        let e = [0.0, 0.0, 0.0, 0.0];
        let (l2, l1) = raw_errors(&t, &e);
        let want_l2 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        let want_l1 = t.iter().map(|v| v.abs()).sum::<f64>();
        assert!((l2 - want_l2).abs() < 1e-12);
        assert!((l1 - want_l1).abs() < 1e-12);
    }

    #[test]
    fn aggregation_mean_and_std() {
        let runs = [
            RunRecord {
                l2_signal: 1.0,
                l1_signal: 2.0,
                l2_kernel: 0.0,
                l1_kernel: 0.0,
                l2_obs: 0.0,
                l1_obs: 0.0,
                raw_l2_signal: 0.0,
                raw_l1_signal: 0.0,
                time_s: 1.0,
            },
            RunRecord {
                l2_signal: 3.0,
                l1_signal: 2.0,
                l2_kernel: 0.0,
                l1_kernel: 0.0,
                l2_obs: 0.0,
                l1_obs: 0.0,
                raw_l2_signal: 0.0,
                raw_l1_signal: 0.0,
                time_s: 3.0,
            },
        ];
        let row = MetricsRow::aggregate(0.01, "soot", &runs, 1);
        assert_eq!(row.mean.l2_signal, 2.0);
        assert!((row.std.l2_signal - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(row.std.l1_signal, 0.0);
        assert_eq!(row.successes, 2);
        assert_eq!(row.failures, 1);
    }
}
