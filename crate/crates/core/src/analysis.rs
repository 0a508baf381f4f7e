//! Success curves, rate-parameter fits and run aggregates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grover::{Strategy, TrialResult};

/// Probability window used by every fit.
pub const FIT_WINDOW: (f64, f64) = (0.2, 0.995);
pub const MIN_FIT_POINTS: usize = 5;

/// Empirical `P(T)`: fraction of trials solved within `T` effective calls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessCurve {
    pub t: Vec<u64>,
    pub p: Vec<f64>,
    pub trials: u64,
    pub n: u64,
}

/// Curve on every integer `T` from 0 to the largest observed solution time.
/// Unsolved trials (`None`) never count as successes.
pub fn estimate_success_curve(calls_to_solution: &[Option<u64>], n: u64) -> SuccessCurve {
    let max = calls_to_solution.iter().flatten().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; max as usize + 1];
    for c in calls_to_solution.iter().flatten() {
        hist[*c as usize] += 1;
    }
    let m = calls_to_solution.len() as u64;
    let mut acc = 0u64;
    let p = hist
        .iter()
        .map(|h| {
            acc += h;
            if m == 0 {
                0.0
            } else {
                acc as f64 / m as f64
            }
        })
        .collect();
    SuccessCurve { t: (0..=max).collect(), p, trials: m, n }
}

impl SuccessCurve {
    /// `P` at `t`, holding the last value past the end of the grid.
    pub fn at(&self, t: u64) -> f64 {
        match self.t.binary_search(&t) {
            Ok(i) => self.p[i],
            Err(0) => 0.0,
            Err(i) => self.p[i - 1],
        }
    }

    /// `√(-ln(1-P))` against `T` for the points inside the fit window.
    fn linearized(&self) -> Vec<(f64, f64)> {
        self.t
            .iter()
            .zip(&self.p)
            .filter(|(_, p)| (FIT_WINDOW.0..=FIT_WINDOW.1).contains(*p))
            .map(|(t, p)| (*t as f64, (-(1.0 - p).ln()).sqrt()))
            .collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub n: u64,
    /// Inverse slope of `√(-ln(1-P))` against `T/√N`, fitted through the origin.
    pub a: f64,
    /// Bootstrap standard deviation of `a`.
    pub a_err: f64,
    pub r2: f64,
    /// From the mean successive difference of the linearized curve.
    pub a_eff: f64,
    pub a_eff_err: f64,
    pub sigma_eff: f64,
    pub points: usize,
}

/// Bootstrap replicates behind `RateFit::a_err`.
pub const BOOTSTRAP_REPLICATES: usize = 64;
const BOOTSTRAP_SEED: u64 = 0x5eed;

pub fn fit_rate_parameter(curve: &SuccessCurve) -> Result<RateFit> {
    let (a, r2, points) = fit_slope(curve)?;
    let (a_eff, sigma_eff, a_eff_err) = effective_rate(curve);
    Ok(RateFit {
        n: curve.n,
        a,
        a_err: bootstrap_a_err(curve),
        r2,
        a_eff,
        a_eff_err,
        sigma_eff,
        points,
    })
}

/// Through-origin least squares of `√(-ln(1-P))` on `T/√N`: `(a, R², points)`.
fn fit_slope(curve: &SuccessCurve) -> Result<(f64, f64, usize)> {
    let pts = curve.linearized();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::FitDomain(format!(
            "{} points inside P in [{}, {}], need at least {MIN_FIT_POINTS}",
            pts.len(),
            FIT_WINDOW.0,
            FIT_WINDOW.1
        )));
    }
    let sqrt_n = (curve.n as f64).sqrt();
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t / sqrt_n).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, y)| *y).collect();
    let k = xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x).powi(2)).sum();
    let y_mean = ys.iter().sum::<f64>() / k;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok((1.0 / slope, r2, pts.len()))
}

/// `(a_eff, σ_eff, δa_eff)` from successive differences of the linearized
/// curve between consecutive integer `T` inside the window.
fn effective_rate(curve: &SuccessCurve) -> (f64, f64, f64) {
    let pts = curve.linearized();
    let diffs: Vec<f64> = pts
        .windows(2)
        .filter(|w| w[1].0 - w[0].0 == 1.0)
        .map(|w| w[1].1 - w[0].1)
        .collect();
    if diffs.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let d = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / d;
    let var = if diffs.len() > 1 {
        diffs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (d - 1.0)
    } else {
        0.0
    };
    let a_eff = 1.0 / (mean * (curve.n as f64).sqrt());
    let sigma = var.sqrt();
    let err = (curve.n as f64 / curve.trials.max(1) as f64).sqrt() * sigma * a_eff * a_eff;
    (a_eff, sigma, err)
}

/// Standard deviation of `a` over curves rebuilt from `M` draws of the
/// curve's own solution-time distribution. Unsolved mass stays unsolved.
fn bootstrap_a_err(curve: &SuccessCurve) -> f64 {
    let m = curve.trials as usize;
    if m == 0 {
        return f64::NAN;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let fits: Vec<f64> = (0..BOOTSTRAP_REPLICATES)
        .filter_map(|_| {
            let calls: Vec<Option<u64>> = (0..m)
                .map(|_| {
                    let u: f64 = rng.random();
                    let i = curve.p.partition_point(|&p| p <= u);
                    curve.t.get(i).copied()
                })
                .collect();
            fit_slope(&estimate_success_curve(&calls, curve.n)).ok().map(|f| f.0)
        })
        .collect();
    if fits.len() < 2 {
        return f64::NAN;
    }
    let k = fits.len() as f64;
    let mean = fits.iter().sum::<f64>() / k;
    (fits.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
}

/// One row of `trials.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub seed: u64,
    pub n: u64,
    pub strategy: Strategy,
    pub calls_to_solution: Option<u64>,
    pub c1: u64,
    pub c2: u64,
    pub runtime_units: u64,
    pub succeeded: bool,
}

impl TrialRecord {
    pub fn new(trial_id: u64, seed: u64, n: u64, strategy: Strategy, r: &TrialResult) -> Self {
        Self {
            trial_id,
            seed,
            n,
            strategy,
            calls_to_solution: r.calls_to_solution,
            c1: r.effective_calls,
            c2: r.total_calls,
            runtime_units: r.runtime_units,
            succeeded: r.succeeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub mean_runtime_units: f64,
    pub total_c1: u64,
    pub total_c2: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub rows: Vec<TrialRecord>,
    pub summary: RunSummary,
}

impl RunReport {
    pub fn from_rows(rows: Vec<TrialRecord>) -> Self {
        let summary = summarize(&rows);
        Self { rows, summary }
    }

    /// Recomputes the summary from the rows.
    pub fn is_consistent(&self) -> bool {
        summarize(&self.rows) == self.summary
    }

    pub fn curve(&self) -> SuccessCurve {
        let n = self.rows.first().map_or(0, |r| r.n);
        let calls: Vec<Option<u64>> = self.rows.iter().map(|r| r.calls_to_solution).collect();
        estimate_success_curve(&calls, n)
    }
}

fn summarize(rows: &[TrialRecord]) -> RunSummary {
    let trials = rows.len() as u64;
    let successes = rows.iter().filter(|r| r.succeeded).count() as u64;
    let runtime: u64 = rows.iter().map(|r| r.runtime_units).sum();
    let per = |x: f64| if trials == 0 { 0.0 } else { x / trials as f64 };
    RunSummary {
        trials,
        successes,
        success_rate: per(successes as f64),
        mean_runtime_units: per(runtime as f64),
        total_c1: rows.iter().map(|r| r.c1).sum(),
        total_c2: rows.iter().map(|r| r.c2).sum(),
    }
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(a: f64, n: u64, tmax: u64) -> SuccessCurve {
        let t: Vec<u64> = (0..=tmax).collect();
        let p = t.iter().map(|&t| 1.0 - (-((t * t) as f64) / (a * a * n as f64)).exp()).collect();
        SuccessCurve { t, p, trials: 10_000, n }
    }

    #[test]
    fn synthetic_fit_recovers_a() {
        let fit = fit_rate_parameter(&synthetic(3.0, 1024, 300)).unwrap();
        assert!((fit.a - 3.0).abs() < 0.02, "{fit:?}");
        assert!(fit.r2 >= 0.9999);
        assert!((fit.a_eff - 3.0).abs() < 0.03);
        assert!(fit.a_eff_err >= 0.0);
    }

    #[test]
    fn curve_edge_cases() {
        let c = estimate_success_curve(&[Some(0), Some(0)], 16);
        assert_eq!(c.p, vec![1.0]);
        let c = estimate_success_curve(&[Some(7)], 16);
        assert_eq!(c.t.len(), 8);
        assert!(c.p[..7].iter().all(|&p| p == 0.0));
        assert_eq!(c.p[7], 1.0);
        assert_eq!(c.at(100), 1.0);
        let c = estimate_success_curve(&[Some(3), None], 16);
        assert_eq!(c.at(3), 0.5);
    }

    #[test]
    fn too_few_points() {
        let c = estimate_success_curve(&[Some(2)], 16);
        assert!(matches!(fit_rate_parameter(&c), Err(Error::FitDomain(_))));
    }

    #[test]
    fn report_recomputes() {
        let r = TrialResult {
            v: 3,
            v_best: 0,
            x_best: 13,
            calls_to_solution: Some(5),
            effective_calls: 9,
            total_calls: 12,
            runtime_units: 400,
            succeeded: true,
            errors_detected: 1,
            improvements: vec![],
        };
        let rows = (0..4).map(|i| TrialRecord::new(i, 1, 16, Strategy::Aem, &r)).collect();
        let rep = RunReport::from_rows(rows);
        assert!(rep.is_consistent());
        assert_eq!(rep.summary.total_c2, 48);
        assert_eq!(rep.summary.mean_runtime_units, 400.0);
    }
}
