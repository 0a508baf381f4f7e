//! Grover minimization driver and oracle-budget arithmetic.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::device::GminDevice;
use crate::error::{Error, Result};
use crate::groups::{group_apply, GroupSpec};

/// Budget coefficient of the hard stop used when running until solution.
pub const HARD_STOP_ALPHA: f64 = 22.5;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Algorithm 1 on a noise-free engine.
    #[default]
    Ideal,
    /// Algorithm 1 unchanged on a noisy engine (static mitigation).
    Sem,
    /// Measure-and-check active error mitigation.
    Aem,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ideal" => Ok(Strategy::Ideal),
            "sem" => Ok(Strategy::Sem),
            "aem" => Ok(Strategy::Aem),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Ideal => "ideal",
            Strategy::Sem => "sem",
            Strategy::Aem => "aem",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GminConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub strategy: Strategy,
    /// AEM stops once `c2 >= ell · |G|`.
    pub ell: f64,
    /// Ignore the budget and stop at the true minimum (or the hard stop).
    pub run_until_solution: bool,
    pub master_seed: u64,
}

impl Default for GminConfig {
    fn default() -> Self {
        Self {
            alpha: 5.7,
            beta: 0.95,
            gamma: 1.15,
            strategy: Strategy::Ideal,
            ell: 1.0,
            run_until_solution: false,
            master_seed: 0,
        }
    }
}

impl GminConfig {
    pub fn until_solution() -> Self {
        Self { run_until_solution: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if !(self.gamma > 1.0 && self.gamma < 4.0 / 3.0) {
            return bad(format!("gamma must lie in (1, 4/3), got {}", self.gamma));
        }
        if self.ell.is_nan() || self.ell <= 0.0 {
            return bad(format!("ell must be positive, got {}", self.ell));
        }
        Ok(())
    }

    /// `ceil(alpha · sqrt(|G|))`.
    pub fn budget(&self, group_size: u64) -> u64 {
        (self.alpha * (group_size as f64).sqrt()).ceil() as u64
    }

    /// Call cap in effect: the budget, or the hard stop when running until solution.
    pub fn call_limit(&self, group_size: u64) -> u64 {
        if self.run_until_solution {
            (HARD_STOP_ALPHA * (group_size as f64).sqrt()).ceil() as u64
        } else {
            self.budget(group_size)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub v: u64,
    pub v_best: u64,
    pub x_best: u64,
    /// Effective calls at the moment the true minimum was first held.
    pub calls_to_solution: Option<u64>,
    /// `c` for Gmin, `c1` for AEM.
    pub effective_calls: u64,
    /// Equal to `effective_calls` for Gmin; `c2` (errored calls included) for AEM.
    pub total_calls: u64,
    pub runtime_units: u64,
    pub succeeded: bool,
    /// AEM iterations aborted by a position or ancilla mismatch.
    pub errors_detected: u64,
    /// `(effective calls, new v_best)` at every improvement.
    pub improvements: Vec<(u64, u64)>,
}

impl TrialResult {
    /// `group_apply(x_best, v) == v_best`.
    pub fn certificate_holds(&self, group: &GroupSpec) -> bool {
        group_apply(group, self.x_best, self.v).map(|u| u == self.v_best).unwrap_or(false)
    }
}

/// Classical bookkeeping shared by both drivers.
#[derive(Clone, Debug)]
pub(crate) struct Tracker {
    pub v: u64,
    pub target: u64,
    pub v_best: u64,
    pub x_best: u64,
    pub t: f64,
    pub sqrt_n: f64,
    pub calls_to_solution: Option<u64>,
    pub improvements: Vec<(u64, u64)>,
}

impl Tracker {
    pub fn new(v: u64, target: u64, group_size: u64) -> Self {
        Self {
            v,
            target,
            v_best: v,
            x_best: 0,
            t: 1.0,
            sqrt_n: (group_size as f64).sqrt(),
            calls_to_solution: (v == target).then_some(0),
            improvements: Vec::new(),
        }
    }

    pub fn solved(&self) -> bool {
        self.v_best == self.target
    }

    /// Uniform integer in `[0, ceil(t) - 1]`.
    pub fn sample_p<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.t.ceil().max(1.0) as u64)
    }

    /// Classical check of a measured index. Returns true on improvement.
    pub fn check(&mut self, group: &GroupSpec, x: u64, calls: u64, beta: f64) -> Result<bool> {
        let f = group_apply(group, x, self.v)?;
        if f < self.v_best {
            self.v_best = f;
            self.x_best = x;
            self.t = (beta * self.t).max(1.0);
            self.improvements.push((calls, f));
            if f == self.target && self.calls_to_solution.is_none() {
                self.calls_to_solution = Some(calls);
            }
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn ramp(&mut self, gamma: f64) {
        self.t = (gamma * self.t).min(self.sqrt_n);
    }

    pub fn finish(self, effective: u64, total: u64, runtime: u64, errors: u64) -> TrialResult {
        TrialResult {
            v: self.v,
            v_best: self.v_best,
            x_best: self.x_best,
            calls_to_solution: self.calls_to_solution,
            effective_calls: effective,
            total_calls: total,
            runtime_units: runtime,
            succeeded: self.v_best == self.target,
            errors_detected: errors,
            improvements: self.improvements,
        }
    }
}

/// One Gmin trial. `target` is the true orbit minimum of `v`, used only to
/// record when it is first reached and, with `run_until_solution`, to stop.
pub fn run_gmin<D: GminDevice, R: Rng + ?Sized>(
    device: &mut D,
    group: &GroupSpec,
    v: u64,
    target: u64,
    config: &GminConfig,
    rng: &mut R,
) -> Result<TrialResult> {
    let n = device.group_size();
    let limit = config.call_limit(n);
    let mut tr = Tracker::new(v, target, n);
    let mut c = 0u64;
    while c < limit && !(config.run_until_solution && tr.solved()) {
        let p = tr.sample_p(rng);
        c += p + 1;
        device.prepare(v, tr.v_best, rng)?;
        for _ in 0..p {
            device.grov(rng)?;
        }
        let x = device.measure_group(rng)?;
        if !tr.check(group, x, c, config.beta)? {
            tr.ramp(config.gamma);
        }
    }
    Ok(tr.finish(c, c, device.elapsed(), 0))
}

/// `ceil(a · sqrt(-ln ε) · sqrt(N))`.
pub fn oracle_budget(a: f64, epsilon: f64, group_size: u64) -> u64 {
    (budget_alpha(a, epsilon) * (group_size as f64).sqrt()).ceil() as u64
}

/// `α = a · sqrt(-ln ε)`.
pub fn budget_alpha(a: f64, epsilon: f64) -> f64 {
    a * (-epsilon.ln()).max(0.0).sqrt()
}

/// `Σ_{k=1}^{N-1} (9/4) N / ((k+1) sqrt(k (N-k)))`: expected oracle calls of
/// the unramped search summed over every possible marked count. The `k = N`
/// term is degenerate and left out.
pub fn budget_bound_sum(group_size: u64) -> f64 {
    let n = group_size as f64;
    (1..group_size)
        .map(|k| {
            let k = k as f64;
            2.25 * n / ((k + 1.0) * (k * (n - k)).sqrt())
        })
        .sum()
}
