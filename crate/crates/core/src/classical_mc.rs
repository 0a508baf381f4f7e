//! Classical Monte-Carlo of the Gmin control flow on `AddModN`.
//!
//! Each Grover search is replaced by one Bernoulli draw with the closed-form
//! success probability. The marked count at best value `w` is exactly `w`,
//! because `x ↦ (x + v) mod N` is a bijection.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{estimate_success_curve, fit_rate_parameter, RateFit};
use crate::device::{GminDevice, PositionReadout};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::grover::{run_gmin, GminConfig, TrialResult};
use crate::rng::{run_batch, trial_rng};

/// `sin²((2p+1)θ)` with `sin²θ = k/N`.
pub fn grover_success_prob(k: u64, n: u64, p: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let theta = (k as f64 / n as f64).sqrt().asin();
    ((2 * p + 1) as f64 * theta).sin().powi(2)
}

/// Stand-in device: counts Grov calls and samples the group outcome in one
/// draw. Takes no quantum time.
#[derive(Clone, Debug)]
pub struct ClassicalDevice {
    n: u64,
    v: u64,
    w: u64,
    p: u64,
}

impl ClassicalDevice {
    pub fn new(n: u64) -> Self {
        Self { n, v: 0, w: 0, p: 0 }
    }
}

impl GminDevice for ClassicalDevice {
    fn group_size(&self) -> u64 {
        self.n
    }

    fn prepare<R: Rng + ?Sized>(&mut self, v: u64, v_best: u64, _rng: &mut R) -> Result<()> {
        self.v = v;
        self.w = v_best;
        self.p = 0;
        Ok(())
    }

    fn grov<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<()> {
        self.p += 1;
        Ok(())
    }

    fn measure_positions<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<PositionReadout> {
        Ok(PositionReadout { v1: self.v, v2: self.w, ancilla: 0 })
    }

    fn measure_group<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        let hit = rng.random::<f64>() < grover_success_prob(self.w, self.n, self.p);
        let f = if hit && self.w > 0 {
            rng.random_range(0..self.w)
        } else if self.w < self.n {
            rng.random_range(self.w..self.n)
        } else {
            rng.random_range(0..self.n)
        };
        Ok((f + self.n - self.v) % self.n)
    }

    fn elapsed(&self) -> u64 {
        0
    }
}

fn check_size(n: u64) -> Result<GroupSpec> {
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::InvalidConfig(format!("Monte-Carlo group size must be a power of two >= 2, got {n}")));
    }
    GroupSpec::add_mod(n.trailing_zeros())
}

/// One Monte-Carlo trial from a uniformly drawn start `v`.
pub fn run_gmin_mc<R: Rng + ?Sized>(n: u64, config: &GminConfig, rng: &mut R) -> Result<TrialResult> {
    let group = check_size(n)?;
    let v = rng.random_range(0..n);
    run_gmin(&mut ClassicalDevice::new(n), &group, v, 0, config, rng)
}

/// `trials` independent trials; trial `i` uses stream `i` of `config.master_seed`.
pub fn run_gmin_mc_batch(n: u64, config: &GminConfig, trials: u64) -> Result<Vec<TrialResult>> {
    config.validate()?;
    check_size(n)?;
    run_batch(trials, config.master_seed, |_, rng| run_gmin_mc(n, config, rng))
}

/// Rate fit of a run-until-solution Monte-Carlo batch.
pub fn mc_rate_fit(n: u64, config: &GminConfig, trials: u64) -> Result<RateFit> {
    let cfg = GminConfig { run_until_solution: true, ..*config };
    let calls: Vec<Option<u64>> = run_gmin_mc_batch(n, &cfg, trials)?.iter().map(|r| r.calls_to_solution).collect();
    fit_rate_parameter(&estimate_success_curve(&calls, n))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyPoint {
    pub beta: f64,
    pub gamma: f64,
    pub n: u64,
    pub trials: u64,
    pub a: f64,
    pub a_err: f64,
    pub r2: f64,
}

/// Fits `a` at every `(β, γ)` grid point. Point `j` of the flattened grid
/// seeds its batch with `trial_rng(master_seed, j)`.
pub fn survey_beta_gamma(
    betas: &[f64],
    gammas: &[f64],
    n: u64,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<SurveyPoint>> {
    let grid: Vec<(f64, f64)> = betas.iter().flat_map(|&b| gammas.iter().map(move |&g| (b, g))).collect();
    grid.par_iter()
        .enumerate()
        .map(|(j, &(beta, gamma))| {
            let seed = trial_rng(master_seed, j as u64).random();
            let cfg = GminConfig { beta, gamma, master_seed: seed, ..GminConfig::default() };
            cfg.validate()?;
            let fit = mc_rate_fit(n, &cfg, trials)?;
            Ok(SurveyPoint { beta, gamma, n, trials, a: fit.a, a_err: fit.a_err, r2: fit.r2 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_cases() {
        assert!((grover_success_prob(1, 4, 1) - 1.0).abs() < 1e-12);
        for k in 0..=8 {
            assert!((grover_success_prob(k, 8, 0) - k as f64 / 8.0).abs() < 1e-12);
        }
        assert!((0..6).all(|p| grover_success_prob(0, 32, p) == 0.0));
        assert!((grover_success_prob(32, 32, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn v_best_is_monotone_and_certified() {
        let cfg = GminConfig::until_solution();
        let group = GroupSpec::add_mod(6).unwrap();
        for r in run_gmin_mc_batch(64, &cfg, 200).unwrap() {
            assert!(r.improvements.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 >= w[0].0));
            assert!(r.certificate_holds(&group) || r.v_best == r.v);
            assert!(r.succeeded);
        }
    }

    #[test]
    fn batches_are_reproducible() {
        let cfg = GminConfig { master_seed: 5, ..GminConfig::until_solution() };
        assert_eq!(run_gmin_mc_batch(256, &cfg, 50).unwrap(), run_gmin_mc_batch(256, &cfg, 50).unwrap());
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(run_gmin_mc_batch(12, &GminConfig::default(), 1).is_err());
    }
}
