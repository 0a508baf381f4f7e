//! Active error mitigation: mid-circuit checks of the position registers
//! with abort-and-retry, plus the analytic success model and a Monte-Carlo
//! run of the abstract error channel it is derived from.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::device::GminDevice;
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::grover::{GminConfig, TrialResult, Tracker};

/// One AEM trial.
///
/// Each Grov call is followed by a measurement of both position registers and
/// the ancilla. Any mismatch aborts the iteration; the group register is still
/// measured and checked. Errored calls count only towards `c2`, and the step
/// count `p` is kept for the retry.
pub fn run_gmin_aem<D: GminDevice, R: Rng + ?Sized>(
    device: &mut D,
    group: &GroupSpec,
    v: u64,
    target: u64,
    config: &GminConfig,
    rng: &mut R,
) -> Result<TrialResult> {
    let n = device.group_size();
    let limit1 = config.call_limit(n);
    let limit2 = (config.ell * n as f64).ceil() as u64;
    let mut tr = Tracker::new(v, target, n);
    let (mut c1, mut c2, mut errors) = (0u64, 0u64, 0u64);
    let mut good = true;
    let mut p = 0u64;
    while c1 < limit1 && c2 < limit2 && !(config.run_until_solution && tr.solved()) {
        if good {
            p = tr.sample_p(rng);
        } else {
            good = true;
        }
        device.prepare(v, tr.v_best, rng)?;
        for i in 1..=p {
            device.grov(rng)?;
            let r = device.measure_positions(rng)?;
            if r.v1 != v || r.v2 != tr.v_best || r.ancilla != 0 {
                good = false;
                c2 += i + 1;
                errors += 1;
                break;
            }
        }
        let x = device.measure_group(rng)?;
        if good {
            c1 += p + 1;
            c2 += p + 1;
        }
        let improved = tr.check(group, x, c1, config.beta)?;
        if !improved && good {
            tr.ramp(config.gamma);
        }
    }
    Ok(tr.finish(c1, c2, device.elapsed(), errors))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AemAnalyticParams {
    pub delta: f64,
    pub e: f64,
    pub sigma: f64,
    pub theta: f64,
    pub p: u64,
    pub n: u64,
}

impl AemAnalyticParams {
    /// Derives `σ = exp(-4/(δ√N))` and `sin²θ = k/N`.
    pub fn from_delta(delta: f64, e: f64, k: u64, n: u64, p: u64) -> Result<Self> {
        if delta.is_nan() || delta <= 0.0 || !(0.0..=1.0).contains(&e) || k > n || n == 0 {
            return Err(Error::InvalidConfig(format!("bad AEM parameters delta={delta} e={e} k={k} N={n}")));
        }
        Ok(Self {
            delta,
            e,
            sigma: sigma_from_delta(delta, n),
            theta: grover_angle(k, n),
            p,
            n,
        })
    }

    /// `σ^p`.
    pub fn survival(&self) -> f64 {
        self.sigma.powi(self.p as i32)
    }
}

pub fn sigma_from_delta(delta: f64, n: u64) -> f64 {
    (-4.0 / (delta * (n as f64).sqrt())).exp()
}

/// `θ` with `sin²θ = k/N`.
pub fn grover_angle(k: u64, n: u64) -> f64 {
    (k as f64 / n as f64).sqrt().asin()
}

/// Asymptotic AEM success probability after `p` Grov calls:
/// `(1 - e/(1+δ²)) σ^p sin²((2p+1)θ) + (e δ²/(1+δ²)) (1-σ^p)/2`.
pub fn aem_success_predict(params: &AemAnalyticParams) -> f64 {
    let d2 = params.delta * params.delta;
    let sp = params.survival();
    let s = ((2 * params.p + 1) as f64 * params.theta).sin().powi(2);
    (1.0 - params.e / (1.0 + d2)) * sp * s + params.e * d2 / (1.0 + d2) * (1.0 - sp) / 2.0
}

/// Success without measure-and-check: `σ^p sin²((2p+1)θ)`.
pub fn no_check_success(params: &AemAnalyticParams) -> f64 {
    params.survival() * ((2 * params.p + 1) as f64 * params.theta).sin().powi(2)
}

/// Monte-Carlo of the abstract AEM channel for `p` Grov calls.
///
/// Each call is clean with probability `sigma`. Otherwise, with probability
/// `e` only the position registers are hit: the check catches it and the
/// group register is read from the search state before that call. Else the
/// whole system becomes maximally mixed, and the group outcome is uniform.
pub fn simulate_abstract_channel<R: Rng + ?Sized>(
    sigma: f64,
    e: f64,
    p: u64,
    k: u64,
    n: u64,
    trials: u64,
    rng: &mut R,
) -> f64 {
    let theta = grover_angle(k, n);
    let amp = |calls: u64| ((2 * calls + 1) as f64 * theta).sin().powi(2);
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut prob = amp(p);
        for done in 0..p {
            if rng.random::<f64>() < sigma {
                continue;
            }
            prob = if rng.random::<f64>() < e { amp(done) } else { k as f64 / n as f64 };
            break;
        }
        if rng.random::<f64>() < prob {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn at(delta: f64) -> AemAnalyticParams {
        // σ^p = exp(-4/δ) and (2p+1)θ = π/2
        let p = 25;
        AemAnalyticParams {
            delta,
            e: 1.0,
            sigma: (-4.0 / (delta * p as f64)).exp(),
            theta: std::f64::consts::PI / (2.0 * (2 * p + 1) as f64),
            p,
            n: 1024,
        }
    }

    #[test]
    fn headline_values() {
        assert!((aem_success_predict(&at(4.0)) - 0.6437).abs() < 1e-3);
        assert!((aem_success_predict(&at(1.0)) - 0.2546).abs() < 1e-3);
        assert!((aem_success_predict(&at(0.5)) - 0.1000).abs() < 1e-3);
    }

    #[test]
    fn noiseless_limit_is_plain_grover() {
        // σ → 1 comes with δ → ∞, which also removes the e/(1+δ²) loss
        for e in [0.0, 0.3, 1.0] {
            let prm = AemAnalyticParams::from_delta(1e9, e, 3, 64, 4).unwrap();
            let s = (9.0 * prm.theta).sin().powi(2);
            assert!((aem_success_predict(&prm) - s).abs() < 1e-8);
        }
        let mut prm = AemAnalyticParams::from_delta(2.0, 0.0, 3, 64, 4).unwrap();
        prm.sigma = 1.0;
        assert_eq!(aem_success_predict(&prm), no_check_success(&prm));
    }

    #[test]
    fn measure_and_check_dominates() {
        for delta in [0.3, 1.0, 4.0] {
            for e in [0.2, 1.0] {
                let prm = AemAnalyticParams::from_delta(delta, e, 1, 1024, 25).unwrap();
                assert!(aem_success_predict(&prm) >= no_check_success(&prm));
            }
        }
    }

    #[test]
    fn abstract_channel_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (k, n, p, m) = (1u64, 256u64, 12u64, 40_000u64);
        let th = grover_angle(k, n);
        let s = ((2 * p + 1) as f64 * th).sin().powi(2);
        let se = |q: f64| 3.0 * (q * (1.0 - q) / m as f64).sqrt() + 1e-12;

        let got = simulate_abstract_channel(1.0, 0.5, p, k, n, m, &mut rng);
        assert!((got - s).abs() <= se(s), "{got} vs {s}");

        let sigma: f64 = 0.95;
        let sp = sigma.powi(p as i32);
        let expect = sp * s + (1.0 - sp) * k as f64 / n as f64;
        let got = simulate_abstract_channel(sigma, 0.0, p, k, n, m, &mut rng);
        assert!((got - expect).abs() <= se(expect), "{got} vs {expect}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(AemAnalyticParams::from_delta(0.0, 1.0, 1, 16, 1).is_err());
        assert!(AemAnalyticParams::from_delta(1.0, 1.5, 1, 16, 1).is_err());
    }
}
