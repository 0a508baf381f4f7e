//! Pauli-twirl single-qubit error model.
//!
//! Before a gate touches a qubit, the qubit receives
//! `exp(i (vx X + vy Y + vz Z))` with independent Gaussian coefficients whose
//! variances are `τ/(2 T1)`, `τ/(2 Tφ)` and `τ/(2 T2)`, where `τ` is the time
//! since the qubit was last acted on. All times are in single-qubit gate times.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Mat2;

/// `Tφ` from `1/Tφ = 1/T2 - 1/(2 T1)`. Infinite inputs are allowed.
pub fn derive_tphi(t1: f64, t2: f64) -> Result<f64> {
    check_time("t1", t1)?;
    check_time("t2", t2)?;
    let rate = 1.0 / t2 - 1.0 / (2.0 * t1);
    if rate < 0.0 {
        return Err(Error::InvalidNoise(format!(
            "t2 = {t2} exceeds 2·t1 = {}; dephasing rate would be negative",
            2.0 * t1
        )));
    }
    Ok(1.0 / rate)
}

fn check_time(name: &str, t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidNoise(format!("{name} must be positive, got {t}")));
    }
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub t1: f64,
    pub t2: f64,
    pub tphi: f64,
}

impl NoiseParams {
    /// Strict constructor: rejects `t2 > 2 t1`.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        Ok(Self { t1, t2, tphi: derive_tphi(t1, t2)? })
    }

    /// Like [`NoiseParams::new`], but a `t2` beyond `2 t1` switches the `Y`
    /// (dephasing) axis off instead of failing. The `Z` axis keeps the given
    /// `t2`. Used for sweeps that pin one constant at a huge value.
    pub fn saturating(t1: f64, t2: f64) -> Result<Self> {
        check_time("t1", t1)?;
        check_time("t2", t2)?;
        match derive_tphi(t1, t2) {
            Ok(tphi) => Ok(Self { t1, t2, tphi }),
            Err(_) => Ok(Self { t1, t2, tphi: f64::INFINITY }),
        }
    }

    pub fn noiseless() -> Self {
        Self { t1: f64::INFINITY, t2: f64::INFINITY, tphi: f64::INFINITY }
    }

    pub fn is_noiseless(&self) -> bool {
        self.t1.is_infinite() && self.t2.is_infinite() && self.tphi.is_infinite()
    }

    /// Standard deviations of `(vx, vy, vz)` after `elapsed` time units.
    pub fn std_devs(&self, elapsed: f64) -> [f64; 3] {
        [self.t1, self.tphi, self.t2].map(|t| (elapsed / (2.0 * t)).sqrt())
    }
}

/// Rotation coefficients of one sampled error.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ErrorSample {
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl ErrorSample {
    pub fn sample<R: Rng + ?Sized>(elapsed: f64, params: &NoiseParams, rng: &mut R) -> Self {
        let [sx, sy, sz] = params.std_devs(elapsed);
        let mut draw = |s: f64| {
            if s > 0.0 {
                Normal::new(0.0, s).expect("finite positive std").sample(rng)
            } else {
                0.0
            }
        };
        let vx = draw(sx);
        let vy = draw(sy);
        let vz = draw(sz);
        Self { vx, vy, vz }
    }

    pub fn is_zero(&self) -> bool {
        self.vx == 0.0 && self.vy == 0.0 && self.vz == 0.0
    }

    /// `exp(i (vx X + vy Y + vz Z)) = cos r I + i sin(r)/r (vx X + vy Y + vz Z)`.
    pub fn unitary(&self) -> Mat2 {
        let r = (self.vx * self.vx + self.vy * self.vy + self.vz * self.vz).sqrt();
        if r == 0.0 {
            return Mat2::identity();
        }
        let c = r.cos();
        let s = r.sin() / r;
        let i = C64::new(0.0, 1.0);
        let (x, y, z) = (self.vx * s, self.vy * s, self.vz * s);
        // X = [[0,1],[1,0]], Y = [[0,-i],[i,0]], Z = [[1,0],[0,-1]]
        Mat2::new(
            C64::new(c, 0.0) + i * z,
            i * x + C64::new(y, 0.0),
            i * x - C64::new(y, 0.0),
            C64::new(c, 0.0) - i * z,
        )
    }
}

/// Samples the error unitary for a qubit idle for `elapsed` time units.
pub fn sample_error_unitary<R: Rng + ?Sized>(elapsed: f64, params: &NoiseParams, rng: &mut R) -> Mat2 {
    ErrorSample::sample(elapsed, params, rng).unitary()
}
