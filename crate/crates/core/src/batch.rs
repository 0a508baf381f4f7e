//! Full-simulation trials: draw a start label, run the configured strategy.

use std::sync::Arc;

use rand::Rng;

use crate::aem::run_gmin_aem;
use crate::device::{GminCircuits, StateVectorDevice};
use crate::error::{Error, Result};
use crate::groups::orbit_on_the_fly;
use crate::grover::{run_gmin, GminConfig, Strategy, TrialResult};
use crate::rng::run_batch;
use crate::state::Engine;

/// One trial from a uniformly drawn position label `v`.
pub fn run_full_trial<R: Rng + ?Sized>(
    circuits: &Arc<GminCircuits>,
    engine: Engine,
    config: &GminConfig,
    rng: &mut R,
) -> Result<TrialResult> {
    let inst = &circuits.instance;
    let v = rng.random_range(0..inst.position_count());
    let target = orbit_on_the_fly(inst, v)?.v_rep;
    let mut dev = StateVectorDevice::new(Arc::clone(circuits), engine)?;
    match config.strategy {
        Strategy::Ideal | Strategy::Sem => run_gmin(&mut dev, &inst.group, v, target, config, rng),
        Strategy::Aem => run_gmin_aem(&mut dev, &inst.group, v, target, config, rng),
    }
}

/// `trials` independent trials on stream `i` of `config.master_seed`.
pub fn run_full_batch(
    circuits: &Arc<GminCircuits>,
    engine: Engine,
    config: &GminConfig,
    trials: u64,
) -> Result<Vec<TrialResult>> {
    config.validate()?;
    if config.strategy == Strategy::Ideal && engine.is_noisy() {
        return Err(Error::InvalidConfig("strategy ideal needs a noise-free engine".into()));
    }
    run_batch(trials, config.master_seed, |_, rng| run_full_trial(circuits, engine, config, rng))
}
