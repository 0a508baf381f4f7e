use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gmin_core::grover::{GminConfig, Strategy};
use gmin_core::groups::ProblemInstance;
use gmin_core::noise::NoiseParams;
use gmin_core::state::Engine;
use serde::{Deserialize, Serialize};

use crate::CliResult;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GroupChoice {
    /// Addition modulo 2^n acting on n-bit labels.
    Add,
    /// Cyclic translation of an n-site spin chain.
    Spin,
}

/// Experiment settings. Every field can come from the config file or a flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupChoice,
    /// Bits for `add`, sites for `spin`.
    pub n: u32,
    pub strategy: Strategy,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub ell: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    pub ancilla: usize,
    pub trials: u64,
    pub seed: u64,
    /// Run every trial to the true minimum (or the hard stop) so success
    /// curves can be estimated. When false the oracle budget applies.
    pub until_solution: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let g = GminConfig::default();
        Self {
            group: GroupChoice::Add,
            n: 4,
            strategy: g.strategy,
            alpha: g.alpha,
            beta: g.beta,
            gamma: g.gamma,
            ell: g.ell,
            t1: None,
            t2: None,
            ancilla: 0,
            trials: 1000,
            seed: 0,
            until_solution: true,
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct ConfigFlags {
    /// TOML file with any of the settings below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub group: Option<GroupChoice>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub ancilla: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop at the oracle budget instead of running until solution.
    #[arg(long)]
    pub budget: bool,
}

/// Parses a TOML config, reporting the offending field path on error.
pub fn parse_config(text: &str, origin: &Path) -> CliResult<ExperimentConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| format!("{}: {e}", origin.display()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        format!("{}: invalid value at `{path}`: {}", origin.display(), e.into_inner().message()).into()
    })
}

impl ConfigFlags {
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                parse_config(&text, p)?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        over!(group, n, strategy, alpha, beta, gamma, ell, ancilla, trials, seed);
        if self.t1.is_some() {
            c.t1 = self.t1;
        }
        if self.t2.is_some() {
            c.t2 = self.t2;
        }
        if self.budget {
            c.until_solution = false;
        }
        c.gmin()?.validate()?;
        Ok(c)
    }
}

impl ExperimentConfig {
    pub fn gmin(&self) -> CliResult<GminConfig> {
        Ok(GminConfig {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            strategy: self.strategy,
            ell: self.ell,
            run_until_solution: self.until_solution,
            master_seed: self.seed,
        })
    }

    pub fn instance(&self) -> CliResult<ProblemInstance> {
        Ok(match self.group {
            GroupChoice::Add => ProblemInstance::add_mod(self.n)?,
            GroupChoice::Spin => ProblemInstance::spin_translation(self.n)?,
        })
    }

    pub fn engine(&self) -> CliResult<Engine> {
        let noisy = self.t1.is_some() || self.t2.is_some();
        match self.strategy {
            Strategy::Ideal if noisy => Err("strategy ideal takes no --t1/--t2; use sem or aem".into()),
            Strategy::Ideal => Ok(Engine::ideal()),
            _ if !noisy => Ok(Engine::noisy(NoiseParams::noiseless())),
            _ => {
                // a missing T2 means no pure dephasing
                let t1 = self.t1.unwrap_or(f64::INFINITY);
                Ok(Engine::noisy(NoiseParams::new(t1, self.t2.unwrap_or(2.0 * t1))?))
            }
        }
    }

    pub fn hash(&self) -> String {
        crate::hash_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_errors_name_the_field() {
        let err = parse_config("beta = \"high\"\n", Path::new("x.toml")).unwrap_err().to_string();
        assert!(err.contains("`beta`"), "{err}");
        let err = parse_config("gamma = 1.1\nbogus = 3\n", Path::new("x.toml")).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "n = 5\nbeta = 0.9\nstrategy = \"aem\"\nt1 = 700.0\n").unwrap();
        let flags = ConfigFlags { config: Some(p), beta: Some(0.8), ..Default::default() };
        let c = flags.resolve().unwrap();
        assert_eq!((c.n, c.beta, c.strategy, c.t1), (5, 0.8, Strategy::Aem, Some(700.0)));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig { seed: 1, ..a.clone() };
        assert_eq!(a.hash(), ExperimentConfig::default().hash());
        assert_ne!(a.hash(), b.hash());
    }
}
