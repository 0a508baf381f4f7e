use std::path::Path;

use clap::ValueEnum;
use gmin_core::analysis::{estimate_success_curve, fit_rate_parameter, RateFit, RunReport, SuccessCurve, TrialRecord};
use gmin_core::batch::run_full_batch;
use gmin_core::classical_mc::{run_gmin_mc_batch, survey_beta_gamma};
use gmin_core::device::GminCircuits;
use gmin_core::grover::{GminConfig, Strategy, TrialResult, HARD_STOP_ALPHA};
use gmin_core::groups::ProblemInstance;
use gmin_core::layout::max_ancilla;
use gmin_core::noise::NoiseParams;
use gmin_core::state::Engine;
use gmin_core::symmetry::{all_blocks, block_spectrum, cycle_adjacency, hermitian_eigenvalues, spin_chain};
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, GroupChoice};
use crate::output::{self, Manifest};
use crate::{plot, CliResult};

fn records(cfg: &ExperimentConfig, n: u64, results: &[TrialResult]) -> RunReport {
    let rows = results
        .iter()
        .enumerate()
        .map(|(i, r)| TrialRecord::new(i as u64, cfg.seed, n, cfg.strategy, r))
        .collect();
    RunReport::from_rows(rows)
}

fn try_fit(curve: &SuccessCurve) -> Option<RateFit> {
    match fit_rate_parameter(curve) {
        Ok(f) => Some(f),
        Err(e) => {
            eprintln!("warning: no rate fit for N={}: {e}", curve.n);
            None
        }
    }
}

fn manifest<C: Serialize>(dir: &Path, command: &str, hash: String, seed: u64, config: &C, files: &[&str]) -> CliResult<()> {
    manifest_with(dir, command, hash, seed, config, files, None)
}

fn manifest_with<C: Serialize>(
    dir: &Path,
    command: &str,
    config_hash: String,
    seed: u64,
    config: &C,
    files: &[&str],
    notes: Option<serde_json::Value>,
) -> CliResult<()> {
    output::write_manifest(
        dir,
        &Manifest {
            tool: "gmin",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash,
            seed,
            config,
            files: files.iter().map(|s| s.to_string()).collect(),
            notes,
        },
    )
}

/// Writes trials, curve, fit and plot for one batch.
fn write_run(dir: &Path, command: &str, cfg: &ExperimentConfig, report: &RunReport) -> CliResult<Option<RateFit>> {
    let curve = report.curve();
    let fit = try_fit(&curve);
    output::write_trials(&dir.join("trials.csv"), &report.rows)?;
    output::write_curves(&dir.join("curve.csv"), std::slice::from_ref(&curve))?;
    output::write_ratefits(&dir.join("ratefit.csv"), fit.as_slice())?;
    plot::success_curves(&dir.join("curve.csv"), &dir.join("curve.svg"))?;
    let notes = json!({ "summary": report.summary });
    let files = ["trials.csv", "curve.csv", "ratefit.csv", "curve.svg"];
    manifest_with(dir, command, cfg.hash(), cfg.seed, cfg, &files, Some(notes))?;
    let s = &report.summary;
    eprintln!(
        "{} trials, {} solved, mean runtime {:.1}, c1 {}, c2 {}",
        s.trials, s.successes, s.mean_runtime_units, s.total_c1, s.total_c2
    );
    if let Some(f) = &fit {
        eprintln!("N={}: a = {:.4} ± {:.4}, R² = {:.4}, a_eff = {:.4}", f.n, f.a, f.a_err, f.r2, f.a_eff);
    }
    Ok(fit)
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let inst = cfg.instance()?;
    let circuits = GminCircuits::new(&inst, cfg.ancilla)?;
    let results = run_full_batch(&circuits, cfg.engine()?, &cfg.gmin()?, cfg.trials)?;
    write_run(out, "run", cfg, &records(cfg, inst.index_count(), &results))?;
    Ok(())
}

fn mc_size(cfg: &ExperimentConfig) -> CliResult<u64> {
    if cfg.group != GroupChoice::Add || cfg.strategy != Strategy::Ideal || cfg.t1.is_some() || cfg.t2.is_some() {
        return Err("mc models noise-free addition modulo 2^n only".into());
    }
    if !(1..=40).contains(&cfg.n) {
        return Err(format!("mc needs 1 <= n <= 40, got {}", cfg.n).into());
    }
    Ok(1u64 << cfg.n)
}

pub fn mc(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let n = mc_size(cfg)?;
    let results = run_gmin_mc_batch(n, &cfg.gmin()?, cfg.trials)?;
    write_run(out, "mc", cfg, &records(cfg, n, &results))?;
    Ok(())
}

#[derive(Serialize)]
struct SurveyConfig<'a> {
    base: &'a ExperimentConfig,
    betas: &'a [f64],
    gammas: &'a [f64],
}

pub fn survey(cfg: &ExperimentConfig, betas: &[f64], gammas: &[f64], out: &Path) -> CliResult<()> {
    let n = mc_size(cfg)?;
    let pts = survey_beta_gamma(betas, gammas, n, cfg.trials, cfg.seed)?;
    output::write_survey(&out.join("survey.csv"), &pts)?;
    plot::survey(&out.join("survey.csv"), &out.join("survey.svg"))?;
    let sc = SurveyConfig { base: cfg, betas, gammas };
    let hash = crate::hash_json(&sc);
    manifest(out, "survey", hash, cfg.seed, &sc, &["survey.csv", "survey.svg"])?;
    if let Some(best) = pts.iter().min_by(|a, b| a.a.total_cmp(&b.a)) {
        eprintln!("best grid point: beta {} gamma {}: a = {:.4} ± {:.4}", best.beta, best.gamma, best.a, best.a_err);
    }
    Ok(())
}

pub fn fit(input: &Path, out: &Path) -> CliResult<()> {
    let curves = output::read_curves(input)?;
    if curves.is_empty() {
        return Err(format!("{}: no curve rows", input.display()).into());
    }
    let fits: Vec<RateFit> = curves.iter().filter_map(try_fit).collect();
    output::write_ratefits(&out.join("ratefit.csv"), &fits)?;
    plot::rates(&out.join("ratefit.csv"), &out.join("ratefit.svg"))?;
    for f in &fits {
        eprintln!("N={}: a = {:.4} ± {:.4}, R² = {:.4}", f.n, f.a, f.a_err, f.r2);
    }
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Adjacency of the 2^size cycle under addition modulo 2^size.
    Cycle,
    /// Periodic XY chain on `size` sites under translation.
    Xy,
    /// Periodic Heisenberg chain on `size` sites under translation.
    Heisenberg,
}

pub fn blocks(model: Model, size: u32, out: &Path) -> CliResult<()> {
    let (h, inst) = match model {
        Model::Cycle => (cycle_adjacency(1usize << size), ProblemInstance::add_mod(size)?),
        Model::Xy => (spin_chain(size as usize, 0.0), ProblemInstance::spin_translation(size)?),
        Model::Heisenberg => (spin_chain(size as usize, 1.0), ProblemInstance::spin_translation(size)?),
    };
    let blocks = all_blocks(&h, &inst)?;
    let mut rows = Vec::new();
    for b in &blocks {
        for (k, e) in b.eigenvalues().into_iter().enumerate() {
            rows.push((b.alpha, b.dim(), k, e));
        }
    }
    output::write_rows(&out.join("blocks.csv"), &["alpha", "dim", "index", "eigenvalue"], rows)?;
    let merged = block_spectrum(&blocks);
    let dense = hermitian_eigenvalues(&h);
    if merged.len() != dense.len() {
        return Err(format!("block spectrum has {} values, dense {}", merged.len(), dense.len()).into());
    }
    let gap = merged.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let cfg = json!({ "model": model, "size": size });
    let notes = json!({ "dimension": dense.len(), "blocks": blocks.len(), "max_gap": gap });
    manifest_with(out, "blocks", crate::hash_json(&cfg), 0, &cfg, &["blocks.csv"], Some(notes))?;
    eprintln!("{} blocks, dimension {}, max eigenvalue gap vs dense {gap:.3e}", blocks.len(), dense.len());
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Success curves and rate fits from the classical model, N = 2^8 .. 2^16.
    Fig7,
    /// (beta, gamma) survey at N = 2^12.
    Fig8,
    /// Full noise-free simulation, n = 4 and 5.
    Fig9,
    /// T1 and T2 sweeps, SEM against AEM, n = 4.
    Fig10,
    /// n = 4 with every ancilla, AEM at T = 700 against noise-free AEM.
    Fig13,
}

fn scaled(base: u64, scale: f64) -> u64 {
    ((base as f64 * scale).round() as u64).max(1)
}

#[derive(Serialize)]
struct ReproduceConfig {
    figure: Figure,
    scale: f64,
    seed: u64,
}

pub fn reproduce(figure: Figure, scale: f64, seed: u64, out: &Path) -> CliResult<()> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(format!("--scale must be positive, got {scale}").into());
    }
    let rc = ReproduceConfig { figure, scale, seed };
    let files = match figure {
        Figure::Fig7 => fig7(scaled(10_000, scale), seed, out)?,
        Figure::Fig8 => fig8(scaled(2_000, scale), seed, out)?,
        Figure::Fig9 => fig9(scaled(4_000, scale), seed, out)?,
        Figure::Fig10 => fig10(scaled(500, scale), seed, out)?,
        Figure::Fig13 => fig13(scaled(1_000, scale), seed, out)?,
    };
    let files: Vec<&str> = files.iter().map(String::as_str).collect();
    manifest(out, "reproduce", crate::hash_json(&rc), seed, &rc, &files)
}

fn owned(files: &[&str]) -> Vec<String> {
    files.iter().map(|s| s.to_string()).collect()
}

fn curves_and_fits(out: &Path, curves: &[SuccessCurve]) -> CliResult<Vec<String>> {
    let fits: Vec<RateFit> = curves.iter().filter_map(try_fit).collect();
    output::write_curves(&out.join("curve.csv"), curves)?;
    output::write_ratefits(&out.join("ratefit.csv"), &fits)?;
    plot::success_curves(&out.join("curve.csv"), &out.join("curve.svg"))?;
    plot::rates(&out.join("ratefit.csv"), &out.join("ratefit.svg"))?;
    for f in &fits {
        eprintln!("N={}: a = {:.4} ± {:.4}, R² = {:.4}, a_eff = {:.4}", f.n, f.a, f.a_err, f.r2, f.a_eff);
    }
    Ok(owned(&["curve.csv", "ratefit.csv", "curve.svg", "ratefit.svg"]))
}

fn curve_of(results: &[TrialResult], n: u64) -> SuccessCurve {
    let calls: Vec<Option<u64>> = results.iter().map(|r| r.calls_to_solution).collect();
    estimate_success_curve(&calls, n)
}

fn fig7(trials: u64, seed: u64, out: &Path) -> CliResult<Vec<String>> {
    let mut curves = Vec::new();
    for (j, bits) in (8..=16).step_by(2).enumerate() {
        let n = 1u64 << bits;
        let cfg = GminConfig { master_seed: seed + j as u64, ..GminConfig::until_solution() };
        curves.push(curve_of(&run_gmin_mc_batch(n, &cfg, trials)?, n));
    }
    curves_and_fits(out, &curves)
}

fn fig8(trials: u64, seed: u64, out: &Path) -> CliResult<Vec<String>> {
    let betas = [0.0, 0.5, 0.8, 0.95];
    let gammas = [1.05, 1.1, 1.15, 1.2, 1.25, 1.3];
    let pts = survey_beta_gamma(&betas, &gammas, 1 << 12, trials, seed)?;
    output::write_survey(&out.join("survey.csv"), &pts)?;
    plot::survey(&out.join("survey.csv"), &out.join("survey.svg"))?;
    Ok(owned(&["survey.csv", "survey.svg"]))
}

fn fig9(trials: u64, seed: u64, out: &Path) -> CliResult<Vec<String>> {
    let mut curves = Vec::new();
    for (j, bits) in [4u32, 5].into_iter().enumerate() {
        let inst = ProblemInstance::add_mod(bits)?;
        let c = GminCircuits::new(&inst, 0)?;
        let cfg = GminConfig { master_seed: seed + j as u64, ..GminConfig::until_solution() };
        curves.push(curve_of(&run_full_batch(&c, Engine::ideal(), &cfg, trials)?, inst.index_count()));
    }
    curves_and_fits(out, &curves)
}

/// Runs until solution with `c2` capped at the same absolute hard stop as `c1`.
fn noisy_run(c: &std::sync::Arc<GminCircuits>, strategy: Strategy, engine: Engine, trials: u64, seed: u64) -> CliResult<Vec<TrialResult>> {
    let n = c.instance.index_count();
    let ell = HARD_STOP_ALPHA / (n as f64).sqrt();
    let cfg = GminConfig { strategy, ell, master_seed: seed, ..GminConfig::until_solution() };
    Ok(run_full_batch(c, engine, &cfg, trials)?)
}

const FIG10_TIMES: [f64; 5] = [100.0, 300.0, 700.0, 2000.0, 5000.0];
const FIG10_OTHER: f64 = 1e9;

fn fig10(trials: u64, seed: u64, out: &Path) -> CliResult<Vec<String>> {
    let inst = ProblemInstance::add_mod(4)?;
    let c = GminCircuits::new(&inst, 0)?;
    let n = inst.index_count();
    let mut rows = Vec::new();
    let mut stream = seed;
    for swept in ["t1", "t2"] {
        for &t in &FIG10_TIMES {
            let (t1, t2) = if swept == "t1" { (t, FIG10_OTHER) } else { (FIG10_OTHER, t) };
            for strategy in [Strategy::Sem, Strategy::Aem] {
                let engine = Engine::noisy(NoiseParams::saturating(t1, t2)?);
                let rs = noisy_run(&c, strategy, engine, trials, stream)?;
                stream += 1;
                let runtime = rs.iter().map(|r| r.runtime_units as f64).sum::<f64>() / rs.len() as f64;
                let solved = rs.iter().filter(|r| r.succeeded).count();
                let (a_eff, a_eff_err) = match try_fit(&curve_of(&rs, n)) {
                    Some(f) => (f.a_eff, f.a_eff_err),
                    None => (f64::NAN, f64::NAN),
                };
                eprintln!("{swept}={t} {strategy}: a_eff {a_eff:.3} ± {a_eff_err:.3}, runtime {runtime:.0}, solved {solved}/{trials}");
                rows.push((swept, t1, t2, strategy.to_string(), trials, solved, a_eff, a_eff_err, runtime));
            }
        }
    }
    let header = ["swept", "t1", "t2", "strategy", "trials", "solved", "a_eff", "a_eff_err", "mean_runtime_units"];
    output::write_rows(&out.join("sweep.csv"), &header, rows)?;
    plot::sweep(&out.join("sweep.csv"), &out.join("sweep.svg"))?;
    Ok(owned(&["sweep.csv", "sweep.svg"]))
}

const FIG13_T: f64 = 700.0;

fn fig13(trials: u64, seed: u64, out: &Path) -> CliResult<Vec<String>> {
    let inst = ProblemInstance::add_mod(4)?;
    let c = GminCircuits::new(&inst, max_ancilla(4))?;
    let n = inst.index_count();
    let noisy = noisy_run(&c, Strategy::Aem, Engine::noisy(NoiseParams::new(FIG13_T, FIG13_T)?), trials, seed)?;
    let clean = noisy_run(&c, Strategy::Aem, Engine::ideal(), trials, seed + 1)?;
    let mut files = Vec::new();
    for (name, rs) in [("noisy", &noisy), ("noise_free", &clean)] {
        let curve = curve_of(rs, n);
        let fit = try_fit(&curve);
        let (cf, rf, sf) = (format!("curve_{name}.csv"), format!("ratefit_{name}.csv"), format!("curve_{name}.svg"));
        output::write_curves(&out.join(&cf), std::slice::from_ref(&curve))?;
        output::write_ratefits(&out.join(&rf), fit.as_slice())?;
        plot::success_curves(&out.join(&cf), &out.join(&sf))?;
        if let Some(f) = fit {
            eprintln!("{name}: a_eff = {:.4} ± {:.4} on {} qubits", f.a_eff, f.a_eff_err, c.layout.total());
        }
        files.extend([cf, rf, sf]);
    }
    Ok(files)
}
