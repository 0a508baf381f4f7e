//! CSV and manifest writers. Each file is written to a temporary sibling
//! and renamed into place.

use std::io::Write;
use std::path::Path;

use gmin_core::analysis::{RateFit, SuccessCurve, TrialRecord};
use gmin_core::classical_mc::SurveyPoint;
use serde::Serialize;

use crate::CliResult;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn csv_bytes<T: Serialize>(header: &[&str], rows: impl IntoIterator<Item = T>) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.to_string())?)
}

pub fn write_trials(path: &Path, rows: &[TrialRecord]) -> CliResult<()> {
    let header = ["trial_id", "seed", "n", "strategy", "calls_to_solution", "c1", "c2", "runtime_units", "succeeded"];
    let rows = rows.iter().map(|r| {
        (r.trial_id, r.seed, r.n, r.strategy.to_string(), r.calls_to_solution, r.c1, r.c2, r.runtime_units, r.succeeded)
    });
    write_atomic(path, &csv_bytes(&header, rows)?)
}

pub fn write_curves(path: &Path, curves: &[SuccessCurve]) -> CliResult<()> {
    let rows = curves
        .iter()
        .flat_map(|c| c.t.iter().zip(&c.p).map(move |(t, p)| (*t, *p, c.trials, c.n)));
    write_atomic(path, &csv_bytes(&["T", "P", "M", "N"], rows)?)
}

pub fn write_ratefits(path: &Path, fits: &[RateFit]) -> CliResult<()> {
    let rows = fits.iter().map(|f| (f.n, f.a, f.a_err, f.r2, f.a_eff, f.a_eff_err));
    write_atomic(path, &csv_bytes(&["N", "a", "a_err", "r2", "a_eff", "a_eff_err"], rows)?)
}

pub fn write_survey(path: &Path, pts: &[SurveyPoint]) -> CliResult<()> {
    let rows = pts.iter().map(|p| (p.beta, p.gamma, p.n, p.a, p.a_err, p.r2));
    write_atomic(path, &csv_bytes(&["beta", "gamma", "N", "a", "a_err", "r2"], rows)?)
}

pub fn write_rows<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> CliResult<()> {
    write_atomic(path, &csv_bytes(header, rows)?)
}

/// Reads `curve.csv` back into one curve per `N`, in file order.
pub fn read_curves(path: &Path) -> CliResult<Vec<SuccessCurve>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut curves: Vec<SuccessCurve> = Vec::new();
    for rec in r.deserialize() {
        let (t, p, m, n): (u64, f64, u64, u64) = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        match curves.last_mut() {
            Some(c) if c.n == n => {
                c.t.push(t);
                c.p.push(p);
            }
            _ => curves.push(SuccessCurve { t: vec![t], p: vec![p], trials: m, n }),
        }
    }
    Ok(curves)
}

#[derive(Serialize)]
pub struct Manifest<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config_hash: String,
    pub seed: u64,
    pub config: &'a C,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<serde_json::Value>,
}

pub fn write_manifest<C: Serialize>(dir: &Path, m: &Manifest<'_, C>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(m)?;
    text.push('\n');
    write_atomic(&dir.join("manifest.json"), text.as_bytes())
}
