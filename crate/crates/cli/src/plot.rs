//! SVG figures rendered from the CSV files already on disk.

use std::collections::BTreeMap;
use std::path::Path;

use plotters::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::output::write_atomic;
use crate::CliResult;

const SIZE: (u32, u32) = (720, 480);

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    /// Symmetric error bar per point.
    err: Option<Vec<f64>>,
}

fn read<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rows: Result<Vec<T>, _> = r.deserialize().collect();
    Ok(rows.map_err(|e| format!("{}: {e}", path.display()))?)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

fn chart(svg: &Path, caption: &str, x_desc: &str, y_desc: &str, series: &[Series]) -> CliResult<()> {
    let xs = || series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| {
        s.points.iter().enumerate().flat_map(move |(i, p)| {
            let e = s.err.as_ref().map_or(0.0, |e| e[i]);
            [p.1 - e, p.1 + e]
        })
    });
    let (x0, x1) = bounds(xs());
    let (y0, y1) = bounds(ys);

    let mut text = String::new();
    {
        let root = SVGBackend::with_string(&mut text, SIZE).into_drawing_area();
        root.fill(&WHITE)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(caption, ("sans-serif", 20))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(56)
            .build_cartesian_2d(x0..x1, y0..y1)?;
        chart.configure_mesh().x_desc(x_desc).y_desc(y_desc).draw()?;
        for (i, s) in series.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.1.is_finite()).collect();
            chart
                .draw_series(LineSeries::new(pts.clone(), color.stroke_width(2)))?
                .label(s.label.clone())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2)));
            if pts.len() <= 40 {
                chart.draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))?;
            }
            if let Some(err) = &s.err {
                let bars = s.points.iter().zip(err).filter(|(p, e)| p.1.is_finite() && e.is_finite());
                chart.draw_series(bars.map(|(&(x, y), &e)| PathElement::new(vec![(x, y - e), (x, y + e)], color)))?;
            }
        }
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .position(SeriesLabelPosition::LowerRight)
            .draw()?;
        root.present()?;
    }
    write_atomic(svg, text.as_bytes())
}

#[derive(Deserialize)]
struct CurveRow {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "N")]
    n: u64,
}

pub fn success_curves(csv: &Path, svg: &Path) -> CliResult<()> {
    let mut by_n: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
    for r in read::<CurveRow>(csv)? {
        by_n.entry(r.n).or_default().push((r.t / (r.n as f64).sqrt(), r.p));
    }
    let series: Vec<Series> =
        by_n.into_iter().map(|(n, points)| Series { label: format!("N = {n}"), points, err: None }).collect();
    chart(svg, "Probability of reaching the minimum", "T / sqrt(N)", "P(T)", &series)
}

#[derive(Deserialize)]
struct RateRow {
    #[serde(rename = "N")]
    n: u64,
    a: f64,
    a_err: f64,
    a_eff: f64,
    a_eff_err: f64,
}

pub fn rates(csv: &Path, svg: &Path) -> CliResult<()> {
    let rows = read::<RateRow>(csv)?;
    let x = |r: &RateRow| (r.n as f64).log2();
    let series = [
        Series {
            label: "a".into(),
            points: rows.iter().map(|r| (x(r), r.a)).collect(),
            err: Some(rows.iter().map(|r| r.a_err).collect()),
        },
        Series {
            label: "a_eff".into(),
            points: rows.iter().map(|r| (x(r), r.a_eff)).collect(),
            err: Some(rows.iter().map(|r| r.a_eff_err).collect()),
        },
    ];
    chart(svg, "Rate parameter", "log2 N", "a", &series)
}

#[derive(Deserialize)]
struct SurveyRow {
    beta: f64,
    gamma: f64,
    a: f64,
    a_err: f64,
}

pub fn survey(csv: &Path, svg: &Path) -> CliResult<()> {
    let mut by_beta: Vec<(f64, Vec<SurveyRow>)> = Vec::new();
    for r in read::<SurveyRow>(csv)? {
        match by_beta.iter_mut().find(|(b, _)| *b == r.beta) {
            Some((_, v)) => v.push(r),
            None => by_beta.push((r.beta, vec![r])),
        }
    }
    let series: Vec<Series> = by_beta
        .into_iter()
        .map(|(beta, mut rows)| {
            rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
            Series {
                label: format!("beta = {beta}"),
                points: rows.iter().map(|r| (r.gamma, r.a)).collect(),
                err: Some(rows.iter().map(|r| r.a_err).collect()),
            }
        })
        .collect();
    chart(svg, "Rate parameter over (beta, gamma)", "gamma", "a", &series)
}

#[derive(Deserialize)]
struct SweepRow {
    swept: String,
    t1: f64,
    t2: f64,
    strategy: String,
    a_eff: f64,
    a_eff_err: f64,
}

pub fn sweep(csv: &Path, svg: &Path) -> CliResult<()> {
    let mut groups: BTreeMap<(String, String), Series> = BTreeMap::new();
    for r in read::<SweepRow>(csv)? {
        let t = if r.swept == "t1" { r.t1 } else { r.t2 };
        let s = groups.entry((r.swept.clone(), r.strategy.clone())).or_insert_with(|| Series {
            label: format!("{} sweep, {}", r.swept.to_uppercase(), r.strategy.to_uppercase()),
            points: Vec::new(),
            err: Some(Vec::new()),
        });
        s.points.push((t.log10(), r.a_eff));
        s.err.as_mut().expect("sweep series carry errors").push(r.a_eff_err);
    }
    let series: Vec<Series> = groups.into_values().collect();
    chart(svg, "Effective rate under decoherence", "log10 T", "a_eff", &series)
}
