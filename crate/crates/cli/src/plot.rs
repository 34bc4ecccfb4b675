//! Deterministic SVG rendering of result CSVs.
//!
//! Two input schemas are recognized by header:
//!
//! - sweep CSVs (`device,sample_size,trial,...`) render as two log-log
//!   panels, per-trial scatter plus trial-mean lines for KL and energy
//!   against sample size;
//! - sample histogram CSVs (`outcome,count,frequency,target`) render as
//!   frequency bars with the target overlaid per outcome.
//!
//! All coordinates are written with fixed precision and all iteration orders
//! are derived from the input, so identical input bytes yield identical SVG
//! bytes.

use crate::common::{CliError, CliResult};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Values below this render at the floor on log axes (empirical KL can be 0).
const LOG_FLOOR: f64 = 1e-12;

pub enum ParsedCsv {
    Sweep(Vec<SweepPoint>),
    Histogram(Vec<HistogramRow>),
}

pub struct SweepPoint {
    pub sample_size: u64,
    pub kl_nats: f64,
    pub total_energy_fj: f64,
}

pub struct HistogramRow {
    pub outcome: u64,
    pub frequency: f64,
    pub target: f64,
}

const SWEEP_HEADER: &str =
    "device,sample_size,trial,substream_seed,kl_nats,total_energy_fj,count0,count1,count2,count3";
const HISTOGRAM_HEADER: &str = "outcome,count,frequency,target";

/// Parse a result CSV, detecting its schema from the header line.
pub fn parse_csv(text: &str) -> CliResult<ParsedCsv> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Data("input CSV is empty".into()))?
        .trim();
    let rows: Vec<&str> = lines.collect();
    if rows.is_empty() {
        return Err(CliError::Data("input CSV has a header but no data rows".into()));
    }
    match header {
        SWEEP_HEADER => {
            let points = rows
                .iter()
                .enumerate()
                .map(|(i, line)| {
                    let f: Vec<&str> = line.split(',').collect();
                    if f.len() != 10 {
                        return Err(data_error(i, "expected 10 fields"));
                    }
                    Ok(SweepPoint {
                        sample_size: parse_field(f[1], i, "sample_size")?,
                        kl_nats: parse_field(f[4], i, "kl_nats")?,
                        total_energy_fj: parse_field(f[5], i, "total_energy_fj")?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(ParsedCsv::Sweep(points))
        }
        HISTOGRAM_HEADER => {
            let rows = rows
                .iter()
                .enumerate()
                .map(|(i, line)| {
                    let f: Vec<&str> = line.split(',').collect();
                    if f.len() != 4 {
                        return Err(data_error(i, "expected 4 fields"));
                    }
                    Ok(HistogramRow {
                        outcome: parse_field(f[0], i, "outcome")?,
                        frequency: parse_field(f[2], i, "frequency")?,
                        target: parse_field(f[3], i, "target")?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(ParsedCsv::Histogram(rows))
        }
        other => Err(CliError::Data(format!(
            "unrecognized CSV header '{other}'; expected a sweep or sample-histogram CSV"
        ))),
    }
}

fn data_error(row: usize, what: &str) -> CliError {
    CliError::Data(format!("malformed CSV at data row {}: {what}", row + 1))
}

fn parse_field<T: std::str::FromStr>(s: &str, row: usize, name: &str) -> CliResult<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| data_error(row, &format!("field {name} = '{s}' is not numeric")))
}

pub fn render(parsed: &ParsedCsv) -> String {
    match parsed {
        ParsedCsv::Sweep(points) => render_sweep(points),
        ParsedCsv::Histogram(rows) => render_histogram(rows),
    }
}

struct LogAxis {
    min: f64,
    max: f64,
}

impl LogAxis {
    fn covering(values: impl Iterator<Item = f64>) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            let v = v.max(LOG_FLOOR).log10();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let (mut min, mut max) = (lo.floor(), hi.ceil());
        if min == max {
            min -= 1.0;
            max += 1.0;
        }
        Self { min, max }
    }

    fn project(&self, value: f64, lo_px: f64, hi_px: f64) -> f64 {
        let t = (value.max(LOG_FLOOR).log10() - self.min) / (self.max - self.min);
        lo_px + t * (hi_px - lo_px)
    }

    fn decades(&self) -> impl Iterator<Item = i32> + '_ {
        (self.min as i32)..=(self.max as i32)
    }
}

fn svg_open(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn render_sweep(points: &[SweepPoint]) -> String {
    // panel layout: KL on the left, energy on the right
    let panel_w = (WIDTH - MARGIN_LEFT * 2.0 - MARGIN_RIGHT * 2.0) / 2.0;
    let kl_x0 = MARGIN_LEFT;
    let en_x0 = MARGIN_LEFT * 2.0 + MARGIN_RIGHT + panel_w;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;

    let mut sizes: Vec<u64> = points.iter().map(|p| p.sample_size).collect();
    sizes.sort_unstable();
    sizes.dedup();

    let x_axis = LogAxis::covering(points.iter().map(|p| p.sample_size as f64));
    let kl_axis = LogAxis::covering(points.iter().map(|p| p.kl_nats));
    let en_axis = LogAxis::covering(points.iter().map(|p| p.total_energy_fj));

    let mut out = String::new();
    svg_open(&mut out);
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">KL divergence and energy vs. sample count</text>\n",
        WIDTH / 2.0
    ));

    for (x0, axis, title, color, value) in [
        (kl_x0, &kl_axis, "KL (nats)", "#1f77b4", &(|p: &SweepPoint| p.kl_nats) as &dyn Fn(&SweepPoint) -> f64),
        (en_x0, &en_axis, "energy (fJ)", "#d62728", &|p: &SweepPoint| p.total_energy_fj),
    ] {
        let x1 = x0 + panel_w;
        // frame
        out.push_str(&format!(
            "<rect x=\"{x0:.2}\" y=\"{y1:.2}\" width=\"{panel_w:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444444\"/>\n",
            y0 - y1
        ));
        // y ticks at powers of 10
        for d in axis.decades() {
            let y = axis.project(10f64.powi(d), y0, y1);
            out.push_str(&format!(
                "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{x1:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n"
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>\n",
                x0 - 6.0,
                y + 4.0
            ));
        }
        // x ticks at the sample sizes present
        for &n in &sizes {
            let x = x_axis.project(n as f64, x0, x1);
            out.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n",
                y0 + 4.0
            ));
            out.push_str(&format!(
                "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{n}</text>\n",
                y0 + 18.0
            ));
        }
        // per-trial scatter
        for p in points {
            let x = x_axis.project(p.sample_size as f64, x0, x1);
            let y = axis.project(value(p), y0, y1);
            out.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"{color}\" fill-opacity=\"0.45\"/>\n"
            ));
        }
        // trial-mean line
        let mean_points: Vec<String> = sizes
            .iter()
            .map(|&n| {
                let vals: Vec<f64> =
                    points.iter().filter(|p| p.sample_size == n).map(value).collect();
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                format!(
                    "{:.2},{:.2}",
                    x_axis.project(n as f64, x0, x1),
                    axis.project(mean, y0, y1)
                )
            })
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            mean_points.join(" ")
        ));
        // labels
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">samples</text>\n",
            (x0 + x1) / 2.0,
            y0 + 38.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{title}</text>\n",
            (x0 + x1) / 2.0,
            y1 - 8.0
        ));
    }

    out.push_str("</svg>\n");
    out
}

fn render_histogram(rows: &[HistogramRow]) -> String {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;

    let y_max = rows
        .iter()
        .flat_map(|r| [r.frequency, r.target])
        .fold(0.0_f64, f64::max)
        .max(1e-9)
        * 1.15;
    let project = |v: f64| y0 + (y1 - y0) * (v / y_max);

    let mut out = String::new();
    svg_open(&mut out);
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">Empirical outcome frequencies vs. target</text>\n",
        WIDTH / 2.0
    ));
    out.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"#444444\"/>\n"
    ));
    // y grid lines every 0.1
    let mut grid = 0.0;
    while grid <= y_max {
        let y = project(grid);
        out.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{x1:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{grid:.1}</text>\n",
            x0 - 6.0,
            y + 4.0
        ));
        grid += 0.1;
    }

    let slot = (x1 - x0) / rows.len() as f64;
    for (i, row) in rows.iter().enumerate() {
        let cx = x0 + slot * (i as f64 + 0.5);
        let bar_w = slot * 0.5;
        let bar_top = project(row.frequency);
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{bar_top:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"#1f77b4\" fill-opacity=\"0.8\"/>\n",
            cx - bar_w / 2.0,
            y0 - bar_top
        ));
        // target marker: a horizontal segment across the bar slot
        let ty = project(row.target);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ty:.2}\" x2=\"{:.2}\" y2=\"{ty:.2}\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>\n",
            cx - slot * 0.35,
            cx + slot * 0.35
        ));
        out.push_str(&format!(
            "<text x=\"{cx:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            y0 + 18.0,
            row.outcome
        ));
    }

    // legend
    out.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"14\" fill=\"#1f77b4\" fill-opacity=\"0.8\"/>\n",
        x1 - 180.0,
        y1
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">empirical</text>\n",
        x1 - 160.0,
        y1 + 12.0
    ));
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>\n",
        x1 - 180.0,
        y1 + 28.0,
        x1 - 166.0,
        y1 + 28.0
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">target</text>\n",
        x1 - 160.0,
        y1 + 32.0
    ));
    out.push_str("</svg>\n");
    out
}
