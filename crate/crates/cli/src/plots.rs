//! Minimal SVG line plots of run-directory traces.
//!
//! Every SVG embeds the plotted `x,y` pairs, copied verbatim from the
//! source CSV, inside its `<metadata>` element.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ns_galerkin::continuation::FixedPointLog;
use ns_galerkin::io::{NORMS_CSV_HEADER, SWEEP_CSV_HEADER};

use crate::RunError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

/// A trace as `(x, y)` strings; unparsable or empty `y` entries are gaps.
struct Trace {
    title: String,
    x_label: String,
    y_label: String,
    points: Vec<(String, String)>,
    /// Vertical markers `(x, label)`.
    markers: Vec<(f64, String)>,
}

/// Writes one SVG per trace found in `run_dir` (`norms.csv`, `sweep.csv`,
/// `fixed_point.json`) and returns the written paths.
pub fn emit_plots(run_dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let mut traces = Vec::new();
    let mut found = false;

    let norms = run_dir.join("norms.csv");
    if norms.exists() {
        found = true;
        let (header, rows) = read_csv(&norms)?;
        if header.iter().map(String::as_str).ne(NORMS_CSV_HEADER) {
            return Err(RunError::Config(format!("{}: unexpected header", norms.display())));
        }
        for (j, name) in header.iter().enumerate().skip(1) {
            traces.push((
                format!("norms_{name}.svg"),
                Trace {
                    title: name.clone(),
                    x_label: "t".into(),
                    y_label: name.clone(),
                    points: rows.iter().map(|r| (r[0].clone(), r[j].clone())).collect(),
                    markers: Vec::new(),
                },
            ));
        }
    }

    let sweep = run_dir.join("sweep.csv");
    if sweep.exists() {
        found = true;
        let (header, rows) = read_csv(&sweep)?;
        if header.iter().map(String::as_str).ne(SWEEP_CSV_HEADER) {
            return Err(RunError::Config(format!("{}: unexpected header", sweep.display())));
        }
        if rows.is_empty() {
            log::warn!("{}: empty sweep, no plot written", sweep.display());
        } else {
            let markers: Vec<(f64, String)> = rows
                .iter()
                .filter(|r| r[1] == "blow-up")
                .filter_map(|r| Some((r[0].parse().ok()?, format!("blow-up t*={}", r[2]))))
                .collect();
            for (j, name) in [(3, "serrin"), (4, "sup_V")] {
                traces.push((
                    format!("sweep_{name}.svg"),
                    Trace {
                        title: format!("{name} vs lambda"),
                        x_label: "lambda".into(),
                        y_label: name.into(),
                        points: rows.iter().map(|r| (r[0].clone(), r[j].clone())).collect(),
                        markers: markers.clone(),
                    },
                ));
            }
        }
    }

    let fixed_point = run_dir.join("fixed_point.json");
    if fixed_point.exists() {
        found = true;
        let log: FixedPointLog = serde_json::from_str(&fs::read_to_string(&fixed_point)?)
            .map_err(|e| RunError::Config(format!("{}: {e}", fixed_point.display())))?;
        if log.iterates.is_empty() {
            log::warn!("{}: no iterates, no plot written", fixed_point.display());
        } else {
            traces.push((
                "fixed_point_iterates.svg".into(),
                Trace {
                    title: format!("Picard distance, lambda = {}", log.lambda),
                    x_label: "iteration".into(),
                    y_label: "d_n".into(),
                    points: log
                        .iterates
                        .iter()
                        .enumerate()
                        .map(|(i, d)| ((i + 1).to_string(), format!("{d:e}")))
                        .collect(),
                    markers: Vec::new(),
                },
            ));
        }
    }

    if !found {
        return Err(RunError::Config(format!("{}: no norms.csv, sweep.csv or fixed_point.json", run_dir.display())));
    }
    let mut written = Vec::new();
    for (file, trace) in traces {
        let path = run_dir.join(file);
        fs::write(&path, render(&trace))?;
        written.push(path);
    }
    Ok(written)
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), RunError> {
    let csv_err = |e: csv::Error| RunError::Config(format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.iter().map(str::to_string).collect::<Vec<_>>();
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render(trace: &Trace) -> String {
    let parsed: Vec<(f64, f64)> = trace
        .points
        .iter()
        .filter_map(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
        .filter(|(x, y): &(f64, f64)| x.is_finite() && y.is_finite())
        .collect();
    let xs = parsed.iter().map(|p| p.0).chain(trace.markers.iter().map(|m| m.0));
    let (x_lo, x_hi) = range(xs);
    let (y_lo, y_hi) = range(parsed.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, "<metadata>");
    let _ = writeln!(svg, "{},{}", escape(&trace.x_label), escape(&trace.y_label));
    for (x, y) in &trace.points {
        let _ = writeln!(svg, "{},{}", escape(x), escape(y));
    }
    let _ = writeln!(svg, "</metadata>");
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&trace.title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(svg, r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#);
    for (value, x, y, anchor) in [(x_lo, left, bottom + 18.0, "start"), (x_hi, right, bottom + 18.0, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{value:.4e}</text>"#
        );
    }
    for (value, y) in [(y_lo, bottom), (y_hi, top)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{value:.4e}</text>"#,
            left - 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(&trace.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&trace.y_label)
    );
    if !parsed.is_empty() {
        let points: Vec<String> = parsed.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        for &(x, y) in &parsed {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#, sx(x), sy(y));
        }
    }
    for (x, label) in &trace.markers {
        let px = sx(*x);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{top}" x2="{px:.2}" y2="{bottom}" stroke="crimson" stroke-dasharray="4 3"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="10" fill="crimson">{}</text>"#,
            px + 3.0,
            top + 12.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Bounds of `values`, widened when empty or degenerate.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        let pad = lo.abs().max(1.0) * 0.5;
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}
