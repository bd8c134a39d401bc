//! CSV and SVG writers for sweep tables and decoherence series.
//!
//! Numbers are written with 17 significant digits so a parsed file
//! reproduces every value bit for bit. Lines end in a single `\n`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::chain::ModelParams;
use crate::decoherence::DecoherenceSeries;
use crate::error::{Error, Result};
use crate::sweep::SweepTable;

pub const SWEEP_HEADER: &str = "axis,overlay,phi,phi_err";
pub const SERIES_HEADER: &str = "t,fmod";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn param_lines(out: &mut String, p: &ModelParams) {
    for (k, v) in [
        ("eta", p.eta),
        ("gamma", p.gamma),
        ("alpha", p.alpha),
        ("lambda", p.lambda),
        ("g", p.g),
        ("beta", p.beta),
    ] {
        let _ = writeln!(out, "# {k}={}", num(v));
    }
    let _ = writeln!(out, "# N={}", p.n);
}

fn one_line(msg: &str) -> String {
    msg.replace(['\n', '\r'], " ")
}

/// Renders a sweep table as CSV text.
///
/// The header comments carry the base parameters, the sweep definition and
/// one `# error` line per failed point. Failed points keep their row with
/// `NaN` in both value columns. `phi` is the unwrapped phase.
pub fn render_csv(table: &SweepTable) -> String {
    let spec = &table.spec;
    let mut out = String::new();
    param_lines(&mut out, &spec.base);
    let _ = writeln!(out, "# axis={}", spec.axis);
    let _ = writeln!(out, "# start={}", num(spec.start));
    let _ = writeln!(out, "# stop={}", num(spec.stop));
    let _ = writeln!(out, "# points={}", spec.points);
    let _ = writeln!(out, "# tol={}", num(spec.tol));
    if let Some(ov) = &spec.overlay {
        let values: Vec<String> = ov.values.iter().map(|&v| num(v)).collect();
        let _ = writeln!(out, "# overlay={}", ov.axis);
        let _ = writeln!(out, "# overlay_values={}", values.join(" "));
    }
    for r in &table.rows {
        if let Err(msg) = &r.outcome {
            let ov = r.overlay_value.map(num).unwrap_or_default();
            let _ = writeln!(out, "# error axis={} overlay={ov}: {}", num(r.axis_value), one_line(msg));
        }
    }
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in &table.rows {
        let (phi, err) = match &r.outcome {
            Ok(gp) => (gp.raw_phi, gp.quadrature_error),
            Err(_) => (f64::NAN, f64::NAN),
        };
        let ov = r.overlay_value.map(num).unwrap_or_default();
        let _ = writeln!(out, "{},{ov},{},{}", num(r.axis_value), num(phi), num(err));
    }
    out
}

pub fn emit_csv<W: Write>(table: &SweepTable, mut dest: W) -> std::io::Result<()> {
    dest.write_all(render_csv(table).as_bytes())?;
    dest.flush()
}

pub fn write_csv(table: &SweepTable, path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(table)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub axis: f64,
    pub overlay: Option<f64>,
    pub phi: f64,
    pub phi_err: f64,
}

impl CsvRow {
    /// Bitwise equality, so `NaN` rows compare equal to themselves.
    pub fn same_bits(&self, other: &CsvRow) -> bool {
        self.axis.to_bits() == other.axis.to_bits()
            && self.overlay.map(f64::to_bits) == other.overlay.map(f64::to_bits)
            && self.phi.to_bits() == other.phi.to_bits()
            && self.phi_err.to_bits() == other.phi_err.to_bits()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedCsv {
    /// `# key=value` lines in file order.
    pub meta: Vec<(String, String)>,
    /// Bodies of `# error` lines.
    pub errors: Vec<String>,
    pub rows: Vec<CsvRow>,
}

impl ParsedCsv {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `(axis, phi)` of the finite rows for one overlay value.
    pub fn curve(&self, overlay: Option<f64>) -> (Vec<f64>, Vec<f64>) {
        self.rows
            .iter()
            .filter(|r| r.overlay == overlay && r.phi.is_finite())
            .map(|r| (r.axis, r.phi))
            .unzip()
    }
}

/// The rows [`render_csv`] writes for `table`.
pub fn table_rows(table: &SweepTable) -> Vec<CsvRow> {
    table
        .rows
        .iter()
        .map(|r| {
            let (phi, phi_err) = match &r.outcome {
                Ok(gp) => (gp.raw_phi, gp.quadrature_error),
                Err(_) => (f64::NAN, f64::NAN),
            };
            CsvRow {
                axis: r.axis_value,
                overlay: r.overlay_value,
                phi,
                phi_err,
            }
        })
        .collect()
}

fn parse_field(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: bad number `{s}`")))
}

/// Reads the sweep CSV format back.
pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let mut parsed = ParsedCsv::default();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim_start();
            if let Some(err) = comment.strip_prefix("error ") {
                parsed.errors.push(err.to_string());
            } else if let Some((k, v)) = comment.split_once('=') {
                parsed.meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != SWEEP_HEADER {
                return Err(Error::Parse(format!("line {lineno}: expected header `{SWEEP_HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("line {lineno}: expected 4 fields, got {}", fields.len())));
        }
        let overlay = if fields[1].trim().is_empty() {
            None
        } else {
            Some(parse_field(fields[1], lineno)?)
        };
        parsed.rows.push(CsvRow {
            axis: parse_field(fields[0], lineno)?,
            overlay,
            phi: parse_field(fields[2], lineno)?,
            phi_err: parse_field(fields[3], lineno)?,
        });
    }
    if !header_seen {
        return Err(Error::Parse("missing header row".into()));
    }
    Ok(parsed)
}

pub fn render_series_csv(series: &DecoherenceSeries) -> String {
    let mut out = String::new();
    param_lines(&mut out, &series.params);
    let _ = writeln!(out, "# clamped={}", series.clamped);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (t, f) in series.times.iter().zip(&series.values) {
        let _ = writeln!(out, "{},{}", num(*t), num(*f));
    }
    out
}

pub fn write_series_csv(series: &DecoherenceSeries, path: &Path) -> Result<()> {
    std::fs::write(path, render_series_csv(series)).map_err(|e| Error::io(path, e))
}

const PLOT_WIDTH: f64 = 720.0;
const PLOT_HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders one polyline per overlay value as standalone SVG.
pub fn render_plot(table: &SweepTable) -> String {
    let spec = &table.spec;
    let curves: Vec<(Option<f64>, Vec<f64>, Vec<f64>)> = table
        .overlay_values()
        .into_iter()
        .map(|ov| {
            let (x, y) = table.curve(ov);
            (ov, x, y)
        })
        .collect();
    let (mut ylo, mut yhi) = curves
        .iter()
        .flat_map(|c| c.2.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if !(ylo <= yhi) {
        (ylo, yhi) = (0.0, 1.0);
    }
    if yhi - ylo < 1e-12 {
        ylo -= 0.5;
        yhi += 0.5;
    }
    let (xlo, xhi) = (spec.start, spec.stop);
    let inner_w = PLOT_WIDTH - 2.0 * MARGIN;
    let inner_h = PLOT_HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - xlo) / (xhi - xlo) * inner_w;
    let sy = |y: f64| PLOT_HEIGHT - MARGIN - (y - ylo) / (yhi - ylo) * inner_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" viewBox="0 0 {PLOT_WIDTH} {PLOT_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner_w}" height="{inner_h}" fill="none" stroke="black"/>"#
    );
    for (x, anchor) in [(xlo, "start"), (xhi, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="{anchor}">{x:.4}</text>"#,
            sx(x),
            PLOT_HEIGHT - MARGIN + 16.0
        );
    }
    for y in [ylo, yhi] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{y:.4}</text>"#,
            MARGIN - 4.0,
            sy(y) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        PLOT_WIDTH / 2.0,
        PLOT_HEIGHT - 16.0,
        spec.axis
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">GP</text>"#,
        PLOT_HEIGHT / 2.0,
        PLOT_HEIGHT / 2.0
    );
    for (i, (ov, xs, ys)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        if let (Some(v), Some(axis)) = (ov, spec.overlay.as_ref().map(|o| o.axis)) {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{axis}={v:.4}</text>"#,
                PLOT_WIDTH - MARGIN + 4.0,
                MARGIN + 14.0 * (i as f64 + 1.0)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_plot<W: Write>(table: &SweepTable, mut dest: W) -> std::io::Result<()> {
    dest.write_all(render_plot(table).as_bytes())?;
    dest.flush()
}

pub fn write_plot(table: &SweepTable, path: &Path) -> Result<()> {
    std::fs::write(path, render_plot(table)).map_err(|e| Error::io(path, e))
}
