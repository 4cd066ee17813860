//! Dependency-free SVG plots: scan heatmaps and 1D line panels.
//!
//! Output is deterministic text. Coordinates are printed with two decimals
//! and annotations with fixed significant digits, so identical inputs give
//! identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use landscape_core::{Scan1DResult, Scan2DResult};

use crate::config::RenderSpec;
use crate::emit::write_text;
use crate::error::{CliError, CliResult};

const VIRIDIS: [[u8; 3]; 11] = [
    [68, 1, 84],
    [72, 33, 115],
    [67, 62, 133],
    [56, 88, 140],
    [45, 112, 142],
    [37, 133, 142],
    [30, 155, 138],
    [42, 176, 127],
    [82, 197, 105],
    [134, 213, 73],
    [253, 231, 37],
];

const MAGMA: [[u8; 3]; 9] = [
    [0, 0, 4],
    [28, 16, 68],
    [79, 18, 123],
    [129, 37, 129],
    [181, 54, 122],
    [229, 80, 100],
    [251, 135, 97],
    [254, 194, 135],
    [252, 253, 191],
];

const GRAY: [[u8; 3]; 2] = [[0, 0, 0], [255, 255, 255]];

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

const NAN_COLOR: &str = "#bdbdbd";

/// Dark-to-light colormap sampled by linear interpolation between anchors.
#[derive(Debug, Clone, Copy)]
pub struct Colormap {
    anchors: &'static [[u8; 3]],
}

impl Colormap {
    pub fn by_name(name: &str) -> CliResult<Self> {
        let anchors: &'static [[u8; 3]] = match name {
            "viridis" => &VIRIDIS,
            "magma" => &MAGMA,
            "gray" | "grey" => &GRAY,
            other => {
                return Err(CliError::usage(format!(
                    "render.colormap: unknown colormap '{other}' (viridis, magma, gray)"
                )))
            }
        };
        Ok(Self { anchors })
    }

    /// Color at `t` in `[0, 1]` as `#rrggbb`.
    pub fn color(&self, t: f64) -> String {
        let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
        let x = t * (self.anchors.len() - 1) as f64;
        let k = (x.floor() as usize).min(self.anchors.len() - 2);
        let f = x - k as f64;
        let (a, b) = (self.anchors[k], self.anchors[k + 1]);
        let ch = |c: usize| (a[c] as f64 + f * (b[c] as f64 - a[c] as f64)).round() as u8;
        format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(v: f64) -> String {
    if !v.is_finite() {
        "nan".into()
    } else if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

fn finite_extent(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

/// Linear map from data interval to pixel interval.
#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        if self.hi > self.lo {
            self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)
        } else {
            0.5 * (self.p0 + self.p1)
        }
    }
}

fn open_svg(out: &mut String, spec: &RenderSpec, title: &str, metadata: Option<&str>) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = spec.width,
        h = spec.height
    )
    .unwrap();
    if let Some(m) = metadata {
        writeln!(out, "<metadata>{}</metadata>", escape(m)).unwrap();
    }
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        spec.width as f64 / 2.0,
        escape(title)
    )
    .unwrap();
}

fn axis_labels(out: &mut String, x: Axis, y: Axis, x_label: &str, y_label: &str) {
    let (left, right, top, bottom) = (x.p0, x.p1, y.p1, y.p0);
    writeln!(
        out,
        r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    )
    .unwrap();
    for (v, anchor) in [(x.lo, "start"), (x.hi, "end")] {
        writeln!(
            out,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#,
            x.map(v),
            bottom + 16.0,
            num(v)
        )
        .unwrap();
    }
    for v in [y.lo, y.hi] {
        writeln!(
            out,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 4.0,
            y.map(v) + 4.0,
            num(v)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        0.5 * (left + right),
        bottom + 34.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
        left - 52.0,
        0.5 * (top + bottom),
        left - 52.0,
        0.5 * (top + bottom),
        escape(y_label)
    )
    .unwrap();
}

/// Heatmap of a 2D scan: one rectangle per cell, `t1` to the right and
/// `t2` upward, colored by min-max normalized value.
///
/// Each overlay is drawn as one polyline with a vertex per point, in the
/// scan's axis units.
pub fn heatmap_svg(
    scan: &Scan2DResult,
    spec: &RenderSpec,
    overlays: &[Vec<[f64; 2]>],
    title: &str,
    metadata: Option<&str>,
) -> CliResult<String> {
    spec.validate()?;
    let cmap = Colormap::by_name(&spec.colormap)?;
    let (rx, ry) = (scan.resolution_x(), scan.resolution_y());
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (left, right, top, bottom) = (70.0, w - 110.0, 36.0, h - 50.0);
    if right - left < 10.0 || bottom - top < 10.0 {
        return Err(CliError::usage("render: figure too small for a heatmap"));
    }
    let (vmin, vmax) = finite_extent(scan.values.iter().copied()).unwrap_or((0.0, 0.0));
    let norm = |v: f64| if vmax > vmin { (v - vmin) / (vmax - vmin) } else { 0.0 };

    let x_lo = scan.ts_x[0];
    let x_hi = scan.ts_x[rx - 1];
    let y_lo = scan.ts_y[0];
    let y_hi = scan.ts_y[ry - 1];
    // Cells are centered on their samples, so the image spans half a cell
    // beyond the first and last sample.
    let half_x = 0.5 * (x_hi - x_lo) / (rx - 1) as f64;
    let half_y = 0.5 * (y_hi - y_lo) / (ry - 1) as f64;
    let xa = Axis { lo: x_lo - half_x, hi: x_hi + half_x, p0: left, p1: right };
    let ya = Axis { lo: y_lo - half_y, hi: y_hi + half_y, p0: bottom, p1: top };
    let cw = (right - left) / rx as f64;
    let chh = (bottom - top) / ry as f64;

    let mut out = String::with_capacity(80 * rx * ry + 4096);
    open_svg(&mut out, spec, title, metadata);
    out.push_str("<g class=\"cells\" shape-rendering=\"crispEdges\">\n");
    for i in 0..rx {
        for j in 0..ry {
            let v = scan.value(i, j);
            let fill = if v.is_finite() { cmap.color(norm(v)) } else { NAN_COLOR.to_string() };
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                left + i as f64 * cw,
                bottom - (j + 1) as f64 * chh,
                cw + 0.05,
                chh + 0.05
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n");

    if spec.contours && vmax > vmin {
        contour_paths(&mut out, scan, vmin, vmax, xa, ya);
    }

    if spec.overlays {
        for (k, path) in overlays.iter().enumerate() {
            let pts: Vec<String> = path
                .iter()
                .map(|p| format!("{:.2},{:.2}", xa.map(p[0]), ya.map(p[1])))
                .collect();
            writeln!(
                out,
                r#"<polyline class="overlay" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                pts.join(" "),
                PALETTE[(k + 1) % PALETTE.len()]
            )
            .unwrap();
        }
    }

    axis_labels(&mut out, xa, ya, "t1", "t2");

    // Colorbar.
    let (bx, bw) = (right + 20.0, 18.0);
    let steps = 64;
    out.push_str("<g class=\"colorbar\">\n");
    for s in 0..steps {
        let t = s as f64 / (steps - 1) as f64;
        let y = bottom - (s + 1) as f64 * (bottom - top) / steps as f64;
        writeln!(
            out,
            r#"<rect x="{bx:.2}" y="{y:.2}" width="{bw:.2}" height="{:.2}" fill="{}"/>"#,
            (bottom - top) / steps as f64 + 0.05,
            cmap.color(t)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text class="colorbar-max" x="{:.2}" y="{:.2}">max {}</text>"#,
        bx,
        top - 6.0,
        num(vmax)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="colorbar-min" x="{:.2}" y="{:.2}">min {}</text>"#,
        bx,
        bottom + 16.0,
        num(vmin)
    )
    .unwrap();
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

const CONTOUR_LEVELS: usize = 8;

/// Marching squares on the sample lattice at evenly spaced levels.
fn contour_paths(out: &mut String, scan: &Scan2DResult, vmin: f64, vmax: f64, xa: Axis, ya: Axis) {
    let (rx, ry) = (scan.resolution_x(), scan.resolution_y());
    out.push_str("<g class=\"contours\" fill=\"none\" stroke=\"white\" stroke-width=\"0.8\" stroke-opacity=\"0.7\">\n");
    for l in 1..=CONTOUR_LEVELS {
        let level = vmin + (vmax - vmin) * l as f64 / (CONTOUR_LEVELS + 1) as f64;
        let mut d = String::new();
        for i in 0..rx - 1 {
            for j in 0..ry - 1 {
                // Corners counter-clockwise from (i, j).
                let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let v: Vec<f64> = c.iter().map(|&(a, b)| scan.value(a, b)).collect();
                if v.iter().any(|x| !x.is_finite()) {
                    continue;
                }
                let mut crossings = Vec::with_capacity(4);
                for e in 0..4 {
                    let (a, b) = (e, (e + 1) % 4);
                    if (v[a] < level) != (v[b] < level) {
                        let f = (level - v[a]) / (v[b] - v[a]);
                        let (ia, ja) = c[a];
                        let (ib, jb) = c[b];
                        let t1 = scan.ts_x[ia] + f * (scan.ts_x[ib] - scan.ts_x[ia]);
                        let t2 = scan.ts_y[ja] + f * (scan.ts_y[jb] - scan.ts_y[ja]);
                        crossings.push((xa.map(t1), ya.map(t2)));
                    }
                }
                for pair in crossings.chunks_exact(2) {
                    write!(
                        d,
                        "M{:.2} {:.2}L{:.2} {:.2}",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    )
                    .unwrap();
                }
            }
        }
        if !d.is_empty() {
            writeln!(out, r#"<path d="{d}"/>"#).unwrap();
        }
    }
    out.push_str("</g>\n");
}

/// One labelled curve of a line plot.
#[derive(Debug, Clone, Copy)]
pub struct Series<'a> {
    pub label: &'a str,
    pub ts: &'a [f64],
    pub values: &'a [f64],
}

impl<'a> Series<'a> {
    pub fn new(label: &'a str, ts: &'a [f64], values: &'a [f64]) -> Self {
        Self { label, ts, values }
    }

    pub fn scan(label: &'a str, scan: &'a Scan1DResult) -> Self {
        Self::new(label, &scan.ts, &scan.values)
    }
}

/// Multi-series line plot with a legend. The view box spans the union of
/// all series' `t` and value ranges.
pub fn line_svg(
    series: &[Series<'_>],
    spec: &RenderSpec,
    title: &str,
    x_label: &str,
    y_label: &str,
    metadata: Option<&str>,
) -> CliResult<String> {
    spec.validate()?;
    if series.is_empty() {
        return Err(CliError::usage("line plot needs at least one series"));
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (left, right, top, bottom) = (70.0, w - 200.0, 36.0, h - 50.0);
    if right - left < 10.0 || bottom - top < 10.0 {
        return Err(CliError::usage("render: figure too small for a line plot"));
    }
    let (x_lo, x_hi) = finite_extent(series.iter().flat_map(|s| s.ts.iter().copied()))
        .ok_or_else(|| CliError::Numerical("line plot: no finite t values".into()))?;
    let (mut y_lo, mut y_hi) =
        finite_extent(series.iter().flat_map(|s| s.values.iter().copied())).unwrap_or((0.0, 0.0));
    if y_hi <= y_lo {
        let pad = if y_lo == 0.0 { 1.0 } else { 0.1 * y_lo.abs() };
        y_lo -= pad;
        y_hi += pad;
    }
    let xa = Axis { lo: x_lo, hi: x_hi, p0: left, p1: right };
    let ya = Axis { lo: y_lo, hi: y_hi, p0: bottom, p1: top };

    let mut out = String::new();
    open_svg(&mut out, spec, title, metadata);
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .ts
            .iter()
            .zip(s.values)
            .filter(|(_, v)| v.is_finite())
            .map(|(&t, &v)| format!("{:.2},{:.2}", xa.map(t), ya.map(v)))
            .collect();
        writeln!(
            out,
            r#"<polyline class="series" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            pts.join(" "),
            PALETTE[k % PALETTE.len()]
        )
        .unwrap();
    }
    axis_labels(&mut out, xa, ya, x_label, y_label);
    out.push_str("<g class=\"legend\">\n");
    for (k, s) in series.iter().enumerate() {
        let y = top + 10.0 + 18.0 * k as f64;
        writeln!(
            out,
            r#"<g class="legend-entry"><line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            right + 12.0,
            right + 32.0,
            PALETTE[k % PALETTE.len()],
            right + 38.0,
            y + 4.0,
            escape(s.label)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Bar chart of bin counts. `edges` has one more entry than `counts`.
pub fn histogram_svg(
    edges: &[f64],
    counts: &[usize],
    spec: &RenderSpec,
    title: &str,
    x_label: &str,
    metadata: Option<&str>,
) -> CliResult<String> {
    spec.validate()?;
    if counts.is_empty() || edges.len() != counts.len() + 1 {
        return Err(CliError::usage("histogram needs n bins and n + 1 edges"));
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (left, right, top, bottom) = (70.0, w - 30.0, 36.0, h - 50.0);
    let max = *counts.iter().max().unwrap() as f64;
    let xa = Axis { lo: edges[0], hi: edges[edges.len() - 1], p0: left, p1: right };
    let ya = Axis { lo: 0.0, hi: max.max(1.0), p0: bottom, p1: top };
    let mut out = String::new();
    open_svg(&mut out, spec, title, metadata);
    out.push_str("<g class=\"bars\">\n");
    for (k, &c) in counts.iter().enumerate() {
        let (x0, x1) = (xa.map(edges[k]), xa.map(edges[k + 1]));
        let y = ya.map(c as f64);
        writeln!(
            out,
            r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            (x1 - x0).max(0.0),
            bottom - y,
            PALETTE[0]
        )
        .unwrap();
    }
    out.push_str("</g>\n");
    axis_labels(&mut out, xa, ya, x_label, "count");
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_heatmap_svg(
    scan: &Scan2DResult,
    spec: &RenderSpec,
    overlays: &[Vec<[f64; 2]>],
    title: &str,
    metadata: Option<&str>,
    path: &Path,
) -> CliResult<()> {
    write_text(path, &heatmap_svg(scan, spec, overlays, title, metadata)?)
}

pub fn render_line_svg(
    series: &[Series<'_>],
    spec: &RenderSpec,
    title: &str,
    x_label: &str,
    y_label: &str,
    metadata: Option<&str>,
    path: &Path,
) -> CliResult<()> {
    write_text(path, &line_svg(series, spec, title, x_label, y_label, metadata)?)
}
