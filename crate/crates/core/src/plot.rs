//! Deterministic SVG rendering of cumulative-difference plots and
//! reliability diagrams.
//!
//! Rendering is pure text generation: identical inputs produce identical
//! bytes. Each document carries a machine-readable comment stating the
//! plot-area pixel rectangle and the data ranges, so coordinates can be
//! inverted exactly by tests and downstream tooling.

use crate::binning::ReliabilityDiagram;
use crate::curve::CumulativeCurve;
use std::fmt::Write as _;

/// Presentation choices for one rendered plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Score interval annotated on zoomed renders; the curve itself must
    /// already be restricted.
    pub zoom: Option<(f64, f64)>,
    pub include_triangle: bool,
    /// Target number of ticks per axis; actual counts follow a 1-2-5
    /// nice-step rule.
    pub target_ticks: usize,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            width: 640,
            height: 480,
            title: String::new(),
            x_label: "score".to_string(),
            y_label: "cumulative difference".to_string(),
            zoom: None,
            include_triangle: true,
            target_ticks: 5,
        }
    }
}

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 25.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 55.0;

struct Frame {
    px0: f64,
    py0: f64,
    pw: f64,
    ph: f64,
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
}

impl Frame {
    fn new(width: u32, height: u32, xlo: f64, xhi: f64, ylo: f64, yhi: f64) -> Self {
        Self {
            px0: MARGIN_LEFT,
            py0: MARGIN_TOP,
            pw: width as f64 - MARGIN_LEFT - MARGIN_RIGHT,
            ph: height as f64 - MARGIN_TOP - MARGIN_BOTTOM,
            xlo,
            xhi,
            ylo,
            yhi,
        }
    }

    fn x(&self, v: f64) -> f64 {
        self.px0 + (v - self.xlo) / (self.xhi - self.xlo) * self.pw
    }

    fn y(&self, v: f64) -> f64 {
        self.py0 + (self.yhi - v) / (self.yhi - self.ylo) * self.ph
    }
}

/// Renders a cumulative-difference curve: the polyline anchored at the
/// origin, the significance triangle of tip-to-tip height `4 * sigma`, rank
/// ticks on the upper axis and the matching scores on the lower axis.
/// Weighted curves add minor upper ticks equispaced in cumulative weight
/// for comparison against uniform weighting.
pub fn render_cumulative(curve: &CumulativeCurve, spec: &PlotSpec) -> String {
    let ord_lo = curve.ordinates.iter().fold(0.0f64, |a, &y| a.min(y));
    let ord_hi = curve.ordinates.iter().fold(0.0f64, |a, &y| a.max(y));
    let mut ylo = ord_lo.min(-2.0 * curve.sigma);
    let mut yhi = ord_hi.max(2.0 * curve.sigma);
    if yhi - ylo < 1e-300 {
        ylo = -1.0;
        yhi = 1.0;
    }
    let pad = 0.08 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
    let frame = Frame::new(spec.width, spec.height, 0.0, 1.0, ylo, yhi);

    let mut svg = document_open(spec, &frame);
    frame_and_y_axis(&mut svg, &frame, spec);

    // upper axis: ticks at (nearly) equispaced ranks, labeled with the rank
    // fraction; lower axis: the subpopulation score at the same positions
    let n = curve.n;
    let mut ranks: Vec<usize> = (1..=spec.target_ticks.min(n))
        .map(|j| ((j * n) as f64 / spec.target_ticks.min(n) as f64).round() as usize)
        .map(|k| k.clamp(1, n))
        .collect();
    ranks.dedup();
    for &k in &ranks {
        let x = frame.x(curve.abscissae[k - 1]);
        let _ = writeln!(
            svg,
            "<line class=\"tick major upper\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>",
            frame.py0,
            frame.py0 - 6.0
        );
        let _ = writeln!(
            svg,
            "<text class=\"xlabel upper\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            frame.py0 - 10.0,
            fmt_label(k as f64 / n as f64)
        );
        let _ = writeln!(
            svg,
            "<line class=\"tick major lower\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>",
            frame.py0 + frame.ph,
            frame.py0 + frame.ph + 6.0
        );
        let _ = writeln!(
            svg,
            "<text class=\"xlabel lower\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            frame.py0 + frame.ph + 20.0,
            fmt_label(curve.scores_at[k - 1])
        );
    }
    if curve.weighted {
        for j in 1..10 {
            let x = frame.x(j as f64 / 10.0);
            let _ = writeln!(
                svg,
                "<line class=\"tick minor upper\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>",
                frame.py0,
                frame.py0 - 3.0
            );
        }
    }

    // zero reference
    let y0 = frame.y(0.0);
    let _ = writeln!(
        svg,
        "<line class=\"zero\" x1=\"{:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>",
        frame.px0,
        frame.px0 + frame.pw
    );

    // the curve, anchored at the origin point
    let mut points = format!("{:.2},{:.2}", frame.x(0.0), frame.y(0.0));
    for (a, o) in curve.abscissae.iter().zip(&curve.ordinates) {
        let _ = write!(points, " {:.2},{:.2}", frame.x(*a), frame.y(*o));
    }
    let _ = writeln!(
        svg,
        "<polyline class=\"curve\" points=\"{points}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>"
    );

    if spec.include_triangle && curve.sigma > 0.0 {
        let tip = 0.035 * (frame.xhi - frame.xlo);
        let _ = writeln!(
            svg,
            "<polygon class=\"triangle\" points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"black\"/>",
            frame.x(0.0),
            frame.y(2.0 * curve.sigma),
            frame.x(0.0),
            frame.y(-2.0 * curve.sigma),
            frame.x(tip),
            frame.y(0.0)
        );
    } else if curve.sigma == 0.0 {
        svg.push_str("<!-- sigma is zero: triangle omitted -->\n");
    }

    svg.push_str("</svg>\n");
    svg
}

/// Renders a reliability diagram: bootstrap bands first in light gray, the
/// ideal diagonal when the diagram carries one, then the full population in
/// gray under the subpopulation in black.
pub fn render_reliability(
    diagram: &ReliabilityDiagram,
    bands: Option<&[ReliabilityDiagram]>,
    spec: &PlotSpec,
) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut collect = |points: &[(f64, f64)]| {
        for &(x, y) in points {
            xs.push(x);
            ys.push(y);
        }
    };
    collect(&diagram.sub_points);
    collect(&diagram.full_points);
    if let Some(bands) = bands {
        for band in bands {
            collect(&band.sub_points);
        }
    }
    if diagram.diagonal {
        xs.extend([0.0, 1.0]);
        ys.extend([0.0, 1.0]);
    }
    let (xlo, xhi) = padded_range(&xs);
    let (ylo, yhi) = padded_range(&ys);
    let frame = Frame::new(spec.width, spec.height, xlo, xhi, ylo, yhi);

    let mut svg = document_open(spec, &frame);
    frame_and_y_axis(&mut svg, &frame, spec);
    for tick in nice_ticks(frame.xlo, frame.xhi, spec.target_ticks) {
        let x = frame.x(tick);
        let _ = writeln!(
            svg,
            "<line class=\"tick major lower\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>",
            frame.py0 + frame.ph,
            frame.py0 + frame.ph + 6.0
        );
        let _ = writeln!(
            svg,
            "<text class=\"xlabel lower\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            frame.py0 + frame.ph + 20.0,
            fmt_label(tick)
        );
    }

    if let Some(bands) = bands {
        for band in bands {
            polyline(&mut svg, &frame, &band.sub_points, "band", "#cccccc", 1.0);
        }
    }
    if diagram.diagonal {
        let _ = writeln!(
            svg,
            "<line class=\"diagonal\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999999\" stroke-dasharray=\"5 4\"/>",
            frame.x(0.0),
            frame.y(0.0),
            frame.x(1.0),
            frame.y(1.0)
        );
    }
    if !diagram.full_points.is_empty() {
        polyline(
            &mut svg,
            &frame,
            &diagram.full_points,
            "full",
            "#808080",
            1.2,
        );
        markers(
            &mut svg,
            &frame,
            &diagram.full_points,
            "full-marker",
            "#808080",
        );
    }
    polyline(&mut svg, &frame, &diagram.sub_points, "sub", "black", 1.2);
    markers(&mut svg, &frame, &diagram.sub_points, "sub-marker", "black");

    svg.push_str("</svg>\n");
    svg
}

fn document_open(spec: &PlotSpec, frame: &Frame) -> String {
    let mut svg = String::with_capacity(4096);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">",
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(
        svg,
        "<!-- plot-area px=[{:.2},{:.2}] py=[{:.2},{:.2}] x=[{:e},{:e}] y=[{:e},{:e}] -->",
        frame.px0,
        frame.px0 + frame.pw,
        frame.py0,
        frame.py0 + frame.ph,
        frame.xlo,
        frame.xhi,
        frame.ylo,
        frame.yhi
    );
    if let Some((lo, hi)) = spec.zoom {
        let _ = writeln!(svg, "<!-- zoom: scores in [{lo:e}, {hi:e}] -->");
    }
    let _ = writeln!(
        svg,
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        spec.width, spec.height
    );
    if !spec.title.is_empty() {
        let _ = writeln!(
            svg,
            "<text class=\"title\" x=\"{:.2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            spec.width as f64 / 2.0,
            xml_escape(&spec.title)
        );
    }
    svg
}

fn frame_and_y_axis(svg: &mut String, frame: &Frame, spec: &PlotSpec) {
    let _ = writeln!(
        svg,
        "<rect class=\"frame\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        frame.px0, frame.py0, frame.pw, frame.ph
    );
    for tick in nice_ticks(frame.ylo, frame.yhi, spec.target_ticks) {
        let y = frame.y(tick);
        let _ = writeln!(
            svg,
            "<line class=\"tick major left\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>",
            frame.px0 - 6.0,
            frame.px0
        );
        let _ = writeln!(
            svg,
            "<text class=\"ylabel\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\">{}</text>",
            frame.px0 - 9.0,
            y + 3.5,
            fmt_label(tick)
        );
    }
    if !spec.x_label.is_empty() {
        let _ = writeln!(
            svg,
            "<text class=\"axis-label x\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
            frame.px0 + frame.pw / 2.0,
            frame.py0 + frame.ph + 40.0,
            xml_escape(&spec.x_label)
        );
    }
    if !spec.y_label.is_empty() {
        let _ = writeln!(
            svg,
            "<text class=\"axis-label y\" x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 {0:.2})\">{1}</text>",
            frame.py0 + frame.ph / 2.0,
            xml_escape(&spec.y_label)
        );
    }
}

fn polyline(
    svg: &mut String,
    frame: &Frame,
    points: &[(f64, f64)],
    class: &str,
    stroke: &str,
    width: f64,
) {
    if points.is_empty() {
        return;
    }
    let mut body = String::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            body.push(' ');
        }
        let _ = write!(body, "{:.2},{:.2}", frame.x(x), frame.y(y));
    }
    let _ = writeln!(
        svg,
        "<polyline class=\"{class}\" points=\"{body}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>"
    );
}

fn markers(svg: &mut String, frame: &Frame, points: &[(f64, f64)], class: &str, fill: &str) {
    for &(x, y) in points {
        let _ = writeln!(
            svg,
            "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{fill}\"/>",
            frame.x(x),
            frame.y(y)
        );
    }
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Tick positions at multiples of a 1-2-5 step sized to yield roughly
/// `target` ticks over `[lo, hi]`.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let range = hi - lo;
    let raw = range / target.max(1) as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let factor = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    };
    let step = factor * magnitude;
    let mut ticks = Vec::new();
    let mut k = (lo / step).ceil();
    // guard against -0.0 labels
    while k * step <= hi + 1e-9 * range {
        let v = k * step;
        ticks.push(if v == 0.0 { 0.0 } else { v });
        k += 1.0;
    }
    ticks
}

/// Compact decimal label: up to six decimal places with trailing zeros
/// trimmed; scientific notation outside a sane magnitude window.
fn fmt_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if !(1e-4..1e7).contains(&magnitude) {
        return format!("{v:.3e}");
    }
    let mut s = format!("{v:.6}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
