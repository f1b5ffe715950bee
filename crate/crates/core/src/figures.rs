//! Static SVG plots and the CSV tables behind them.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::closedform::{pdf_expectation, FinalPdf, Side};
use crate::error::Result;
use crate::momentum::{MomentumDistribution, ObservableSpec};
use crate::sweep::SweepRecord;

pub const QUANTUM_COLOR: &str = "#ff7f0e";
pub const CLASSICAL_COLOR: &str = "#1f77b4";
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, color: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color: color.to_string(),
            points,
        }
    }

    fn from_dist(label: &str, color: &str, d: &MomentumDistribution) -> Self {
        Self::new(label, color, d.points().collect())
    }
}

/// Axis-aligned plotting box in pixels mapped onto a data window.
#[derive(Debug, Clone, Copy)]
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y.0) / (self.y.1 - self.y.0) * self.height
    }
}

/// Round tick positions (steps of 1, 2 or 5 times a power of ten).
pub fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(svg: &mut String, f: &Frame, xlabel: &str, ylabel: &str, font: f64) {
    let (l, t, w, h) = (f.left, f.top, f.width, f.height);
    let _ = writeln!(
        svg,
        r##"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="white" stroke="#333" stroke-width="1"/>"##
    );
    for x in ticks(f.x.0, f.x.1, 6) {
        let px = f.px(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#333"/><text x="{px:.2}" y="{:.2}" font-size="{font}" text-anchor="middle">{}</text>"##,
            t + h,
            t + h + 4.0,
            t + h + 4.0 + font,
            fmt_tick(x)
        );
    }
    for y in ticks(f.y.0, f.y.1, 5) {
        let py = f.py(y);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{l:.2}" y2="{py:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" font-size="{font}" text-anchor="end">{}</text>"##,
            l - 4.0,
            l - 6.0,
            py + 0.35 * font,
            fmt_tick(y)
        );
    }
    if !xlabel.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="{font}" text-anchor="middle">{}</text>"#,
            l + 0.5 * w,
            t + h + 8.0 + 2.2 * font,
            escape(xlabel)
        );
    }
    if !ylabel.is_empty() {
        let (cx, cy) = (l - 3.6 * font, t + 0.5 * h);
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{cy:.2}" font-size="{font}" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
            escape(ylabel)
        );
    }
}

fn polyline(svg: &mut String, f: &Frame, s: &Series, width: f64) {
    let mut pts = String::new();
    for &(x, y) in &s.points {
        if x >= f.x.0 && x <= f.x.1 {
            let y = y.clamp(f.y.0, f.y.1);
            let _ = write!(pts, "{:.2},{:.2} ", f.px(x), f.py(y));
        }
    }
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{width}"/>"#,
        pts.trim_end(),
        s.color
    );
}

fn legend(svg: &mut String, f: &Frame, entries: &[(&str, &str)], font: f64) {
    let x = f.left + 10.0;
    for (k, (label, color)) in entries.iter().enumerate() {
        let y = f.top + 14.0 + k as f64 * (font + 6.0);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2.5"/><text x="{:.2}" y="{:.2}" font-size="{font}">{}</text>"#,
            x + 22.0,
            x + 28.0,
            y + 0.35 * font,
            escape(label)
        );
    }
}

fn y_window(series: &[Series], x: (f64, f64)) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for &(px, py) in &s.points {
            if px >= x.0 && px <= x.1 {
                lo = lo.min(py);
                hi = hi.max(py);
            }
        }
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let lo = lo.min(0.0);
    let pad = 0.05 * (hi - lo).max(1e-12);
    (lo, hi + pad)
}

fn open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Line plot of several series over `x`.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, x: (f64, f64), series: &[Series]) -> String {
    let mut svg = open(720.0, 480.0);
    let f = Frame {
        left: 80.0,
        top: 40.0,
        width: 610.0,
        height: 370.0,
        x,
        y: y_window(series, x),
    };
    let _ = writeln!(svg, r#"<text x="360" y="24" font-size="16" text-anchor="middle">{}</text>"#, escape(title));
    axes(&mut svg, &f, xlabel, ylabel, 12.0);
    for s in series {
        polyline(&mut svg, &f, s, 1.8);
    }
    let entries: Vec<(&str, &str)> = series.iter().map(|s| (s.label.as_str(), s.color.as_str())).collect();
    legend(&mut svg, &f, &entries, 12.0);
    svg.push_str("</svg>\n");
    svg
}

/// Final momentum densities of both sides for one `tau2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfPair {
    pub tau2: f64,
    pub quantum: MomentumDistribution,
    pub classical: MomentumDistribution,
}

impl PdfPair {
    pub fn closed_form(tau2: f64, p0: f64, dp: f64, n: usize) -> Result<Self> {
        Ok(Self {
            tau2,
            quantum: FinalPdf::standard(Side::Quantum, tau2)?.sample(p0, dp, n)?,
            classical: FinalPdf::standard(Side::Classical, tau2)?.sample(p0, dp, n)?,
        })
    }
}

/// Main panel `tau2 = 1` on `p in [-3, 8]`, inset `tau2 = 10` on `[-10, 60]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Data {
    pub main: PdfPair,
    pub inset: PdfPair,
}

pub fn fig2_data() -> Result<Fig2Data> {
    Ok(Fig2Data {
        main: PdfPair::closed_form(1.0, -3.0, 0.01, 1101)?,
        inset: PdfPair::closed_form(10.0, -10.0, 0.05, 1401)?,
    })
}

pub fn fig2_svg(data: &Fig2Data) -> String {
    let mut svg = open(720.0, 480.0);
    let main = [
        Series::from_dist("quantum", QUANTUM_COLOR, &data.main.quantum),
        Series::from_dist("classical", CLASSICAL_COLOR, &data.main.classical),
    ];
    let xm = (data.main.quantum.p0, data.main.quantum.p(data.main.quantum.len() - 1));
    let f = Frame {
        left: 80.0,
        top: 40.0,
        width: 610.0,
        height: 370.0,
        x: xm,
        y: y_window(&main, xm),
    };
    let _ = writeln!(
        svg,
        r#"<text x="360" y="24" font-size="16" text-anchor="middle">Final momentum distributions, tau2 = {}</text>"#,
        data.main.tau2
    );
    axes(&mut svg, &f, "p", "density", 12.0);
    for s in &main {
        polyline(&mut svg, &f, s, 1.8);
    }
    legend(&mut svg, &f, &[("quantum", QUANTUM_COLOR), ("classical", CLASSICAL_COLOR)], 12.0);

    let inset = [
        Series::from_dist("quantum", QUANTUM_COLOR, &data.inset.quantum),
        Series::from_dist("classical", CLASSICAL_COLOR, &data.inset.classical),
    ];
    let xi = (data.inset.quantum.p0, data.inset.quantum.p(data.inset.quantum.len() - 1));
    let g = Frame {
        left: 420.0,
        top: 70.0,
        width: 250.0,
        height: 150.0,
        x: xi,
        y: y_window(&inset, xi),
    };
    axes(&mut svg, &g, "", "", 9.0);
    for s in &inset {
        polyline(&mut svg, &g, s, 1.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">tau2 = {}</text>"#,
        g.left + g.width - 6.0,
        g.top + 14.0,
        data.inset.tau2
    );
    svg.push_str("</svg>\n");
    svg
}

pub fn fig2_csv(data: &Fig2Data) -> String {
    let mut s = String::from("panel,tau2,p,quantum,classical\n");
    for (panel, pair) in [("main", &data.main), ("inset", &data.inset)] {
        for (j, (p, q)) in pair.quantum.points().enumerate() {
            let _ = writeln!(s, "{panel},{},{p},{q},{}", pair.tau2, pair.classical.values[j]);
        }
    }
    s
}

/// `<p^n exp(-p^2)>` on both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Row {
    pub n: u32,
    pub quantum: f64,
    pub classical: f64,
}

impl Fig3Row {
    pub fn difference(&self) -> f64 {
        self.quantum - self.classical
    }
}

pub fn fig3_data(tau2: f64) -> Result<Vec<Fig3Row>> {
    let q = FinalPdf::standard(Side::Quantum, tau2)?;
    let c = FinalPdf::standard(Side::Classical, tau2)?;
    (0..=8)
        .map(|n| {
            let g = ObservableSpec::PowerGaussian(n);
            Ok(Fig3Row {
                n,
                quantum: pdf_expectation(&q, g)?,
                classical: pdf_expectation(&c, g)?,
            })
        })
        .collect()
}

pub fn fig3_svg(rows: &[Fig3Row]) -> String {
    let mut svg = open(720.0, 480.0);
    let hi = rows.iter().map(|r| r.quantum.max(r.classical)).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.quantum.min(r.classical).min(r.difference())).fold(0.0, f64::min);
    let f = Frame {
        left: 80.0,
        top: 40.0,
        width: 610.0,
        height: 370.0,
        x: (-0.5, rows.len() as f64 - 0.5),
        y: (lo, hi * 1.1 + 1e-12),
    };
    let _ = writeln!(
        svg,
        r#"<text x="360" y="24" font-size="16" text-anchor="middle">Expectations of p^n exp(-p^2)</text>"#
    );
    axes(&mut svg, &f, "n", "expectation", 12.0);
    let bw = 0.3 * f.width / rows.len().max(1) as f64;
    let zero = f.py(0.0);
    for r in rows {
        let cx = f.px(r.n as f64);
        for (off, v, color) in [(-bw, r.quantum, QUANTUM_COLOR), (0.0, r.classical, CLASSICAL_COLOR)] {
            let y = f.py(v);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{bw:.2}" height="{:.2}" fill="{color}"/>"#,
                cx + off,
                y.min(zero),
                (zero - y).abs()
            );
        }
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#333"><title>n={} difference={:.6}</title></circle>"##,
            cx + bw + 4.0,
            f.py(r.difference()),
            r.n,
            r.difference()
        );
    }
    legend(
        &mut svg,
        &Frame { left: f.left + f.width - 170.0, ..f },
        &[("quantum", QUANTUM_COLOR), ("classical", CLASSICAL_COLOR), ("difference", "#333")],
        12.0,
    );
    svg.push_str("</svg>\n");
    svg
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    let mut s = String::from("n,quantum,classical,difference\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.n, r.quantum, r.classical, r.difference());
    }
    s
}

/// Discrepancy against `log10(D / h^{4/3})`, one line per `h`, with the
/// `c0 / 2` level dashed.
pub fn threshold_svg(records: &[SweepRecord], half_c0: f64) -> String {
    let mut hs: Vec<f64> = records.iter().map(|r| r.h).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    let series: Vec<Series> = hs
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let mut pts: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.h == h && r.d > 0.0)
                .map(|r| (r.d_scaled.log10(), r.discrepancy_g0))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series::new(format!("h = {h}"), PALETTE[k % PALETTE.len()], pts)
        })
        .collect();
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let x = if x0.is_finite() && x1 > x0 { (x0 - 0.1, x1 + 0.1) } else { (-1.0, 1.0) };
    let mut svg = line_plot("Quantum-classical discrepancy of exp(-p^2)", "log10(D / h^(4/3))", "discrepancy", x, &series);
    let y = y_window(&series, x);
    let f = Frame {
        left: 80.0,
        top: 40.0,
        width: 610.0,
        height: 370.0,
        x,
        y,
    };
    if half_c0 >= y.0 && half_c0 <= y.1 {
        let line = format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#777\" stroke-dasharray=\"6 4\"/>\n</svg>\n",
            f.left,
            f.py(half_c0),
            f.left + f.width,
            f.py(half_c0)
        );
        svg.truncate(svg.len() - "</svg>\n".len());
        svg.push_str(&line);
    }
    svg
}

/// Shape statistics read back from the emitted figures.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSummary {
    /// Local maxima of the quantum curve on `p in (0, 3)`, main panel.
    pub main_quantum_maxima: usize,
    pub main_classical_maxima: usize,
    /// Quantum maxima per momentum standard deviation `sqrt(1 + 2 tau2^2)`
    /// across each panel's window.
    pub main_density: f64,
    pub inset_density: f64,
    pub g0_difference: f64,
}

pub fn summarize(fig2: &Fig2Data, fig3: &[Fig3Row]) -> FigureSummary {
    let density = |pair: &PdfPair| {
        let d = &pair.quantum;
        let (lo, hi) = (d.p0, d.p(d.len() - 1));
        let sigma = (1.0 + 2.0 * pair.tau2 * pair.tau2).sqrt();
        d.local_maxima(lo, hi) as f64 * sigma / (hi - lo)
    };
    FigureSummary {
        main_quantum_maxima: fig2.main.quantum.local_maxima(0.0, 3.0),
        main_classical_maxima: fig2.main.classical.local_maxima(f64::NEG_INFINITY, f64::INFINITY),
        main_density: density(&fig2.main),
        inset_density: density(&fig2.inset),
        g0_difference: fig3.first().map(|r| r.difference()).unwrap_or(f64::NAN),
    }
}

/// Writes `fig2.svg`, `fig2.csv`, `fig3.svg`, `fig3.csv` and, for a
/// nonempty record list, `threshold.svg`.
pub fn emit_figures(dir: &Path, records: &[SweepRecord]) -> Result<FigureSummary> {
    fs::create_dir_all(dir)?;
    let f2 = fig2_data()?;
    let f3 = fig3_data(1.0)?;
    fs::write(dir.join("fig2.svg"), fig2_svg(&f2))?;
    fs::write(dir.join("fig2.csv"), fig2_csv(&f2))?;
    fs::write(dir.join("fig3.svg"), fig3_svg(&f3))?;
    fs::write(dir.join("fig3.csv"), fig3_csv(&f3))?;
    if !records.is_empty() {
        let c0 = f3[0].difference().abs();
        fs::write(dir.join("threshold.svg"), threshold_svg(records, 0.5 * c0))?;
    }
    Ok(summarize(&f2, &f3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps() {
        assert_eq!(ticks(0.0, 1.0, 5), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(-3.0, 8.0, 6), vec![-2.0, 0.0, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(fmt_tick(-0.0), "0");
        assert_eq!(fmt_tick(0.25), "0.25");
    }

    #[test]
    fn plot_is_well_formed() {
        let s = Series::new("a<b", "#000", vec![(0.0, 0.0), (1.0, 1.0)]);
        let svg = line_plot("t", "x", "y", (0.0, 1.0), &[s]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
