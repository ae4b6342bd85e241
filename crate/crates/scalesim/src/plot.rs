//! Self-contained SVG scatter plot of scaling curves on log-log axes, with
//! optional fitted power-law lines (straight lines in log-log space).
//!
//! The renderer is deliberately dependency-free and formats every coordinate
//! with fixed precision, so identical inputs produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scaling::PowerLawFit;
use crate::simulator::ScalingCurve;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 65.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Write the plot to `path`. `fits` must be empty or carry one fit per curve,
/// in the same order.
pub fn emit_plot(
    curves: &[ScalingCurve],
    fits: &[PowerLawFit],
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_plot_svg(curves, fits)?;
    let path = path.as_ref();
    std::fs::write(path, svg).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Render the SVG document as a string.
pub fn render_plot_svg(curves: &[ScalingCurve], fits: &[PowerLawFit]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::EmptyPlot);
    }
    if !fits.is_empty() && fits.len() != curves.len() {
        return Err(Error::FitCountMismatch {
            curves: curves.len(),
            fits: fits.len(),
        });
    }

    let mut ln_x = RangeTracker::new();
    let mut ln_y = RangeTracker::new();
    for c in curves {
        for p in c.points() {
            ln_x.add((p.n_gpus as f64).ln());
            ln_y.add(p.epoch_time_s.ln());
        }
    }
    for (fit, curve) in fits.iter().zip(curves) {
        let first = curve.points()[0].n_gpus;
        let last = curve.points()[curve.len() - 1].n_gpus;
        ln_y.add(fit.predict(first).ln());
        ln_y.add(fit.predict(last).ln());
    }
    let (x_lo, x_hi) = ln_x.padded();
    let (y_lo, y_hi) = ln_y.padded();

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |ln_v: f64| MARGIN_LEFT + (ln_v - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |ln_v: f64| MARGIN_TOP + (y_hi - ln_v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // gridlines and tick labels
    for v in log_ticks(x_lo, x_hi) {
        let x = px(v.ln());
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y1:.2}" x2="{x:.2}" y2="{y2:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            y1 = MARGIN_TOP,
            y2 = MARGIN_TOP + plot_h,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"#,
            y = MARGIN_TOP + plot_h + 18.0,
            label = tick_label(v),
        );
    }
    for v in log_ticks(y_lo, y_hi) {
        let y = py(v.ln());
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            x1 = MARGIN_LEFT,
            x2 = MARGIN_LEFT + plot_w,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{label}</text>"#,
            x = MARGIN_LEFT - 8.0,
            y = y + 4.0,
            label = tick_label(v),
        );
    }

    // frame
    let _ = writeln!(
        svg,
        r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        x = MARGIN_LEFT,
        y = MARGIN_TOP,
        w = plot_w,
        h = plot_h,
    );

    // fitted lines first, under the data
    for (i, (fit, curve)) in fits.iter().zip(curves).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let first = curve.points()[0].n_gpus as f64;
        let last = curve.points()[curve.len() - 1].n_gpus as f64;
        let (x1, y1) = (px(first.ln()), py(fit.alpha.ln() - fit.beta * first.ln()));
        let (x2, y2) = (px(last.ln()), py(fit.alpha.ln() - fit.beta * last.ln()));
        let _ = writeln!(
            svg,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#
        );
    }

    // data: polyline plus markers per curve
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if curve.len() > 1 {
            let mut pts = String::new();
            for p in curve.points() {
                let _ = write!(
                    pts,
                    "{:.2},{:.2} ",
                    px((p.n_gpus as f64).ln()),
                    py(p.epoch_time_s.ln())
                );
            }
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1" opacity="0.6"/>"#,
                pts.trim_end(),
            );
        }
        for p in curve.points() {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#,
                px((p.n_gpus as f64).ln()),
                py(p.epoch_time_s.ln()),
            );
        }
    }

    // legend
    let legend_x = MARGIN_LEFT + plot_w + 16.0;
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + i as f64 * 22.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            x1 = legend_x,
            x2 = legend_x + 22.0,
        );
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{y:.2}" r="3.5" fill="{color}"/>"#,
            cx = legend_x + 11.0,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{ty:.2}" font-family="sans-serif" font-size="13">{label}</text>"#,
            x = legend_x + 28.0,
            ty = y + 4.0,
            label = xml_escape(curve.label()),
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">Number of GPUs</text>"#,
        x = MARGIN_LEFT + plot_w / 2.0,
        y = HEIGHT - 18.0,
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">Training time per epoch (s)</text>"#,
        x = 22.0,
        y = MARGIN_TOP + plot_h / 2.0,
    );

    svg.push_str("</svg>\n");
    Ok(svg)
}

struct RangeTracker {
    lo: f64,
    hi: f64,
}

impl RangeTracker {
    fn new() -> Self {
        RangeTracker {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, v: f64) {
        self.lo = self.lo.min(v);
        self.hi = self.hi.max(v);
    }

    /// Pad by 6% of the span; degenerate spans widen to one doubling.
    fn padded(&self) -> (f64, f64) {
        let span = self.hi - self.lo;
        if span < 1e-9 {
            (self.lo - std::f64::consts::LN_2, self.hi + std::f64::consts::LN_2)
        } else {
            (self.lo - 0.06 * span, self.hi + 0.06 * span)
        }
    }
}

/// Tick values at 1/2/5 per decade within the (log-space) range.
fn log_ticks(ln_lo: f64, ln_hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let k_lo = (ln_lo / std::f64::consts::LN_10).floor() as i32;
    let k_hi = (ln_hi / std::f64::consts::LN_10).ceil() as i32;
    for k in k_lo..=k_hi {
        for m in [1.0, 2.0, 5.0] {
            let v = m * 10f64.powi(k);
            let ln_v = v.ln();
            if ln_v >= ln_lo && ln_v <= ln_hi {
                out.push(v);
            }
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    if (1.0..1e6).contains(&v) {
        format!("{}", v.round() as u64)
    } else {
        format!("{v}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
