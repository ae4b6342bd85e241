//! Reading and writing scaling curves.
//!
//! The CSV format is the interchange surface for measured data: header
//! exactly `n_gpus,epoch_time_s`, UTF-8, LF line endings, rows ascending in
//! n_gpus, times printed with full round-trip precision. Emit followed by
//! load is an identity.

use std::path::Path;

use crate::config::CurveFormat;
use crate::error::{Error, Result};
use crate::simulator::{CurvePoint, ScalingCurve};

pub const CURVE_CSV_HEADER: &str = "n_gpus,epoch_time_s";

/// Render a curve as CSV. Rust's default float formatting prints the
/// shortest string that parses back to the same f64, so loading the output
/// reproduces the curve exactly.
pub fn curve_to_csv(curve: &ScalingCurve) -> String {
    let mut out = String::from(CURVE_CSV_HEADER);
    out.push('\n');
    for p in curve.points() {
        out.push_str(&format!("{},{}\n", p.n_gpus, p.epoch_time_s));
    }
    out
}

/// Render a curve as a JSON object with keys `label` and `points`.
pub fn curve_to_json(curve: &ScalingCurve) -> String {
    let mut s = serde_json::to_string_pretty(curve).expect("curve serializes");
    s.push('\n');
    s
}

/// Write a curve to `path` in the given format.
pub fn emit_curve(curve: &ScalingCurve, path: impl AsRef<Path>, format: CurveFormat) -> Result<()> {
    let path = path.as_ref();
    let content = match format {
        CurveFormat::Csv => curve_to_csv(curve),
        CurveFormat::Json => curve_to_json(curve),
    };
    std::fs::write(path, content).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Load a curve from a CSV file. The curve label is the file stem. Every
/// violation reports its row number: bad header, wrong field count,
/// non-numeric cells, non-positive times, and non-increasing GPU counts.
pub fn load_curve_csv(path: impl AsRef<Path>) -> Result<ScalingCurve> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::CurveRead {
        path: path.to_path_buf(),
        source,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "curve".to_string());
    parse_curve_csv(path, &label, &text)
}

fn parse_curve_csv(path: &Path, label: &str, text: &str) -> Result<ScalingCurve> {
    let err = |row: usize, message: String| Error::CurveParse {
        path: path.to_path_buf(),
        row,
        message,
    };

    let mut lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    let Some((&header, rows)) = lines.split_first() else {
        return Err(err(1, "empty file, expected header `n_gpus,epoch_time_s`".into()));
    };
    if header != CURVE_CSV_HEADER {
        return Err(err(
            1,
            format!("header mismatch: expected `{CURVE_CSV_HEADER}`, got `{header}`"),
        ));
    }

    let mut points: Vec<CurvePoint> = Vec::with_capacity(rows.len());
    for (i, line) in rows.iter().enumerate() {
        let row = i + 2; // 1-based, after the header
        if line.is_empty() {
            return Err(err(row, "empty row".into()));
        }
        let mut fields = line.split(',');
        let (Some(n_str), Some(t_str), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(err(row, format!("expected 2 comma-separated fields, got `{line}`")));
        };
        let n_gpus: u32 = n_str
            .trim()
            .parse()
            .map_err(|_| err(row, format!("non-numeric n_gpus `{n_str}`")))?;
        let epoch_time_s: f64 = t_str
            .trim()
            .parse()
            .map_err(|_| err(row, format!("non-numeric epoch_time_s `{t_str}`")))?;
        if n_gpus < 1 {
            return Err(err(row, "n_gpus must be >= 1".into()));
        }
        if !(epoch_time_s.is_finite() && epoch_time_s > 0.0) {
            return Err(err(
                row,
                format!("epoch_time_s must be a finite value > 0, got {epoch_time_s}"),
            ));
        }
        if let Some(prev) = points.last() {
            if n_gpus <= prev.n_gpus {
                return Err(err(
                    row,
                    format!("n_gpus {} not greater than previous {}", n_gpus, prev.n_gpus),
                ));
            }
        }
        points.push(CurvePoint {
            n_gpus,
            epoch_time_s,
        });
    }

    if points.is_empty() {
        return Err(err(2, "no data rows".into()));
    }
    ScalingCurve::new(label, points)
}
