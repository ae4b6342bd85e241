//! Power-law fits over scaling curves and what follows from them: speedups,
//! goodness of fit, diminishing-returns knees, and allocation plans.
//!
//! The law is `t = alpha * n^(-beta)`. Fitting is ordinary least squares on
//! (ln n, ln t): the slope is -beta and the intercept is ln alpha. R^2 is
//! computed in the same log space, which makes it independent of the absolute
//! time scale; each grid point carries equal weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simulator::ScalingCurve;

/// Result of fitting `t = alpha * n^(-beta)` to a curve.
///
/// `alpha` is the predicted epoch time at n = 1. `beta` may be negative for
/// anti-scaling curves; consumers decide whether that is an error. With
/// exactly two points the line is exact, so `r_squared` is 1 by construction
/// and `is_two_point()` reports the fit as unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn is_two_point(&self) -> bool {
        self.n_points == 2
    }

    /// Epoch time the law predicts at `n_gpus`.
    pub fn predict(&self, n_gpus: u32) -> f64 {
        self.alpha * (n_gpus as f64).powf(-self.beta)
    }
}

/// Variance threshold below which log times are treated as constant.
const LOG_VARIANCE_FLOOR: f64 = 1e-18;

/// Least-squares fit of the power law in log space.
pub fn fit_power_law(curve: &ScalingCurve) -> Result<PowerLawFit> {
    let pts = curve.points();
    if pts.len() < 2 {
        return Err(Error::InsufficientData {
            label: curve.label().to_string(),
            points: pts.len(),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| (p.n_gpus as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.epoch_time_s.ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidCurve {
            label: curve.label().to_string(),
            message: "log epoch times must be finite".into(),
        });
    }

    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let slope = sxy / sxx; // sxx > 0: counts are strictly increasing
    let alpha = (y_mean - slope * x_mean).exp();

    let r_squared = if pts.len() == 2 {
        1.0 // a line through two points is exact
    } else {
        let mut ss_res = 0.0;
        let mut ss_tot = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            let fitted = y_mean + slope * (x - x_mean);
            ss_res += (y - fitted) * (y - fitted);
            ss_tot += (y - y_mean) * (y - y_mean);
        }
        if ss_tot < LOG_VARIANCE_FLOOR {
            1.0
        } else {
            1.0 - ss_res / ss_tot
        }
    };

    Ok(PowerLawFit {
        alpha,
        beta: -slope,
        r_squared,
        n_points: pts.len(),
    })
}

/// Coefficient of determination of `fit` against `curve`, over log epoch
/// times. May be negative for a fit that is worse than the mean. A constant
/// curve scores 1 when the fit reproduces it and errors otherwise, since no
/// amount of variance explanation can be attributed.
pub fn r_squared_log(curve: &ScalingCurve, fit: &PowerLawFit) -> Result<f64> {
    let pts = curve.points();
    if pts.len() < 2 {
        return Err(Error::InsufficientData {
            label: curve.label().to_string(),
            points: pts.len(),
        });
    }
    let ys: Vec<f64> = pts.iter().map(|p| p.epoch_time_s.ln()).collect();
    let y_mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ln_alpha = fit.alpha.ln();
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (p, y) in pts.iter().zip(&ys) {
        let fitted = ln_alpha - fit.beta * (p.n_gpus as f64).ln();
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    if ss_tot < LOG_VARIANCE_FLOOR {
        if ss_res < LOG_VARIANCE_FLOOR {
            Ok(1.0)
        } else {
            Err(Error::DegenerateCurve {
                label: curve.label().to_string(),
            })
        }
    } else {
        Ok(1.0 - ss_res / ss_tot)
    }
}

/// Measured speedup between two grid values: `t(n_from) / t(n_to)`.
pub fn speedup(curve: &ScalingCurve, n_from: u32, n_to: u32) -> Result<f64> {
    let t_from = curve.time_at(n_from).ok_or_else(|| Error::CountNotInCurve {
        label: curve.label().to_string(),
        n_gpus: n_from,
    })?;
    let t_to = curve.time_at(n_to).ok_or_else(|| Error::CountNotInCurve {
        label: curve.label().to_string(),
        n_gpus: n_to,
    })?;
    Ok(t_from / t_to)
}

/// Speedup the fitted law predicts between two GPU counts:
/// `(n_to / n_from)^beta`.
pub fn predicted_speedup(fit: &PowerLawFit, n_from: u32, n_to: u32) -> f64 {
    (n_to as f64 / n_from as f64).powf(fit.beta)
}

/// Smallest grid value from which scaling stays degraded.
///
/// For each consecutive pair the local slope is normalized to a doubling:
/// `(t_i / t_{i+1}) ^ (ln 2 / ln(n_{i+1} / n_i))`. The knee is the smallest
/// `n_i` whose pair and every later pair fall below `min_doubling_speedup`;
/// `None` when scaling never degrades that far. Grids here are rarely uniform
/// doublings (e.g. 256 -> 364 -> 416), hence the normalization.
pub fn detect_knee(curve: &ScalingCurve, min_doubling_speedup: f64) -> Result<Option<u32>> {
    if !(min_doubling_speedup.is_finite() && min_doubling_speedup > 1.0) {
        return Err(Error::InvalidThreshold {
            threshold: min_doubling_speedup,
        });
    }
    let pts = curve.points();
    let mut knee = None;
    for i in (0..pts.len().saturating_sub(1)).rev() {
        let ratio = pts[i].epoch_time_s / pts[i + 1].epoch_time_s;
        let exponent =
            std::f64::consts::LN_2 / (pts[i + 1].n_gpus as f64 / pts[i].n_gpus as f64).ln();
        let per_doubling = ratio.powf(exponent);
        if per_doubling < min_doubling_speedup {
            knee = Some(pts[i].n_gpus);
        } else {
            break; // the all-below suffix cannot start at or before i
        }
    }
    Ok(knee)
}

/// Drop everything after the curve's minimum (ties keep the earliest
/// minimum). Useful for fitting saturating curves over their scaling regime
/// only.
pub fn truncate_at_min(curve: &ScalingCurve) -> ScalingCurve {
    let (n_min, _) = crate::simulator::find_min_time(curve);
    let pts: Vec<_> = curve
        .points()
        .iter()
        .take_while(|p| p.n_gpus <= n_min)
        .copied()
        .collect();
    ScalingCurve::new(curve.label(), pts).expect("prefix of a valid curve is valid")
}

/// A recommended GPU allocation derived from a fitted law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AllocationPlan {
    pub n_gpus: u32,
    pub predicted_epoch_time: f64,
    /// Predicted speedup relative to a single GPU: `n^beta`.
    pub speedup_vs_baseline: f64,
    /// Speedup per GPU spent: `speedup / n`. At most 1 when beta <= 1.
    pub efficiency: f64,
    /// Total GPU time per epoch, `n * t(n)`; the cost side of the trade.
    pub gpu_seconds_per_epoch: f64,
    /// Set when even `n_max` GPUs miss the target; the plan then carries the
    /// `n_max` figures.
    pub unreachable: bool,
}

/// Smallest GPU count whose predicted epoch time meets `target_epoch_time`,
/// clamped to `[1, n_max]`: `n = ceil((alpha / target)^(1/beta))`.
pub fn allocate_for_target(
    fit: &PowerLawFit,
    target_epoch_time: f64,
    n_max: u32,
) -> Result<AllocationPlan> {
    if !(target_epoch_time.is_finite() && target_epoch_time > 0.0) {
        return Err(Error::InvalidTarget {
            target: target_epoch_time,
        });
    }
    if !(fit.beta.is_finite() && fit.beta > 0.0) {
        return Err(Error::NonScalingLaw { beta: fit.beta });
    }
    let n_max = n_max.max(1);
    let raw = (fit.alpha / target_epoch_time).powf(1.0 / fit.beta);
    // f64 -> u32 casts saturate, which is exactly the clamp we want on the
    // high side.
    let n = (raw.ceil() as u32).clamp(1, n_max);
    let predicted_epoch_time = fit.predict(n);
    let speedup_vs_baseline = (n as f64).powf(fit.beta);
    Ok(AllocationPlan {
        n_gpus: n,
        predicted_epoch_time,
        speedup_vs_baseline,
        efficiency: speedup_vs_baseline / n as f64,
        gpu_seconds_per_epoch: n as f64 * predicted_epoch_time,
        unreachable: predicted_epoch_time > target_epoch_time,
    })
}

/// One row of the scaling report: a model, its size, and its fitted law.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub model: String,
    pub param_count: u64,
    pub fit: PowerLawFit,
}

/// Scaling report over several fitted models, rendered as Markdown, CSV or
/// JSON. Rows keep their input order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

pub fn make_report(entries: Vec<ReportEntry>) -> Report {
    Report { entries }
}

impl Report {
    /// Markdown pipe table with beta and R^2 at two decimals and parameter
    /// counts in two-significant-digit scientific notation. Two-point fits
    /// are marked with `*` and a footnote.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Model | Number of Parameters | beta | R2 |\n");
        out.push_str("| --- | --- | --- | --- |\n");
        let mut any_two_point = false;
        for e in &self.entries {
            let marker = if e.fit.is_two_point() {
                any_two_point = true;
                "*"
            } else {
                ""
            };
            out.push_str(&format!(
                "| {} | {} | {:.2}{} | {:.2} |\n",
                e.model,
                format_param_count(e.param_count),
                e.fit.beta,
                marker,
                e.fit.r_squared,
            ));
        }
        if any_two_point {
            out.push_str("\n\\* two-point fit: the line is exact by construction\n");
        }
        out
    }

    /// Machine-readable CSV with unrounded values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,param_count,beta,r_squared,n_points\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.model, e.param_count, e.fit.beta, e.fit.r_squared, e.fit.n_points
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Two significant digits in scientific notation: 2100000 -> "2.1e6".
fn format_param_count(count: u64) -> String {
    let v = count as f64;
    let mut exp = v.log10().floor() as i32;
    let mut mantissa = (v / 10f64.powi(exp) * 10.0).round() / 10.0;
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exp += 1;
    }
    format!("{mantissa:.1}e{exp}")
}
