//! Numeric growth estimates from samples on tori and circles. Everything
//! here is an estimate; nothing is certified.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::source::EvalOracle;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupNormOptions {
    /// Initial samples per variable.
    pub grid: usize,
    /// Stop refining once the relative change is below this.
    pub rel_tol: f64,
    /// Upper limit on samples per torus.
    pub max_points: usize,
}

impl Default for SupNormOptions {
    fn default() -> Self {
        SupNormOptions { grid: 128, rel_tol: 1e-4, max_points: 1 << 17 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupNormEstimate {
    /// Lower estimate of `|f|_r`.
    pub value: f64,
    /// Change at the last refinement.
    pub refinement_delta: f64,
    /// Samples per variable at the last refinement.
    pub grid: usize,
}

fn torus_max<F: EvalOracle + ?Sized>(f: &F, center: &[Complex64], r: f64, m: usize) -> Result<f64> {
    let n = f.dim();
    let total = m.pow(n as u32);
    let unit: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    let v = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let z: Vec<Complex64> = center
                .iter()
                .map(|c| {
                    let p = c + unit[rest % m];
                    rest /= m;
                    p
                })
                .collect();
            f.eval(&z).norm()
        })
        .reduce(|| 0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) });
    if v.is_nan() {
        return Err(Error::NonFinite(format!("function value on the torus of radius {r}")));
    }
    Ok(v)
}

/// Largest per-variable grid size, a power-of-two multiple of
/// `options.grid` or a power of two below it, within the point budget.
fn base_grid(n: usize, options: &SupNormOptions) -> usize {
    let mut m = options.grid.max(8);
    while m > 8 && m.checked_pow(n as u32).is_none_or(|t| t > options.max_points) {
        m /= 2;
    }
    m
}

/// `max |f|` on the torus `|z_j| = r`, refined by doubling the grid until
/// the relative change is below `rel_tol` or the point budget is reached.
/// Grids are nested, so the estimates never decrease.
pub fn sup_norm<F: EvalOracle + ?Sized>(f: &F, r: f64, options: &SupNormOptions) -> Result<SupNormEstimate> {
    sup_norm_about(f, &vec![Complex64::new(0.0, 0.0); f.dim()], r, options)
}

pub fn sup_norm_about<F: EvalOracle + ?Sized>(
    f: &F,
    center: &[Complex64],
    r: f64,
    options: &SupNormOptions,
) -> Result<SupNormEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if options.grid < 8 {
        return Err(Error::InvalidArgument(format!("grid must be at least 8, got {}", options.grid)));
    }
    crate::error::check_dim(f.dim(), center.len())?;
    let n = f.dim();
    let mut m = base_grid(n, options);
    let mut value = torus_max(f, center, r, m)?;
    let mut delta = f64::INFINITY;
    while (2 * m).checked_pow(n as u32).is_some_and(|t| t <= options.max_points) {
        let next = torus_max(f, center, r, 2 * m)?;
        delta = next - value;
        value = next;
        m *= 2;
        if delta <= options.rel_tol * value.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("sup norm at radius {r}")));
    }
    Ok(SupNormEstimate { value, refinement_delta: if delta.is_finite() { delta } else { 0.0 }, grid: m })
}

/// Geometric radii from `start` to `end`.
pub fn geometric_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > start && count >= 4) {
        return Err(Error::InvalidArgument(format!(
            "radius grid needs 0 < start < end and at least 4 points, got {start}..{end} x {count}"
        )));
    }
    let ratio = (end / start).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| start * (ratio * k as f64).exp()).collect())
}

pub fn default_r_grid() -> Vec<f64> {
    geometric_grid(1.0, 200.0, 40).expect("valid defaults")
}

fn check_r_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.len() < 4 || r_grid[0] <= 0.0 || r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radius grid must be positive, strictly increasing, with at least 4 points".into()));
    }
    Ok(())
}

/// Least-squares slope.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Slopes over sliding windows covering the top half of the samples.
fn tail_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let start = x.len() / 2;
    let tail = x.len() - start;
    let width = (tail / 2).max(3).min(tail);
    (start..=x.len() - width).map(|s| slope(&x[s..s + width], &y[s..s + width])).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionalType {
    pub direction: Vec<Complex64>,
    /// Radii actually used (the grid is cut where `|f|` overflows).
    pub radii: Vec<f64>,
    /// `ln max_{|ζ| = r} |f(ζw)|` per radius.
    pub log_sup: Vec<f64>,
    /// Largest tail-window slope of `log_sup` against `r`.
    pub type_estimate: f64,
    /// Largest tail-window slope of `ln ln |g|_r` against `ln r`.
    pub order_estimate: f64,
    /// Window slopes agree within 10% (relative to `max(type, 1)`).
    pub stable: bool,
    pub notes: Vec<String>,
}

/// Samples on a circle of radius `r` for a function of type about `r·|w|`.
fn circle_samples(r: f64, w_norm: f64, base: usize) -> usize {
    let want = (16.0 * r * w_norm).ceil() as usize + base;
    want.next_power_of_two().min(1 << 16)
}

/// Growth of `ζ ↦ f(ζw)` along the complex line through `w`.
pub fn estimate_directional_type<F: EvalOracle + ?Sized>(
    f: &F,
    w: &[Complex64],
    r_grid: &[f64],
    options: &SupNormOptions,
) -> Result<DirectionalType> {
    crate::error::check_dim(f.dim(), w.len())?;
    check_r_grid(r_grid)?;
    let w_norm = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let sups: Vec<f64> = r_grid
        .par_iter()
        .map(|&r| {
            let m = circle_samples(r, w_norm, options.grid);
            (0..m)
                .map(|k| {
                    let zeta = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64);
                    let z: Vec<Complex64> = w.iter().map(|c| c * zeta).collect();
                    f.eval(&z).norm()
                })
                .fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
        })
        .collect();
    let mut notes = Vec::new();
    let usable = sups.iter().position(|v| !v.is_finite()).unwrap_or(sups.len());
    if usable < sups.len() {
        notes.push(format!("values overflow beyond r = {}; radius grid truncated", r_grid[usable.saturating_sub(1)]));
    }
    if usable < 4 {
        return Err(Error::NonFinite("function overflows on most of the radius grid".into()));
    }
    let radii = r_grid[..usable].to_vec();
    let sups = &sups[..usable];
    let direction = w.to_vec();
    if sups.iter().all(|&v| v == 0.0) {
        notes.push("function vanishes on this line".into());
        return Ok(DirectionalType {
            direction,
            log_sup: vec![f64::NEG_INFINITY; radii.len()],
            radii,
            type_estimate: 0.0,
            order_estimate: 0.0,
            stable: true,
            notes,
        });
    }
    let floor = f64::MIN_POSITIVE;
    let log_sup: Vec<f64> = sups.iter().map(|v| v.max(floor).ln()).collect();
    let slopes = tail_slopes(&radii, &log_sup);
    let max_slope = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_slope = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    let type_estimate = max_slope.max(0.0);
    let stable = (max_slope - min_slope) <= 0.1 * type_estimate.max(1.0);

    // order from points where ln|g| > 1
    let (lx, ly): (Vec<f64>, Vec<f64>) = radii
        .iter()
        .zip(&log_sup)
        .filter(|(_, &l)| l > 1.0)
        .map(|(&r, &l)| (r.ln(), l.ln()))
        .unzip();
    let order_estimate = if lx.len() >= 4 {
        tail_slopes(&lx, &ly).into_iter().fold(f64::NEG_INFINITY, f64::max).max(0.0)
    } else {
        0.0
    };
    Ok(DirectionalType { direction, radii, log_sup, type_estimate, order_estimate, stable, notes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthCondition {
    pub verdict: Verdict,
    pub radii: Vec<f64>,
    pub sup_norms: Vec<SupNormEstimate>,
    /// `ln(e^{−r} √r |f|_r)` per radius.
    pub log_lhs: Vec<f64>,
    /// `ln(e^{−max|s_i|} / √(2π))`.
    pub log_rhs: f64,
    /// Largest `log_lhs` over the top half of the radii.
    pub tail_sup: f64,
    /// `log_rhs − tail_sup`; positive when the samples are below the bound.
    pub margin: f64,
    /// Slope of `log_lhs` against `r` over the tail.
    pub trend: f64,
    /// Slope of `log_lhs` against `ln r` over the tail.
    pub log_trend: f64,
}

/// Compares `limsup e^{−r} √r |f|_r` with `e^{−max|s_i|}/√(2π)`, working in
/// log space. Verdicts follow the tail trend: exponential decay of the
/// left side satisfies the condition, exponential or power growth violates
/// it, and a flat tail is decided by the margin unless it is within 0.05.
pub fn check_growth_condition<F: EvalOracle + ?Sized>(
    f: &F,
    max_point_norm: f64,
    r_grid: &[f64],
    options: &SupNormOptions,
) -> Result<GrowthCondition> {
    check_r_grid(r_grid)?;
    let mut sup_norms = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        match sup_norm(f, r, options) {
            Ok(s) => sup_norms.push(s),
            Err(Error::NonFinite(_)) if sup_norms.len() >= 4 => break,
            Err(e) => return Err(e),
        }
    }
    let radii = r_grid[..sup_norms.len()].to_vec();
    let log_rhs = -max_point_norm - 0.5 * std::f64::consts::TAU.ln();
    let log_lhs: Vec<f64> = radii
        .iter()
        .zip(&sup_norms)
        .map(|(&r, s)| if s.value == 0.0 { f64::NEG_INFINITY } else { -r + 0.5 * r.ln() + s.value.ln() })
        .collect();
    let start = radii.len() / 2;
    let tail_sup = log_lhs[start..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if tail_sup == f64::NEG_INFINITY {
        return Ok(GrowthCondition {
            verdict: Verdict::Satisfied,
            radii,
            sup_norms,
            log_lhs,
            log_rhs,
            tail_sup,
            margin: f64::INFINITY,
            trend: f64::NEG_INFINITY,
            log_trend: f64::NEG_INFINITY,
        });
    }
    let finite: Vec<(f64, f64)> = radii[start..]
        .iter()
        .zip(&log_lhs[start..])
        .filter(|(_, l)| l.is_finite())
        .map(|(&r, &l)| (r, l))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = finite.iter().cloned().unzip();
    let (trend, log_trend) = if xs.len() >= 2 {
        let lx: Vec<f64> = xs.iter().map(|r| r.ln()).collect();
        (slope(&xs, &ys), slope(&lx, &ys))
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    };
    let margin = log_rhs - tail_sup;
    let last = *ys.last().unwrap_or(&f64::NEG_INFINITY);
    let verdict = if trend <= -0.01 {
        Verdict::Satisfied
    } else if trend >= 0.01 || log_trend >= 0.1 {
        Verdict::Violated
    } else if log_trend <= -0.1 || (last < log_rhs - 0.05 && margin > 0.0) {
        Verdict::Satisfied
    } else if last > log_rhs + 0.05 {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(GrowthCondition { verdict, radii, sup_norms, log_lhs, log_rhs, tail_sup, margin, trend, log_trend })
}
