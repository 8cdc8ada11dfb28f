//! Closed-form bounds: Stirling's bracket, Cauchy's inequality and the
//! order threshold beyond which integer-valued derivatives must vanish.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// `ln` of `N^N e^{−N} √(2πN)` and of the same times `e^{1/(12N)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StirlingBounds {
    pub ln_lower: f64,
    pub ln_upper: f64,
}

impl StirlingBounds {
    /// Infinite when the bound overflows `f64`.
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }

    /// `lower < value < upper`, compared exactly against the floating bounds.
    pub fn brackets(&self, value: &BigUint) -> bool {
        let (lo, hi) = (self.lower(), self.upper());
        if !lo.is_finite() || !hi.is_finite() {
            let ln_value = ln_biguint(value);
            return self.ln_lower < ln_value && ln_value < self.ln_upper;
        }
        let v = BigRational::from_integer(value.clone().into());
        match (BigRational::from_float(lo), BigRational::from_float(hi)) {
            (Some(lo), Some(hi)) => lo < v && v < hi,
            _ => false,
        }
    }
}

fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return crate::rational::to_f64(&BigRational::from_integer(v.clone().into())).ln();
    }
    let shift = bits - 64;
    let top: BigUint = v >> shift;
    crate::rational::to_f64(&BigRational::from_integer(top.into())).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn stirling_bounds(n: u64) -> Result<StirlingBounds> {
    if n == 0 {
        return Err(Error::InvalidArgument("Stirling bounds need N >= 1".into()));
    }
    let x = n as f64;
    let ln_lower = x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln();
    Ok(StirlingBounds { ln_lower, ln_upper: ln_lower + 1.0 / (12.0 * x) })
}

/// `t! · M / r^{‖t‖}`: bounds `|(D^t f)(z_0)|` whenever `M ≥ |f|` on the
/// polydisc of radius `r + |z_0|` about the origin.
pub fn cauchy_derivative_bound(t: &MultiIndex, r: f64, m: f64) -> Result<f64> {
    if !(r > 0.0) || !(m >= 0.0) {
        return Err(Error::InvalidArgument(format!("need r > 0 and M >= 0, got r = {r}, M = {m}")));
    }
    let fact: f64 = t.as_slice().iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product();
    Ok(fact * m / r.powi(t.norm() as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthParams {
    /// Radius of the polydisc containing the interpolation points.
    pub a: f64,
    /// Slack in the growth condition, in `(0, 1)`.
    pub eta: f64,
}

impl GrowthParams {
    pub fn new(a: f64, eta: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("A must be finite and >= 0, got {a}")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidArgument(format!("eta must lie in (0, 1), got {eta}")));
        }
        Ok(GrowthParams { a, eta })
    }
}

/// `ln[(1−η) e^{−A + 1/(12T)} (1 − A/T)^{−T}]` for `T > A`.
pub fn ln_polya_bound(p: &GrowthParams, t: u64) -> f64 {
    let t = t as f64;
    (1.0 - p.eta).ln() - p.a + 1.0 / (12.0 * t) - t * (-p.a / t).ln_1p()
}

/// Smallest integer `T_0 > A` with the bound below 1 for every `T ≥ T_0`.
/// The bound decreases in `T` toward `1 − η`, so the first success is final;
/// the window `[T_0, 10 T_0]` is checked anyway.
pub fn polya_threshold(p: &GrowthParams) -> u64 {
    let mut t = p.a.floor() as u64 + 1;
    while ln_polya_bound(p, t) >= 0.0 {
        t += 1;
    }
    debug_assert!((t..=10 * t).all(|s| ln_polya_bound(p, s) < 0.0));
    t
}
