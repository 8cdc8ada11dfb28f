//! Derivatives by the Cauchy integral on a torus, discretized with the
//! tensor trapezoid rule.
//!
//! With `N` nodes per variable and samples `f(z0 + ρ e^{iθ})`, the Taylor
//! coefficient of order `t` is the discrete Fourier coefficient
//! `mean(f · e^{−i t·θ})`, and `(D^t f)(z0) = t! · coefficient / ρ^{‖t‖}`.
//! Aliasing error decays like `ρ^N` relative to the radius of convergence,
//! so entire functions converge geometrically in `N`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::source::EvalOracle;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourOptions {
    pub radius: f64,
    pub nodes: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { radius: 1.0, nodes: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourEstimate {
    pub value: Complex64,
    /// Difference from the same rule on every other node.
    pub error: f64,
}

/// `(D^t f)(z0)` by contour quadrature.
pub fn contour_derivative<F: EvalOracle + ?Sized>(
    f: &F,
    t: &MultiIndex,
    z0: &[Complex64],
    options: &ContourOptions,
) -> Result<Complex64> {
    Ok(contour_derivatives(f, std::slice::from_ref(t), z0, options)?[0].value)
}

/// Many derivatives at one point, sharing the function samples.
pub fn contour_derivatives<F: EvalOracle + ?Sized>(
    f: &F,
    ts: &[MultiIndex],
    z0: &[Complex64],
    options: &ContourOptions,
) -> Result<Vec<ContourEstimate>> {
    let n = f.dim();
    crate::error::check_dim(n, z0.len())?;
    for t in ts {
        crate::error::check_dim(n, t.dim())?;
    }
    let nodes = options.nodes;
    if nodes < 8 || nodes % 2 == 1 {
        return Err(Error::InvalidArgument(format!("contour nodes must be even and at least 8, got {nodes}")));
    }
    if !(options.radius > 0.0 && options.radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("contour radius must be positive, got {}", options.radius)));
    }
    let total = nodes
        .checked_pow(n as u32)
        .filter(|&m| m <= 1 << 26)
        .ok_or_else(|| Error::InvalidArgument(format!("{nodes}^{n} contour samples is too many")))?;

    let unit: Vec<Complex64> = (0..nodes)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64))
        .collect();
    let samples: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut z = z0.to_vec();
            let mut rest = flat;
            for zj in z.iter_mut() {
                *zj += options.radius * unit[rest % nodes];
                rest /= nodes;
            }
            f.eval(&z)
        })
        .collect();
    if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("oracle value at contour sample {bad}")));
    }

    ts.par_iter()
        .map(|t| {
            let (full, half) = fourier_coefficient(&samples, &unit, t.as_slice(), nodes);
            let scale = factorial_f64(t) / options.radius.powi(t.norm() as i32);
            Ok(ContourEstimate { value: full * scale, error: (full - half).norm() * scale })
        })
        .collect()
}

/// Mean of `samples · e^{−i t·θ}` over all nodes and over the even nodes.
fn fourier_coefficient(samples: &[Complex64], unit: &[Complex64], t: &[u32], nodes: usize) -> (Complex64, Complex64) {
    let mut full = Complex64::new(0.0, 0.0);
    let mut half = Complex64::new(0.0, 0.0);
    for (flat, v) in samples.iter().enumerate() {
        let mut phase = 0usize;
        let mut all_even = true;
        let mut rest = flat;
        for &tj in t {
            let k = rest % nodes;
            all_even &= k.is_multiple_of(2);
            phase = (phase + k * tj as usize) % nodes;
            rest /= nodes;
        }
        let term = v * unit[phase].conj();
        full += term;
        if all_even {
            half += term;
        }
    }
    let m = samples.len() as f64;
    let half_count = m / (1usize << t.len()) as f64;
    (full / m, half / half_count)
}

fn factorial_f64(t: &MultiIndex) -> f64 {
    t.as_slice().iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product()
}
