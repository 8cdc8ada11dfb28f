//! End-to-end diagnostic: growth condition, directional types, threshold,
//! the finite list of nonzero integer data below it, and for polynomial
//! inputs the degree certificate.

use std::f64::consts::PI;

use serde::Serialize;

use super::bounds::{polya_threshold, GrowthParams};
use super::estimates::{check_growth_condition, estimate_directional_type, DirectionalType, GrowthCondition, SupNormOptions, Verdict};
use crate::error::{check_dim, Result};
use crate::frame::AffinePointFrame;
use crate::multiindex::{enumerate_index_set, MultiIndex};
use crate::poly::MultiPoly;
use crate::source::{DerivativeSource, EvalOracle, Value};
use crate::verify::serialize_index;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exception {
    #[serde(serialize_with = "serialize_index")]
    pub t: MultiIndex,
    pub i: usize,
    pub value: Value,
}

/// Index-set pairs with `‖t‖ < T_0` whose datum has modulus at least
/// `1 − tol`: the only candidates for nonzero integer data.
pub fn finite_exception_scan<S: DerivativeSource + ?Sized>(
    source: &S,
    frame: &AffinePointFrame,
    t0: u32,
    tol: f64,
) -> Result<Vec<Exception>> {
    check_dim(frame.dim(), source.dim())?;
    if t0 == 0 {
        return Ok(Vec::new());
    }
    let pairs = enumerate_index_set(frame.dim(), t0 - 1);
    let mut out = Vec::new();
    for i in 0..=frame.dim() {
        let ts: Vec<MultiIndex> = pairs.iter().filter(|p| p.i == i).map(|p| p.t.clone()).collect();
        let values = source.derivatives_at(&ts, frame.point(i))?;
        for (t, value) in ts.into_iter().zip(values) {
            if value.abs() >= 1.0 - tol {
                out.push(Exception { t, i, value });
            }
        }
    }
    out.sort_by_key(|a| (a.t.clone(), a.i));
    Ok(out)
}

/// A function under test: values for the growth estimates, derivatives for
/// the data scan, and the exact polynomial when there is one.
pub struct Fixture<'a> {
    pub eval: &'a (dyn EvalOracle + 'a),
    pub derivatives: &'a (dyn DerivativeSource + 'a),
    pub polynomial: Option<&'a MultiPoly>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineOptions {
    pub r_grid: Vec<f64>,
    pub sup_norm: SupNormOptions,
    /// Used when the growth condition does not yield a slack.
    pub default_eta: f64,
    pub tol: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { r_grid: super::default_r_grid(), sup_norm: SupNormOptions::default(), default_eta: 0.5, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeCondition {
    pub verdict: Verdict,
    /// Some direction has type within 5% of π.
    pub boundary: bool,
    pub directions: Vec<DirectionalType>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeCertificate {
    pub degree: Option<u32>,
    /// `D^t P ≡ 0` for every even `t` with `‖t‖ ≥ T_0`.
    pub even_slices_vanish: bool,
    pub bound: u32,
    /// The certificate holds: slices vanish and `deg P < T_0 + n`.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub options: PipelineOptions,
    pub growth_condition: GrowthCondition,
    pub type_condition: TypeCondition,
    pub params: GrowthParams,
    /// Even order beyond which nonzero integer data are ruled out, once the
    /// hypotheses hold.
    pub t0: u32,
    pub exceptions: Vec<Exception>,
    pub certificate: Option<DegreeCertificate>,
    pub hypotheses_hold: bool,
}

pub fn theorem_pipeline(fixture: &Fixture<'_>, frame: &AffinePointFrame, options: &PipelineOptions) -> Result<PipelineReport> {
    let n = frame.dim();
    check_dim(n, fixture.eval.dim())?;
    check_dim(n, fixture.derivatives.dim())?;
    let complex = frame.to_complex();
    let a = frame.max_norm();

    let growth = check_growth_condition(fixture.eval, a, &options.r_grid, &options.sup_norm)?;
    let directions = complex
        .directions()
        .iter()
        .map(|w| estimate_directional_type(fixture.eval, w, &options.r_grid, &options.sup_norm))
        .collect::<Result<Vec<_>>>()?;
    let type_condition = classify_types(directions);

    let eta = if growth.verdict == Verdict::Satisfied && growth.margin > 0.0 {
        // half the observed gap between the two sides
        ((1.0 - (-growth.margin).exp()) / 2.0).clamp(1e-6, options.default_eta)
    } else {
        options.default_eta
    };
    let params = GrowthParams::new(a, eta)?;
    let mut t0 = polya_threshold(&params).max(onset_radius(&growth, eta)) as u32;
    t0 += t0 % 2;

    let exceptions = super::finite_exception_scan(fixture.derivatives, frame, t0, options.tol)?;
    let certificate = fixture.polynomial.map(|p| {
        let degree = p.degree();
        let top = degree.unwrap_or(0);
        let even_slices_vanish = (t0..=top.max(t0)).all(|d| p.even_slice_vanishes(d));
        let bound = t0 + n as u32;
        DegreeCertificate { degree, even_slices_vanish, bound, pass: even_slices_vanish && degree.is_none_or(|d| d < bound) }
    });
    let hypotheses_hold = growth.verdict == Verdict::Satisfied && type_condition.verdict == Verdict::Satisfied;
    Ok(PipelineReport {
        options: options.clone(),
        growth_condition: growth,
        type_condition,
        params,
        t0,
        exceptions,
        certificate,
        hypotheses_hold,
    })
}

/// Smallest sampled radius beyond which every sample satisfies the growth
/// bound with slack `η`.
fn onset_radius(growth: &GrowthCondition, eta: f64) -> u64 {
    let limit = growth.log_rhs + (1.0 - eta).ln();
    let last_bad = growth.log_lhs.iter().rposition(|&l| l >= limit);
    match last_bad {
        None => 0,
        Some(k) if k + 1 < growth.radii.len() => growth.radii[k + 1].ceil() as u64,
        Some(_) => growth.radii.last().map_or(0, |r| r.ceil() as u64),
    }
}

fn classify_types(directions: Vec<DirectionalType>) -> TypeCondition {
    let near = |d: &DirectionalType| (d.type_estimate - PI).abs() <= 0.05 * PI;
    let boundary = directions.iter().any(near);
    let verdict = if directions.iter().any(|d| d.type_estimate > 1.05 * PI) {
        Verdict::Violated
    } else if boundary || directions.iter().any(|d| !d.stable && d.type_estimate > 0.5 * PI) {
        Verdict::Inconclusive
    } else {
        Verdict::Satisfied
    };
    TypeCondition { verdict, boundary, directions }
}
