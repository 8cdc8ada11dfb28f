//! Checking that derivative data of an expression vanish or are integers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{check_dim, Result};
use crate::expr::Expr;
use crate::frame::AffinePointFrame;
use crate::multiindex::{enumerate_even_pairs, enumerate_index_set, IndexPair, MultiIndex};
use crate::rational;
use crate::source::{exact_or_numeric, to_complex_point, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Zero,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub max_norm: u32,
    pub predicate: Predicate,
    pub tol: f64,
    /// Only pairs in the index set; otherwise every pair with even `‖t‖`.
    pub restrict_to_index_set: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_norm: 8, predicate: Predicate::Zero, tol: 1e-9, restrict_to_index_set: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyEntry {
    #[serde(serialize_with = "serialize_index")]
    pub t: MultiIndex,
    pub i: usize,
    pub value: Value,
    pub exact: bool,
    pub pass: bool,
    /// Whether `(t, i)` is in the index set.
    pub admissible: bool,
}

pub(crate) fn serialize_index<S: Serializer>(t: &MultiIndex, s: S) -> std::result::Result<S::Ok, S::Error> {
    t.as_slice().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub entries: Vec<VerifyEntry>,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Evaluates `(D^t E)(s_i)` for every pair up to `max_norm` and checks the
/// predicate. Values are exact whenever symbolic evaluation succeeds;
/// numeric values pass within `tol · max(1, m)` where `m` bounds the
/// magnitude of the terms summed to produce the value.
pub fn verify_data_property(expr: &Expr, frame: &AffinePointFrame, options: &VerifyOptions) -> Result<VerifyReport> {
    let n = frame.dim();
    if expr.max_var() > n {
        check_dim(n, expr.max_var())?;
    }
    let pairs = if options.restrict_to_index_set {
        enumerate_index_set(n, options.max_norm)
    } else {
        enumerate_even_pairs(n, options.max_norm)
    };
    let mut by_t: BTreeMap<MultiIndex, Vec<usize>> = BTreeMap::new();
    for p in &pairs {
        by_t.entry(p.t.clone()).or_default().push(p.i);
    }
    let groups: Vec<(MultiIndex, Vec<usize>)> = by_t.into_iter().collect();
    let results: Vec<Vec<VerifyEntry>> = groups
        .par_iter()
        .map(|(t, points)| {
            let d = expr.derivative(t);
            points
                .iter()
                .map(|&i| check_entry(&d, t, i, frame, options))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<VerifyEntry> = results.into_iter().flatten().collect();
    entries.sort_by(|x, y| IndexPair::new(x.t.clone(), x.i).cmp(&IndexPair::new(y.t.clone(), y.i)));
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(VerifyReport { options: *options, entries, all_pass })
}

fn check_entry(d: &Expr, t: &MultiIndex, i: usize, frame: &AffinePointFrame, options: &VerifyOptions) -> Result<VerifyEntry> {
    let point = frame.point(i);
    let value = exact_or_numeric(d, point)?;
    let pass = match &value {
        Value::Exact(r) => match options.predicate {
            Predicate::Zero => num_traits::Zero::is_zero(r),
            Predicate::Integer => rational::is_integer(r),
        },
        Value::Numeric(z) => {
            let scale = d.eval_magnitude(&to_complex_point(point))?.max(1.0);
            numeric_pass(*z, options.predicate, options.tol * scale)
        }
    };
    Ok(VerifyEntry {
        t: t.clone(),
        i,
        exact: value.is_exact(),
        value,
        pass,
        admissible: crate::multiindex::in_index_set(t, i),
    })
}

pub(crate) fn numeric_pass(z: Complex64, predicate: Predicate, tol: f64) -> bool {
    let target = match predicate {
        Predicate::Zero => 0.0,
        Predicate::Integer => z.re.round(),
    };
    (z.re - target).abs() <= tol && z.im.abs() <= tol
}
