//! Functions that can be evaluated, or whose derivatives can be read off at
//! rational points.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::contour::{self, ContourOptions};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::multiindex::MultiIndex;
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

/// A derivative or function value: exact when symbolic evaluation succeeded.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Numeric(Complex64),
}

impl Value {
    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(r) => Complex64::new(rational::to_f64(r), 0.0),
            Value::Numeric(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Numeric(_) => None,
        }
    }
}

/// Exact values serialize as `"p/q"`, numeric ones as `[re, im]`.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Exact(r) => s.serialize_str(&rational::to_text(r)),
            Value::Numeric(z) => [z.re, z.im].serialize(s),
        }
    }
}

/// Pointwise complex evaluation.
pub trait EvalOracle: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[Complex64]) -> Complex64;

    /// Exact value at a rational point, when the oracle has one.
    fn eval_exact(&self, _point: &[Rational]) -> Option<Rational> {
        None
    }
}

/// Supplies `(D^t f)(p)` for many `t` at a rational point `p`.
pub trait DerivativeSource: Sync {
    fn dim(&self) -> usize;
    fn derivatives_at(&self, ts: &[MultiIndex], point: &[Rational]) -> Result<Vec<Value>>;
}

impl EvalOracle for MultiPoly {
    fn dim(&self) -> usize {
        MultiPoly::dim(self)
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.evaluate_complex(z).expect("dimension checked by caller")
    }

    fn eval_exact(&self, point: &[Rational]) -> Option<Rational> {
        self.evaluate(point).ok()
    }
}

impl DerivativeSource for MultiPoly {
    fn dim(&self) -> usize {
        MultiPoly::dim(self)
    }

    fn derivatives_at(&self, ts: &[MultiIndex], point: &[Rational]) -> Result<Vec<Value>> {
        ts.iter()
            .map(|t| Ok(Value::Exact(self.differentiate(t)?.evaluate(point)?)))
            .collect()
    }
}

/// An expression viewed as a function of `n` variables.
#[derive(Clone, Debug)]
pub struct ExprFunction {
    expr: Expr,
    n: usize,
}

impl ExprFunction {
    pub fn new(expr: Expr, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if expr.max_var() > n {
            return Err(Error::DimensionMismatch { expected: n, found: expr.max_var() });
        }
        Ok(ExprFunction { expr, n })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// `(D^t f)(p)`, exact when possible.
    pub fn derivative_value(&self, t: &MultiIndex, point: &[Rational]) -> Result<Value> {
        crate::error::check_dim(self.n, t.dim())?;
        let d = self.expr.derivative(t);
        exact_or_numeric(&d, point)
    }
}

pub(crate) fn exact_or_numeric(e: &Expr, point: &[Rational]) -> Result<Value> {
    match e.eval_exact(point) {
        Ok(r) => Ok(Value::Exact(r)),
        Err(Error::ExactUnavailable(_)) => {
            let z = to_complex_point(point);
            let v = e.eval_numeric(&z)?;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{e} at {z:?}")));
            }
            Ok(Value::Numeric(v))
        }
        Err(other) => Err(other),
    }
}

pub(crate) fn to_complex_point(point: &[Rational]) -> Vec<Complex64> {
    point.iter().map(|x| Complex64::new(rational::to_f64(x), 0.0)).collect()
}

impl EvalOracle for ExprFunction {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.expr.eval_unchecked(z)
    }

    fn eval_exact(&self, point: &[Rational]) -> Option<Rational> {
        self.expr.eval_exact(point).ok()
    }
}

impl DerivativeSource for ExprFunction {
    fn dim(&self) -> usize {
        self.n
    }

    fn derivatives_at(&self, ts: &[MultiIndex], point: &[Rational]) -> Result<Vec<Value>> {
        crate::error::check_dim(self.n, point.len())?;
        ts.iter().map(|t| self.derivative_value(t, point)).collect()
    }
}

/// Derivatives of a black-box function by contour quadrature.
pub struct ContourSource<'a, F: EvalOracle + ?Sized> {
    pub f: &'a F,
    pub options: ContourOptions,
}

impl<F: EvalOracle + ?Sized> DerivativeSource for ContourSource<'_, F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn derivatives_at(&self, ts: &[MultiIndex], point: &[Rational]) -> Result<Vec<Value>> {
        let z0 = to_complex_point(point);
        let estimates = contour::contour_derivatives(self.f, ts, &z0, &self.options)?;
        Ok(estimates.into_iter().map(|e| Value::Numeric(e.value)).collect())
    }
}
