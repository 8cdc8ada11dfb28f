use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Expr, Node};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exact value of the form `a + b·π` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiLinear {
    pub rational: Rational,
    pub pi: Rational,
}

impl PiLinear {
    fn rational(r: Rational) -> Self {
        PiLinear { rational: r, pi: Rational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.pi.is_zero()
    }

    fn mul(&self, other: &PiLinear) -> Option<PiLinear> {
        if !self.pi.is_zero() && !other.pi.is_zero() {
            return None;
        }
        Some(PiLinear {
            rational: &self.rational * &other.rational,
            pi: &self.rational * &other.pi + &self.pi * &other.rational,
        })
    }
}

fn unavailable(what: &str) -> Error {
    Error::ExactUnavailable(what.to_string())
}

impl Expr {
    /// Exact rational value at a rational point.
    ///
    /// Succeeds when every `sin`/`cos` argument reduces to a multiple of π
    /// with denominator 1 or 2 and every `sinh`/`cosh` argument reduces to 0.
    /// A product with an exactly-zero factor is zero even if other factors
    /// have no exact value.
    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational> {
        self.check_point_dim(point.len())?;
        let v = self.eval_pi_linear(point)?;
        if v.pi.is_zero() {
            Ok(v.rational)
        } else {
            Err(unavailable("value involves π"))
        }
    }

    fn check_point_dim(&self, len: usize) -> Result<()> {
        let m = self.max_var();
        if m > len {
            return Err(Error::DimensionMismatch { expected: m, found: len });
        }
        Ok(())
    }

    fn eval_pi_linear(&self, x: &[Rational]) -> Result<PiLinear> {
        Ok(match self.node() {
            Node::Rational(r) => PiLinear::rational(r.clone()),
            Node::PiMultiple(k) => PiLinear { rational: Rational::zero(), pi: k.clone() },
            Node::Complex(_) => return Err(unavailable("floating constant")),
            Node::Var(j) => PiLinear::rational(x[j - 1].clone()),
            Node::Sum(terms) => {
                let mut acc = PiLinear::rational(Rational::zero());
                for t in terms {
                    let v = t.eval_pi_linear(x)?;
                    acc.rational += v.rational;
                    acc.pi += v.pi;
                }
                acc
            }
            Node::Product(factors) => {
                let mut values = Vec::with_capacity(factors.len());
                let mut failure = None;
                for f in factors {
                    match f.eval_pi_linear(x) {
                        Ok(v) if v.is_zero() => return Ok(v),
                        Ok(v) => values.push(v),
                        Err(e) => failure = Some(e),
                    }
                }
                if let Some(e) = failure {
                    return Err(e);
                }
                let mut acc = PiLinear::rational(Rational::one());
                for v in &values {
                    acc = acc.mul(v).ok_or_else(|| unavailable("power of π"))?;
                }
                acc
            }
            Node::Pow(base, e) => {
                let b = base.eval_pi_linear(x)?;
                if b.pi.is_zero() {
                    PiLinear::rational(num_traits::pow(b.rational, *e as usize))
                } else if b.rational.is_zero() && *e == 1 {
                    b
                } else {
                    return Err(unavailable("power of π"));
                }
            }
            Node::Sin(u) | Node::Cos(u) => {
                let v = u.eval_pi_linear(x)?;
                if !v.rational.is_zero() {
                    return Err(unavailable("trigonometric argument is not a rational multiple of π"));
                }
                let is_sin = matches!(self.node(), Node::Sin(_));
                PiLinear::rational(rational::int(trig_at_pi_multiple(&v.pi, is_sin)?))
            }
            Node::Sinh(u) | Node::Cosh(u) => {
                let v = u.eval_pi_linear(x)?;
                if !v.is_zero() {
                    return Err(unavailable("hyperbolic argument is not zero"));
                }
                let is_sinh = matches!(self.node(), Node::Sinh(_));
                PiLinear::rational(if is_sinh { Rational::zero() } else { Rational::one() })
            }
            Node::Poly(app) => {
                let mut args = Vec::with_capacity(app.args.len());
                for a in &app.args {
                    let v = a.eval_pi_linear(x)?;
                    if !v.pi.is_zero() {
                        return Err(unavailable("polynomial argument involves π"));
                    }
                    args.push(v.rational);
                }
                PiLinear::rational(app.poly.evaluate(&args)?)
            }
        })
    }

    /// Floating complex value.
    pub fn eval_numeric(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point_dim(z.len())?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        match self.node() {
            Node::Rational(r) => Complex64::new(rational::to_f64(r), 0.0),
            Node::PiMultiple(k) => Complex64::new(rational::to_f64(k) * std::f64::consts::PI, 0.0),
            Node::Complex(c) => *c,
            Node::Var(j) => z[j - 1],
            Node::Sum(terms) => terms.iter().map(|t| t.eval_unchecked(z)).sum(),
            Node::Product(factors) => factors.iter().map(|f| f.eval_unchecked(z)).product(),
            Node::Pow(b, e) => b.eval_unchecked(z).powu(*e),
            Node::Sin(u) => u.eval_unchecked(z).sin(),
            Node::Cos(u) => u.eval_unchecked(z).cos(),
            Node::Sinh(u) => u.eval_unchecked(z).sinh(),
            Node::Cosh(u) => u.eval_unchecked(z).cosh(),
            Node::Poly(app) => {
                let args: Vec<Complex64> = app.args.iter().map(|a| a.eval_unchecked(z)).collect();
                app.numeric().eval(&args)
            }
        }
    }

    /// Value-scale bound: the expression evaluated with every sum replaced
    /// by the sum of absolute values. Rounding errors of
    /// [`Expr::eval_numeric`] are proportional to this quantity.
    pub fn eval_magnitude(&self, z: &[Complex64]) -> Result<f64> {
        self.check_point_dim(z.len())?;
        Ok(self.magnitude_unchecked(z))
    }

    fn magnitude_unchecked(&self, z: &[Complex64]) -> f64 {
        match self.node() {
            Node::Sum(terms) => terms.iter().map(|t| t.magnitude_unchecked(z)).sum(),
            Node::Product(factors) => factors.iter().map(|f| f.magnitude_unchecked(z)).product(),
            Node::Pow(b, e) => b.magnitude_unchecked(z).powi(*e as i32),
            Node::Poly(app) => {
                let args: Vec<Complex64> = app
                    .args
                    .iter()
                    .map(|a| Complex64::new(a.magnitude_unchecked(z), 0.0))
                    .collect();
                app.numeric().eval_abs(&args)
            }
            _ => self.eval_unchecked(z).norm(),
        }
    }
}

/// `sin(kπ)` or `cos(kπ)` when the value is rational; only denominators 1
/// and 2 qualify (other rational values such as `sin(π/6) = 1/2` exist but
/// are outside the supported special-value table).
fn trig_at_pi_multiple(k: &Rational, sin: bool) -> Result<i64> {
    let two: num_bigint::BigInt = 2.into();
    if k.denom().is_one() {
        let parity_odd = k.numer().is_odd();
        return Ok(if sin { 0 } else if parity_odd { -1 } else { 1 });
    }
    if *k.denom() == two {
        if !sin {
            return Ok(0);
        }
        let m: num_bigint::BigInt = (k.numer() - num_bigint::BigInt::from(1)).div_floor(&two);
        return Ok(if m.is_even() { 1 } else { -1 });
    }
    Err(unavailable("trigonometric value outside the special-value table"))
}
