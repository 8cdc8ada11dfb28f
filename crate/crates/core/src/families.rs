//! The three families of entire functions showing the interpolation theorem
//! cannot be improved: sine of a sum, a sine-weighted polynomial family, and
//! a hyperbolic-sine family with integer data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::frame::AffinePointFrame;
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleKind {
    /// `sin(π Σ θ_i)`
    SineOfSum,
    /// `Σ_{i<n} sin(πθ_i) g_i(θ_{i+1}², …, θ_n²) + sin(πθ_n) g_n(θ_{n−1}²)`
    SineWeighted,
    /// Same shape with `sinh(θ_i − b_i)/sinh(a_i − b_i)` in place of `sin(πθ_i)`.
    HyperbolicWeighted,
}

impl ExampleKind {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(ExampleKind::SineOfSum),
            2 => Ok(ExampleKind::SineWeighted),
            3 => Ok(ExampleKind::HyperbolicWeighted),
            _ => Err(Error::InvalidArgument(format!("example kind must be 1, 2 or 3, got {k}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            ExampleKind::SineOfSum => 1,
            ExampleKind::SineWeighted => 2,
            ExampleKind::HyperbolicWeighted => 3,
        }
    }
}

/// Parameters of an example. `g[i−1]` has `n − i` variables for `i < n`;
/// `g[n−1]` is univariate, and must be constant when `n = 1`.
#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub kind: ExampleKind,
    pub n: usize,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub g: Vec<MultiPoly>,
}

impl ExampleSpec {
    /// `a = 0`, `b = 1` and the default weights.
    pub fn standard(kind: ExampleKind, n: usize) -> Self {
        ExampleSpec {
            kind,
            n,
            a: vec![Rational::from_integer(0.into()); n],
            b: vec![Rational::from_integer(1.into()); n],
            g: default_weights(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if self.a.len() != n || self.b.len() != n {
            return Err(Error::InvalidArgument(format!("a and b need {n} coordinates")));
        }
        if let Some(i) = (0..n).find(|&i| self.a[i] == self.b[i]) {
            return Err(Error::InvalidArgument(format!("a_{0} = b_{0}", i + 1)));
        }
        if self.kind == ExampleKind::SineOfSum {
            return Ok(());
        }
        if self.g.len() != n {
            return Err(Error::InvalidArgument(format!("expected {n} weight polynomials, got {}", self.g.len())));
        }
        for (k, g) in self.g.iter().enumerate() {
            let i = k + 1;
            let want = if i < n { n - i } else { 1 };
            if g.dim() != want {
                return Err(Error::InvalidArgument(format!("g_{i} must have {want} variables, has {}", g.dim())));
            }
            if self.kind == ExampleKind::HyperbolicWeighted && !g.is_integral() {
                return Err(Error::InvalidArgument(format!("g_{i} must have integer coefficients")));
            }
        }
        if n == 1 && self.g[0].as_constant().is_none() {
            return Err(Error::InvalidArgument("with one variable g_1 has no argument and must be constant".into()));
        }
        Ok(())
    }
}

/// `g_i = 1 + u_1` for `i < n` and `g_n = 1 + u`; a constant `1` when `n = 1`.
pub fn default_weights(n: usize) -> Vec<MultiPoly> {
    if n == 1 {
        return vec![MultiPoly::one(1)];
    }
    (1..=n)
        .map(|i| {
            let m = if i < n { n - i } else { 1 };
            MultiPoly::one(m).add(&MultiPoly::var(m, 1)).expect("same dimension")
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Example {
    pub expr: Expr,
    /// `s_0 = a`, `s_i = s_0 + (b_i − a_i) e_i`.
    pub frame: AffinePointFrame,
}

/// `θ_i(z) = (z_i − a_i)/(b_i − a_i)`.
fn theta(spec: &ExampleSpec, i: usize) -> Expr {
    let h = &spec.b[i - 1] - &spec.a[i - 1];
    Expr::product(vec![
        Expr::rational(Rational::from_integer(1.into()) / h),
        Expr::sum(vec![Expr::var(i), Expr::rational(-spec.a[i - 1].clone())]),
    ])
}

pub fn build_example(spec: &ExampleSpec) -> Result<Example> {
    spec.validate()?;
    let n = spec.n;
    let mut points = vec![spec.a.clone()];
    for i in 0..n {
        let mut p = spec.a.clone();
        p[i] = spec.b[i].clone();
        points.push(p);
    }
    let frame = AffinePointFrame::new(points)?;
    let thetas: Vec<Expr> = (1..=n).map(|i| theta(spec, i)).collect();

    let expr = match spec.kind {
        ExampleKind::SineOfSum => Expr::sin(Expr::product(vec![Expr::pi(), Expr::sum(thetas.clone())])),
        ExampleKind::SineWeighted | ExampleKind::HyperbolicWeighted => {
            let lead = |i: usize| -> Expr {
                let w = thetas[i - 1].clone();
                match spec.kind {
                    ExampleKind::SineWeighted => Expr::sin(Expr::product(vec![Expr::pi(), w])),
                    _ => {
                        let shift = Expr::rational(-spec.b[i - 1].clone());
                        let denom = rational::to_f64(&(&spec.a[i - 1] - &spec.b[i - 1])).sinh();
                        Expr::product(vec![
                            Expr::complex(Complex64::new(1.0 / denom, 0.0)),
                            Expr::sinh(Expr::sum(vec![w, shift])),
                        ])
                    }
                }
            };
            let square = |j: usize| Expr::pow(thetas[j - 1].clone(), 2);
            let mut terms = Vec::with_capacity(n);
            for i in 1..n {
                let args = ((i + 1)..=n).map(square).collect();
                terms.push(Expr::product(vec![lead(i), Expr::poly(spec.g[i - 1].clone(), args)]));
            }
            let last_weight = if n == 1 {
                Expr::rational(spec.g[0].as_constant().expect("validated"))
            } else {
                Expr::poly(spec.g[n - 1].clone(), vec![square(n - 1)])
            };
            terms.push(Expr::product(vec![lead(n), last_weight]));
            Expr::sum(terms)
        }
    };
    Ok(Example { expr, frame })
}
