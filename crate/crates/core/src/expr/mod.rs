//! Symbolic expressions for sine/hyperbolic families and polynomial pieces.
//!
//! Expressions are immutable trees behind `Arc`, so cloning is cheap. All
//! construction goes through the smart constructors below, which keep the
//! tree canonical: sums and products are flattened, constants are folded,
//! `sin`/`cos` at rational multiples of π and `sinh`/`cosh` at 0 are
//! evaluated, and zero/one are absorbed. Nothing else is simplified.

mod diff;
mod eval;
mod parse;
mod print;

use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::{MultiPoly, NumericPoly};
use crate::rational::{self, Rational};

pub use eval::PiLinear;
pub use parse::parse_expression;

/// Node kinds. Variables are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Rational(Rational),
    /// `k·π`
    PiMultiple(Rational),
    Complex(Complex64),
    Var(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Expr, u32),
    Sin(Expr),
    Cos(Expr),
    Sinh(Expr),
    Cosh(Expr),
    /// A polynomial applied to argument expressions (one per polynomial variable).
    Poly(PolyApp),
}

#[derive(Clone, Debug)]
pub struct PolyApp {
    pub poly: MultiPoly,
    pub args: Vec<Expr>,
    numeric: NumericPoly,
}

impl PartialEq for PolyApp {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.args == other.args
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn rational(r: Rational) -> Expr {
        Self::wrap(Node::Rational(r))
    }

    pub fn int(k: i64) -> Expr {
        Self::rational(rational::int(k))
    }

    pub fn zero() -> Expr {
        Self::int(0)
    }

    pub fn one() -> Expr {
        Self::int(1)
    }

    pub fn pi_multiple(k: Rational) -> Expr {
        if k.is_zero() {
            Self::zero()
        } else {
            Self::wrap(Node::PiMultiple(k))
        }
    }

    pub fn pi() -> Expr {
        Self::pi_multiple(Rational::one())
    }

    pub fn complex(z: Complex64) -> Expr {
        if z == Complex64::new(0.0, 0.0) {
            Self::zero()
        } else {
            Self::wrap(Node::Complex(z))
        }
    }

    pub fn var(j: usize) -> Expr {
        assert!(j >= 1, "variables are 1-based");
        Self::wrap(Node::Var(j))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    pub fn neg(&self) -> Expr {
        Self::product(vec![Self::int(-1), self.clone()])
    }

    pub fn add(&self, other: &Expr) -> Expr {
        Self::sum(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        Self::sum(vec![self.clone(), other.neg()])
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Self::product(vec![self.clone(), other.clone()])
    }

    /// Canonical sum: nested sums flattened, rational and π constants folded
    /// and placed last (π part, then rational part, then complex part).
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut rest = Vec::new();
        let mut rat = Rational::zero();
        let mut pi = Rational::zero();
        let mut cplx = Complex64::new(0.0, 0.0);
        let mut stack: Vec<Expr> = terms.into_iter().rev().collect();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Sum(inner) => stack.extend(inner.iter().rev().cloned()),
                Node::Rational(r) => rat += r,
                Node::PiMultiple(k) => pi += k,
                Node::Complex(z) => cplx += z,
                _ => rest.push(t),
            }
        }
        if !pi.is_zero() {
            rest.push(Self::pi_multiple(pi));
        }
        if !rat.is_zero() {
            rest.push(Self::rational(rat));
        }
        if cplx != Complex64::new(0.0, 0.0) {
            rest.push(Self::complex(cplx));
        }
        match rest.len() {
            0 => Self::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::wrap(Node::Sum(rest)),
        }
    }

    /// Canonical product: constants folded to the front as
    /// `[rational | k·π] [π…] [complex]`, followed by the other factors in
    /// their original order. A zero factor absorbs everything.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut rest = Vec::new();
        let mut coef = Rational::one();
        let mut pi_power = 0u32;
        let mut cplx = Complex64::new(1.0, 0.0);
        let mut stack: Vec<Expr> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f.node() {
                Node::Product(inner) => stack.extend(inner.iter().rev().cloned()),
                Node::Rational(r) => coef *= r,
                Node::PiMultiple(k) => {
                    coef *= k;
                    pi_power += 1;
                }
                Node::Pow(base, e) if matches!(base.node(), Node::PiMultiple(_)) => {
                    let Node::PiMultiple(k) = base.node() else { unreachable!() };
                    coef *= num_traits::pow(k.clone(), *e as usize);
                    pi_power += e;
                }
                Node::Complex(z) => cplx *= z,
                _ => rest.push(f),
            }
        }
        if coef.is_zero() || cplx == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(rest.len() + 3);
        match pi_power {
            0 => {
                if !coef.is_one() {
                    out.push(Self::rational(coef));
                }
            }
            _ => {
                out.push(Self::pi_multiple(coef));
                match pi_power - 1 {
                    0 => {}
                    1 => out.push(Self::pi()),
                    e => out.push(Self::wrap(Node::Pow(Self::pi(), e))),
                }
            }
        }
        if cplx != Complex64::new(1.0, 0.0) {
            out.push(Self::complex(cplx));
        }
        out.extend(rest);
        match out.len() {
            0 => Self::one(),
            1 => out.pop().unwrap(),
            _ => Self::wrap(Node::Product(out)),
        }
    }

    pub fn pow(base: Expr, e: u32) -> Expr {
        match (base.node(), e) {
            (_, 0) => Self::one(),
            (_, 1) => base,
            (Node::Rational(r), _) => Self::rational(num_traits::pow(r.clone(), e as usize)),
            (Node::Complex(z), _) => Self::complex(z.powu(e)),
            (Node::Pow(inner, k), _) => Self::pow(inner.clone(), k * e),
            (Node::PiMultiple(k), _) if !k.is_one() => Self::product(vec![
                Self::rational(num_traits::pow(k.clone(), e as usize)),
                Self::wrap(Node::Pow(Self::pi(), e)),
            ]),
            _ => Self::wrap(Node::Pow(base, e)),
        }
    }

    pub fn sin(arg: Expr) -> Expr {
        if let Some(k) = pi_coefficient(&arg) {
            // sin(kπ): 0 at integers, ±1 at half-integers
            if k.denom().is_one() {
                return Self::zero();
            }
            if *k.denom() == 2.into() {
                return Self::int(half_integer_sign(&k));
            }
        }
        Self::wrap(Node::Sin(arg))
    }

    pub fn cos(arg: Expr) -> Expr {
        if let Some(k) = pi_coefficient(&arg) {
            if k.denom().is_one() {
                return Self::int(if k.numer().is_even() { 1 } else { -1 });
            }
            if *k.denom() == 2.into() {
                return Self::zero();
            }
        }
        Self::wrap(Node::Cos(arg))
    }

    pub fn sinh(arg: Expr) -> Expr {
        if arg.is_zero() {
            return Self::zero();
        }
        Self::wrap(Node::Sinh(arg))
    }

    pub fn cosh(arg: Expr) -> Expr {
        if arg.is_zero() {
            return Self::one();
        }
        Self::wrap(Node::Cosh(arg))
    }

    /// `poly(args…)`; constant polynomials fold to a rational.
    pub fn poly(poly: MultiPoly, args: Vec<Expr>) -> Expr {
        assert_eq!(poly.dim(), args.len(), "one argument per polynomial variable");
        if let Some(c) = poly.as_constant() {
            return Self::rational(c);
        }
        let numeric = poly.to_numeric();
        Self::wrap(Node::Poly(PolyApp { poly, args, numeric }))
    }

    /// A polynomial in the coordinates `x1..xn` themselves.
    pub fn from_poly(poly: &MultiPoly) -> Expr {
        let args = (1..=poly.dim()).map(Self::var).collect();
        Self::poly(poly.clone(), args)
    }

    /// Largest variable index used (0 for constants).
    pub fn max_var(&self) -> usize {
        match self.node() {
            Node::Var(j) => *j,
            Node::Rational(_) | Node::PiMultiple(_) | Node::Complex(_) => 0,
            Node::Sum(v) | Node::Product(v) => v.iter().map(Expr::max_var).max().unwrap_or(0),
            Node::Pow(b, _) => b.max_var(),
            Node::Sin(a) | Node::Cos(a) | Node::Sinh(a) | Node::Cosh(a) => a.max_var(),
            Node::Poly(p) => p.args.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.max_var() == 0
    }

    /// Converts to an exact polynomial in `n` variables when the tree only
    /// uses rationals, variables, sums, products, powers and polynomial nodes.
    pub fn to_poly(&self, n: usize) -> Option<MultiPoly> {
        match self.node() {
            Node::Rational(r) => Some(MultiPoly::constant(n, r.clone())),
            Node::Var(j) if *j <= n => Some(MultiPoly::var(n, *j)),
            Node::Sum(v) => v.iter().try_fold(MultiPoly::zero(n), |acc, t| acc.add(&t.to_poly(n)?).ok()),
            Node::Product(v) => v.iter().try_fold(MultiPoly::one(n), |acc, t| acc.mul(&t.to_poly(n)?).ok()),
            Node::Pow(b, e) => Some(b.to_poly(n)?.pow(*e)),
            Node::Poly(p) => {
                let subs = p.args.iter().map(|a| a.to_poly(n)).collect::<Option<Vec<_>>>()?;
                if subs.is_empty() {
                    return p.poly.as_constant().map(|c| MultiPoly::constant(n, c));
                }
                p.poly.compose(&subs).ok()
            }
            _ => None,
        }
    }

    /// Node count, for diagnostics.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Sum(v) | Node::Product(v) => v.iter().map(Expr::size).sum(),
            Node::Pow(b, _) => b.size(),
            Node::Sin(a) | Node::Cos(a) | Node::Sinh(a) | Node::Cosh(a) => a.size(),
            Node::Poly(p) => p.args.iter().map(Expr::size).sum(),
            _ => 0,
        }
    }
}

impl PolyApp {
    pub fn numeric(&self) -> &NumericPoly {
        &self.numeric
    }

    /// True when the arguments are exactly `x1, …, xm` in order.
    pub fn has_identity_args(&self) -> bool {
        self.args
            .iter()
            .enumerate()
            .all(|(j, a)| matches!(a.node(), Node::Var(k) if *k == j + 1))
    }
}

/// `k` such that the expression is the constant `k·π` (including `0`).
fn pi_coefficient(e: &Expr) -> Option<Rational> {
    match e.node() {
        Node::PiMultiple(k) => Some(k.clone()),
        Node::Rational(r) if r.is_zero() => Some(Rational::zero()),
        _ => None,
    }
}

/// `sin(kπ)` for half-integer `k = m + 1/2`, which is `(−1)^m`.
fn half_integer_sign(k: &Rational) -> i64 {
    let m: num_bigint::BigInt = (k.numer() - num_bigint::BigInt::from(1)).div_floor(&num_bigint::BigInt::from(2));
    if m.is_even() {
        1
    } else {
        -1
    }
}
