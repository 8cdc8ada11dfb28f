use num_traits::Zero;

use super::{Expr, Node};
use crate::multiindex::MultiIndex;
use crate::rational::Rational;

impl Expr {
    /// First partial derivative `∂/∂x_j` (1-based `j`).
    pub fn partial(&self, j: usize) -> Expr {
        match self.node() {
            Node::Rational(_) | Node::PiMultiple(_) | Node::Complex(_) => Expr::zero(),
            Node::Var(k) => {
                if *k == j {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Sum(terms) => Expr::sum(terms.iter().map(|t| t.partial(j)).collect()),
            Node::Product(factors) => {
                let mut terms = Vec::new();
                for (idx, f) in factors.iter().enumerate() {
                    let d = f.partial(j);
                    if d.is_zero() {
                        continue;
                    }
                    let mut fs = factors.clone();
                    fs[idx] = d;
                    terms.push(Expr::product(fs));
                }
                Expr::sum(terms)
            }
            Node::Pow(base, e) => Expr::product(vec![
                Expr::int(*e as i64),
                Expr::pow(base.clone(), e - 1),
                base.partial(j),
            ]),
            Node::Sin(u) => chain(Expr::cos(u.clone()), u, j),
            Node::Cos(u) => chain(Expr::sin(u.clone()).neg(), u, j),
            Node::Sinh(u) => chain(Expr::cosh(u.clone()), u, j),
            Node::Cosh(u) => chain(Expr::sinh(u.clone()), u, j),
            Node::Poly(app) => {
                let m = app.poly.dim();
                if app.has_identity_args() {
                    if j > m {
                        return Expr::zero();
                    }
                    let d = app.poly.differentiate(&MultiIndex::unit(m, j - 1)).expect("dimension");
                    return Expr::poly(d, app.args.clone());
                }
                let terms = (0..m)
                    .filter_map(|l| {
                        let inner = app.args[l].partial(j);
                        if inner.is_zero() {
                            return None;
                        }
                        let d = app.poly.differentiate(&MultiIndex::unit(m, l)).expect("dimension");
                        Some(Expr::product(vec![Expr::poly(d, app.args.clone()), inner]))
                    })
                    .collect();
                Expr::sum(terms)
            }
        }
    }

    /// Mixed partial `D^t` (entry `t[j]` differentiates in `x_{j+1}`).
    ///
    /// Products are expanded with the multivariate Leibniz rule, which keeps
    /// the result at `Π (t_j + 1)` terms per binary split instead of the
    /// `2^‖t‖` that repeated first-order product rules would produce.
    pub fn derivative(&self, t: &MultiIndex) -> Expr {
        if t.is_zero() {
            return self.clone();
        }
        if t.dim() < self.max_var() {
            // derivative orders for the missing variables are zero
            let mut v = t.as_slice().to_vec();
            v.resize(self.max_var(), 0);
            return self.derivative(&MultiIndex::new(v));
        }
        match self.node() {
            Node::Rational(_) | Node::PiMultiple(_) | Node::Complex(_) => Expr::zero(),
            Node::Var(k) => {
                if t.norm() == 1 && t[k - 1] == 1 {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Sum(terms) => Expr::sum(terms.iter().map(|e| e.derivative(t)).collect()),
            Node::Product(factors) => {
                // constants pass straight through
                let split = factors.iter().position(|f| !f.is_constant());
                let Some(first) = split else {
                    return Expr::zero();
                };
                let consts: Vec<Expr> = factors[..first].to_vec();
                let head = &factors[first];
                let tail = Expr::product(factors[first + 1..].to_vec());
                let mut terms = Vec::new();
                if tail.is_constant() {
                    let mut fs = consts;
                    fs.push(head.derivative(t));
                    fs.push(tail);
                    return Expr::product(fs);
                }
                for s in t.sub_indices() {
                    let rest = t.checked_sub(&s).expect("s ≤ t");
                    let dt = tail.derivative(&rest);
                    if dt.is_zero() {
                        continue;
                    }
                    let dh = head.derivative(&s);
                    if dh.is_zero() {
                        continue;
                    }
                    let binom = binomial(t, &s);
                    let mut fs = consts.clone();
                    fs.push(Expr::rational(binom));
                    fs.push(dh);
                    fs.push(dt);
                    terms.push(Expr::product(fs));
                }
                Expr::sum(terms)
            }
            Node::Poly(app) if app.has_identity_args() && t.dim() >= app.poly.dim() => {
                let m = app.poly.dim();
                if t.as_slice()[m..].iter().any(|&k| k > 0) {
                    return Expr::zero();
                }
                let d = app.poly.differentiate(&MultiIndex::from(&t.as_slice()[..m])).expect("dimension");
                Expr::poly(d, app.args.clone())
            }
            _ => {
                let j = t.as_slice().iter().position(|&k| k > 0).expect("nonzero order");
                let once = self.partial(j + 1);
                if once.is_zero() {
                    return once;
                }
                let mut rest = t.as_slice().to_vec();
                rest[j] -= 1;
                once.derivative(&MultiIndex::new(rest))
            }
        }
    }
}

fn chain(outer: Expr, inner: &Expr, j: usize) -> Expr {
    let d = inner.partial(j);
    if d.is_zero() {
        return d;
    }
    Expr::product(vec![d, outer])
}

/// `Π_j C(t_j, s_j)`.
fn binomial(t: &MultiIndex, s: &MultiIndex) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for (&tj, &sj) in t.as_slice().iter().zip(s.as_slice()) {
        let mut c = num_bigint::BigInt::from(1);
        for k in 0..sj {
            c = c * (tj - k) / (k + 1);
        }
        acc *= Rational::from_integer(c);
    }
    debug_assert!(!acc.is_zero());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn sine_derivatives() {
        assert_eq!(p("sin(pi*x1)").partial(1), p("pi*cos(pi*x1)"));
        assert_eq!(p("sin(pi*x1)").derivative(&mi(&[2])), p("-pi*pi*sin(pi*x1)"));
        assert_eq!(p("sinh(x1)").derivative(&mi(&[2])), p("sinh(x1)"));
        assert_eq!(p("cosh(2*x1)").partial(1), p("2*sinh(2*x1)"));
    }

    #[test]
    fn mixed_product_derivative() {
        let e = p("sin(pi*x1)*x2^2");
        assert_eq!(e.derivative(&mi(&[1, 1])), p("2*pi*cos(pi*x1)*x2"));
    }

    #[test]
    fn leibniz_agrees_with_repeated_partials() {
        let e = p("sin(pi*x1 + x2)*cosh(x1 - 2*x2)*(x1 + 3)^3");
        for t in [mi(&[2, 1]), mi(&[0, 3]), mi(&[1, 1])] {
            let mut rep = e.clone();
            for (j, &k) in t.as_slice().iter().enumerate() {
                for _ in 0..k {
                    rep = rep.partial(j + 1);
                }
            }
            let pt = [num_complex::Complex64::new(0.3, -0.2), num_complex::Complex64::new(-0.7, 0.4)];
            let a = e.derivative(&t).eval_numeric(&pt).unwrap();
            let b = rep.eval_numeric(&pt).unwrap();
            assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()), "{t}: {a} vs {b}");
        }
    }

    #[test]
    fn polynomial_nodes_differentiate_by_chain_rule() {
        let g = crate::poly::MultiPoly::from_terms(
            1,
            vec![(mi(&[2]), crate::rational::int(1)), (mi(&[0]), crate::rational::int(1))],
        )
        .unwrap();
        // g(x1^2) = x1^4 + 1
        let e = Expr::poly(g, vec![Expr::pow(Expr::var(1), 2)]);
        let d = e.derivative(&mi(&[3]));
        assert_eq!(d.to_poly(1).unwrap().to_string(), "24*x1");
    }

    #[test]
    fn zero_order_is_identity() {
        let e = p("x1*x2 + 1");
        assert_eq!(e.derivative(&mi(&[0, 0])), e);
        assert!(p("5").derivative(&mi(&[1])).is_zero());
    }
}
