//! Text output in the parser's grammar.
//!
//! For trees without polynomial nodes, parsing the printed text yields the
//! same canonical tree. Polynomial nodes print as their expanded form.

use std::fmt;

use num_traits::{One, Signed};

use super::{Expr, Node};
use crate::rational::{self, Rational};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum_level(self, f)
    }
}

/// True when the term prints with a leading minus sign that can be pulled
/// out as a subtraction.
fn is_negative(e: &Expr) -> bool {
    match e.node() {
        Node::Rational(r) | Node::PiMultiple(r) => r.is_negative(),
        Node::Product(fs) => match fs[0].node() {
            Node::Rational(r) | Node::PiMultiple(r) => r.is_negative(),
            _ => false,
        },
        _ => false,
    }
}

fn write_sum_level(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let Node::Sum(terms) = e.node() else {
        return write_product_level(e, f);
    };
    for (k, t) in terms.iter().enumerate() {
        if k == 0 {
            write_product_level(t, f)?;
        } else if is_negative(t) {
            f.write_str(" - ")?;
            write_product_level(&t.neg(), f)?;
        } else {
            f.write_str(" + ")?;
            write_product_level(t, f)?;
        }
    }
    Ok(())
}

fn write_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str(&rational::to_text(r))
}

fn write_pi_multiple(k: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if k.is_one() {
        f.write_str("pi")
    } else if (-k).is_one() {
        f.write_str("-pi")
    } else {
        write_rational(k, f)?;
        f.write_str("*pi")
    }
}

fn write_product_level(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Rational(r) => write_rational(r, f),
        Node::PiMultiple(k) => write_pi_multiple(k, f),
        Node::Product(fs) => {
            let mut rest = &fs[..];
            if let Node::Rational(r) = fs[0].node() {
                if (-r).is_one() {
                    f.write_str("-")?;
                    rest = &fs[1..];
                }
            }
            for (k, factor) in rest.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                match factor.node() {
                    Node::Rational(r) => write_rational(r, f)?,
                    Node::PiMultiple(c) => write_pi_multiple(c, f)?,
                    _ => write_atom(factor, f)?,
                }
            }
            Ok(())
        }
        _ => write_atom(e, f),
    }
}

fn write_atom(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Var(j) => write!(f, "x{j}"),
        Node::PiMultiple(k) if k.is_one() => f.write_str("pi"),
        Node::Rational(r) if !r.is_negative() && r.denom().is_one() => write_rational(r, f),
        Node::Complex(z) => write!(f, "complex({:?}, {:?})", z.re, z.im),
        Node::Pow(b, n) => {
            write_atom(b, f)?;
            write!(f, "^{n}")
        }
        Node::Sin(a) => write!(f, "sin({a})"),
        Node::Cos(a) => write!(f, "cos({a})"),
        Node::Sinh(a) => write!(f, "sinh({a})"),
        Node::Cosh(a) => write!(f, "cosh({a})"),
        Node::Poly(app) => {
            let n = app.poly.dim();
            let args: Vec<String> = app.args.iter().map(|a| format!("({a})")).collect();
            let mut entries: Vec<_> = app.poly.terms().collect();
            entries.reverse();
            let terms: Vec<String> = entries
                .into_iter()
                .map(|(exp, c)| {
                    let mut s = format!("({})", rational::to_text(c));
                    for j in 0..n {
                        if exp[j] > 0 {
                            s.push_str(&format!("*{}^{}", args[j], exp[j]));
                        }
                    }
                    s
                })
                .collect();
            write!(f, "({})", terms.join(" + "))
        }
        _ => write!(f, "({e})"),
    }
}
