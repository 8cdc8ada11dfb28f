//! Recursive-descent parser for the expression text format.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" integer ] ;
//! atom    = number | "x" digits | "pi"
//!         | ("sin" | "cos" | "sinh" | "cosh") "(" expr ")"
//!         | "complex" "(" float "," float ")"
//!         | "(" expr ")" ;
//! number  = digits [ "." digits ] ;
//! ```
//!
//! Decimal literals are read as exact rationals. `complex(re, im)` is a
//! floating constant and accepts ordinary float syntax for both parts.

use num_complex::Complex64;
use num_traits::Zero;

use super::Expr;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub fn parse_expression(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.syntax(format!("expected '{}', found '{}'", c as char, found as char))),
                None => Err(self.syntax(format!("expected '{}', found end of input", c as char))),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(self.term()?.neg());
            } else {
                return Ok(Expr::sum(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.mul(&reciprocal(&rhs, at)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.syntax("expected nonnegative integer exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.syntax("exponent too large"))?;
            return Ok(Expr::pow(base, e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn identifier(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            None => return Err(self.syntax("unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if !c.is_ascii_alphabetic() {
            return Err(self.syntax(format!("unexpected '{}'", c as char)));
        }
        let name = self.identifier().to_string();
        match name.as_str() {
            "pi" => Ok(Expr::pi()),
            "sin" | "cos" | "sinh" | "cosh" => {
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(match name.as_str() {
                    "sin" => Expr::sin(arg),
                    "cos" => Expr::cos(arg),
                    "sinh" => Expr::sinh(arg),
                    _ => Expr::cosh(arg),
                })
            }
            "complex" => {
                self.expect(b'(')?;
                let re = self.float()?;
                self.expect(b',')?;
                let im = self.float()?;
                self.expect(b')')?;
                Ok(Expr::complex(Complex64::new(re, im)))
            }
            _ => match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                Some(j) if j >= 1 && !name[1..].starts_with('0') => Ok(Expr::var(j)),
                _ => Err(Error::UnknownIdentifier { pos: start, name }),
            },
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let int_part = self.digits().to_string();
        let mut text = int_part.clone();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_part = self.digits();
            if int_part.is_empty() && frac_part.is_empty() {
                self.pos = start;
                return Err(self.syntax("malformed number"));
            }
            text = format!("{}.{}", if int_part.is_empty() { "0" } else { &int_part }, frac_part);
        }
        let r = rational::parse(&text).map_err(|_| Error::Syntax { pos: start, msg: "malformed number".into() })?;
        Ok(Expr::rational(r))
    }

    fn float(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let sign_ok = (c == b'-' || c == b'+')
                && (self.pos == start || matches!(self.src[self.pos - 1], b'e' | b'E'));
            if c.is_ascii_alphanumeric() || c == b'.' || sign_ok {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Syntax { pos: start, msg: format!("malformed float '{text}'") }),
        }
    }
}

fn reciprocal(e: &Expr, pos: usize) -> Result<Expr> {
    if !e.is_constant() {
        return Err(Error::NonConstantDivision { pos });
    }
    if let Some(r) = e.as_rational() {
        if r.is_zero() {
            return Err(Error::Syntax { pos, msg: "division by zero".into() });
        }
        return Ok(Expr::rational(Rational::from_integer(1.into()) / r));
    }
    let v = e.eval_unchecked(&[]);
    if v == Complex64::zero() || !v.is_finite() {
        return Err(Error::Syntax { pos, msg: "division by zero".into() });
    }
    Ok(Expr::complex(v.inv()))
}
