//! Exact multivariate polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::frame::AffinePointFrame;
use crate::multiindex::MultiIndex;
use crate::rational::{self, Rational};

/// Sparse polynomial in `n` variables with rational coefficients.
///
/// Invariant: no stored coefficient is zero and every key has length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The coordinate `z_j` (1-based, matching the expression syntax).
    pub fn var(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n, "variable index out of range");
        Self::monomial(MultiIndex::unit(n, j - 1), Rational::one())
    }

    pub fn monomial(k: MultiIndex, c: Rational) -> Self {
        let mut p = Self::zero(k.dim());
        p.add_term(k, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n);
        for (k, c) in terms {
            check_dim(n, k.dim())?;
            p.add_term(k, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &MultiIndex) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::norm).max()
    }

    /// The constant value if the polynomial has no nonconstant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(k, _)| k.is_zero())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(rational::is_integer)
    }

    fn add_term(&mut self, k: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        check_dim(self.n, other.n)?;
        let mut out = MultiPoly::zero(self.n);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.add(kb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Rational::one())
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Exact iterated partial derivative `D^t P`.
    pub fn differentiate(&self, t: &MultiIndex) -> Result<MultiPoly> {
        check_dim(self.n, t.dim())?;
        let mut out = MultiPoly::zero(self.n);
        for (k, c) in &self.terms {
            let Some(rest) = k.checked_sub(t) else {
                continue;
            };
            let mut coef = c.clone();
            for (j, &tj) in t.as_slice().iter().enumerate() {
                coef *= Rational::from_integer(falling_factorial(k[j], tj));
            }
            out.add_term(rest, coef);
        }
        Ok(out)
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.n, point.len())?;
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|x| vec![Rational::one(), x.clone()]).collect();
        let mut sum = Rational::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (j, &e) in k.as_slice().iter().enumerate() {
                let table = &mut powers[j];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &point[j];
                    table.push(next);
                }
                term *= &table[e as usize];
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Floating evaluation at a complex point.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, point.len())?;
        Ok(self.to_numeric().eval(point))
    }

    pub fn to_numeric(&self) -> NumericPoly {
        NumericPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.as_slice().to_vec(), Complex64::new(rational::to_f64(c), 0.0)))
                .collect(),
        }
    }

    /// Substitutes `z_j ↦ subs[j]`; all substitutes share one dimension `m`.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        check_dim(self.n, subs.len())?;
        let m = match subs.first() {
            Some(s) => s.n,
            None => 0,
        };
        for s in subs {
            check_dim(m, s.n)?;
        }
        let mut powers: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(m), s.clone()]).collect();
        let mut out = MultiPoly::zero(m);
        for (k, c) in &self.terms {
            let mut term = MultiPoly::constant(m, c.clone());
            for (j, &e) in k.as_slice().iter().enumerate() {
                let table = &mut powers[j];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul(&subs[j])?;
                    table.push(next);
                }
                term = term.mul(&table[e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `P̃(w) = P(s_0 + Σ_i (s_i − s_0) w_i)`.
    pub fn precompose_affine(&self, frame: &AffinePointFrame) -> Result<MultiPoly> {
        check_dim(self.n, frame.dim())?;
        let subs = affine_substitution(frame.origin(), &frame.matrix());
        self.compose(&subs)
    }

    /// Inverse of [`MultiPoly::precompose_affine`]: `P(z) = P̃(M⁻¹(z − s_0))`.
    pub fn inverse_precompose(&self, frame: &AffinePointFrame) -> Result<MultiPoly> {
        check_dim(self.n, frame.dim())?;
        let inv = frame.inverse_matrix();
        let shift: Vec<Rational> = (0..self.n)
            .map(|r| -(0..self.n).map(|c| &inv[r][c] * &frame.origin()[c]).sum::<Rational>())
            .collect();
        let subs = affine_substitution(&shift, inv);
        self.compose(&subs)
    }

    /// True iff `D^t P = 0` for every `t ∈ (2ℕ)^n` with `‖t‖ = d`.
    pub fn even_slice_vanishes(&self, d: u32) -> bool {
        if d % 2 == 1 {
            return true;
        }
        crate::multiindex::indices_of_norm(self.n, d / 2).into_iter().all(|half| {
            let t = MultiIndex::new(half.as_slice().iter().map(|k| 2 * k).collect());
            // a monomial survives D^t iff t ≤ k componentwise
            !self.terms.keys().any(|k| t.divides(k))
        })
    }

    /// Univariate antiderivative with zero constant term.
    pub(crate) fn integrate_univariate(&self) -> MultiPoly {
        assert_eq!(self.n, 1);
        let mut out = MultiPoly::zero(1);
        for (k, c) in &self.terms {
            let e = k[0] + 1;
            out.add_term(MultiIndex::new(vec![e]), c / rational::int(e as i64));
        }
        out
    }
}

/// `z_r ↦ shift_r + Σ_c matrix[r][c] w_c`.
fn affine_substitution(shift: &[Rational], matrix: &[Vec<Rational>]) -> Vec<MultiPoly> {
    let n = shift.len();
    (0..n)
        .map(|r| {
            let mut p = MultiPoly::constant(n, shift[r].clone());
            for c in 0..n {
                p.add_term(MultiIndex::unit(n, c), matrix[r][c].clone());
            }
            p
        })
        .collect()
}

pub(crate) fn falling_factorial(k: u32, t: u32) -> BigInt {
    ((k - t + 1)..=k).fold(BigInt::one(), |acc, j| acc * j)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let vars: Vec<String> = k
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Floating copy of a polynomial for hot evaluation loops.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPoly {
    n: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumericPoly {
    pub fn from_terms(n: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        NumericPoly { n, terms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                k.iter()
                    .zip(z)
                    .fold(*c, |acc, (&e, &x)| if e == 0 { acc } else { acc * x.powu(e) })
            })
            .sum()
    }

    /// `Σ |c_k| Π |z_j|^{k_j}`, an upper bound for `|P(z)|`.
    pub fn eval_abs(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| k.iter().zip(z).fold(c.norm(), |acc, (&e, x)| acc * x.norm().powi(e as i32)))
            .sum()
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, c: Complex64) {
        for (k, v) in other.terms() {
            let w = c * rational::to_f64(v);
            match self.terms.iter_mut().find(|(e, _)| e.as_slice() == k.as_slice()) {
                Some((_, acc)) => *acc += w,
                None => self.terms.push((k.as_slice().to_vec(), w)),
            }
        }
    }
}

impl From<&MultiPoly> for NumericPoly {
    fn from(p: &MultiPoly) -> Self {
        p.to_numeric()
    }
}

impl MultiPoly {
    /// Rejects coefficients that are not integers.
    pub fn require_integral(&self) -> Result<()> {
        if self.is_integral() {
            Ok(())
        } else {
            Err(Error::InvalidInput("polynomial must have integer coefficients".into()))
        }
    }
}
