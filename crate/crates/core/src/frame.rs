//! Point frames `s_0, …, s_n` with `{s_i − s_0}` a basis.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};

/// Rational frame used on the exact path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePointFrame {
    points: Vec<Vec<Rational>>,
    inverse: Vec<Vec<Rational>>,
}

impl AffinePointFrame {
    /// Validates shape (`n + 1` points of length `n`) and invertibility.
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let n = points.len().checked_sub(1).ok_or_else(|| {
            Error::InvalidInput("a frame needs at least two points".into())
        })?;
        if n == 0 {
            return Err(Error::InvalidInput("a frame needs at least two points".into()));
        }
        for p in &points {
            check_dim(n, p.len())?;
        }
        let m = difference_matrix(&points);
        let inverse = linalg::dense_inverse(&m).ok_or(Error::SingularFrame)?;
        Ok(AffinePointFrame { points, inverse })
    }

    /// `e_0 = 0` and the unit vectors `e_1, …, e_n`.
    pub fn canonical(n: usize) -> Self {
        let mut points = vec![vec![Rational::zero(); n]];
        for i in 0..n {
            let mut p = vec![Rational::zero(); n];
            p[i] = Rational::one();
            points.push(p);
        }
        Self::new(points).expect("canonical frame is invertible")
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn origin(&self) -> &[Rational] {
        &self.points[0]
    }

    /// Column `c` is `s_{c+1} − s_0`.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        difference_matrix(&self.points)
    }

    pub fn inverse_matrix(&self) -> &[Vec<Rational>] {
        &self.inverse
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical(self.dim())
    }

    /// True when every `s_i − s_0` is a multiple of `e_i`.
    pub fn is_axis_aligned(&self) -> bool {
        let m = self.matrix();
        (0..self.dim()).all(|r| (0..self.dim()).all(|c| r == c || m[r][c].is_zero()))
    }

    /// `max_i |s_i|` with `|z| = max_j |z_j|`.
    pub fn max_norm(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.iter().map(|x| rational::to_f64(&x.abs())))
            .fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> ComplexFrame {
        ComplexFrame {
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| Complex64::new(rational::to_f64(x), 0.0)).collect())
                .collect(),
        }
    }
}

fn difference_matrix(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = points.len() - 1;
    (0..n)
        .map(|r| (0..n).map(|c| &points[c + 1][r] - &points[0][r]).collect())
        .collect()
}

/// Floating frame for the numeric growth path; points may be complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFrame {
    pub points: Vec<Vec<Complex64>>,
}

impl ComplexFrame {
    pub fn new(points: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = points.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::InvalidInput("a frame needs at least two points".into()));
        }
        for p in &points {
            check_dim(n, p.len())?;
        }
        Ok(ComplexFrame { points })
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn max_norm(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// The directions `s_i − s_0`, `i = 1..=n`.
    pub fn directions(&self) -> Vec<Vec<Complex64>> {
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(&self.points[0]).map(|(a, b)| a - b).collect())
            .collect()
    }
}
