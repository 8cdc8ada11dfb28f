//! Exact linear algebra over ℚ.
//!
//! Systems are reduced by fraction-free elimination on sparse integer rows:
//! each update is `row ← p·row − a·pivot` followed by division by the row
//! content, so entries stay integral and small. The update sequence is
//! logged so right-hand sides can be replayed after a single factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{self, Rational};

type SparseRow = Vec<(usize, BigInt)>;

#[derive(Clone, Debug)]
enum RowOp {
    /// `row[target] ← (mt·row[target] − mp·row[pivot]) / div`
    Combine {
        target: usize,
        pivot: usize,
        mt: BigInt,
        mp: BigInt,
        div: BigInt,
    },
}

/// Why a right-hand side could not be solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    Underdetermined,
}

/// Result of eliminating a sparse system once; reusable for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Elimination {
    cols: usize,
    rows: Vec<SparseRow>,
    row_scale: Vec<BigInt>,
    /// `(row, column)` of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    zero_rows: Vec<usize>,
    ops: Vec<RowOp>,
}

impl Elimination {
    /// Eliminates a system given as sparse rational rows over `cols` columns.
    pub fn new(cols: usize, rows: Vec<Vec<(usize, Rational)>>) -> Self {
        let mut int_rows = Vec::with_capacity(rows.len());
        let mut row_scale = Vec::with_capacity(rows.len());
        for row in rows {
            let lcm = rational::common_denominator(row.iter().map(|(_, v)| v));
            let mut r: SparseRow = row
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| {
                    assert!(c < cols, "column out of range");
                    let scaled = v * Rational::from_integer(lcm.clone());
                    (c, scaled.to_integer())
                })
                .collect();
            r.sort_by_key(|(c, _)| *c);
            int_rows.push(r);
            row_scale.push(lcm);
        }
        let mut e = Elimination {
            cols,
            rows: int_rows,
            row_scale,
            pivots: Vec::new(),
            zero_rows: Vec::new(),
            ops: Vec::new(),
        };
        e.run();
        e
    }

    fn run(&mut self) {
        let m = self.rows.len();
        let mut active = vec![true; m];
        for col in 0..self.cols {
            let candidates: Vec<usize> = (0..m)
                .filter(|&r| active[r] && entry(&self.rows[r], col).is_some())
                .collect();
            // sparsest row makes the best pivot
            let Some(&pivot) = candidates.iter().min_by_key(|&&r| (self.rows[r].len(), r)) else {
                continue;
            };
            active[pivot] = false;
            let p = entry(&self.rows[pivot], col).unwrap().clone();
            for &target in candidates.iter().filter(|&&r| r != pivot) {
                let a = entry(&self.rows[target], col).unwrap().clone();
                let g = p.gcd(&a);
                let mt = &p / &g;
                let mp = &a / &g;
                let mut combined = combine(&self.rows[target], &mt, &self.rows[pivot], &mp);
                let content = combined.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
                let div = if content.is_zero() { BigInt::one() } else { content };
                if !div.is_one() {
                    for (_, v) in combined.iter_mut() {
                        *v /= &div;
                    }
                }
                self.rows[target] = combined;
                self.ops.push(RowOp::Combine {
                    target,
                    pivot,
                    mt,
                    mp,
                    div,
                });
            }
            self.pivots.push((pivot, col));
        }
        self.zero_rows = (0..m).filter(|&r| active[r]).collect();
        debug_assert!(self.zero_rows.iter().all(|&r| self.rows[r].is_empty()));
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Only the zero vector solves the homogeneous system.
    pub fn has_trivial_kernel(&self) -> bool {
        self.rank() == self.cols
    }

    /// Solves `A x = b` exactly. Requires full column rank and checks every
    /// eliminated row for consistency.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>, SolveError> {
        assert_eq!(rhs.len(), self.rows.len(), "right-hand side length");
        let mut b: Vec<Rational> = rhs
            .iter()
            .zip(&self.row_scale)
            .map(|(v, s)| v * Rational::from_integer(s.clone()))
            .collect();
        for op in &self.ops {
            let RowOp::Combine { target, pivot, mt, mp, div } = op;
            let updated = (&b[*target] * Rational::from_integer(mt.clone())
                - &b[*pivot] * Rational::from_integer(mp.clone()))
                / Rational::from_integer(div.clone());
            b[*target] = updated;
        }
        if self.zero_rows.iter().any(|&r| !b[r].is_zero()) {
            return Err(SolveError::Inconsistent);
        }
        if !self.has_trivial_kernel() {
            return Err(SolveError::Underdetermined);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for &(row, col) in self.pivots.iter().rev() {
            let mut acc = b[row].clone();
            let mut diag = BigInt::zero();
            for (c, v) in &self.rows[row] {
                if *c == col {
                    diag = v.clone();
                } else {
                    acc -= &x[*c] * Rational::from_integer(v.clone());
                }
            }
            x[col] = acc / Rational::from_integer(diag);
        }
        Ok(x)
    }
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `mt·a − mp·b` on sorted sparse rows.
fn combine(a: &SparseRow, mt: &BigInt, b: &SparseRow, mp: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, &a[i].1 * mt));
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(&b[j].1 * mp)));
            j += 1;
        } else {
            let v = &a[i].1 * mt - &b[j].1 * mp;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Inverse of a small dense square matrix by Gauss-Jordan; `None` if singular.
pub fn dense_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
