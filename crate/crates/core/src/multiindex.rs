//! Multi-indices `t ∈ ℕⁿ` and the admissible index set of derivative/point pairs.
//!
//! A pair `(t, i)` with `0 ≤ i ≤ n` is admissible when `‖t‖` is even and the
//! first `i` entries of `t` are even (the second condition is vacuous for
//! `i = 0`). For `n = 1` this gives the classical Lidstone data: all even
//! derivatives at both endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial or order of a mixed partial derivative.
///
/// Ordered graded-lexicographically: first by total order, then
/// lexicographically on the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_j` (0-based `j`).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Total order `‖t‖ = t_1 + ⋯ + t_n`.
    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `t! = t_1!⋯t_n!`, exact.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .map(|&k| factorial(k))
            .fold(BigUint::one(), |acc, f| acc * f)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|&k| k % 2 == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All `s ≤ self` componentwise, in graded-lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &k in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=k).map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        out.sort();
        out
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, j: usize) -> &u32 {
        &self.0[j]
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, k) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, j| acc * j)
}

/// Derivative order `t` paired with a point index `i ∈ {0, …, n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexPair {
    pub t: MultiIndex,
    pub i: usize,
}

impl IndexPair {
    pub fn new(t: MultiIndex, i: usize) -> Self {
        IndexPair { t, i }
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// Membership in the admissible set: `‖t‖` even and `t_1, …, t_i` even.
    pub fn is_admissible(&self) -> bool {
        in_index_set(&self.t, self.i)
    }
}

impl Ord for IndexPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t.cmp(&other.t).then(self.i.cmp(&other.i))
    }
}

impl PartialOrd for IndexPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, i={})", self.t, self.i)
    }
}

/// Membership predicate for the admissible set. Point indices beyond `n`
/// are never admissible.
pub fn in_index_set(t: &MultiIndex, i: usize) -> bool {
    i <= t.dim() && t.norm().is_multiple_of(2) && t.as_slice()[..i].iter().all(|&k| k % 2 == 0)
}

/// All multi-indices of dimension `n` with `‖t‖ = total`, ascending
/// lexicographically (which is the graded-lex order within one total).
pub fn indices_of_norm(n: usize, total: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(total);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=total {
            prefix.push(k);
            rec(n, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(n, total, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All multi-indices with `‖t‖ ≤ max_norm`, in graded-lex order.
pub fn indices_up_to(n: usize, max_norm: u32) -> Vec<MultiIndex> {
    (0..=max_norm).flat_map(|d| indices_of_norm(n, d)).collect()
}

/// The finite truncation `{(t,i) admissible : ‖t‖ ≤ max_norm}`, ordered by
/// `(‖t‖, graded-lex on t, i)`.
pub fn enumerate_index_set(n: usize, max_norm: u32) -> Vec<IndexPair> {
    assert!(n >= 1, "dimension must be at least 1");
    (0..=max_norm)
        .step_by(2)
        .flat_map(|d| indices_of_norm(n, d))
        .flat_map(|t| {
            (0..=n)
                .filter(|&i| in_index_set(&t, i))
                .map(|i| IndexPair::new(t.clone(), i))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Pairs `(t, i)` with `‖t‖` even and `‖t‖ ≤ max_norm`, admissible or not.
pub fn enumerate_even_pairs(n: usize, max_norm: u32) -> Vec<IndexPair> {
    (0..=max_norm)
        .step_by(2)
        .flat_map(|d| indices_of_norm(n, d))
        .flat_map(|t| (0..=n).map(move |i| IndexPair::new(t.clone(), i)))
        .collect()
}
