//! Lidstone basis polynomials and reconstruction from index-set data.
//!
//! For `n` variables and a degree bound `d`, the constraint system has one
//! column per monomial of degree `≤ d` and one row per pair `(τ, j)` in the
//! index set with `‖τ‖ ≤ d`; the row holds `(D^τ z^k)(s_j)`. Every pair with
//! larger `‖τ‖` is satisfied automatically by polynomials of degree `≤ d`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frame::AffinePointFrame;
use crate::linalg::{Elimination, SolveError};
use crate::multiindex::{enumerate_index_set, in_index_set, indices_up_to, IndexPair, MultiIndex};
use crate::poly::{falling_factorial, MultiPoly};
use crate::rational::{self, Rational};

/// Classical Lidstone polynomial: `Λ_0 = z`, `Λ_k'' = Λ_{k−1}`,
/// `Λ_k(0) = Λ_k(1) = 0`.
pub fn univariate_lidstone(k: u32) -> MultiPoly {
    let mut p = MultiPoly::var(1, 1);
    for _ in 0..k {
        let q = p.integrate_univariate().integrate_univariate();
        let at_one = q.evaluate(&[Rational::one()]).expect("univariate");
        p = q.sub(&MultiPoly::var(1, 1).scale(&at_one)).expect("univariate");
    }
    p
}

/// Exact constraint matrix for one frame and degree bound, eliminated once.
#[derive(Debug)]
pub struct ConstraintSystem {
    degree: u32,
    rows: Vec<IndexPair>,
    row_index: HashMap<IndexPair, usize>,
    monomials: Vec<MultiIndex>,
    elimination: Elimination,
}

impl ConstraintSystem {
    pub fn new(frame: &AffinePointFrame, degree: u32) -> Self {
        let n = frame.dim();
        let rows = enumerate_index_set(n, degree);
        let monomials = indices_up_to(n, degree);
        let matrix = rows
            .iter()
            .map(|pair| {
                let point = frame.point(pair.i);
                monomials
                    .iter()
                    .enumerate()
                    .filter_map(|(c, k)| {
                        let v = monomial_derivative_at(k, &pair.t, point);
                        (!v.is_zero()).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        let elimination = Elimination::new(monomials.len(), matrix);
        let row_index = rows.iter().cloned().enumerate().map(|(r, p)| (p, r)).collect();
        ConstraintSystem { degree, rows, row_index, monomials, elimination }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn rows(&self) -> &[IndexPair] {
        &self.rows
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn rank(&self) -> usize {
        self.elimination.rank()
    }

    /// Only the zero polynomial of degree `≤ d` has all-zero data.
    pub fn has_trivial_kernel(&self) -> bool {
        self.elimination.has_trivial_kernel()
    }

    /// The polynomial of degree `≤ d` with the given data and zero data at
    /// every other row.
    pub fn solve(&self, data: &BTreeMap<IndexPair, Rational>) -> Result<MultiPoly> {
        let mut rhs = vec![Rational::zero(); self.rows.len()];
        for (pair, v) in data {
            match self.row_index.get(pair) {
                Some(&r) => rhs[r] = v.clone(),
                None if v.is_zero() => {}
                None => {
                    return Err(Error::InvalidInput(format!(
                        "data at {pair} exceeds degree bound {}",
                        self.degree
                    )))
                }
            }
        }
        let n = self.monomials.first().map_or(0, MultiIndex::dim);
        match self.elimination.solve(&rhs) {
            Ok(x) => Ok(MultiPoly::from_terms(n, self.monomials.iter().cloned().zip(x))?),
            Err(SolveError::Inconsistent) => Err(Error::Inconsistent { degree: self.degree }),
            Err(SolveError::Underdetermined) => Err(Error::Underdetermined { degree: self.degree }),
        }
    }
}

/// `(D^τ z^k)(p)`.
fn monomial_derivative_at(k: &MultiIndex, tau: &MultiIndex, point: &[Rational]) -> Rational {
    let mut v = Rational::one();
    for j in 0..k.dim() {
        if tau[j] > k[j] {
            return Rational::zero();
        }
        let e = k[j] - tau[j];
        if e > 0 {
            if point[j].is_zero() {
                return Rational::zero();
            }
            v *= num_traits::pow(point[j].clone(), e as usize);
        }
        v *= Rational::from_integer(falling_factorial(k[j], tau[j]));
    }
    v
}

type CacheKey = (Vec<Vec<Rational>>, u32);

fn system_cache() -> &'static Mutex<HashMap<CacheKey, Arc<ConstraintSystem>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<ConstraintSystem>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared constraint systems. Concurrent callers may build the same system
/// twice; both results are identical and either may be kept.
pub fn constraint_system(frame: &AffinePointFrame, degree: u32) -> Arc<ConstraintSystem> {
    let key = (frame.points().to_vec(), degree);
    if let Some(s) = system_cache().lock().unwrap().get(&key) {
        return s.clone();
    }
    let built = Arc::new(ConstraintSystem::new(frame, degree));
    system_cache().lock().unwrap().entry(key).or_insert(built).clone()
}

/// Exact rank test on the canonical frame.
pub fn kernel_rank_check(n: usize, degree: u32) -> bool {
    constraint_system(&AffinePointFrame::canonical(n), degree).has_trivial_kernel()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LidstoneBasisElement {
    pub t: MultiIndex,
    pub i: usize,
    pub poly: MultiPoly,
    /// Total degree of `poly`.
    pub degree: u32,
    /// Degree bound of the system that produced it.
    pub solved_at: u32,
}

/// `Λ_{t,i}`: the polynomial whose only nonzero index-set datum at the
/// canonical points is `(D^t Λ)(e_i) = 1`. Searches degree bounds
/// `‖t‖+1, …, degree_cap`.
pub fn lidstone_basis(n: usize, t: &MultiIndex, i: usize, degree_cap: u32) -> Result<LidstoneBasisElement> {
    crate::error::check_dim(n, t.dim())?;
    if i > n {
        return Err(Error::InvalidArgument(format!("point index {i} exceeds {n}")));
    }
    if !in_index_set(t, i) {
        return Err(Error::NotInIndexSet(IndexPair::new(t.clone(), i)));
    }
    let frame = AffinePointFrame::canonical(n);
    let data = BTreeMap::from([(IndexPair::new(t.clone(), i), Rational::one())]);
    for d in (t.norm() + 1)..=degree_cap {
        match constraint_system(&frame, d).solve(&data) {
            Ok(poly) => {
                let degree = poly.degree().unwrap_or(0);
                return Ok(LidstoneBasisElement { t: t.clone(), i, poly, degree, solved_at: d });
            }
            Err(Error::Inconsistent { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoSolutionWithinCap { cap: degree_cap })
}

/// Default search cap for basis elements.
pub fn default_degree_cap(t: &MultiIndex) -> u32 {
    2 * t.norm() + 4
}

/// Index-set data, at the canonical points unless a frame is given.
#[derive(Clone, Debug, PartialEq)]
pub struct DataSet {
    n: usize,
    frame: Option<AffinePointFrame>,
    entries: BTreeMap<IndexPair, Rational>,
}

impl DataSet {
    pub fn new(n: usize, frame: Option<AffinePointFrame>, entries: impl IntoIterator<Item = (IndexPair, Rational)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if let Some(f) = &frame {
            crate::error::check_dim(n, f.dim())?;
        }
        let mut map = BTreeMap::new();
        for (pair, v) in entries {
            crate::error::check_dim(n, pair.t.dim())?;
            if pair.i > n || !pair.is_admissible() {
                return Err(Error::NotInIndexSet(pair));
            }
            if map.insert(pair.clone(), v).is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry {pair}")));
            }
        }
        Ok(DataSet { n, frame, entries: map })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> Option<&AffinePointFrame> {
        self.frame.as_ref()
    }

    pub fn entries(&self) -> &BTreeMap<IndexPair, Rational> {
        &self.entries
    }

    pub fn max_norm(&self) -> u32 {
        self.entries.keys().map(|p| p.t.norm()).max().unwrap_or(0)
    }

    /// The index-set data of `p` at the frame points, up to `max_norm`.
    pub fn extract(p: &MultiPoly, frame: Option<AffinePointFrame>, max_norm: u32) -> Result<Self> {
        let n = p.dim();
        let canonical = AffinePointFrame::canonical(n);
        let points = frame.as_ref().unwrap_or(&canonical);
        crate::error::check_dim(n, points.dim())?;
        let mut entries = Vec::new();
        for pair in enumerate_index_set(n, max_norm) {
            let v = p.differentiate(&pair.t)?.evaluate(points.point(pair.i))?;
            if !v.is_zero() {
                entries.push((pair, v));
            }
        }
        DataSet::new(n, frame, entries)
    }
}

/// The unique polynomial of degree `≤ degree_bound` with the given data and
/// zero data at every other index-set pair up to that order.
pub fn reconstruct(data: &DataSet, degree_bound: u32) -> Result<MultiPoly> {
    match data.frame() {
        Some(f) if !f.is_canonical() => reconstruct_general(data, degree_bound),
        _ => solve_at(&AffinePointFrame::canonical(data.n), data, degree_bound),
    }
}

/// Reconstruction directly at the frame points. Output coefficients lie in
/// the field generated by the data and the point coordinates.
pub fn reconstruct_general(data: &DataSet, degree_bound: u32) -> Result<MultiPoly> {
    let frame = data.frame().cloned().unwrap_or_else(|| AffinePointFrame::canonical(data.n));
    solve_at(&frame, data, degree_bound)
}

fn solve_at(frame: &AffinePointFrame, data: &DataSet, degree_bound: u32) -> Result<MultiPoly> {
    if data.max_norm() > degree_bound && data.entries.iter().any(|(p, v)| p.t.norm() > degree_bound && !v.is_zero()) {
        return Err(Error::InvalidInput(format!(
            "data of order {} exceeds degree bound {degree_bound}",
            data.max_norm()
        )));
    }
    constraint_system(frame, degree_bound).solve(&data.entries)
}

/// Reconstruction at an axis-aligned frame by reducing to the canonical
/// points: `Q(w) = P(s_0 + diag(h) w)` has data `h^t · data`, and
/// `P = Q ∘ (affine map)⁻¹`.
pub fn reconstruct_by_conjugation(data: &DataSet, degree_bound: u32) -> Result<MultiPoly> {
    let Some(frame) = data.frame() else {
        return reconstruct(data, degree_bound);
    };
    if !frame.is_axis_aligned() {
        return Err(Error::InvalidArgument("conjugation needs an axis-aligned frame".into()));
    }
    let m = frame.matrix();
    let scaled = data.entries.iter().map(|(pair, v)| {
        let factor: Rational = (0..data.n)
            .map(|j| num_traits::pow(m[j][j].clone(), pair.t[j] as usize))
            .product();
        (pair.clone(), v * factor)
    });
    let canonical = DataSet::new(data.n, None, scaled)?;
    reconstruct(&canonical, degree_bound)?.inverse_precompose(frame)
}

/// `true` when all coefficients of `p` are rational with the common
/// denominator reported.
pub fn coefficient_denominator(p: &MultiPoly) -> num_bigint::BigInt {
    rational::common_denominator(p.terms().map(|(_, c)| c))
}
