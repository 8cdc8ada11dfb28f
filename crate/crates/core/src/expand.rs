//! Truncated Lidstone expansion `Σ (D^t f)(e_i) Λ_{t,i}` over index-set
//! pairs with `‖t‖ ≤ T`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{default_degree_cap, lidstone_basis};
use crate::error::{Error, Result};
use crate::multiindex::{enumerate_index_set, MultiIndex};
use crate::poly::{MultiPoly, NumericPoly};
use crate::rational::{self, Rational};
use crate::source::{DerivativeSource, EvalOracle, Value};

#[derive(Clone, Debug)]
pub struct ExpansionTerm {
    pub t: MultiIndex,
    pub i: usize,
    pub coefficient: Value,
    pub basis: MultiPoly,
}

#[derive(Clone, Debug)]
pub enum PartialSum {
    Exact(MultiPoly),
    Numeric(NumericPoly),
}

impl PartialSum {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        match self {
            PartialSum::Exact(p) => p.evaluate_complex(z).expect("dimension"),
            PartialSum::Numeric(p) => p.eval(z),
        }
    }

    pub fn as_exact(&self) -> Option<&MultiPoly> {
        match self {
            PartialSum::Exact(p) => Some(p),
            PartialSum::Numeric(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub n: usize,
    pub truncation: u32,
    pub terms: Vec<ExpansionTerm>,
    pub partial_sum: PartialSum,
}

impl Expansion {
    /// Terms with a nonzero coefficient.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = &ExpansionTerm> {
        self.terms.iter().filter(|t| t.coefficient.abs() != 0.0)
    }
}

pub fn expand<S: DerivativeSource + ?Sized>(source: &S, truncation: u32) -> Result<Expansion> {
    let n = source.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let pairs = enumerate_index_set(n, truncation);
    let terms: Vec<ExpansionTerm> = (0..=n)
        .into_par_iter()
        .map(|i| -> Result<Vec<ExpansionTerm>> {
            let here: Vec<_> = pairs.iter().filter(|p| p.i == i).collect();
            let ts: Vec<MultiIndex> = here.iter().map(|p| p.t.clone()).collect();
            let mut point = vec![Rational::from_integer(0.into()); n];
            if i > 0 {
                point[i - 1] = Rational::from_integer(1.into());
            }
            let values = source.derivatives_at(&ts, &point)?;
            here.into_iter()
                .zip(values)
                .map(|(p, coefficient)| {
                    let basis = lidstone_basis(n, &p.t, i, default_degree_cap(&p.t))?.poly;
                    Ok(ExpansionTerm { t: p.t.clone(), i, coefficient, basis })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut terms = terms;
    terms.sort_by_key(|a| (a.t.clone(), a.i));

    let partial_sum = if terms.iter().all(|t| t.coefficient.is_exact()) {
        let mut sum = MultiPoly::zero(n);
        for term in &terms {
            let c = term.coefficient.as_exact().expect("checked");
            if !num_traits::Zero::is_zero(c) {
                sum = sum.add(&term.basis.scale(c))?;
            }
        }
        PartialSum::Exact(sum)
    } else {
        let mut sum = NumericPoly::from_terms(n, Vec::new());
        for term in &terms {
            let c = term.coefficient.to_complex();
            if c != Complex64::new(0.0, 0.0) {
                sum.add_scaled(&term.basis, c);
            }
        }
        PartialSum::Numeric(sum)
    };
    Ok(Expansion { n, truncation, terms, partial_sum })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualOptions {
    /// Grid points per axis on `[0, 1]^n`; odd so the midpoint is included.
    pub grid: usize,
    /// Random points in the unit polydisc.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions { grid: 21, samples: 64, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    /// `max |f − S_T|` on the real grid.
    pub grid_max: f64,
    /// `max |f|` on the same grid.
    pub grid_function_max: f64,
    /// `max |f − S_T|` at the random polydisc points.
    pub polydisc_max: f64,
    pub options: ResidualOptions,
}

pub fn residual<F: EvalOracle + ?Sized>(f: &F, expansion: &Expansion, options: &ResidualOptions) -> Result<Residual> {
    let n = expansion.n;
    crate::error::check_dim(n, f.dim())?;
    if options.grid < 2 {
        return Err(Error::InvalidArgument("residual grid needs at least 2 points per axis".into()));
    }
    let m = options.grid;
    let total = m.checked_pow(n as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| {
        Error::InvalidArgument(format!("{m}^{n} residual grid points is too many"))
    })?;
    let step = (m - 1) as i64;
    let (grid_max, grid_function_max) = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut exact = Vec::with_capacity(n);
            for _ in 0..n {
                exact.push(rational::frac((rest % m) as i64, step));
                rest /= m;
            }
            let z: Vec<Complex64> = exact.iter().map(|x| Complex64::new(rational::to_f64(x), 0.0)).collect();
            if let (PartialSum::Exact(p), Some(fx)) = (&expansion.partial_sum, f.eval_exact(&exact)) {
                let diff = &fx - p.evaluate(&exact).expect("dimension");
                return (rational::to_f64(&diff).abs(), rational::to_f64(&fx).abs());
            }
            let fv = f.eval(&z);
            let sv = match &expansion.partial_sum {
                PartialSum::Exact(p) => Complex64::new(rational::to_f64(&p.evaluate(&exact).expect("dimension")), 0.0),
                PartialSum::Numeric(p) => p.eval(&z),
            };
            ((fv - sv).norm(), fv.norm())
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let points: Vec<Vec<Complex64>> = (0..options.samples)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect()
        })
        .collect();
    let polydisc_max = points
        .par_iter()
        .map(|z| (f.eval(z) - expansion.partial_sum.eval(z)).norm())
        .reduce(|| 0.0, f64::max);
    for v in [grid_max, grid_function_max, polydisc_max] {
        if !v.is_finite() {
            return Err(Error::NonFinite("residual".into()));
        }
    }
    Ok(Residual { grid_max, grid_function_max, polydisc_max, options: *options })
}
