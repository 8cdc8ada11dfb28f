//! Multivariate Lidstone interpolation: index sets, exact basis
//! polynomials, reconstruction from derivative data, symbolic test
//! functions and growth diagnostics.

pub mod basis;
pub mod contour;
pub mod error;
pub mod expand;
pub mod expr;
pub mod families;
pub mod frame;
pub mod growth;
pub mod json;
pub mod linalg;
pub mod multiindex;
pub mod poly;
pub mod rational;
pub mod source;
pub mod verify;

pub use error::{Error, Result};
pub use frame::{AffinePointFrame, ComplexFrame};
pub use multiindex::{IndexPair, MultiIndex};
pub use poly::{MultiPoly, NumericPoly};
pub use rational::Rational;
