//! JSON interchange formats. Rationals travel as `"p/q"` strings, complex
//! numbers as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{DataSet, LidstoneBasisElement};
use crate::error::{Error, Result};
use crate::frame::{AffinePointFrame, ComplexFrame};
use crate::multiindex::{IndexPair, MultiIndex};
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeJson {
    Degree(u32),
    /// `"none"` for the zero polynomial.
    None(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
    pub degree: DegreeJson,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        PolyJson {
            n: p.dim(),
            terms: p
                .terms()
                .map(|(k, c)| TermJson { exp: k.as_slice().to_vec(), coef: rational::to_text(c) })
                .collect(),
            degree: match p.degree() {
                Some(d) => DegreeJson::Degree(d),
                None => DegreeJson::None("none".into()),
            },
        }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<MultiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((MultiIndex::new(t.exp.clone()), rational::parse(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(self.n, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub t: Vec<u32>,
    pub i: usize,
    /// Degree bound of the linear system that produced the polynomial.
    pub solved_at: u32,
    #[serde(flatten)]
    pub poly: PolyJson,
}

impl From<&LidstoneBasisElement> for BasisJson {
    fn from(e: &LidstoneBasisElement) -> Self {
        BasisJson { t: e.t.as_slice().to_vec(), i: e.i, solved_at: e.solved_at, poly: PolyJson::from(&e.poly) }
    }
}

/// One frame coordinate: an exact rational or a complex pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordJson {
    Rational(String),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameJson {
    pub points: Vec<Vec<CoordJson>>,
}

impl From<&AffinePointFrame> for FrameJson {
    fn from(f: &AffinePointFrame) -> Self {
        FrameJson {
            points: f
                .points()
                .iter()
                .map(|p| p.iter().map(|x| CoordJson::Rational(rational::to_text(x))).collect())
                .collect(),
        }
    }
}

impl FrameJson {
    /// Exact frame; complex coordinates with zero imaginary part are not
    /// accepted here because their real parts are floats.
    pub fn to_rational(&self) -> Result<AffinePointFrame> {
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| match c {
                        CoordJson::Rational(s) => rational::parse(s),
                        CoordJson::Complex(_) => {
                            Err(Error::InvalidInput("this command needs rational frame coordinates".into()))
                        }
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        AffinePointFrame::new(points)
    }

    pub fn to_complex(&self) -> Result<ComplexFrame> {
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| match c {
                        CoordJson::Rational(s) => Ok(Complex64::new(rational::to_f64(&rational::parse(s)?), 0.0)),
                        CoordJson::Complex([re, im]) => Ok(Complex64::new(*re, *im)),
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        ComplexFrame::new(points)
    }

    /// Rational when every coordinate is.
    pub fn is_rational(&self) -> bool {
        self.points.iter().flatten().all(|c| matches!(c, CoordJson::Rational(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub t: Vec<u32>,
    pub i: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSetJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameJson>,
    #[serde(default)]
    pub entries: Vec<EntryJson>,
}

impl DataSetJson {
    pub fn to_dataset(&self) -> Result<DataSet> {
        let frame = self.frame.as_ref().map(FrameJson::to_rational).transpose()?;
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((IndexPair::new(MultiIndex::new(e.t.clone()), e.i), rational::parse(&e.value)?)))
            .collect::<Result<Vec<_>>>()?;
        DataSet::new(self.n, frame, entries)
    }
}

impl From<&DataSet> for DataSetJson {
    fn from(d: &DataSet) -> Self {
        DataSetJson {
            n: d.dim(),
            frame: d.frame().map(FrameJson::from),
            entries: d
                .entries()
                .iter()
                .map(|(p, v)| EntryJson { t: p.t.as_slice().to_vec(), i: p.i, value: rational::to_text(v) })
                .collect(),
        }
    }
}
