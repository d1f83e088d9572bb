//! JSON encodings of fields, coefficients, polynomials and matrices.
//!
//! ```json
//! {"field": {"kind": "Qsqrt", "d": -2},
//!  "terms": [{"coeff": ["3/2", "-1/4"], "xexp": [4, 0, 0], "eexp": [0, 0, 0]}]}
//! ```
//!
//! Rational coefficients are exact fraction strings; extension coefficients
//! are `[rational part, t part]`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::ExactMatrix;
use crate::poly::{Group, Poly, TernaryForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "Qsqrt")]
    Qsqrt { d: i64 },
}

impl FieldJson {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldJson::Q => Ok(Field::Rational),
            FieldJson::Qsqrt { d } => Field::quadratic(*d),
        }
    }
}

impl From<Field> for FieldJson {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldJson::Q,
            Field::Quadratic(d) => FieldJson::Qsqrt { d },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(String),
    Extension([String; 2]),
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|e| Error::Parse(format!("bad fraction {s:?}: {e}")))
}

impl CoeffJson {
    pub fn to_scalar(&self, field: Field) -> Result<Scalar> {
        match self {
            CoeffJson::Rational(s) => Scalar::rational(parse_ratio(s)?).coerce(field),
            CoeffJson::Extension([a, b]) => Scalar::new(parse_ratio(a)?, parse_ratio(b)?, field),
        }
    }
}

/// Encode a coefficient; extension fields always use the two-part form.
pub fn encode_scalar(s: &Scalar, field: Field) -> CoeffJson {
    match field {
        Field::Rational => CoeffJson::Rational(s.rational_part().to_string()),
        Field::Quadratic(_) => CoeffJson::Extension([s.rational_part().to_string(), s.t_part().to_string()]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub xexp: [u8; 3],
    pub eexp: [u8; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: FieldJson,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn encode(p: &Poly) -> PolyJson {
        let field = p.field();
        PolyJson {
            field: field.into(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    coeff: encode_scalar(c, field),
                    xexp: [e[0], e[1], e[2]],
                    eexp: [e[3], e[4], e[5]],
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<Poly> {
        let field = self.field.to_field()?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let e = [t.xexp[0], t.xexp[1], t.xexp[2], t.eexp[0], t.eexp[1], t.eexp[2]];
                Ok((e, t.coeff.to_scalar(field)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Poly::from_terms(field, terms)
    }
}

pub fn poly_to_json(p: &Poly) -> serde_json::Value {
    serde_json::to_value(PolyJson::encode(p)).expect("serializable")
}

pub fn poly_from_json(s: &str) -> Result<Poly> {
    let pj: PolyJson = serde_json::from_str(s)?;
    pj.decode()
}

/// Decode a form, inferring the degree; the form must be homogeneous in `group`.
pub fn form_from_json(s: &str, group: Group) -> Result<TernaryForm> {
    let p = poly_from_json(s)?;
    let degree = p.degree_in(group).ok_or_else(|| Error::Degree {
        expected: "a nonzero homogeneous form".into(),
        got: p.to_string(),
    })?;
    TernaryForm::new(p, group, degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<CoeffJson>>,
}

impl MatrixJson {
    pub fn encode(m: &ExactMatrix) -> MatrixJson {
        let field = m.field().expect("single-field matrix");
        MatrixJson {
            field: field.into(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().iter().map(|r| r.iter().map(|s| encode_scalar(s, field)).collect()).collect(),
        }
    }

    pub fn decode(&self) -> Result<ExactMatrix> {
        let field = self.field.to_field()?;
        if self.entries.len() != self.rows {
            return Err(Error::Shape(format!("{} rows declared, {} given", self.rows, self.entries.len())));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| {
                if r.len() != self.cols {
                    return Err(Error::Shape(format!("row of length {} in a {}-column matrix", r.len(), self.cols)));
                }
                r.iter().map(|c| c.to_scalar(field)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::new(self.rows, self.cols, rows.into_iter().flatten().collect())
    }
}

pub fn vector_to_json(v: &[Scalar], field: Field) -> serde_json::Value {
    serde_json::to_value(v.iter().map(|s| encode_scalar(s, field)).collect::<Vec<_>>()).unwrap()
}

/// Five (or any number of) linear forms given by coefficient triples:
/// `{"field": {"kind": "Q"}, "lines": [["1","0","0"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinesJson {
    pub field: FieldJson,
    pub lines: Vec<[CoeffJson; 3]>,
}

impl LinesJson {
    pub fn decode(&self) -> Result<Vec<[Scalar; 3]>> {
        let field = self.field.to_field()?;
        self.lines
            .iter()
            .map(|l| Ok([l[0].to_scalar(field)?, l[1].to_scalar(field)?, l[2].to_scalar(field)?]))
            .collect()
    }

    pub fn encode(field: Field, lines: &[[Scalar; 3]]) -> LinesJson {
        LinesJson {
            field: field.into(),
            lines: lines.iter().map(|l| l.clone().map(|s| encode_scalar(&s, field))).collect(),
        }
    }
}
