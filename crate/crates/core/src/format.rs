//! JSON documents for schemes, shares, secrets, codes and graphs.
//!
//! Field elements are written as their residue when the field is prime and
//! as a little-endian coefficient array otherwise. Share bundles are flat
//! residue sequences.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldSpec, Matrix};
use crate::lrc::{LinearCode, LocalityStructure};
use crate::secret::{Precode, SchemeParams, SchemeTag, SecretSharingScheme, ShareVector};

pub const FORMAT: &str = "lrss/1";

/// Parses JSON text; errors carry the line, column and offending field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemDoc {
    Residue(u64),
    Coeffs(Vec<u64>),
}

pub fn elem_doc(field: &Field, e: Elem) -> ElemDoc {
    if field.degree() == 1 {
        ElemDoc::Residue(e.0)
    } else {
        ElemDoc::Coeffs(field.coeffs(e))
    }
}

pub fn elem_from_doc(field: &Field, doc: &ElemDoc) -> Result<Elem> {
    match doc {
        ElemDoc::Residue(v) if field.degree() == 1 || *v < field.p() => field.elem(*v),
        ElemDoc::Residue(v) => Err(Error::Format(format!(
            "element {v} must be a coefficient array in GF({}^{})",
            field.p(),
            field.degree()
        ))),
        ElemDoc::Coeffs(c) => {
            if c.len() > field.degree() {
                return Err(Error::Format(format!(
                    "{} coefficients for degree {}",
                    c.len(),
                    field.degree()
                )));
            }
            field.from_coeffs(c)
        }
    }
}

fn matrix_doc(field: &Field, m: &Matrix) -> Vec<Vec<ElemDoc>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(|&e| elem_doc(field, e)).collect())
        .collect()
}

fn matrix_from_doc(field: &Field, rows: &[Vec<ElemDoc>], cols: usize) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|row| row.iter().map(|d| elem_from_doc(field, d)).collect())
        .collect::<Result<Vec<Vec<Elem>>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::empty(cols));
    }
    Matrix::from_rows(rows)
}

/// Flat residues of a bundle of elements.
pub fn flatten(field: &Field, values: &[Elem]) -> Vec<u64> {
    if field.degree() == 1 {
        values.iter().map(|e| e.0).collect()
    } else {
        values.iter().flat_map(|&e| field.coeffs(e)).collect()
    }
}

pub fn unflatten(field: &Field, flat: &[u64]) -> Result<Vec<Elem>> {
    let d = field.degree();
    if flat.len() % d != 0 {
        return Err(Error::Format(format!(
            "{} residues do not split into elements of degree {d}",
            flat.len()
        )));
    }
    if d == 1 {
        flat.iter().map(|&v| field.elem(v)).collect()
    } else {
        flat.chunks(d).map(|c| field.from_coeffs(c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrecodeDoc {
    Identity,
    Gabidulin { alphas: Vec<ElemDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadDoc {
    pub secret_len: usize,
    pub randomness_len: usize,
    pub maps: Vec<Vec<Vec<ElemDoc>>>,
    pub precode: PrecodeDoc,
    pub recovery: Vec<Vec<usize>>,
    #[serde(default)]
    pub groups: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub format: String,
    pub tag: SchemeTag,
    pub params: SchemeParams,
    pub field: FieldSpec,
    pub payload: PayloadDoc,
}

fn check_format(format: &str) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Format(format!("unsupported format {format:?}, expected {FORMAT:?}")));
    }
    Ok(())
}

impl SchemeDoc {
    pub fn from_scheme(s: &SecretSharingScheme) -> Self {
        let f = &s.field;
        SchemeDoc {
            format: FORMAT.into(),
            tag: s.tag,
            params: s.params,
            field: f.spec().clone(),
            payload: PayloadDoc {
                secret_len: s.secret_len,
                randomness_len: s.randomness_len,
                maps: s.maps.iter().map(|m| matrix_doc(f, m)).collect(),
                precode: match &s.precode {
                    Precode::Identity => PrecodeDoc::Identity,
                    Precode::Gabidulin { alphas } => PrecodeDoc::Gabidulin {
                        alphas: alphas.iter().map(|&a| elem_doc(f, a)).collect(),
                    },
                },
                recovery: s.recovery.clone(),
                groups: s.groups.clone(),
            },
        }
    }

    pub fn to_scheme(&self) -> Result<SecretSharingScheme> {
        check_format(&self.format)?;
        let field = Field::from_spec(self.field.clone())?;
        let p = &self.payload;
        let w = p.secret_len + p.randomness_len;
        let maps = p
            .maps
            .iter()
            .map(|m| matrix_from_doc(&field, m, w))
            .collect::<Result<Vec<_>>>()?;
        let precode = match &p.precode {
            PrecodeDoc::Identity => Precode::Identity,
            PrecodeDoc::Gabidulin { alphas } => Precode::Gabidulin {
                alphas: alphas
                    .iter()
                    .map(|a| elem_from_doc(&field, a))
                    .collect::<Result<_>>()?,
            },
        };
        let scheme = SecretSharingScheme {
            tag: self.tag,
            params: self.params,
            field,
            secret_len: p.secret_len,
            randomness_len: p.randomness_len,
            maps,
            precode,
            recovery: p.recovery.clone(),
            groups: p.groups.clone(),
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

pub fn scheme_to_json(s: &SecretSharingScheme) -> Result<String> {
    to_pretty(&SchemeDoc::from_scheme(s))
}

pub fn scheme_from_json(text: &str) -> Result<SecretSharingScheme> {
    parse::<SchemeDoc>(text)?.to_scheme()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharesDoc {
    pub n: usize,
    pub coords: BTreeMap<String, Vec<u64>>,
}

impl SharesDoc {
    pub fn from_shares(field: &Field, shares: &ShareVector) -> Self {
        SharesDoc {
            n: shares.n,
            coords: shares
                .coords
                .iter()
                .map(|(i, v)| (i.to_string(), flatten(field, v)))
                .collect(),
        }
    }

    pub fn to_shares(&self, field: &Field) -> Result<ShareVector> {
        let mut out = ShareVector::new(self.n);
        for (k, v) in &self.coords {
            let i: usize = k
                .parse()
                .map_err(|_| Error::Format(format!("share index {k:?} is not an integer")))?;
            if i >= self.n {
                return Err(Error::Format(format!("share index {i} outside [{}]", self.n)));
            }
            out.insert(i, unflatten(field, v)?);
        }
        Ok(out)
    }
}

pub fn shares_to_json(field: &Field, shares: &ShareVector) -> Result<String> {
    to_pretty(&SharesDoc::from_shares(field, shares))
}

pub fn shares_from_json(field: &Field, text: &str) -> Result<ShareVector> {
    parse::<SharesDoc>(text)?.to_shares(field)
}

/// Secret (and optionally randomness) as flat residues.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretDoc {
    pub secret: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub randomness: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default)]
    pub groups: Vec<Vec<usize>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<ElemDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
}

impl CodeDoc {
    pub fn from_code(code: &LinearCode) -> Self {
        CodeDoc {
            field: code.field.spec().clone(),
            n: code.n,
            dim: code.dim,
            r: code.r(),
            groups: code
                .locality
                .as_ref()
                .map(|l| l.groups.clone())
                .unwrap_or_default(),
            g: matrix_doc(&code.field, &code.g),
            delta: None,
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let field = Field::from_spec(self.field.clone())?;
        let g = matrix_from_doc(&field, &self.g, self.dim)?;
        if g.rows() != self.n || g.cols() != self.dim {
            return Err(Error::Format(format!(
                "G is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                self.n,
                self.dim
            )));
        }
        let locality = match (self.r, self.groups.is_empty()) {
            (Some(r), false) => Some(LocalityStructure::from_groups(self.n, r, self.groups.clone())?),
            (Some(r), true) => Some(LocalityStructure::partition(self.n, r)?),
            (None, false) => {
                return Err(Error::Format("groups given without r".into()));
            }
            (None, true) => None,
        };
        LinearCode::new(field, g, locality)
    }
}

pub fn code_to_json(code: &LinearCode) -> Result<String> {
    to_pretty(&CodeDoc::from_code(code))
}

pub fn code_from_json(text: &str) -> Result<LinearCode> {
    parse::<CodeDoc>(text)?.to_code()
}
