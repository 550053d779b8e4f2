//! Secret-sharing schemes. Every scheme here maps the input
//! `a = (randomness || secret)` through an optional precode and then hands
//! participant i the vector `M_i * precode(a)`, where `M_i` is a small
//! matrix (one row per stored symbol). Decoding, repair and the oracle work
//! on that common form.

mod audit;
mod gabidulin;
mod perfect;
mod split;
mod threshold;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Elem, Field, LinearizedPoly, Matrix};
use crate::subsets::combinations;

pub use audit::{rank_audit, RankAudit, RankCheck, RANK_AUDIT_MAX_SUBSETS};
pub use gabidulin::{audit_gabidulin_security, build_gabidulin_scheme, gabidulin_scheme_tagged};
pub use perfect::{effective_count, perfect_local_scheme, PerfectLocal};
pub use split::{
    audit_split_security, encode_split, lemma2_range, split_scheme, theorem4_check,
    SecurityAudit, Theorem4Report,
};
pub use threshold::{isn_locality, isn_scheme, shamir};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub r: usize,
}

impl SchemeParams {
    pub fn validate(&self) -> Result<()> {
        let SchemeParams { n, k, l, m, r } = *self;
        if k == 0 {
            return Err(Error::Parameter("k must be at least 1".into()));
        }
        if !(l < m && m <= n) {
            return Err(Error::Parameter(format!(
                "need 0 <= l < m <= n, got l = {l}, m = {m}, n = {n}"
            )));
        }
        if r == 0 || r >= n {
            return Err(Error::Parameter(format!(
                "need 1 <= r <= n-1, got r = {r}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeTag {
    Split,
    Gabidulin,
    Shamir,
    Isn,
    GraphMatching,
    GraphCycle,
    Coop,
    Lnc,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 8] = [
        SchemeTag::Split,
        SchemeTag::Gabidulin,
        SchemeTag::Shamir,
        SchemeTag::Isn,
        SchemeTag::GraphMatching,
        SchemeTag::GraphCycle,
        SchemeTag::Coop,
        SchemeTag::Lnc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeTag::Split => "split",
            SchemeTag::Gabidulin => "gabidulin",
            SchemeTag::Shamir => "shamir",
            SchemeTag::Isn => "isn",
            SchemeTag::GraphMatching => "graph-matching",
            SchemeTag::GraphCycle => "graph-cycle",
            SchemeTag::Coop => "coop",
            SchemeTag::Lnc => "lnc",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown scheme tag {s:?}")))
    }
}

/// Map applied to `a = (randomness || secret)` before the share matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precode {
    Identity,
    /// `a` becomes `(Psi_a(alpha_1), ..., Psi_a(alpha_t))`.
    Gabidulin { alphas: Vec<Elem> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretSharingScheme {
    pub tag: SchemeTag,
    pub params: SchemeParams,
    pub field: Field,
    pub secret_len: usize,
    pub randomness_len: usize,
    /// Per participant, a matrix with `randomness_len + secret_len` columns.
    pub maps: Vec<Matrix>,
    pub precode: Precode,
    /// Declared recovery set of each participant.
    pub recovery: Vec<Vec<usize>>,
    /// Locality partition when the scheme has one.
    pub groups: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingInput {
    pub secret: Vec<Elem>,
    pub randomness: Vec<Elem>,
}

impl EncodingInput {
    pub fn random<R: Rng>(scheme: &SecretSharingScheme, rng: &mut R) -> Self {
        let q = scheme.field.order();
        let mut draw = |len: usize| (0..len).map(|_| Elem(rng.gen_range(0..q))).collect();
        EncodingInput {
            secret: draw(scheme.secret_len),
            randomness: draw(scheme.randomness_len),
        }
    }

    /// Randomness drawn for a fixed secret.
    pub fn with_secret<R: Rng>(scheme: &SecretSharingScheme, secret: Vec<Elem>, rng: &mut R) -> Self {
        let q = scheme.field.order();
        EncodingInput {
            secret,
            randomness: (0..scheme.randomness_len)
                .map(|_| Elem(rng.gen_range(0..q)))
                .collect(),
        }
    }
}

/// Possibly partial assignment of share bundles to participants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShareVector {
    pub n: usize,
    pub coords: BTreeMap<usize, Vec<Elem>>,
}

impl ShareVector {
    pub fn new(n: usize) -> Self {
        ShareVector {
            n,
            coords: BTreeMap::new(),
        }
    }

    pub fn full(values: Vec<Vec<Elem>>) -> Self {
        ShareVector {
            n: values.len(),
            coords: values.into_iter().enumerate().collect(),
        }
    }

    pub fn insert(&mut self, i: usize, value: Vec<Elem>) {
        self.coords.insert(i, value);
    }

    pub fn get(&self, i: usize) -> Option<&Vec<Elem>> {
        self.coords.get(&i)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.coords.keys().copied().collect()
    }

    pub fn restrict(&self, idx: &[usize]) -> ShareVector {
        ShareVector {
            n: self.n,
            coords: idx
                .iter()
                .filter_map(|&i| self.coords.get(&i).map(|v| (i, v.clone())))
                .collect(),
        }
    }
}

impl SecretSharingScheme {
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn input_len(&self) -> usize {
        self.randomness_len + self.secret_len
    }

    /// Number of symbols stored by participant i.
    pub fn bundle_size(&self, i: usize) -> usize {
        self.maps[i].rows()
    }

    pub fn max_bundle(&self) -> usize {
        self.maps.iter().map(Matrix::rows).max().unwrap_or(0)
    }

    /// Shape checks shared by every constructor and parser.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let n = self.params.n;
        let w = self.input_len();
        if self.maps.len() != n || self.recovery.len() != n {
            return Err(Error::Dimension(format!(
                "{} share maps and {} recovery sets for n = {n}",
                self.maps.len(),
                self.recovery.len()
            )));
        }
        if self.secret_len == 0 {
            return Err(Error::Parameter("empty secret".into()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.cols() != w {
                return Err(Error::Dimension(format!(
                    "share map {i} has {} columns, expected {w}",
                    m.cols()
                )));
            }
            if m.to_rows().iter().flatten().any(|&e| !self.field.contains(e)) {
                return Err(Error::Parameter(format!("share map {i} leaves the field")));
            }
        }
        for (i, set) in self.recovery.iter().enumerate() {
            if set.iter().any(|&j| j >= n || j == i) {
                return Err(Error::Parameter(format!("invalid recovery set for {i}")));
            }
        }
        if let Precode::Gabidulin { alphas } = &self.precode {
            if alphas.len() != w {
                return Err(Error::Dimension(format!(
                    "{} evaluation points for input length {w}",
                    alphas.len()
                )));
            }
        }
        Ok(())
    }

    fn check_input(&self, input: &EncodingInput) -> Result<()> {
        if input.secret.len() != self.secret_len || input.randomness.len() != self.randomness_len {
            return Err(Error::Dimension(format!(
                "secret/randomness of lengths {}/{}, expected {}/{}",
                input.secret.len(),
                input.randomness.len(),
                self.secret_len,
                self.randomness_len
            )));
        }
        if let Some(&e) = input
            .secret
            .iter()
            .chain(&input.randomness)
            .find(|&&e| !self.field.contains(e))
        {
            return Err(Error::InvalidElement(e.0));
        }
        Ok(())
    }

    /// The vector the share maps act on.
    pub fn precoded(&self, input: &EncodingInput) -> Result<Vec<Elem>> {
        self.check_input(input)?;
        let mut a = input.randomness.clone();
        a.extend_from_slice(&input.secret);
        Ok(match &self.precode {
            Precode::Identity => a,
            Precode::Gabidulin { alphas } => {
                let poly = LinearizedPoly::new(a)?;
                alphas.iter().map(|&x| poly.eval(&self.field, x)).collect()
            }
        })
    }

    pub fn encode(&self, input: &EncodingInput) -> Result<ShareVector> {
        let x = self.precoded(input)?;
        let values = self
            .maps
            .iter()
            .map(|m| m.mul_vec(&self.field, &x))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShareVector::full(values))
    }

    /// Rows of the listed participants stacked in order.
    pub fn stacked(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::empty(self.input_len());
        for &i in idx {
            out = out.vstack(&self.maps[i]).expect("equal widths");
        }
        out
    }

    fn stacked_values(&self, shares: &ShareVector, idx: &[usize]) -> Result<Vec<Elem>> {
        let mut values = Vec::new();
        for &i in idx {
            let v = shares
                .get(i)
                .ok_or_else(|| Error::Parameter(format!("share {i} missing")))?;
            if v.len() != self.bundle_size(i) {
                return Err(Error::Dimension(format!(
                    "share {i} has {} symbols, expected {}",
                    v.len(),
                    self.bundle_size(i)
                )));
            }
            values.extend_from_slice(v);
        }
        Ok(values)
    }

    /// Whether the shares of `idx` determine the secret, decided on the share
    /// maps alone.
    pub fn determines_secret(&self, idx: &[usize]) -> bool {
        let s = self.stacked(idx);
        let rank = s.rank(&self.field);
        match self.precode {
            Precode::Gabidulin { .. } => rank == self.input_len(),
            Precode::Identity => (self.randomness_len..self.input_len()).all(|j| {
                let mut unit = vec![Elem::ZERO; self.input_len()];
                unit[j] = Elem::ONE;
                let mut t = s.clone();
                t.push_row(&unit).expect("width");
                t.rank(&self.field) == rank
            }),
        }
    }

    /// Smallest m such that every m-subset of participants determines the
    /// secret, or None if not even all n do.
    pub fn recovery_threshold(&self) -> Option<usize> {
        let n = self.n();
        let all: Vec<usize> = (0..n).collect();
        if !self.determines_secret(&all) {
            return None;
        }
        for size in (1..n).rev() {
            if combinations(n, size).any(|s| !self.determines_secret(&s)) {
                return Some(size + 1);
            }
        }
        Some(1)
    }

    pub fn decode(&self, partial: &ShareVector) -> Result<Vec<Elem>> {
        let idx = partial.indices();
        if idx.iter().any(|&i| i >= self.n()) {
            return Err(Error::Parameter("share index out of range".into()));
        }
        let s = self.stacked(&idx);
        let values = self.stacked_values(partial, &idx)?;
        let w = self.input_len();
        let rank = s.rank(&self.field);
        if !self.determines_secret(&idx) {
            return Err(Error::Undecodable { rank, needed: w });
        }
        let x = s
            .solve(&self.field, &values)
            .map_err(|_| Error::InconsistentShares)?;
        match &self.precode {
            Precode::Identity => Ok(x[self.randomness_len..].to_vec()),
            Precode::Gabidulin { alphas } => {
                let points: Vec<(Elem, Elem)> = alphas.iter().copied().zip(x).collect();
                let a = LinearizedPoly::interpolate(&self.field, &points)?;
                Ok(a.coeffs[self.randomness_len..].to_vec())
            }
        }
    }

    /// Coefficient matrix L with `M_targets = L * M_from`.
    pub fn repair_matrix(&self, targets: &[usize], from: &[usize]) -> Result<Matrix> {
        let s = self.stacked(from);
        let t = self.stacked(targets);
        let mut rows = Vec::with_capacity(t.rows());
        for r in 0..t.rows() {
            rows.push(
                s.solve_row_combination(&self.field, t.row(r))
                    .map_err(|_| Error::NoLocalRelation(targets[0]))?,
            );
        }
        if rows.is_empty() {
            return Ok(Matrix::empty(s.rows()));
        }
        Matrix::from_rows(rows)
    }

    /// Recompute the shares of `targets` from those of `from`.
    pub fn repair_set(
        &self,
        targets: &[usize],
        from: &[usize],
        shares: &ShareVector,
    ) -> Result<Vec<Vec<Elem>>> {
        if let Some(&j) = from.iter().find(|&&j| shares.get(j).is_none()) {
            return Err(Error::IncompleteRecoverySet(targets.first().copied().unwrap_or(0), j));
        }
        let l = self.repair_matrix(targets, from)?;
        let values = self.stacked_values(shares, from)?;
        let flat = if l.rows() == 0 {
            Vec::new()
        } else if values.is_empty() {
            vec![Elem::ZERO; l.rows()]
        } else {
            l.mul_vec(&self.field, &values)?
        };
        let mut out = Vec::with_capacity(targets.len());
        let mut pos = 0;
        for &i in targets {
            let b = self.bundle_size(i);
            out.push(flat[pos..pos + b].to_vec());
            pos += b;
        }
        Ok(out)
    }

    /// Share of participant i from its declared recovery set.
    pub fn repair(&self, i: usize, neighbors: &ShareVector) -> Result<Vec<Elem>> {
        if i >= self.n() {
            return Err(Error::Parameter(format!("participant {i} out of range")));
        }
        let set = &self.recovery[i];
        if let Some(&j) = set.iter().find(|&&j| neighbors.get(j).is_none()) {
            return Err(Error::IncompleteRecoverySet(i, j));
        }
        self.repair_set(&[i], set, neighbors)
            .map(|mut v| v.remove(0))
            .map_err(|e| match e {
                Error::NoLocalRelation(_) => Error::NoLocalRelation(i),
                other => other,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrc::build_partitioned_lrc;

    #[test]
    fn tag_round_trip() {
        for t in SchemeTag::ALL {
            assert_eq!(t.as_str().parse::<SchemeTag>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{t}\""));
        }
        assert!("nope".parse::<SchemeTag>().is_err());
    }

    #[test]
    fn params_invariants() {
        let ok = SchemeParams { n: 4, k: 1, l: 1, m: 3, r: 1 };
        assert!(ok.validate().is_ok());
        assert!(SchemeParams { k: 0, ..ok }.validate().is_err());
        assert!(SchemeParams { l: 3, ..ok }.validate().is_err());
        assert!(SchemeParams { m: 5, ..ok }.validate().is_err());
        assert!(SchemeParams { r: 4, ..ok }.validate().is_err());
    }

    #[test]
    fn repair_reports_missing_neighbor() {
        let f = Field::prime(11).unwrap();
        let code = build_partitioned_lrc(&f, 8, 6, 3).unwrap();
        let s = split_scheme(&code, 1).unwrap();
        let shares = s
            .encode(&EncodingInput {
                secret: vec![Elem(1); 5],
                randomness: vec![Elem(2)],
            })
            .unwrap();
        let partial = shares.restrict(&[1, 2]);
        assert_eq!(s.repair(0, &partial), Err(Error::IncompleteRecoverySet(0, 3)));
        assert_eq!(s.repair(0, &shares).unwrap(), shares.get(0).unwrap().clone());
    }
}
