use serde::Serialize;

use super::{EncodingInput, Precode, SchemeParams, SchemeTag, SecretSharingScheme};
use crate::error::{Error, Result};
use crate::galois::{Elem, Field, Matrix};
use crate::lrc::{mr_witness, LinearCode};
use crate::subsets::combinations;

const SPLIT_AUDIT_MAX_N: usize = 24;
const SPLIT_AUDIT_MAX_L: usize = 8;

/// Scheme storing `G * (randomness || secret)` with the first `l` input
/// symbols random.
pub fn split_scheme(code: &LinearCode, l: usize) -> Result<SecretSharingScheme> {
    if l >= code.dim {
        return Err(Error::Parameter(format!(
            "l = {l} leaves no room for a secret in dimension {}",
            code.dim
        )));
    }
    let n = code.n;
    let (recovery, groups, r) = match &code.locality {
        Some(loc) => (loc.recovery.clone(), loc.groups.clone(), loc.r),
        None => (vec![Vec::new(); n], Vec::new(), n.saturating_sub(1)),
    };
    let maps: Vec<Matrix> = (0..n).map(|i| code.g.select_rows(&[i])).collect();
    let mut scheme = SecretSharingScheme {
        tag: SchemeTag::Split,
        params: SchemeParams {
            n,
            k: code.dim - l,
            l,
            m: n,
            r,
        },
        field: code.field.clone(),
        secret_len: code.dim - l,
        randomness_len: l,
        maps,
        precode: Precode::Identity,
        recovery,
        groups,
    };
    scheme.params.m = scheme
        .recovery_threshold()
        .ok_or_else(|| Error::Construction("secret not recoverable from all shares".into()))?;
    scheme.validate()?;
    Ok(scheme)
}

/// Shares `G * (randomness || secret)`.
pub fn encode_split(f: &Field, g: &Matrix, input: &EncodingInput) -> Result<Vec<Elem>> {
    let width = input.randomness.len() + input.secret.len();
    if g.cols() != width {
        return Err(Error::Dimension(format!(
            "generator has {} columns, input has {width} symbols",
            g.cols()
        )));
    }
    if g.rank(f) != width {
        return Err(Error::Parameter("generator is not of full column rank".into()));
    }
    let mut a = input.randomness.clone();
    a.extend_from_slice(&input.secret);
    g.mul_vec(f, &a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecurityAudit {
    pub secure: bool,
    pub witness: Option<Vec<usize>>,
}

/// Rank criterion for l-security of `G * (randomness || secret)`: every
/// l-subset of linearly independent rows must stay independent on the first
/// l columns.
pub fn audit_split_security(f: &Field, g: &Matrix, l: usize) -> Result<SecurityAudit> {
    let n = g.rows();
    if n > SPLIT_AUDIT_MAX_N || l > SPLIT_AUDIT_MAX_L {
        return Err(Error::Cutoff(format!(
            "split audit limited to n <= {SPLIT_AUDIT_MAX_N}, l <= {SPLIT_AUDIT_MAX_L}"
        )));
    }
    if l > g.cols() {
        return Err(Error::Parameter(format!(
            "l = {l} exceeds {} columns",
            g.cols()
        )));
    }
    let g1 = g.select_cols(0..l);
    for subset in combinations(n, l) {
        if g.select_rows(&subset).rank(f) == l && g1.select_rows(&subset).rank(f) < l {
            return Ok(SecurityAudit {
                secure: false,
                witness: Some(subset),
            });
        }
    }
    Ok(SecurityAudit {
        secure: true,
        witness: None,
    })
}

/// Largest l for which l coordinates of an optimal LRC touching each group at
/// most r times are guaranteed independent: r-1 + (r*floor(k/(r-1)) - k).
pub fn lemma2_range(k: usize, r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::LemmaInapplicable(format!(
            "r = {r} divides by r-1 = 0"
        )));
    }
    let (k, r) = (k as i64, r as i64);
    Ok((r - 1 + (r * (k / (r - 1)) - k)) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem4Report {
    pub k: usize,
    pub l: usize,
    pub secure: bool,
    pub security_witness: Option<Vec<usize>>,
    /// The code generated by the first l columns is maximally recoverable.
    pub mr_sub: bool,
    pub mr_witness: Option<Vec<usize>>,
    pub optimal: bool,
    pub lemma2_range: Option<usize>,
    /// Whether the equivalence secure <=> mr_sub is claimed for this code.
    pub asserted: bool,
    pub violation: bool,
}

/// Security of the split scheme against maximal recoverability of the
/// randomness subcode. `mr_sub => secure` holds for every group-structured
/// code; the converse is only claimed for optimal codes with l in range.
pub fn theorem4_check(code: &LinearCode, l: usize) -> Result<Theorem4Report> {
    let loc = code
        .locality
        .as_ref()
        .filter(|loc| !loc.groups.is_empty())
        .ok_or_else(|| Error::Parameter("theorem check needs a group partition".into()))?;
    if l == 0 || l >= code.dim {
        return Err(Error::Parameter(format!(
            "need 0 < l < dim = {}, got {l}",
            code.dim
        )));
    }
    let k = code.dim - l;
    let audit = audit_split_security(&code.field, &code.g, l)?;
    let g1 = code.g.select_cols(0..l);
    let witness = mr_witness(&code.field, &g1, &loc.groups);
    let mr_sub = witness.is_none();
    let optimal = code.audit()?.optimal;
    let range = lemma2_range(k, loc.r).ok();
    let asserted = optimal && range.is_some_and(|x| l <= x);
    let violation = (mr_sub && !audit.secure) || (asserted && audit.secure != mr_sub);
    Ok(Theorem4Report {
        k,
        l,
        secure: audit.secure,
        security_witness: audit.witness,
        mr_sub,
        mr_witness: witness.map(|w| w.subset),
        optimal,
        lemma2_range: range,
        asserted,
        violation,
    })
}
