//! Cooperative (r, delta) repair: any delta simultaneous failures are
//! rebuilt from one common set of at most r surviving coordinates.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{Field, Matrix};
use crate::lrc::{LinearCode, LocalityStructure};
use crate::secret::{gabidulin_scheme_tagged, SchemeTag, SecretSharingScheme};
use crate::subsets::{mask_of, members, subsets_up_to};

pub const COOP_MAX_N: usize = 16;
pub const COOP_MAX_DELTA: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoopAudit {
    pub repairable: bool,
    /// First failure set with no repair set.
    pub witness: Option<Vec<usize>>,
    /// Repair set found for each failure set, in search order.
    pub repair_sets: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Rank oracle over row subsets with memoization by bitmask.
struct RankCache<'a> {
    f: &'a Field,
    g: &'a Matrix,
    memo: RefCell<HashMap<u64, usize>>,
}

impl RankCache<'_> {
    fn rank(&self, mask: u64) -> usize {
        if let Some(&r) = self.memo.borrow().get(&mask) {
            return r;
        }
        let r = self.g.select_rows(&members(mask)).rank(self.f);
        self.memo.borrow_mut().insert(mask, r);
        r
    }
}

/// Exhaustive check: every failure set of size at most delta has a repair
/// set of at most r other coordinates whose rows span the failed rows.
/// Candidates are tried by increasing size, then lexicographically.
pub fn is_r_delta_repairable(code: &LinearCode, r: usize, delta: usize) -> Result<CoopAudit> {
    let n = code.n;
    if n > COOP_MAX_N || delta > COOP_MAX_DELTA {
        return Err(Error::Cutoff(format!(
            "cooperative search limited to n <= {COOP_MAX_N}, delta <= {COOP_MAX_DELTA}"
        )));
    }
    if r == 0 || delta == 0 {
        return Err(Error::Parameter("r and delta must be positive".into()));
    }
    let cache = RankCache {
        f: &code.field,
        g: &code.g,
        memo: RefCell::new(HashMap::new()),
    };
    let mut repair_sets = Vec::new();
    for failed in subsets_up_to(n, delta).filter(|s| !s.is_empty()) {
        let fm = mask_of(&failed);
        let survivors: Vec<usize> = (0..n).filter(|i| fm >> i & 1 == 0).collect();
        let found = subsets_up_to(survivors.len(), r)
            .map(|pick| pick.iter().map(|&x| survivors[x]).collect::<Vec<_>>())
            .find(|set| {
                let sm = mask_of(set);
                cache.rank(sm | fm) == cache.rank(sm)
            });
        match found {
            Some(set) => repair_sets.push((failed, set)),
            None => {
                return Ok(CoopAudit {
                    repairable: false,
                    witness: Some(failed),
                    repair_sets,
                })
            }
        }
    }
    Ok(CoopAudit {
        repairable: true,
        witness: None,
        repair_sets,
    })
}

/// n/(delta+1) message symbols, each stored on delta+1 consecutive
/// coordinates.
pub fn build_repetition_coop(field: &Field, n: usize, delta: usize) -> Result<LinearCode> {
    if delta == 0 || n % (delta + 1) != 0 {
        return Err(Error::Parameter(format!(
            "(delta+1) = {} must divide n = {n}",
            delta + 1
        )));
    }
    let dim = n / (delta + 1);
    let mut g = Matrix::zeros(n, dim);
    for i in 0..n {
        g.set(i, i / (delta + 1), field.from_base(1));
    }
    let loc = LocalityStructure::partition(n, delta)?;
    LinearCode::new(field.clone(), g, Some(loc))
}

/// Gabidulin-precoded scheme over an (r, delta)-repairable base code; the
/// base code is rejected unless the exhaustive verifier accepts it.
pub fn wrap_secure_coop(
    code: &LinearCode,
    k: usize,
    l: usize,
    n_ext: usize,
    r: usize,
    delta: usize,
) -> Result<SecretSharingScheme> {
    let audit = is_r_delta_repairable(code, r, delta)?;
    if !audit.repairable {
        return Err(Error::Construction(format!(
            "base code is not ({r},{delta})-repairable: failure set {:?}",
            audit.witness.unwrap_or_default()
        )));
    }
    gabidulin_scheme_tagged(SchemeTag::Coop, code, k, l, n_ext)
}
