//! Linear-algebra audit of a scheme's declared parameters, without
//! enumerating the joint distribution.

use serde::Serialize;

use super::{audit_gabidulin_security, Precode, SchemeParams, SecretSharingScheme};
use crate::error::{Error, Result};
use crate::subsets::{binomial, combinations};

/// Largest number of subsets a rank audit scans per condition.
pub const RANK_AUDIT_MAX_SUBSETS: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

impl RankCheck {
    fn from_witness(witness: Option<Vec<usize>>) -> Self {
        RankCheck {
            pass: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAudit {
    pub params: SchemeParams,
    /// Every m-subset determines the secret.
    pub recovery: RankCheck,
    /// Every l-subset is independent of the secret.
    pub security: RankCheck,
    /// Every declared recovery set has at most r members and reproduces its
    /// participant.
    pub locality: RankCheck,
    pub pass: bool,
}

impl SecretSharingScheme {
    /// Whether the shares of `idx` are independent of the secret.
    pub fn independent_of_secret(&self, idx: &[usize]) -> Result<bool> {
        match self.precode {
            Precode::Gabidulin { .. } => audit_gabidulin_security(self, idx),
            Precode::Identity => {
                // the row space meets the secret coordinates trivially
                let s = self.stacked(idx);
                let rand = s.select_cols(0..self.randomness_len);
                Ok(rand.rank(&self.field) == s.rank(&self.field))
            }
        }
    }
}

fn check_count(n: usize, k: usize) -> Result<()> {
    let c = binomial(n as u64, k as u64);
    if c > RANK_AUDIT_MAX_SUBSETS {
        return Err(Error::Cutoff(format!(
            "{c} subsets exceed the rank audit limit {RANK_AUDIT_MAX_SUBSETS}"
        )));
    }
    Ok(())
}

pub fn rank_audit(scheme: &SecretSharingScheme) -> Result<RankAudit> {
    let SchemeParams { n, l, m, r, .. } = scheme.params;
    check_count(n, m)?;
    check_count(n, l)?;
    let recovery = RankCheck::from_witness(
        combinations(n, m).find(|s| !scheme.determines_secret(s)),
    );
    let mut leak = None;
    for s in combinations(n, l) {
        if !scheme.independent_of_secret(&s)? {
            leak = Some(s);
            break;
        }
    }
    let security = RankCheck::from_witness(leak);
    let locality = RankCheck::from_witness(
        (0..n)
            .find(|&i| {
                let set = &scheme.recovery[i];
                set.len() > r || scheme.repair_matrix(&[i], set).is_err()
            })
            .map(|i| vec![i]),
    );
    Ok(RankAudit {
        params: scheme.params,
        pass: recovery.pass && security.pass && locality.pass,
        recovery,
        security,
        locality,
    })
}
