use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_gabidulin_scheme, split_scheme, audit_split_security, SecretSharingScheme};
use crate::access::AccessStructure;
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::lrc::{random_group_code, search_mr_code, LinearCode};

/// sum_j min(|A cap Q_j|, r).
pub fn effective_count(set: &[usize], groups: &[Vec<usize>], r: usize) -> usize {
    groups
        .iter()
        .map(|g| g.iter().filter(|i| set.contains(i)).count().min(r))
        .sum()
}

#[derive(Clone, Debug)]
pub struct PerfectLocal {
    pub scheme: SecretSharingScheme,
    pub access: AccessStructure,
    pub code: LinearCode,
}

/// Perfect scheme with locality r for the structure
/// `{A : effective_count(A) >= kappa}`, built on a maximally recoverable code
/// of dimension kappa with one secret symbol and kappa-1 random ones.
///
/// With `n_ext > 1` the code lives over the prime field `field` and the
/// input is Gabidulin-precoded over GF(p^n_ext). With `n_ext == 1` the input
/// is fed to the code directly, which additionally requires the randomness
/// columns to pass the split security audit; the search retries until both
/// hold.
pub fn perfect_local_scheme(
    n: usize,
    r: usize,
    kappa: usize,
    field: &Field,
    n_ext: usize,
    seed: u64,
    max_tries: usize,
) -> Result<PerfectLocal> {
    if r == 0 || kappa % r != 0 || kappa < 2 {
        return Err(Error::Parameter(format!(
            "need r | kappa with kappa >= 2, got r = {r}, kappa = {kappa}"
        )));
    }
    if n % (r + 1) != 0 {
        return Err(Error::Parameter(format!("(r+1) must divide n = {n}")));
    }
    let l = kappa - 1;
    let (code, scheme) = if n_ext > 1 {
        let code = search_mr_code(field, n, kappa, r, seed, max_tries)?;
        let scheme = build_gabidulin_scheme(&code, 1, l, n_ext)?;
        (code, scheme)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = None;
        for _ in 0..max_tries {
            let Some(code) = random_group_code(field, n, kappa, r, &mut rng)? else {
                continue;
            };
            if code.is_maximally_recoverable()
                && audit_split_security(&code.field, &code.g, l)?.secure
            {
                found = Some(code);
                break;
            }
        }
        let code = found.ok_or(Error::NotFound(max_tries))?;
        let scheme = split_scheme(&code, l)?;
        (code, scheme)
    };
    let groups = code.locality.as_ref().expect("partition").groups.clone();
    let access = AccessStructure::from_predicate(n, |a| effective_count(a, &groups, r) >= kappa)?;
    Ok(PerfectLocal {
        scheme,
        access,
        code,
    })
}
