use super::{Precode, SchemeParams, SchemeTag, SecretSharingScheme};
use crate::access::AccessStructure;
use crate::error::{Error, Result};
use crate::galois::{Elem, Field, Matrix};
use crate::subsets::{combinations, mask_of};

/// Row of sigma(x) = s + sum_j r_j x^j at point x, in
/// (r_1, ..., r_{t-1}, s) order.
fn evaluation_row(f: &Field, x: Elem, t: usize) -> Vec<Elem> {
    let mut row = Vec::with_capacity(t);
    let mut pw = x;
    for _ in 1..t {
        row.push(pw);
        pw = f.mul(pw, x);
    }
    row.push(Elem::ONE);
    row
}

/// Shamir's scheme: share i is sigma(i + 1) for a random polynomial of
/// degree t-1 with constant term the secret. The declared recovery set of a
/// share is t other shares.
pub fn shamir(nf: usize, t: usize, field: &Field) -> Result<SecretSharingScheme> {
    if t == 0 || t > nf {
        return Err(Error::Parameter(format!("need 1 <= t <= n, got t = {t}, n = {nf}")));
    }
    if field.order() <= nf as u64 {
        return Err(Error::Parameter(format!(
            "field of order {} needs more than {nf} elements",
            field.order()
        )));
    }
    let maps = (0..nf)
        .map(|i| Matrix::from_rows(vec![evaluation_row(field, Elem(i as u64 + 1), t)]))
        .collect::<Result<Vec<_>>>()?;
    let recovery: Vec<Vec<usize>> = (0..nf)
        .map(|i| {
            if t < nf {
                (0..nf).filter(|&j| j != i).take(t).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let scheme = SecretSharingScheme {
        tag: SchemeTag::Shamir,
        params: SchemeParams {
            n: nf,
            k: 1,
            l: t - 1,
            m: t,
            r: t.min(nf - 1).max(1),
        },
        field: field.clone(),
        secret_len: 1,
        randomness_len: t - 1,
        maps,
        precode: Precode::Identity,
        recovery,
        groups: Vec::new(),
    };
    scheme.validate()?;
    Ok(scheme)
}

/// Smallest recovery set for participant p (size first, then
/// lexicographic): a set R with R not inside any maximal blocked set that
/// misses p, so that R jointly holds every share p holds.
pub fn isn_locality(p: usize, n: usize, blocked: &[Vec<usize>]) -> Option<Vec<usize>> {
    let relevant: Vec<u64> = blocked
        .iter()
        .filter(|b| !b.contains(&p))
        .map(|b| mask_of(b))
        .collect();
    let others: Vec<usize> = (0..n).filter(|&j| j != p).collect();
    for size in 0..others.len() + 1 {
        for pick in combinations(others.len(), size) {
            let set: Vec<usize> = pick.iter().map(|&x| others[x]).collect();
            let m = mask_of(&set);
            if relevant.iter().all(|&b| m & !b != 0) {
                return Some(set);
            }
        }
    }
    None
}

/// Scheme realizing an arbitrary access structure: one Shamir share per
/// maximal blocked set B, all of them needed, and participant p holds the
/// shares of every B not containing p.
pub fn isn_scheme(access: &AccessStructure, field: &Field) -> Result<SecretSharingScheme> {
    let n = access.n;
    let blocked = access.maximal_blocked();
    if blocked.is_empty() || access.minimal.is_empty() {
        return Err(Error::Parameter(
            "degenerate access structure: the secret would be public or unrecoverable".into(),
        ));
    }
    let t = blocked.len();
    if field.order() <= t as u64 {
        return Err(Error::Parameter(format!(
            "field of order {} needs more than {t} elements",
            field.order()
        )));
    }
    let rows: Vec<Vec<Elem>> = (0..t)
        .map(|b| evaluation_row(field, Elem(b as u64 + 1), t))
        .collect();
    let maps = (0..n)
        .map(|p| {
            let bundle: Vec<Vec<Elem>> = blocked
                .iter()
                .zip(&rows)
                .filter(|(b, _)| !b.contains(&p))
                .map(|(_, row)| row.clone())
                .collect();
            if bundle.is_empty() {
                Ok(Matrix::empty(t))
            } else {
                Matrix::from_rows(bundle)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let recovery: Vec<Vec<usize>> = (0..n)
        .map(|p| isn_locality(p, n, &blocked).unwrap_or_default())
        .collect();
    let r = recovery.iter().map(Vec::len).max().unwrap_or(0).clamp(1, n - 1);
    let scheme = SecretSharingScheme {
        tag: SchemeTag::Isn,
        params: SchemeParams {
            n,
            k: 1,
            l: access.min_qualified_size().unwrap_or(1) - 1,
            m: access.max_blocked_size() + 1,
            r,
        },
        field: field.clone(),
        secret_len: 1,
        randomness_len: t - 1,
        maps,
        precode: Precode::Identity,
        recovery,
        groups: Vec::new(),
    };
    scheme.validate()?;
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secret::{EncodingInput, ShareVector};

    #[test]
    fn shamir_interpolates_from_threshold() {
        let f = Field::prime(7).unwrap();
        let s = shamir(5, 3, &f).unwrap();
        assert_eq!(s.params, SchemeParams { n: 5, k: 1, l: 2, m: 3, r: 3 });
        let input = EncodingInput {
            secret: vec![Elem(4)],
            randomness: vec![Elem(1), Elem(6)],
        };
        let c = s.encode(&input).unwrap();
        // sigma(x) = 4 + x + 6x^2 at x = 1..5.
        for i in 0..5u64 {
            let x = i + 1;
            assert_eq!(c.get(i as usize).unwrap(), &vec![Elem((4 + x + 6 * x * x) % 7)]);
        }
        for subset in combinations(5, 3) {
            assert_eq!(s.decode(&c.restrict(&subset)).unwrap(), vec![Elem(4)]);
        }
        assert!(s.decode(&c.restrict(&[0, 4])).is_err());
        assert_eq!(s.recovery_threshold(), Some(3));
        assert!(shamir(7, 3, &f).is_err());
    }

    #[test]
    fn isn_two_overlapping_pairs() {
        let f = Field::prime(5).unwrap();
        let a = AccessStructure::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let blocked = a.maximal_blocked();
        assert_eq!(blocked, vec![vec![0, 2], vec![1]]);
        let s = isn_scheme(&a, &f).unwrap();
        // Shares: c_{0,2} = sigma(1), c_{1} = sigma(2).
        assert_eq!(s.maps[0].rows(), 1);
        assert_eq!(s.maps[0].row(0), &[Elem(2), Elem(1)]);
        assert_eq!(s.maps[1].row(0), &[Elem(1), Elem(1)]);
        assert_eq!(s.maps[2], s.maps[0]);
        assert!(s.determines_secret(&[0, 1]));
        assert!(!s.determines_secret(&[0, 2]));
        assert_eq!(isn_locality(0, 3, &blocked), Some(vec![2]));
        // Participant 1 alone holds c_{0,2}.
        assert_eq!(isn_locality(1, 3, &blocked), None);
        assert_eq!(s.recovery, vec![vec![2], vec![], vec![0]]);
        assert_eq!(s.params.r, 1);
        let c = s
            .encode(&EncodingInput {
                secret: vec![Elem(3)],
                randomness: vec![Elem(4)],
            })
            .unwrap();
        let mut from = ShareVector::new(3);
        from.insert(2, c.get(2).unwrap().clone());
        assert_eq!(&s.repair(0, &from).unwrap(), c.get(0).unwrap());
    }
}
