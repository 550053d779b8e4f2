//! Exact simplex for `max c.x` subject to `A x <= b`, `x >= 0` with
//! `b >= 0`, over arbitrary-precision rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Optimal value and one optimal vertex.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<(Q, Vec<Q>)> {
    let nv = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != nv) {
        return Err(Error::Dimension("inconsistent LP dimensions".into()));
    }
    if b.iter().any(|x| x.is_negative()) {
        return Err(Error::Parameter("right-hand side must be nonnegative".into()));
    }
    let width = nv + m + 1;
    // Rows 0..m are constraints, row m is the objective (reduced costs).
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = row.clone();
        r.extend((0..m).map(|j| if i == j { Q::one() } else { Q::zero() }));
        r.push(b[i].clone());
        t.push(r);
    }
    let mut obj: Vec<Q> = c.iter().map(|x| -x.clone()).collect();
    obj.extend((0..=m).map(|_| Q::zero()));
    t.push(obj);
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    loop {
        let Some(enter) = (0..nv + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Parameter("LP is unbounded".into()));
        };
        let pivot = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x = &*x / &pivot;
        }
        let prow = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x = &*x - &factor * p;
            }
        }
        basis[pr] = enter;
    }
    let mut x = vec![Q::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Ok((t[m][width - 1].clone(), x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // max x + y, x + 2y <= 4, 3x + y <= 6 -> (8/5, 6/5), value 14/5.
        let c = vec![q(1), q(1)];
        let a = vec![vec![q(1), q(2)], vec![q(3), q(1)]];
        let b = vec![q(4), q(6)];
        let (v, x) = maximize(&c, &a, &b).unwrap();
        assert_eq!(v, Q::new(14.into(), 5.into()));
        assert_eq!(x, vec![Q::new(8.into(), 5.into()), Q::new(6.into(), 5.into())]);
    }

    #[test]
    fn unbounded_and_degenerate() {
        assert!(maximize(&[q(1)], &[vec![q(-1)]], &[q(0)]).is_err());
        let (v, _) = maximize(&[q(1), q(1)], &[vec![q(1), q(1)], vec![q(1), q(1)]], &[q(0), q(0)])
            .unwrap();
        assert_eq!(v, q(0));
    }
}
